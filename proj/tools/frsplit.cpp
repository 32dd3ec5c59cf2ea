#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "frsplit/splitring.hpp"
#include "frsplit/steinberg.hpp"
#include "frsplit/verify.hpp"
#include "json.hpp"

using namespace frsplit;
using json = nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kIdentityFailure = 1, kBadPrime = 2, kSolverFailure = 3, kParseError = 4, kTruncation = 5 };

struct Config {
    std::string kind = "A1";
    int p = 3;
    int dx = 0;
    int dn = 0;
    int d_assoc = 6;
    uint64_t seed = 1;
    std::vector<std::string> suites;
    std::string out;
    int jobs = 1;
    std::string corrupt = "none";
    int d = 0;
    std::string input;
};

/// 64-bit FNV-1a in hex.
std::string fnv_hex(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunSpec make_spec(const Config& cfg) {
    RunSpec spec;
    try {
        spec.rs = build_root_system(parse_kind(cfg.kind));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    spec.p = cfg.p;
    if (!is_prime(cfg.p) || !is_good_prime(spec.rs, cfg.p))
        throw BadPrime("bad prime: p = " + std::to_string(cfg.p) + " is not a good prime for " + cfg.kind);
    Truncation def = default_truncation(cfg.p, spec.rs.num_positive());
    spec.trunc = Truncation{cfg.dx > 0 ? cfg.dx : def.dx, cfg.dn > 0 ? cfg.dn : def.dn};
    if (cfg.dx < 0 || cfg.dn < 0) throw TruncationTooSmall("truncations must be positive");
    spec.corruption = parse_corruption(cfg.corrupt);
    spec.options.seed = cfg.seed;
    spec.options.hopf_degree = cfg.d_assoc;
    return spec;
}

json config_json(const Config& cfg, const RunSpec& spec) {
    json j = {{"kind", cfg.kind},   {"p", cfg.p},         {"dx", spec.trunc.dx}, {"dn", spec.trunc.dn},
              {"d_assoc", cfg.d_assoc}, {"seed", cfg.seed}, {"jobs", cfg.jobs}};
    j["suites"] = cfg.suites.empty() ? suite_names() : cfg.suites;
    if (spec.corruption != Corruption::None) j["corrupt"] = corruption_name(spec.corruption);
    return j;
}

/// Serialized artifacts keyed by file name.
std::vector<std::pair<std::string, std::string>> artifacts(Context& ctx) {
    int n = ctx.n();
    json manifest_rs = to_json(ctx.rs);
    return {
        {"root_system.json", manifest_rs.dump(2) + "\n"},
        {"grading.json", ctx.gm.to_json().dump(2) + "\n"},
        {"steinberg.json", to_json(ctx.st).dump(2) + "\n"},
        {"psi.json", to_json(ctx.psi, n).dump(2) + "\n"},
        {"psi.txt", section_to_text(ctx.psi, n)},
    };
}

json artifact_hashes(Context& ctx) {
    json h = json::object();
    for (auto& [name, body] : artifacts(ctx)) h[name] = fnv_hex(body);
    return h;
}

json envelope(const std::string& command, const Config& cfg, const RunSpec& spec) {
    return {{"schema_version", kSchemaVersion}, {"tool", "frsplit"}, {"command", command}, {"config", config_json(cfg, spec)}};
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << body;
}

void emit_report(const Config& cfg, const json& report) {
    std::string body = report.dump(2) + "\n";
    if (cfg.out.empty())
        std::cout << body;
    else
        write_text(cfg.out, body);
}

int cmd_build(const Config& cfg) {
    RunSpec spec = make_spec(cfg);
    Context ctx = make_run_context(spec);
    ensure_complete(ctx, spec);
    std::filesystem::path dir = cfg.out.empty() ? "frsplit-artifacts" : cfg.out;
    std::filesystem::create_directories(dir);
    json manifest = envelope("build", cfg, spec);
    json hashes = json::object();
    for (auto& [name, body] : artifacts(ctx)) {
        write_text((dir / name).string(), body);
        hashes[name] = fnv_hex(body);
    }
    manifest["artifact_hashes"] = hashes;
    manifest["dim_st"] = ctx.st.dim;
    manifest["grading"] = ctx.gm.kind == GradingKind::SecondKind ? "second-kind" : "solved";
    manifest["psi_terms"] = ctx.psi.terms.size();
    write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    std::cout << "built " << cfg.kind << " p=" << cfg.p << ": dim St = " << ctx.st.dim << ", psi has "
              << ctx.psi.terms.size() << " terms, artifacts in " << dir.string() << "\n";
    return kOk;
}

int cmd_verify(const Config& cfg) {
    RunSpec spec = make_spec(cfg);
    std::vector<std::string> names = cfg.suites.empty() ? suite_names() : cfg.suites;
    auto reports = run_suites(spec, names, cfg.jobs);
    json report = envelope("verify", cfg, spec);
    bool need_psi = false;
    for (auto& nm : names) need_psi = need_psi || suite_needs_psi(nm);
    if (need_psi) {
        Context ctx = make_run_context(spec);
        ensure_complete(ctx, spec);
        report["artifact_hashes"] = artifact_hashes(ctx);
    }
    report["reports"] = json::array();
    bool all = true;
    for (auto& r : reports) {
        report["reports"].push_back(r.to_json());
        all = all && r.passed();
        std::cerr << r.identity << ": " << (r.passed() ? "pass" : "FAIL") << " (" << r.cases << " cases, "
                  << r.failure_count << " failures)\n";
        if (!r.passed() && !r.failures.empty())
            std::cerr << "  first counterexample: " << r.failures.front().input.dump() << "\n    lhs: "
                      << r.failures.front().lhs << "\n    rhs: " << r.failures.front().rhs << "\n";
    }
    report["status"] = all ? "pass" : "fail";
    emit_report(cfg, report);
    return all ? kOk : kIdentityFailure;
}

int cmd_apply(const Config& cfg) {
    RunSpec spec = make_spec(cfg);
    std::ifstream is(cfg.input, std::ios::binary);
    if (!is) throw ParseError("cannot read input file " + cfg.input);
    std::stringstream buf;
    buf << is.rdbuf();
    Fp fp{cfg.p};
    GradedSection f = section_from_text(fp, buf.str(), spec.rs.num_positive(), spec.rs.rank);
    check_truncation(f, spec.trunc);
    Context ctx = make_run_context(spec);
    ensure_complete(ctx, spec);
    std::string out = section_to_text(sigma_tot(ctx, f), ctx.n());
    if (cfg.out.empty())
        std::cout << out;
    else
        write_text(cfg.out, out);
    return kOk;
}

int cmd_compare_klt(const Config& cfg) {
    RunSpec spec = make_spec(cfg);
    Context ctx = make_run_context(spec);
    ensure_complete(ctx, spec);
    int d = cfg.d > 0 ? cfg.d : spec.trunc.dn;
    if (d > spec.trunc.dn) throw TruncationExceeded("D exceeds the y-grade truncation");
    VerifyReport rep = compare_klt(ctx, d);
    json report = envelope("compare-klt", cfg, spec);
    report["config"]["d"] = d;
    report["artifact_hashes"] = artifact_hashes(ctx);
    report["reports"] = json::array({rep.to_json()});
    report["status"] = rep.passed() ? "pass" : "fail";
    emit_report(cfg, report);
    std::cerr << "klt-comparison: " << (rep.passed() ? "pass" : "FAIL") << " (" << rep.cases << " cases)\n";
    if (!rep.passed() && !rep.failures.empty())
        std::cerr << "  first differing monomial: " << rep.failures.front().input.dump() << "\n    route A: "
                  << rep.failures.front().lhs << "\n    route B: " << rep.failures.front().rhs << "\n";
    return rep.passed() ? kOk : kIdentityFailure;
}

int exit_code_for(const FrsplitError& e) {
    if (dynamic_cast<const BadPrime*>(&e)) return kBadPrime;
    if (dynamic_cast<const ParseError*>(&e)) return kParseError;
    if (dynamic_cast<const TruncationExceeded*>(&e) || dynamic_cast<const TruncationTooSmall*>(&e)) return kTruncation;
    return kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frobenius splitting of the hyperalgebra dual: build, verify, apply, compare-klt"};
    app.set_config("--config", "", "Flat key=value config file; command-line flags override it");
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("--kind", cfg.kind, "Root system: A1, A2, B2 or G2")->capture_default_str();
    app.add_option("--p", cfg.p, "Prime")->capture_default_str();
    app.add_option("--dx", cfg.dx, "x-degree truncation (0 selects p(p-1)N + p)");
    app.add_option("--dn", cfg.dn, "y-grade truncation (0 selects p(p-1)N + p)");
    app.add_option("--d-assoc", cfg.d_assoc, "Degree bound for the Hopf checks")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for randomized cases")->capture_default_str();
    app.add_option("--suites", cfg.suites, "Comma-separated suite names (default: all)")->delimiter(',');
    app.add_option("--out", cfg.out, "Output path");
    app.add_option("--jobs", cfg.jobs, "Worker count for suites")->capture_default_str();
    app.add_option("--corrupt", cfg.corrupt, "Negative control: none, structure-constant, psi or eta")
        ->group("Test fixtures");

    auto* build = app.add_subcommand("build", "Build root system, grading, St, eta and psi and write them");
    auto* verify = app.add_subcommand("verify", "Run identity suites and write a JSON report");
    auto* apply = app.add_subcommand("apply", "Apply the splitting to a section in text form");
    apply->add_option("input", cfg.input, "Input section file")->required();
    auto* klt = app.add_subcommand("compare-klt", "Compare the two routes through psi");
    klt->add_option("--d", cfg.d, "Largest y-grade compared (default dn)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (cfg.jobs < 1) cfg.jobs = 1;

    try {
        if (build->parsed()) return cmd_build(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (apply->parsed()) return cmd_apply(cfg);
        if (klt->parsed()) return cmd_compare_klt(cfg);
    } catch (const FrsplitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
    return kOk;
}
