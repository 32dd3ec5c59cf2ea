#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

/// Runs the CLI with stderr discarded and returns its exit code and stdout.
Run run(const std::string& args) {
    std::string cmd = std::string(FRSPLIT_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("frsplit_cli_test_" + std::to_string(getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string apply_text(const std::string& body, const std::string& flags = "--kind A1 --p 3") {
    fs::path in = scratch("apply") / "in.txt";
    std::ofstream(in) << body;
    Run r = run(flags + " apply " + in.string());
    REQUIRE(r.code == 0);
    return r.out;
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \n");
    size_t b = s.find_last_not_of(" \n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

TEST_CASE("build writes artifacts with the Steinberg dimension in the manifest") {
    fs::path dir = scratch("build");
    Run r = run("--kind A1 --p 3 build --out " + dir.string());
    REQUIRE(r.code == 0);
    json m = json::parse(slurp(dir / "manifest.json"));
    CHECK(m["schema_version"] == 1);
    CHECK(m["dim_st"] == 3);
    for (auto name : {"root_system.json", "grading.json", "steinberg.json", "psi.json", "psi.txt"}) {
        CAPTURE(name);
        CHECK(fs::exists(dir / name));
        CHECK(m["artifact_hashes"].contains(name));
    }
}

TEST_CASE("builds are byte-identical across runs") {
    fs::path a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(run("--kind A2 --p 3 build --out " + a.string()).code == 0);
    REQUIRE(run("--kind A2 --p 3 build --out " + b.string()).code == 0);
    for (auto name : {"root_system.json", "grading.json", "steinberg.json", "psi.json", "psi.txt"}) {
        CAPTURE(name);
        CHECK(slurp(a / name) == slurp(b / name));
    }
    json ma = json::parse(slurp(a / "manifest.json")), mb = json::parse(slurp(b / "manifest.json"));
    CHECK(ma["artifact_hashes"] == mb["artifact_hashes"]);
}

TEST_CASE("bad primes, unknown kinds and malformed input map to their exit codes") {
    CHECK(run("--kind B2 --p 2 build --out " + scratch("bad").string()).code == 2);
    CHECK(run("--kind G2 --p 3 build --out " + scratch("bad").string()).code == 2);
    CHECK(run("--kind A1 --p 4 build --out " + scratch("bad").string()).code == 2);
    CHECK(run("--kind C7 --p 3 build --out " + scratch("bad").string()).code == 4);
    fs::path in = scratch("garbage") / "in.txt";
    std::ofstream(in) << "1 q[3]\n";
    CHECK(run("--kind A1 --p 3 apply " + in.string()).code == 4);
}

TEST_CASE("inputs beyond the truncation are refused") {
    fs::path in = scratch("trunc") / "in.txt";
    std::ofstream(in) << "x[500] y[0] : 1\n";
    CHECK(run("--kind A1 --p 3 apply " + in.string()).code == 5);
}

TEST_CASE("apply fixes the unit, contracts p-th powers and kills the rest") {
    CHECK(strip(apply_text("e\n")) == "e");
    CHECK(strip(apply_text("x[1] y[0] : 1\n")) == "0");
    CHECK(strip(apply_text("x[2] y[2] : 1\n")) == "0");
    CHECK(strip(apply_text("x[3] y[3] : 1\n")) == "x[1] y[1] : 1");
    CHECK(strip(apply_text("x[5] y[0] : 2\n", "--kind A1 --p 5")) == "x[1] y[0] : 2");
}

TEST_CASE("verify emits a passing JSON report") {
    fs::path out = scratch("verify") / "report.json";
    Run r = run("--kind A1 --p 3 verify --suites steinberg,klt,splitting-axiom --out " + out.string());
    CHECK(r.code == 0);
    json rep = json::parse(slurp(out));
    CHECK(rep["status"] == "pass");
    CHECK(rep["reports"].size() == 3);
    CHECK(rep.contains("artifact_hashes"));
}

TEST_CASE("a corrupted psi makes compare-klt exit with an identity failure") {
    fs::path out = scratch("klt") / "report.json";
    CHECK(run("--kind A1 --p 3 compare-klt --out " + out.string()).code == 0);
    Run r = run("--kind A1 --p 3 --corrupt psi compare-klt --out " + out.string());
    CHECK(r.code == 1);
    json rep = json::parse(slurp(out));
    CHECK(rep["status"] == "fail");
    CHECK_FALSE(rep["reports"][0]["failures"].empty());
}

TEST_CASE("a config file supplies flags and the command line overrides it") {
    fs::path dir = scratch("config");
    std::ofstream(dir / "run.cfg") << "kind=A1\np=5\n";
    REQUIRE(run("--config " + (dir / "run.cfg").string() + " build --out " + (dir / "a").string()).code == 0);
    CHECK(json::parse(slurp(dir / "a" / "manifest.json"))["dim_st"] == 5);
    REQUIRE(run("--config " + (dir / "run.cfg").string() + " --p 7 build --out " + (dir / "b").string()).code == 0);
    CHECK(json::parse(slurp(dir / "b" / "manifest.json"))["dim_st"] == 7);
}
