#include "frsplit/splitring.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace frsplit {

namespace {

constexpr size_t kMaxRecorded = 20;

void accumulate(const Fp& fp, std::map<SectionKey, int64_t>& m, const SectionKey& k, int64_t c) {
    if (!c) return;
    auto [it, fresh] = m.emplace(k, c);
    if (fresh) return;
    it->second = fp.add(it->second, c);
    if (!it->second) m.erase(it);
}

bool is_zero_weight(const Weight& w) {
    for (int v : w.coords)
        if (v) return false;
    return true;
}

/// Offsets only matter for a nonzero twist; they are kept at 0 otherwise.
int normal_offset(const Weight& lambda, int offset) { return is_zero_weight(lambda) ? 0 : offset; }

std::string exps_text(const Exps& a, int n) {
    std::string s = "[";
    for (int b = 0; b < n; ++b) s += (b ? "," : "") + std::to_string(a[b]);
    return s + "]";
}

nlohmann::json exps_json(const Exps& a, int n) { return std::vector<int>(a.begin(), a.begin() + n); }

const DualPoly& hat_poly(Context& ctx, const Exps& b) {
    auto it = ctx.hat_cache.find(b);
    if (it != ctx.hat_cache.end()) return it->second;
    return ctx.hat_cache.emplace(b, ctx.gm.from_hat(dual_monomial(Side::Plus, b))).first->second;
}

/// Tr- x Tr+ of one monomial; false when it is annihilated.
bool trace_key(int p, int n, const Exps& a, const Exps& b, SectionKey& out) {
    for (int s = 0; s < n; ++s) {
        if ((a[s] + 1) % p != 0 || (b[s] + 1) % p != 0) return false;
        out.x[s] = static_cast<int16_t>((a[s] + 1) / p - 1);
        out.y[s] = static_cast<int16_t>((b[s] + 1) / p - 1);
    }
    return true;
}

std::string terms_text(const std::map<SectionKey, int64_t>& m, int n) {
    if (m.empty()) return "0";
    std::string s;
    for (auto& [k, c] : m) {
        if (!s.empty()) s += " + ";
        s += std::to_string(c) + " x" + exps_text(k.x, n) + " y" + exps_text(k.y, n);
    }
    return s;
}

void compare_terms(VerifyReport& rep, const std::map<SectionKey, int64_t>& lhs, const std::map<SectionKey, int64_t>& rhs,
                   const nlohmann::json& input, int n) {
    if (lhs != rhs) rep.record(input, terms_text(lhs, n), terms_text(rhs, n));
}

}  // namespace

Truncation default_truncation(int p, int num_positive) {
    int d = p * (p - 1) * num_positive + p;
    return Truncation{d, d};
}

Context make_base_context(const RootSystem& rs, int p, Truncation trunc, int grading_degree) {
    if (!is_prime(p) || !is_good_prime(rs, p)) throw BadPrime("p = " + std::to_string(p) + " is not a good prime");
    Context ctx;
    ctx.rs = rs;
    ctx.p = p;
    ctx.trunc = trunc;
    ctx.alg = std::make_unique<Algebra>(ctx.rs, p);
    ctx.alg->set_cap(std::max({ctx.alg->cap(), trunc.dx, trunc.dn, grading_degree}) + 2 * p);
    return ctx;
}

void complete_context(Context& ctx, int grading_degree) {
    if (ctx.complete) return;
    ctx.gm = build_grading(*ctx.alg, grading_degree);
    ctx.st = build_st(*ctx.alg);
    build_eta(*ctx.alg, ctx.st);
    if (ctx.trunc.dn < ctx.top()) throw TruncationTooSmall("y-grade bound below the grade of psi");
    ctx.psi = psi_section(*ctx.alg, ctx.st, ctx.gm, ctx.trunc.dx);
    ctx.psi_hat = psi_hat(*ctx.alg, ctx.st, ctx.gm);
    index_psi(ctx);
    ctx.complete = true;
}

Context make_context(const RootSystem& rs, int p, Truncation trunc, int grading_degree) {
    Context ctx = make_base_context(rs, p, trunc, grading_degree);
    complete_context(ctx, grading_degree);
    return ctx;
}

void index_psi(Context& ctx) {
    int p = ctx.p, n = ctx.n();
    size_t classes = 1;
    for (int s = 0; s < 2 * n; ++s) classes *= static_cast<size_t>(p);
    ctx.psi_by_residue.assign(classes, {});
    for (auto& [q, d] : ctx.psi.terms) {
        size_t idx = 0, scale = 1;
        for (int s = 0; s < n; ++s, scale *= static_cast<size_t>(p))
            idx += scale * static_cast<size_t>(((-1 - q.x[s]) % p + p) % p);
        for (int s = 0; s < n; ++s, scale *= static_cast<size_t>(p))
            idx += scale * static_cast<size_t>(((-1 - q.y[s]) % p + p) % p);
        ctx.psi_by_residue[idx].emplace_back(q, d);
    }
}

GradedSection section_unit(const Weight& lambda) {
    GradedSection f;
    f.lambda = lambda;
    f.terms[SectionKey{}] = 1;
    return f;
}

GradedSection section_monomial(const Weight& lambda, const Exps& x, const Exps& y, int64_t c) {
    GradedSection f;
    f.lambda = lambda;
    if (c) f.terms[SectionKey{x, y}] = c;
    return f;
}

GradedSection section_add(const Fp& fp, const GradedSection& f, const GradedSection& g) {
    if (f.lambda != g.lambda || normal_offset(f.lambda, f.offset) != normal_offset(g.lambda, g.offset))
        throw LambdaMismatch("sections with different twists");
    GradedSection out = f;
    for (auto& [k, c] : g.terms) accumulate(fp, out.terms, k, c);
    return out;
}

GradedSection section_scale(const Fp& fp, const GradedSection& f, int64_t c) {
    GradedSection out{f.lambda, f.offset, {}};
    for (auto& [k, v] : f.terms) accumulate(fp, out.terms, k, fp.mul(v, c));
    return out;
}

RootVec section_weight(const RootSystem& rs, const SectionKey& k) {
    RootVec wx = exps_weight(rs, k.x), wy = exps_weight(rs, k.y);
    for (int i = 0; i < rs.rank; ++i) wx[i] -= wy[i];
    return wx;
}

void check_truncation(const GradedSection& f, const Truncation& t) {
    for (auto& [k, c] : f.terms)
        if (total_degree(k.x) > t.dx || total_degree(k.y) > t.dn)
            throw TruncationExceeded("term outside the truncation (dx = " + std::to_string(t.dx) +
                                     ", dn = " + std::to_string(t.dn) + ")");
}

GradedSection ring_mult(const Fp& fp, const GradedSection& f, const GradedSection& g, const Truncation* t) {
    if (f.lambda != g.lambda) throw LambdaMismatch("multiplying sections of different lambda");
    GradedSection out;
    out.lambda = f.lambda;
    out.offset = normal_offset(f.lambda, f.offset + g.offset);
    for (auto& [a, c] : f.terms)
        for (auto& [b, d] : g.terms) {
            SectionKey k;
            for (int s = 0; s < kMaxRoots; ++s) {
                k.x[s] = static_cast<int16_t>(a.x[s] + b.x[s]);
                k.y[s] = static_cast<int16_t>(a.y[s] + b.y[s]);
            }
            accumulate(fp, out.terms, k, fp.mul(c, d));
        }
    if (t) check_truncation(out, *t);
    return out;
}

std::map<SectionKey, int64_t> evaluation_functional(Context& ctx, const HyperElt& x, const HyperElt& y, int n,
                                                    const Weight& lambda, int offset) {
    Algebra& alg = *ctx.alg;
    const Fp& fp = alg.field();
    const auto& rs = ctx.rs;
    for (auto& [k, c] : y.terms)
        if (!k.e_only()) throw WrongTriangularPart("Y must lie in the positive part");
    Weight twist = lambda * (n - normal_offset(lambda, offset));
    std::map<SectionKey, int64_t> out;
    for (auto& [kx, kappa] : x.terms) {
        HyperElt y1 = y;
        if (kx.has_e()) {
            PbwKey ke;
            ke.e = kx.e;
            y1 = alg.adjoint(alg.antipode(alg.monomial(ke)), y);
        }
        for (auto& [ky, iota] : y1.terms) {
            Weight mu = alg.weight_of(ky) + twist;
            int64_t coef = fp.mul(kappa, iota);
            for (int i = 0; i < rs.rank; ++i) coef = fp.mul(coef, fp.binom(-mu.coords[i], kx.h[i]));
            if (!coef) continue;
            for (auto& b : exps_of_weight(rs, exps_weight(rs, ky.e))) {
                if (total_degree(b) != n) continue;
                const auto& hp = hat_poly(ctx, b).terms;
                auto it = hp.find(ky.e);
                if (it != hp.end()) accumulate(fp, out, SectionKey{kx.f, b}, fp.mul(coef, it->second));
            }
        }
    }
    return out;
}

int64_t evaluate(Context& ctx, const GradedSection& f, const HyperElt& x, const HyperElt& y, int n) {
    const Fp& fp = ctx.field();
    int64_t out = 0;
    for (auto& [k, c] : evaluation_functional(ctx, x, y, n, f.lambda, f.offset)) {
        auto it = f.terms.find(k);
        if (it != f.terms.end()) out = fp.add(out, fp.mul(c, it->second));
    }
    return out;
}

GradedSection frt_star(const Fp& fp, const GradedSection& f) {
    GradedSection out;
    out.lambda = f.lambda;
    out.offset = normal_offset(f.lambda, f.offset * static_cast<int>(fp.p));
    for (auto& [k, c] : f.terms) {
        SectionKey q;
        for (int s = 0; s < kMaxRoots; ++s) {
            q.x[s] = static_cast<int16_t>(k.x[s] * fp.p);
            q.y[s] = static_cast<int16_t>(k.y[s] * fp.p);
        }
        accumulate(fp, out.terms, q, fp.pow(c, fp.p));
    }
    return out;
}

GradedSection op_S(const Fp& fp, int num_positive, const GradedSection& f) {
    int p = static_cast<int>(fp.p);
    GradedSection out;
    out.lambda = f.lambda;
    if (!is_zero_weight(f.lambda)) {
        int shifted = f.offset - (p - 1) * num_positive;
        if (shifted % p != 0) throw LambdaMismatch("twist of the input is not divisible by p");
        out.offset = shifted / p;
    }
    for (auto& [k, c] : f.terms) {
        SectionKey q;
        if (trace_key(p, num_positive, k.x, k.y, q)) accumulate(fp, out.terms, q, c);
    }
    return out;
}

GradedSection mul_psi(Context& ctx, const GradedSection& f) {
    check_truncation(f, ctx.trunc);
    GradedSection psi = ctx.psi;
    psi.lambda = f.lambda;
    psi.offset = normal_offset(f.lambda, ctx.top());
    return ring_mult(ctx.field(), psi, f);
}

std::vector<std::pair<SectionKey, int64_t>> sigma_tot_monomial(const Context& ctx, const SectionKey& k) {
    std::vector<std::pair<SectionKey, int64_t>> out;
    int p = ctx.p, n = ctx.n();
    if (total_degree(k.y) % p != 0) return out;
    size_t idx = 0, scale = 1;
    for (int s = 0; s < n; ++s, scale *= static_cast<size_t>(p)) idx += scale * static_cast<size_t>(k.x[s] % p);
    for (int s = 0; s < n; ++s, scale *= static_cast<size_t>(p)) idx += scale * static_cast<size_t>(k.y[s] % p);
    for (auto& [q, d] : ctx.psi_by_residue[idx]) {
        SectionKey r;
        for (int s = 0; s < n; ++s) {
            r.x[s] = static_cast<int16_t>((k.x[s] + q.x[s] + 1) / p - 1);
            r.y[s] = static_cast<int16_t>((k.y[s] + q.y[s] + 1) / p - 1);
        }
        out.emplace_back(r, d);
    }
    return out;
}

GradedSection sigma_tot(Context& ctx, const GradedSection& f) {
    check_truncation(f, ctx.trunc);
    const Fp& fp = ctx.field();
    int p = ctx.p;
    GradedSection out;
    out.lambda = f.lambda;
    if (!is_zero_weight(f.lambda)) {
        if (f.offset % p != 0) throw LambdaMismatch("twist of the input is not divisible by p");
        out.offset = f.offset / p;
    }
    for (auto& [k, c] : f.terms)
        for (auto& [r, d] : sigma_tot_monomial(ctx, k)) accumulate(fp, out.terms, r, fp.mul(c, d));
    return out;
}

GradedSection r_lambda(const GradedSection& f) {
    GradedSection out = f;
    out.lambda = Weight{std::vector<int>(f.lambda.coords.size(), 0)};
    out.offset = 0;
    return out;
}

GradedSection act_right(Context& ctx, const HyperElt& z, const GradedSection& f) {
    Algebra& alg = *ctx.alg;
    const Fp& fp = alg.field();
    const auto& rs = ctx.rs;
    GradedSection out{f.lambda, f.offset, {}};
    std::map<int, std::map<Exps, DualPoly>> by_grade;
    for (auto& [k, c] : f.terms) {
        auto& poly = by_grade[total_degree(k.y)][k.x];
        poly.side = Side::Plus;
        poly = dual_add(fp, poly, dual_scale(fp, hat_poly(ctx, k.y), c));
    }
    for (auto& [g, polys] : by_grade) {
        Weight twist = f.lambda * (g - normal_offset(f.lambda, f.offset));
        std::map<Exps, DualPoly> acc;
        for (auto& [kz, cz] : z.terms) {
            RootVec ew = exps_weight(rs, kz.e), fw = exps_weight(rs, kz.f);
            std::set<RootVec> targets;
            for (auto& [c, poly] : polys) {
                RootVec cw = exps_weight(rs, c);
                RootVec delta(rs.rank, 0);
                while (true) {
                    RootVec t(rs.rank);
                    bool ok = true;
                    for (int i = 0; i < rs.rank; ++i) {
                        t[i] = cw[i] - fw[i] + delta[i];
                        ok = ok && t[i] >= 0;
                    }
                    if (ok) targets.insert(t);
                    int i = 0;
                    while (i < rs.rank && delta[i] == ew[i]) delta[i++] = 0;
                    if (i == rs.rank) break;
                    ++delta[i];
                }
            }
            HyperElt zt = alg.monomial(kz, cz);
            for (auto& nu : targets)
                for (auto& a : exps_of_weight(rs, nu)) {
                    PbwKey ka;
                    ka.f = a;
                    HyperElt xz = alg.mult(alg.monomial(ka), zt);
                    for (auto& [kx, kappa] : xz.terms) {
                        auto it = polys.find(kx.f);
                        if (it == polys.end()) continue;
                        DualPoly moved = it->second;
                        if (kx.has_e()) {
                            PbwKey ke;
                            ke.e = kx.e;
                            moved = dual_adjoint(alg, alg.monomial(ke), moved);
                        }
                        auto& dst = acc[a];
                        dst.side = Side::Plus;
                        for (auto& [d, v] : moved.terms) {
                            Weight mu = rs.root_weight(exps_weight(rs, d)) + twist;
                            int64_t coef = fp.mul(kappa, v);
                            for (int i = 0; i < rs.rank; ++i) coef = fp.mul(coef, fp.binom(-mu.coords[i], kx.h[i]));
                            if (coef) dst = dual_add(fp, dst, dual_monomial(Side::Plus, d, coef));
                        }
                    }
                }
        }
        for (auto& [a, poly] : acc)
            for (auto& [b, v] : ctx.gm.to_hat(poly).terms) {
                if (total_degree(b) != g) throw NoEquivariantGrading("the action left a graded piece");
                accumulate(fp, out.terms, SectionKey{a, b}, v);
            }
    }
    return out;
}

GradedSection act_right_factors(Context& ctx, const std::vector<HyperElt>& factors, const GradedSection& f) {
    GradedSection out = f;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) out = act_right(ctx, *it, out);
    return out;
}

void VerifyReport::record(nlohmann::json input, std::string lhs, std::string rhs) {
    ++failure_count;
    if (failures.size() < kMaxRecorded) failures.push_back(Failure{std::move(input), std::move(lhs), std::move(rhs)});
}

void VerifyReport::merge(const VerifyReport& other) {
    cases += other.cases;
    failure_count += other.failure_count;
    for (auto& f : other.failures)
        if (failures.size() < kMaxRecorded) failures.push_back(f);
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json j;
    j["identity"] = identity;
    j["cases"] = cases;
    j["failure_count"] = failure_count;
    j["failures"] = nlohmann::json::array();
    for (auto& f : failures) j["failures"].push_back({{"input", f.input}, {"lhs", f.lhs}, {"rhs", f.rhs}});
    j["status"] = passed() ? "pass" : "fail";
    return j;
}

VerifyReport check_equivariance(Context& ctx, const GenWord& z, const GradedSection& f) {
    Algebra& alg = *ctx.alg;
    const Fp& fp = alg.field();
    int n = ctx.n();
    VerifyReport rep;
    rep.identity = "equivariance";
    std::vector<HyperElt> atoms;
    for (auto& a : z.atoms) atoms.push_back(alg.normalize(GenWord{{a}}));
    auto lhs = op_S(fp, n, act_right_factors(ctx, alg.phi_factors(z), f));
    auto rhs = act_right_factors(ctx, atoms, op_S(fp, n, f));
    std::set<SectionKey> keys;
    for (auto& [k, c] : lhs.terms) keys.insert(k);
    for (auto& [k, c] : rhs.terms) keys.insert(k);
    rep.cases = static_cast<int64_t>(keys.size());
    if (lhs.terms != rhs.terms) {
        nlohmann::json word = nlohmann::json::array();
        for (auto& a : z.atoms)
            word.push_back({{"kind", a.kind == Atom::Kind::E ? "E" : a.kind == Atom::Kind::F ? "F" : "H"},
                            {"i", a.i + 1},
                            {"n", a.n}});
        rep.record({{"word", word}, {"f", to_json(f, n)}}, terms_text(lhs.terms, n), terms_text(rhs.terms, n));
    }
    return rep;
}

VerifyReport compare_klt(Context& ctx, int d) {
    const Fp& fp = ctx.field();
    int p = ctx.p, n = ctx.n(), top = ctx.top();
    VerifyReport rep;
    rep.identity = "klt-comparison";
    std::vector<Exps> xs;
    for (int dx = 0; dx <= ctx.trunc.dx; ++dx)
        for (auto& a : exps_of_degree(n, dx)) xs.push_back(a);
    for (int g = 0; g <= d; g += p)
        for (auto& b : exps_of_degree(n, g))
            for (auto& a : xs) {
                // route A: full psi-hat, projection to grade g + (p-1)N, traces
                std::map<SectionKey, int64_t> route_a, route_b;
                for (auto& [q, c] : ctx.psi_hat.terms) {
                    if (g + total_degree(q.y) != g + top) continue;
                    Exps sx, sy;
                    for (int s = 0; s < kMaxRoots; ++s) {
                        sx[s] = static_cast<int16_t>(a[s] + q.x[s]);
                        sy[s] = static_cast<int16_t>(b[s] + q.y[s]);
                    }
                    SectionKey r;
                    if (trace_key(p, n, sx, sy, r)) accumulate(fp, route_a, r, c);
                }
                // route B: multiplication by psi, then S
                for (auto& [q, c] : ctx.psi.terms) {
                    Exps sx, sy;
                    for (int s = 0; s < kMaxRoots; ++s) {
                        sx[s] = static_cast<int16_t>(a[s] + q.x[s]);
                        sy[s] = static_cast<int16_t>(b[s] + q.y[s]);
                    }
                    SectionKey r;
                    if (trace_key(p, n, sx, sy, r)) accumulate(fp, route_b, r, c);
                }
                ++rep.cases;
                compare_terms(rep, route_a, route_b, {{"x", exps_json(a, n)}, {"y", exps_json(b, n)}}, n);
            }
    return rep;
}

VerifyReport check_op_s_definition(Context& ctx, const Weight& lambda) {
    Algebra& alg = *ctx.alg;
    const Fp& fp = alg.field();
    int p = ctx.p, n = ctx.n(), top = ctx.top();
    int offset = normal_offset(lambda, top);
    VerifyReport rep;
    rep.identity = "op-s-definition";

    // Trace side: S applied to every monomial within the truncation, indexed by the output monomial.
    std::map<SectionKey, std::map<SectionKey, int64_t>> image;
    std::vector<Exps> xs, ys;
    for (int d = 0; d <= ctx.trunc.dx; ++d)
        for (auto& a : exps_of_degree(n, d)) xs.push_back(a);
    for (int d = 0; d <= ctx.trunc.dn; ++d)
        for (auto& b : exps_of_degree(n, d)) ys.push_back(b);
    for (auto& a : xs)
        for (auto& b : ys) {
            GradedSection f = section_monomial(lambda, a, b);
            f.offset = offset;
            for (auto& [q, c] : op_S(fp, n, f).terms) image[q][SectionKey{a, b}] = c;
        }

    // Definitional side: f(F0 phi(X) x E0 Fr'(Y) x v) for X = F^(a'), Y = Ehat_b'.
    HyperElt mu0 = alg.mu0();
    std::vector<std::pair<Exps, HyperElt>> phis, lifts;
    for (int d = 0; p * d + top <= ctx.trunc.dx; ++d)
        for (auto& a : exps_of_degree(n, d)) {
            PbwKey k;
            k.f = a;
            HyperElt x = alg.mult(alg.f0(), alg.mult(alg.fr_prime_via_words(alg.monomial(k), Side::Minus), mu0));
            phis.emplace_back(a, std::move(x));
        }
    for (int d = 0; p * d + top <= ctx.trunc.dn; ++d)
        for (auto& b : exps_of_degree(n, d)) {
            HyperElt y = alg.mult(alg.e0(), alg.fr_prime_via_words(graded_dual_element(alg, ctx.gm, b), Side::Plus));
            lifts.emplace_back(b, std::move(y));
        }
    for (auto& [a, x] : phis)
        for (auto& [b, y] : lifts) {
            int grade = p * total_degree(b) + top;
            auto def = evaluation_functional(ctx, x, y, grade, lambda, offset);
            std::erase_if(def, [&](auto& kv) {
                return total_degree(kv.first.x) > ctx.trunc.dx || total_degree(kv.first.y) > ctx.trunc.dn;
            });
            std::map<SectionKey, int64_t> tr;
            auto it = image.find(SectionKey{a, b});
            if (it != image.end()) tr = it->second;
            ++rep.cases;
            compare_terms(rep, tr, def, {{"X", exps_json(a, n)}, {"Y", exps_json(b, n)}, {"lambda", lambda.coords}}, n);
        }
    return rep;
}

std::string section_to_text(const GradedSection& f, int num_positive) {
    std::ostringstream os;
    if (!is_zero_weight(f.lambda)) {
        os << "lambda:";
        for (int v : f.lambda.coords) os << ' ' << v;
        os << '\n';
        if (f.offset) os << "offset: " << f.offset << '\n';
    }
    if (f.terms.empty()) {
        os << "0\n";
        return os.str();
    }
    if (f.terms.size() == 1 && f.terms.begin()->first == SectionKey{} && f.terms.begin()->second == 1) {
        os << "e\n";
        return os.str();
    }
    for (auto& [k, c] : f.terms)
        os << 'x' << exps_text(k.x, num_positive) << " y" << exps_text(k.y, num_positive) << " : " << c << '\n';
    return os.str();
}

GradedSection section_from_text(const Fp& fp, const std::string& s, int num_positive, int rank) {
    std::istringstream is(s);
    std::string line;
    GradedSection out;
    out.lambda = Weight{std::vector<int>(rank, 0)};
    auto trim = [](std::string t) {
        size_t a = t.find_first_not_of(" \t\r");
        size_t b = t.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : t.substr(a, b - a + 1);
    };
    auto read_exps = [&](const std::string& body, size_t& pos, char tag) {
        while (pos < body.size() && body[pos] == ' ') ++pos;
        if (body.compare(pos, 2, std::string{tag, '['}) != 0) throw ParseError("bad term: " + body);
        pos += 2;
        Exps v{};
        for (int t = 0; t < num_positive; ++t) {
            size_t used = 0;
            long val = std::stol(body.substr(pos), &used);
            if (val < 0 || val > 30000) throw ParseError("exponent out of range: " + body);
            v[t] = static_cast<int16_t>(val);
            pos += used;
            char want = t + 1 < num_positive ? ',' : ']';
            if (pos >= body.size() || body[pos] != want) throw ParseError("bad term: " + body);
            ++pos;
        }
        return v;
    };
    try {
        while (std::getline(is, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            if (line == "e") {
                accumulate(fp, out.terms, SectionKey{}, 1);
            } else if (line == "0") {
            } else if (line.rfind("lambda:", 0) == 0) {
                std::istringstream ls(line.substr(7));
                for (int i = 0; i < rank; ++i)
                    if (!(ls >> out.lambda.coords[i])) throw ParseError("bad lambda: " + line);
                std::string extra;
                if (ls >> extra) throw ParseError("bad lambda: " + line);
            } else if (line.rfind("offset:", 0) == 0) {
                out.offset = std::stoi(line.substr(7));
            } else {
                size_t pos = 0;
                Exps x = read_exps(line, pos, 'x');
                Exps y = read_exps(line, pos, 'y');
                auto colon = line.find(':', pos);
                if (colon == std::string::npos || trim(line.substr(pos, colon - pos)).size())
                    throw ParseError("missing coefficient: " + line);
                accumulate(fp, out.terms, SectionKey{x, y}, fp.norm(std::stoll(line.substr(colon + 1))));
            }
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("bad number in: " + line);
    } catch (const std::out_of_range&) {
        throw ParseError("number out of range in: " + line);
    }
    out.offset = normal_offset(out.lambda, out.offset);
    return out;
}

nlohmann::json to_json(const GradedSection& f, int num_positive) {
    nlohmann::json j;
    j["lambda"] = f.lambda.coords;
    j["offset"] = f.offset;
    j["terms"] = nlohmann::json::array();
    for (auto& [k, c] : f.terms)
        j["terms"].push_back({{"x", exps_json(k.x, num_positive)}, {"y", exps_json(k.y, num_positive)}, {"c", c}});
    return j;
}

}  // namespace frsplit
