#include "frsplit/dualring.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "frsplit/linalg.hpp"

namespace frsplit {

namespace {

void accumulate(const Fp& fp, std::map<Exps, int64_t>& m, const Exps& k, int64_t c) {
    c = fp.norm(c);
    if (c == 0) return;
    auto [it, fresh] = m.try_emplace(k, c);
    if (!fresh) {
        it->second = fp.add(it->second, c);
        if (it->second == 0) m.erase(it);
    }
}

/// Substitutes polynomial images for the variables of f.
DualPoly substitute(const Fp& fp, const DualPoly& f, const std::vector<DualPoly>& images, int n) {
    std::vector<std::vector<DualPoly>> powers(n);
    auto power = [&](int b, int e) -> const DualPoly& {
        auto& pw = powers[b];
        if (pw.empty()) pw.push_back(dual_one(f.side));
        while (static_cast<int>(pw.size()) <= e) pw.push_back(dual_mul(fp, pw.back(), images[b]));
        return pw[e];
    };
    DualPoly out{f.side, {}};
    for (auto& [a, c] : f.terms) {
        DualPoly t = dual_monomial(f.side, Exps{}, c);
        for (int b = 0; b < n; ++b)
            if (a[b] > 0) t = dual_mul(fp, t, power(b, a[b]));
        out = dual_add(fp, out, t);
    }
    return out;
}

bool is_simple(const RootVec& r) { return std::count(r.begin(), r.end(), 0) == static_cast<long>(r.size()) - 1; }

}  // namespace

DualPoly dual_one(Side side) { return dual_monomial(side, Exps{}); }

DualPoly dual_var(Side side, int k) {
    Exps a{};
    a[k] = 1;
    return dual_monomial(side, a);
}

DualPoly dual_monomial(Side side, const Exps& a, int64_t c) {
    DualPoly f{side, {}};
    if (c != 0) f.terms[a] = c;
    return f;
}

DualPoly dual_z0(Side side, int n, int p) {
    Exps a{};
    for (int b = 0; b < n; ++b) a[b] = static_cast<int16_t>(p - 1);
    return dual_monomial(side, a);
}

DualPoly dual_add(const Fp& fp, const DualPoly& a, const DualPoly& b) {
    DualPoly out = a;
    if (a.terms.empty()) out.side = b.side;
    for (auto& [k, c] : b.terms) accumulate(fp, out.terms, k, c);
    return out;
}

DualPoly dual_scale(const Fp& fp, const DualPoly& a, int64_t c) {
    DualPoly out{a.side, {}};
    for (auto& [k, v] : a.terms) accumulate(fp, out.terms, k, fp.mul(v, fp.norm(c)));
    return out;
}

DualPoly dual_mul(const Fp& fp, const DualPoly& a, const DualPoly& b, int max_degree) {
    DualPoly out{a.side, {}};
    for (auto& [ka, ca] : a.terms) {
        int da = total_degree(ka);
        for (auto& [kb, cb] : b.terms) {
            if (max_degree >= 0 && da + total_degree(kb) > max_degree) continue;
            Exps k;
            for (int s = 0; s < kMaxRoots; ++s) k[s] = static_cast<int16_t>(ka[s] + kb[s]);
            accumulate(fp, out.terms, k, fp.mul(ca, cb));
        }
    }
    return out;
}

int64_t pair(const Algebra& alg, const DualPoly& f, const HyperElt& z) {
    const Fp& fp = alg.field();
    int64_t out = 0;
    for (auto& [k, c] : z.terms) {
        bool ok = f.side == Side::Plus ? k.e_only() : k.f_only();
        if (!ok) throw SideMismatch("pairing a dual polynomial with the wrong triangular part");
        const Exps& ex = f.side == Side::Plus ? k.e : k.f;
        auto it = f.terms.find(ex);
        if (it != f.terms.end()) out = fp.add(out, fp.mul(c, it->second));
    }
    return out;
}

DualPoly fr_star(const Fp& fp, const DualPoly& f) {
    DualPoly out{f.side, {}};
    for (auto& [a, c] : f.terms) {
        Exps b;
        for (int s = 0; s < kMaxRoots; ++s) b[s] = static_cast<int16_t>(a[s] * fp.p);
        accumulate(fp, out.terms, b, fp.pow(c, fp.p));
    }
    return out;
}

RootVec exps_weight(const RootSystem& rs, const Exps& a) {
    RootVec r(rs.rank, 0);
    for (int b = 0; b < rs.num_positive(); ++b)
        for (int i = 0; i < rs.rank; ++i) r[i] += a[b] * rs.positive_roots[b][i];
    return r;
}

std::vector<Exps> exps_of_weight(const RootSystem& rs, const RootVec& nu) {
    std::vector<Exps> out;
    for (int v : nu)
        if (v < 0) return out;
    int n = rs.num_positive();
    Exps cur{};
    RootVec left = nu;
    std::function<void(int)> rec = [&](int b) {
        if (b == n) {
            if (std::all_of(left.begin(), left.end(), [](int v) { return v == 0; })) out.push_back(cur);
            return;
        }
        const auto& r = rs.positive_roots[b];
        int m = 0;
        while (true) {
            bool fits = true;
            for (int i = 0; i < rs.rank; ++i)
                if (left[i] < 0) fits = false;
            if (!fits) break;
            cur[b] = static_cast<int16_t>(m);
            rec(b + 1);
            for (int i = 0; i < rs.rank; ++i) left[i] -= r[i];
            ++m;
        }
        for (int i = 0; i < rs.rank; ++i) left[i] += m * r[i];
        cur[b] = 0;
    };
    rec(0);
    return out;
}

DualPoly dual_adjoint(Algebra& alg, const HyperElt& a, const DualPoly& f) {
    for (auto& [k, c] : a.terms)
        if (k.has_f()) throw WrongTriangularPart("dual action needs a Borel element");
    if (f.side != Side::Plus) throw SideMismatch("dual adjoint action is defined on the plus side");
    const Fp& fp = alg.field();
    const RootSystem& rs = alg.roots();
    HyperElt sa = alg.antipode(a);
    DualPoly out{Side::Plus, {}};
    for (auto& [k, c] : sa.terms) {
        RootVec wk = alg.root_weight_of(k);
        for (auto& [b, d] : f.terms) {
            RootVec nu = exps_weight(rs, b);
            for (int i = 0; i < rs.rank; ++i) nu[i] -= wk[i];
            for (auto& ex : exps_of_weight(rs, nu)) {
                PbwKey y;
                y.e = ex;
                const HyperElt& img = alg.adjoint_key(k, y);
                PbwKey target;
                target.e = b;
                auto it = img.terms.find(target);
                if (it != img.terms.end()) accumulate(fp, out.terms, ex, fp.mul(fp.mul(c, d), it->second));
            }
        }
    }
    return out;
}

DualPoly GradingMap::to_hat(const DualPoly& f) const {
    if (kind == GradingKind::SecondKind) return f;
    return substitute(Fp{p}, f, inverse, n);
}

DualPoly GradingMap::from_hat(const DualPoly& f) const {
    if (kind == GradingKind::SecondKind) return f;
    return substitute(Fp{p}, f, gens, n);
}

nlohmann::json GradingMap::to_json() const {
    nlohmann::json j;
    j["kind"] = kind == GradingKind::SecondKind ? "second_kind_coordinates" : "solved_equivariant";
    j["checked_degree"] = checked_degree;
    j["generators"] = nlohmann::json::array();
    for (auto& g : gens) j["generators"].push_back(dual_to_text(g, n));
    return j;
}

GradingMap second_kind_grading(const Algebra& alg) {
    GradingMap gm;
    gm.p = alg.p();
    gm.n = alg.num_positive();
    for (int b = 0; b < gm.n; ++b) {
        gm.gens.push_back(dual_var(Side::Plus, b));
        gm.inverse.push_back(dual_var(Side::Plus, b));
    }
    return gm;
}

bool grading_equivariant(Algebra& alg, const GradingMap& gm, int max_degree, std::string* witness) {
    const RootSystem& rs = alg.roots();
    int n = rs.num_positive();
    Exps a{};
    bool ok = true;
    std::function<void(int, int)> rec = [&](int b, int left) {
        if (!ok) return;
        if (b == n) {
            int d = total_degree(a);
            if (d == 0) return;
            DualPoly f = gm.from_hat(dual_monomial(Side::Plus, a));
            RootVec wt = exps_weight(rs, a);
            for (int i = 0; i < rs.rank && ok; ++i)
                for (int m = 1; m <= wt[i] && ok; ++m) {
                    DualPoly g = gm.to_hat(dual_adjoint(alg, alg.E(i, m), f));
                    for (auto& [e, c] : g.terms)
                        if (total_degree(e) != d) {
                            ok = false;
                            if (witness) {
                                std::ostringstream os;
                                os << "E(" << i + 1 << "," << m << ") moves " << dual_to_text(dual_monomial(Side::Plus, a), n)
                                   << " out of degree " << d;
                                *witness = os.str();
                            }
                            break;
                        }
                }
            return;
        }
        for (int v = 0; v <= left; ++v) {
            a[b] = static_cast<int16_t>(v);
            rec(b + 1, left - v);
        }
        a[b] = 0;
    };
    rec(0, max_degree);
    return ok;
}

GradingMap build_grading(Algebra& alg, int max_degree, bool force_solver) {
    if (!is_good_prime(alg.roots(), alg.p())) throw BadPrime("p = " + std::to_string(alg.p()) + " is not good");
    GradingMap gm = second_kind_grading(alg);
    gm.checked_degree = max_degree;
    if (!force_solver && grading_equivariant(alg, gm, max_degree)) return gm;

    const RootSystem& rs = alg.roots();
    const Fp& fp = alg.field();
    int n = rs.num_positive();
    std::vector<int> order(n);
    for (int b = 0; b < n; ++b) order[b] = b;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return rs.height(rs.positive_roots[x]) < rs.height(rs.positive_roots[y]);
    });
    gm.kind = GradingKind::SolvedEquivariant;
    // unknown corrections c_{beta,u} for every non-simple beta, solved jointly
    std::vector<std::pair<int, Exps>> unknowns;
    std::map<std::pair<int, Exps>, int> col;
    for (int beta : order) {
        const RootVec& rb = rs.positive_roots[beta];
        if (is_simple(rb)) continue;
        for (auto& ex : exps_of_weight(rs, rb))
            if (total_degree(ex) >= 2) {
                col[{beta, ex}] = static_cast<int>(unknowns.size());
                unknowns.push_back({beta, ex});
            }
    }
    int nu = static_cast<int>(unknowns.size());
    if (nu > 0) {
        std::map<std::pair<int, Exps>, std::pair<FpVec, int64_t>> rows;
        auto row = [&](int e, const Exps& m) -> std::pair<FpVec, int64_t>& {
            auto [it, fresh] = rows.try_emplace({e, m}, FpVec(nu, 0), 0);
            return it->second;
        };
        int eq = 0;
        for (int beta : order) {
            const RootVec& rb = rs.positive_roots[beta];
            for (int i = 0; i < rs.rank; ++i)
                for (int m = 1; m <= rb[i]; ++m, ++eq) {
                    HyperElt act = alg.E(i, m);
                    DualPoly base = dual_adjoint(alg, act, dual_var(Side::Plus, beta));
                    for (auto& [mon, c] : base.terms) row(eq, mon).second = fp.sub(row(eq, mon).second, c);
                    for (auto& [key, u] : col) {
                        if (key.first != beta) continue;
                        DualPoly img = dual_adjoint(alg, act, dual_monomial(Side::Plus, key.second));
                        for (auto& [mon, c] : img.terms) row(eq, mon).first[u] = fp.add(row(eq, mon).first[u], c);
                    }
                    RootVec gv = rb;
                    gv[i] -= m;
                    int gamma = rs.positive_index(gv);
                    if (gamma < 0) continue;
                    Exps unit{};
                    unit[gamma] = 1;
                    auto it = base.terms.find(unit);
                    if (it == base.terms.end()) continue;
                    int64_t d = it->second;
                    row(eq, unit).second = fp.add(row(eq, unit).second, d);
                    for (auto& [key, u] : col)
                        if (key.first == gamma) row(eq, key.second).first[u] = fp.sub(row(eq, key.second).first[u], d);
                }
        }
        FpMat mat;
        FpVec rhs;
        for (auto& [key, r] : rows) {
            mat.push_back(r.first);
            rhs.push_back(r.second);
        }
        auto sol = solve(fp, mat, rhs, nu);
        if (!sol) throw NoEquivariantGrading("no equivariant correction of the degree-one generators");
        for (int u = 0; u < nu; ++u) {
            auto& [beta, ex] = unknowns[u];
            gm.gens[beta] = dual_add(fp, gm.gens[beta], dual_monomial(Side::Plus, ex, (*sol)[u]));
        }
    }
    // inverse substitution by height: y_beta = yhat_beta - corrections(y)
    for (int beta : order) {
        DualPoly corr = dual_add(fp, gm.gens[beta], dual_scale(fp, dual_var(Side::Plus, beta), -1));
        DualPoly inv = dual_var(Side::Plus, beta);
        inv = dual_add(fp, inv, dual_scale(fp, substitute(fp, corr, gm.inverse, n), -1));
        gm.inverse[beta] = inv;
    }
    std::string witness;
    if (!grading_equivariant(alg, gm, max_degree, &witness))
        throw NoEquivariantGrading("solved grading fails equivariance: " + witness);
    return gm;
}

namespace {

DualPoly trace_rule(const Fp& fp, int n, const DualPoly& f) {
    DualPoly out{f.side, {}};
    int p = static_cast<int>(fp.p);
    for (auto& [a, c] : f.terms) {
        Exps b{};
        bool ok = true;
        for (int s = 0; s < n && ok; ++s) {
            ok = a[s] % p == p - 1;
            b[s] = static_cast<int16_t>(a[s] / p);
        }
        if (ok) accumulate(fp, out.terms, b, c);
    }
    return out;
}

}  // namespace

DualPoly trace_plus(const Fp& fp, int n, const DualPoly& f) {
    if (f.side != Side::Plus) throw SideMismatch("plus trace applied to an x polynomial");
    return trace_rule(fp, n, f);
}

DualPoly trace_minus(const Fp& fp, int n, const DualPoly& f) {
    if (f.side != Side::Minus) throw SideMismatch("minus trace applied to a y polynomial");
    return trace_rule(fp, n, f);
}

DualPoly project_degree(const GradingMap* gm, const DualPoly& f, int d) {
    if (!gm) throw GradingMissing("degree projection needs a grading");
    DualPoly h = gm->to_hat(f);
    DualPoly keep{h.side, {}};
    for (auto& [a, c] : h.terms)
        if (total_degree(a) == d) keep.terms.emplace(a, c);
    return gm->from_hat(keep);
}

HyperElt graded_dual_element(Algebra& alg, const GradingMap& gm, const Exps& b) {
    const Fp& fp = alg.field();
    auto keys = exps_of_weight(alg.roots(), exps_weight(alg.roots(), b));
    int m = static_cast<int>(keys.size());
    std::map<Exps, int> idx;
    for (int t = 0; t < m; ++t) idx[keys[t]] = t;
    // mat[a][c] = coefficient of y^a in yhat^c
    FpMat mat(m, FpVec(m, 0));
    for (int c = 0; c < m; ++c)
        for (auto& [a, v] : gm.from_hat(dual_monomial(Side::Plus, keys[c])).terms) mat[idx.at(a)][c] = v;
    auto inv = inverse(fp, mat);
    if (!inv) throw NoEquivariantGrading("graded generators are not a change of coordinates");
    HyperElt out;
    int row = idx.at(b);
    for (int a = 0; a < m; ++a)
        if ((*inv)[row][a] != 0) {
            PbwKey k;
            k.e = keys[a];
            out.terms[k] = (*inv)[row][a];
        }
    return out;
}

std::string dual_to_text(const DualPoly& f, int n) {
    std::ostringstream os;
    auto list = [&](const char* tag, const Exps* v) {
        os << tag << '[';
        for (int s = 0; s < n; ++s) os << (s ? "," : "") << (v ? (*v)[s] : 0);
        os << ']';
    };
    for (auto& [a, c] : f.terms) {
        list("x", f.side == Side::Minus ? &a : nullptr);
        os << ' ';
        list("y", f.side == Side::Plus ? &a : nullptr);
        os << " : " << c << '\n';
    }
    return os.str();
}

DualPoly dual_from_text(const Fp& fp, const std::string& s, int n) {
    std::istringstream is(s);
    std::string line;
    std::vector<std::pair<Exps, Exps>> keys;
    std::vector<int64_t> coeffs;
    bool any_x = false, any_y = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        size_t pos = 0;
        auto read = [&](char tag, Exps& v) {
            while (pos < line.size() && line[pos] == ' ') ++pos;
            if (line.compare(pos, 2, std::string{tag, '['}) != 0) throw ParseError("bad term: " + line);
            pos += 2;
            for (int t = 0; t < n; ++t) {
                size_t used = 0;
                int val = std::stoi(line.substr(pos), &used);
                if (val < 0) throw ParseError("negative exponent: " + line);
                v[t] = static_cast<int16_t>(val);
                pos += used;
                char want = t + 1 < n ? ',' : ']';
                if (pos >= line.size() || line[pos] != want) throw ParseError("bad term: " + line);
                ++pos;
            }
        };
        Exps x{}, y{};
        try {
            read('x', x);
            read('y', y);
            auto colon = line.find(':', pos);
            if (colon == std::string::npos) throw ParseError("missing coefficient: " + line);
            coeffs.push_back(std::stoll(line.substr(colon + 1)));
        } catch (const std::invalid_argument&) {
            throw ParseError("bad number in: " + line);
        } catch (const std::out_of_range&) {
            throw ParseError("number out of range in: " + line);
        }
        bool hx = total_degree(x) > 0, hy = total_degree(y) > 0;
        if (hx && hy) throw ParseError("term mixes x and y variables: " + line);
        any_x |= hx;
        any_y |= hy;
        keys.push_back({x, y});
    }
    if (any_x && any_y) throw ParseError("polynomial mixes x and y variables");
    Side side = any_x ? Side::Minus : Side::Plus;
    DualPoly out{side, {}};
    for (size_t t = 0; t < keys.size(); ++t)
        accumulate(fp, out.terms, side == Side::Minus ? keys[t].first : keys[t].second, coeffs[t]);
    return out;
}

}  // namespace frsplit
