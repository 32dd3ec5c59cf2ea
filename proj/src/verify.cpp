#include "frsplit/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <type_traits>

#include "frsplit/dualring.hpp"
#include "frsplit/steinberg.hpp"

namespace frsplit {

namespace {

using json = nlohmann::json;
using Triple = std::array<PbwKey, 3>;

const std::vector<std::string> kSuites = {
    "hopf-axioms",        "frobenius-phi", "mu0",          "small-lemmas",    "adjoint-frobenius",
    "steinberg",          "top-projection", "op-s-definition", "frobenius-linearity", "splitting-axiom",
    "equivariance",       "klt",            "r-lambda",     "e0-commutation",
};

const std::set<std::string> kPsiSuites = {
    "steinberg", "top-projection", "op-s-definition", "frobenius-linearity", "splitting-axiom",
    "equivariance", "klt", "r-lambda", "e0-commutation",
};

/// FNV-1a, so that per-suite seeds do not depend on the standard library.
uint64_t name_hash(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<PbwKey> keys_up_to(const Algebra& alg, int deg) {
    int n = alg.num_positive(), l = alg.rank();
    int slots = 2 * n + l;
    std::vector<PbwKey> out;
    std::vector<int> v(slots, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == slots) {
            PbwKey k;
            for (int b = 0; b < n; ++b) {
                k.e[b] = static_cast<int16_t>(v[b]);
                k.f[b] = static_cast<int16_t>(v[n + l + b]);
            }
            for (int i = 0; i < l; ++i) k.h[i] = static_cast<int16_t>(v[n + i]);
            out.push_back(k);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            v[pos] = a;
            rec(pos + 1, left - a);
        }
        v[pos] = 0;
    };
    rec(0, deg);
    return out;
}

int key_degree(const PbwKey& k) {
    int d = total_degree(k.e) + total_degree(k.f);
    for (auto h : k.h) d += h;
    return d;
}

std::vector<Exps> exps_up_to(int n, int deg) {
    std::vector<Exps> out;
    for (int d = 0; d <= deg; ++d)
        for (auto& a : exps_of_degree(n, d)) out.push_back(a);
    return out;
}

std::string key_text(const Algebra& alg, const PbwKey& k) { return alg.to_text(alg.monomial(k)); }

std::string tensor_text(const Algebra& alg, const TensorElt& t) {
    if (t.terms.empty()) return "0";
    std::string s;
    for (auto& [kk, c] : t.terms) {
        if (!s.empty()) s += " + ";
        s += std::to_string(c) + " (" + key_text(alg, kk.first) + ") x (" + key_text(alg, kk.second) + ")";
    }
    return s;
}

void add_to(const Fp& fp, std::map<Triple, int64_t>& m, const Triple& k, int64_t c) {
    if (!c) return;
    int64_t& v = m[k];
    v = fp.add(v, c);
    if (!v) m.erase(k);
}

void add_to(const Fp& fp, TensorElt& t, const std::pair<PbwKey, PbwKey>& k, int64_t c) {
    if (!c) return;
    int64_t& v = t.terms[k];
    v = fp.add(v, c);
    if (!v) t.terms.erase(k);
}

json word_json(const GenWord& w) {
    json out = json::array();
    for (auto& a : w.atoms)
        out.push_back({{"kind", a.kind == Atom::Kind::E ? "E" : a.kind == Atom::Kind::F ? "F" : "H"},
                       {"i", a.i + 1},
                       {"n", a.n}});
    return out;
}

json exps_json(const Exps& a, int n) { return std::vector<int>(a.begin(), a.begin() + n); }

/// Random word whose atom exponents sum to at most max_total.
GenWord random_word(std::mt19937_64& rng, int rank, const std::vector<Atom::Kind>& kinds, int max_len, int max_total) {
    GenWord w;
    int len = static_cast<int>(rng() % (max_len + 1));
    int left = max_total;
    for (int t = 0; t < len; ++t) {
        Atom a;
        a.kind = kinds[rng() % kinds.size()];
        a.i = static_cast<int>(rng() % rank);
        a.n = static_cast<int>(rng() % (std::min(2, left) + 1));
        left -= a.n;
        w.atoms.push_back(a);
    }
    return w;
}

/// Case inputs are either json or a callable producing it on failure.
template <class In>
json materialize(const In& in) {
    if constexpr (std::is_invocable_v<const In&>)
        return in();
    else
        return in;
}

/// Runs one case, turning library errors into a recorded failure.
template <class In, class F>
void guarded(VerifyReport& rep, const In& input, F&& body) {
    ++rep.cases;
    try {
        body();
    } catch (const FrsplitError& e) {
        rep.record(materialize(input), "error", e.what());
    }
}

template <class In>
void expect_equal(VerifyReport& rep, const Algebra& alg, const In& input, const HyperElt& lhs, const HyperElt& rhs) {
    if (lhs != rhs) rep.record(materialize(input), alg.to_text(lhs), alg.to_text(rhs));
}

int root_height(const Algebra& alg, int b) { return alg.roots().height(alg.roots().positive_roots[b]); }

/// Word of simple divided powers equal to a key that involves only simple roots.
GenWord simple_key_word(const Algebra& alg, const PbwKey& k) {
    const auto& rs = alg.roots();
    GenWord w;
    for (int b = 0; b < rs.num_positive(); ++b) {
        if (!k.e[b] && !k.f[b]) continue;
        int i = -1;
        for (int j = 0; j < rs.rank; ++j)
            if (rs.simple_position(j) == b) i = j;
        if (i < 0) throw WrongAtomKind("key involves a non-simple root");
        if (k.e[b]) w.atoms.push_back(Atom{Atom::Kind::E, i, k.e[b]});
    }
    for (int i = 0; i < rs.rank; ++i)
        if (k.h[i]) w.atoms.push_back(Atom{Atom::Kind::H, i, k.h[i]});
    for (int b = 0; b < rs.num_positive(); ++b) {
        if (!k.f[b]) continue;
        for (int j = 0; j < rs.rank; ++j)
            if (rs.simple_position(j) == b) w.atoms.push_back(Atom{Atom::Kind::F, j, k.f[b]});
    }
    return w;
}

// ---------------------------------------------------------------------------------------------
// Hopf structure

VerifyReport suite_hopf(Context& ctx, const RunSpec& spec) {
    Algebra& alg = *ctx.alg;
    const Fp& fp = alg.field();
    int deg = spec.options.hopf_degree;
    VerifyReport rep;
    rep.identity = "hopf-axioms";
    auto keys = keys_up_to(alg, deg);
    std::vector<int> degs;
    for (auto& k : keys) degs.push_back(key_degree(k));
    HyperElt one = alg.one();

    for (size_t a = 0; a < keys.size(); ++a) {
        HyperElt x = alg.monomial(keys[a]);
        auto in = [&] { return json{{"law", "unit"}, {"a", key_text(alg, keys[a])}}; };
        guarded(rep, in, [&] {
            expect_equal(rep, alg, in, alg.mult(one, x), x);
            expect_equal(rep, alg, in, alg.mult(x, one), x);
        });
    }

    for (size_t a = 0; a < keys.size(); ++a)
        for (size_t b = 0; b < keys.size(); ++b) {
            if (degs[a] + degs[b] > deg) continue;
            HyperElt x = alg.monomial(keys[a]), y = alg.monomial(keys[b]);
            HyperElt xy;
            auto pin = [&](const char* law) {
                return json{{"law", law}, {"a", key_text(alg, keys[a])}, {"b", key_text(alg, keys[b])}};
            };
            bool ok = true;
            try {
                xy = alg.mult(x, y);
            } catch (const FrsplitError& e) {
                ++rep.cases;
                rep.record(pin("product"), "error", e.what());
                ok = false;
            }
            if (!ok) continue;
            for (size_t c = 0; c < keys.size(); ++c) {
                if (degs[a] + degs[b] + degs[c] > deg) continue;
                auto in = [&] {
                    return json{{"law", "associativity"},
                                {"a", key_text(alg, keys[a])},
                                {"b", key_text(alg, keys[b])},
                                {"c", key_text(alg, keys[c])}};
                };
                guarded(rep, in, [&] {
                    HyperElt z = alg.monomial(keys[c]);
                    expect_equal(rep, alg, in, alg.mult(xy, z), alg.mult(x, alg.mult(y, z)));
                });
            }
            auto bin = [&] { return pin("comultiplication is multiplicative"); };
            guarded(rep, bin, [&] {
                TensorElt lhs = alg.comult(xy);
                TensorElt rhs;
                auto dx = alg.comult(x), dy = alg.comult(y);
                for (auto& [k1, c1] : dx.terms)
                    for (auto& [k2, c2] : dy.terms) {
                        HyperElt l = alg.mult(alg.monomial(k1.first), alg.monomial(k2.first));
                        HyperElt r = alg.mult(alg.monomial(k1.second), alg.monomial(k2.second));
                        int64_t c12 = fp.mul(c1, c2);
                        for (auto& [u, cu] : l.terms)
                            for (auto& [v, cv] : r.terms) add_to(fp, rhs, {u, v}, fp.mul(c12, fp.mul(cu, cv)));
                    }
                if (lhs != rhs) rep.record(bin(), tensor_text(alg, lhs), tensor_text(alg, rhs));
            });
            auto fin = [&] { return pin("Fr is multiplicative"); };
            guarded(rep, fin, [&] {
                expect_equal(rep, alg, fin, alg.frobenius(xy), alg.mult(alg.frobenius(x), alg.frobenius(y)));
            });
        }

    for (auto& k : keys) {
        HyperElt x = alg.monomial(k);
        auto in = [&] { return json{{"law", "coassociativity, counit, antipode"}, {"a", key_text(alg, k)}}; };
        guarded(rep, in, [&] {
            TensorElt d = alg.comult(x);
            std::map<Triple, int64_t> left, right;
            HyperElt cl, cr, sl, sr;
            for (auto& [kk, c] : d.terms) {
                for (auto& [uu, cu] : alg.comult(alg.monomial(kk.first)).terms)
                    add_to(fp, left, Triple{uu.first, uu.second, kk.second}, fp.mul(c, cu));
                for (auto& [vv, cv] : alg.comult(alg.monomial(kk.second)).terms)
                    add_to(fp, right, Triple{kk.first, vv.first, vv.second}, fp.mul(c, cv));
                HyperElt u = alg.monomial(kk.first), v = alg.monomial(kk.second);
                cl = alg.add(cl, alg.scale(v, fp.mul(c, alg.counit(u))));
                cr = alg.add(cr, alg.scale(u, fp.mul(c, alg.counit(v))));
                sl = alg.add(sl, alg.scale(alg.mult(alg.antipode(u), v), c));
                sr = alg.add(sr, alg.scale(alg.mult(u, alg.antipode(v)), c));
            }
            if (left != right) rep.record(in(), "(D x id) D a differs", "(id x D) D a");
            expect_equal(rep, alg, in, cl, x);
            expect_equal(rep, alg, in, cr, x);
            HyperElt eps = alg.scale(one, alg.counit(x));
            expect_equal(rep, alg, in, sl, eps);
            expect_equal(rep, alg, in, sr, eps);
        });
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Frobenius, phi and Fr'

/// (Fr x id) applied to a tensor.
TensorElt fr_left(const Algebra& alg, const TensorElt& t) {
    const Fp& fp = alg.field();
    TensorElt out;
    for (auto& [kk, c] : t.terms)
        for (auto& [u, cu] : alg.frobenius(alg.monomial(kk.first)).terms) add_to(fp, out, {u, kk.second}, fp.mul(c, cu));
    return out;
}

/// (id x g) applied to a tensor whose right factors involve simple roots only.
TensorElt map_right(Algebra& alg, const TensorElt& t, const std::function<HyperElt(const GenWord&)>& g) {
    const Fp& fp = alg.field();
    TensorElt out;
    for (auto& [kk, c] : t.terms)
        for (auto& [v, cv] : g(simple_key_word(alg, kk.second)).terms) add_to(fp, out, {kk.first, v}, fp.mul(c, cv));
    return out;
}

VerifyReport suite_frobenius_phi(Context& ctx, const RunSpec& spec) {
    Algebra& alg = *ctx.alg;
    int p = alg.p(), rank = alg.rank();
    VerifyReport rep;
    rep.identity = "frobenius-phi";
    std::mt19937_64 rng(spec.options.seed ^ name_hash(rep.identity));
    using K = Atom::Kind;

    // phi stretches exponents by p and each mu0 factor adds p - 1 to the torus exponents.
    auto fits = [&](const GenWord& w) {
        int total = 0;
        for (auto& a : w.atoms) total += a.n;
        return p * total + (static_cast<int>(w.atoms.size()) + 1) * (p - 1) <= alg.cap();
    };
    auto phi_word_sample = [&](int max_len, int max_total) {
        while (true) {
            GenWord w = random_word(rng, rank, {K::E, K::F, K::H}, max_len, max_total);
            if (fits(w)) return w;
        }
    };
    // Exponent budget keeps the stretched exponents p * total near 15.
    int word_total = std::clamp(15 / p, 2, 4);
    for (int t = 0; t < spec.options.word_cases; ++t) {
        GenWord w = phi_word_sample(4, word_total);
        json in = {{"law", "Fr(phi(w)) = w"}, {"word", word_json(w)}};
        guarded(rep, in, [&] { expect_equal(rep, alg, in, alg.frobenius(alg.phi_word(w)), alg.normalize(w)); });
    }
    struct Variant {
        K kind;
        const char* law;
        HyperElt (Algebra::*fr)(const GenWord&);
    };
    for (auto& v : {Variant{K::E, "Fr(Fr'(w)) = w", &Algebra::fr_prime_word},
                    Variant{K::F, "Fr(Fr'-(w)) = w", &Algebra::fr_prime_minus_word},
                    Variant{K::H, "Fr(Fr'0(w)) = w", &Algebra::fr_prime_zero_word}})
        for (int t = 0; t < spec.options.word_cases; ++t) {
            GenWord w = random_word(rng, rank, {v.kind}, 4, word_total);
            json in = {{"law", v.law}, {"word", word_json(w)}};
            guarded(rep, in, [&] { expect_equal(rep, alg, in, alg.frobenius((alg.*v.fr)(w)), alg.normalize(w)); });
        }

    HyperElt mu0 = alg.mu0();
    for (int t = 0; t < spec.options.sample_cases; ++t) {
        GenWord w = phi_word_sample(3, 3);
        json in = {{"law", "mu0 commutes with phi(w)"}, {"word", word_json(w)}};
        guarded(rep, in, [&] {
            HyperElt x = alg.phi_word(w);
            expect_equal(rep, alg, in, alg.mult(mu0, x), alg.mult(x, mu0));
        });
    }

    // The two extensions agree only away from non-simple roots.
    auto simple_support = [&](const HyperElt& a) {
        for (auto& [k, c] : a.terms)
            for (int b = 0; b < alg.num_positive(); ++b)
                if ((k.e[b] || k.f[b]) && root_height(alg, b) != 1) return false;
        return true;
    };
    for (int t = 0; t < spec.options.sample_cases; ++t) {
        bool plus = t % 2 == 0;
        GenWord w;
        HyperElt a;
        do {
            w = random_word(rng, rank, {plus ? K::E : K::F}, 3, 3);
            a = alg.normalize(w);
        } while (!simple_support(a));
        json in = {{"law", plus ? "componentwise Fr' = word Fr'" : "componentwise Fr'- = word Fr'-"},
                   {"word", word_json(w)}};
        guarded(rep, in, [&] {
            HyperElt word = plus ? alg.fr_prime_word(w) : alg.fr_prime_minus_word(w);
            expect_equal(rep, alg, in, alg.fr_prime_pbw(a, plus ? Side::Plus : Side::Minus), word);
        });
    }

    int m_max = std::max(1, std::min(p + 1, (alg.cap() - 2 * p) / p));
    auto phi = [&](const GenWord& w) { return alg.phi_word(w); };
    auto frp = [&](const GenWord& w) { return alg.fr_prime_word(w); };
    for (int i = 0; i < rank; ++i)
        for (int m = 0; m <= m_max; ++m)
            for (K kind : {K::E, K::F, K::H}) {
                GenWord g{{Atom{kind, i, m}}};
                json in = {{"law", "(Fr x id) D phi = (id x phi) D"}, {"generator", word_json(g)}};
                guarded(rep, in, [&] {
                    TensorElt lhs = fr_left(alg, alg.comult(alg.phi_word(g)));
                    TensorElt rhs = map_right(alg, alg.comult(alg.normalize(g)), phi);
                    if (lhs != rhs) rep.record(in, tensor_text(alg, lhs), tensor_text(alg, rhs));
                });
                if (kind != K::E) continue;
                json in2 = {{"law", "(Fr x id) D Fr' = (id x Fr') D"}, {"generator", word_json(g)}};
                guarded(rep, in2, [&] {
                    TensorElt lhs = fr_left(alg, alg.comult(alg.fr_prime_word(g)));
                    TensorElt rhs = map_right(alg, alg.comult(alg.normalize(g)), frp);
                    if (lhs != rhs) rep.record(in2, tensor_text(alg, lhs), tensor_text(alg, rhs));
                });
            }
    return rep;
}

VerifyReport suite_mu0(Context& ctx, const RunSpec&) {
    Algebra& alg = *ctx.alg;
    const auto& rs = alg.roots();
    int p = alg.p(), rank = alg.rank();
    VerifyReport rep;
    rep.identity = "mu0";
    HyperElt m = alg.mu0();
    json in0 = {{"law", "mu0 mu0 = mu0"}};
    guarded(rep, in0, [&] { expect_equal(rep, alg, in0, alg.mult(m, m), m); });

    std::vector<Weight> box;
    std::vector<int> v(rank, -p);
    while (true) {
        box.push_back(Weight{v});
        int i = 0;
        while (i < rank && ++v[i] == p) v[i++] = -p;
        if (i == rank) break;
    }
    for (auto& lam : box) {
        bool in_p_lattice = std::all_of(lam.coords.begin(), lam.coords.end(), [&](int c) { return c % p == 0; });
        json in = {{"law", "c_lambda(mu0) = [lambda in p Lambda]"}, {"lambda", lam.coords}};
        guarded(rep, in, [&] {
            int64_t got = alg.character(lam, m);
            if (got != (in_p_lattice ? 1 : 0)) rep.record(in, std::to_string(got), in_p_lattice ? "1" : "0");
        });
    }
    auto small = alg.small_spanning_set(Part::Torus);
    for (size_t z = 0; z < small.size(); ++z)
        for (auto& mu : box)
            for (auto& lam : {rs.rho(), rs.zero_weight() + Weight{std::vector<int>(rank, -1)}}) {
                Weight shifted = lam * p + mu;
                json in = {{"law", "c_(p lambda + mu)(z) = c_mu(z)"},
                           {"z", alg.to_text(small[z])},
                           {"lambda", lam.coords},
                           {"mu", mu.coords}};
                guarded(rep, in, [&] {
                    int64_t a = alg.character(shifted, small[z]), b = alg.character(mu, small[z]);
                    if (a != b) rep.record(in, std::to_string(a), std::to_string(b));
                });
            }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// E0 and F0

VerifyReport suite_small_lemmas(Context& ctx, const RunSpec&) {
    Algebra& alg = *ctx.alg;
    int p = alg.p(), rank = alg.rank();
    VerifyReport rep;
    rep.identity = "small-lemmas";
    HyperElt e0 = alg.e0(), f0 = alg.f0();
    for (int i = 0; i < rank; ++i)
        for (int m = 1; m <= p * p && m + p - 1 <= alg.cap(); ++m) {
            json in = {{"law", "E0 central, F0 central"}, {"i", i + 1}, {"m", m}};
            guarded(rep, in, [&] {
                HyperElt e = alg.E(i, m), f = alg.F(i, m);
                expect_equal(rep, alg, in, alg.mult(e0, e), alg.mult(e, e0));
                expect_equal(rep, alg, in, alg.mult(f0, f), alg.mult(f, f0));
            });
        }
    for (Part part : {Part::N, Part::NMinus}) {
        HyperElt z = part == Part::N ? e0 : f0;
        for (auto& u : alg.small_spanning_set(part)) {
            if (u.terms.begin()->first.is_unit()) continue;
            json in = {{"law", part == Part::N ? "E0 u = u E0 = u*E0 = 0" : "F0 u = u F0 = 0"}, {"u", alg.to_text(u)}};
            guarded(rep, in, [&] {
                expect_equal(rep, alg, in, alg.mult(z, u), HyperElt{});
                expect_equal(rep, alg, in, alg.mult(u, z), HyperElt{});
                if (part == Part::N) expect_equal(rep, alg, in, alg.adjoint(u, z), HyperElt{});
            });
        }
    }
    return rep;
}

VerifyReport suite_adjoint_frobenius(Context& ctx, const RunSpec& spec) {
    Algebra& alg = *ctx.alg;
    int rank = alg.rank(), n = alg.num_positive();
    VerifyReport rep;
    rep.identity = "adjoint-frobenius";
    std::mt19937_64 rng(spec.options.seed ^ name_hash(rep.identity));
    HyperElt e0 = alg.e0();
    for (int t = 0; t < spec.options.sample_cases; ++t) {
        GenWord z = random_word(rng, rank, {Atom::Kind::E}, 2, 2);
        GenWord y = random_word(rng, rank, {Atom::Kind::E}, 2, 2);
        json in = {{"law", "E0 Fr'(Z*Y) = E0 (Fr'Z * Fr'Y)"}, {"Z", word_json(z)}, {"Y", word_json(y)}};
        guarded(rep, in, [&] {
            HyperElt zy = alg.adjoint(alg.normalize(z), alg.normalize(y));
            HyperElt lhs = alg.mult(e0, alg.fr_prime_via_words(zy, Side::Plus));
            HyperElt rhs = alg.mult(e0, alg.adjoint(alg.fr_prime_word(z), alg.fr_prime_word(y)));
            expect_equal(rep, alg, in, lhs, rhs);
        });
    }
    auto small = alg.small_spanning_set(Part::N);
    small.erase(small.begin());
    auto xs = exps_up_to(n, 3);
    for (int t = 0; t < spec.options.sample_cases; ++t) {
        const HyperElt& u = small[rng() % small.size()];
        PbwKey kx;
        kx.e = xs[rng() % xs.size()];
        json in = {{"law", "E0 (N*X) = 0"}, {"N", alg.to_text(u)}, {"X", key_text(alg, kx)}};
        guarded(rep, in, [&] { expect_equal(rep, alg, in, alg.mult(e0, alg.adjoint(u, alg.monomial(kx))), HyperElt{}); });
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Steinberg module and the top graded piece

VerifyReport suite_steinberg(Context& ctx, const RunSpec&) {
    Algebra& alg = *ctx.alg;
    const Fp& fp = alg.field();
    const auto& rs = ctx.rs;
    StModule& st = ctx.st;
    int p = ctx.p, n = ctx.n();
    VerifyReport rep;
    rep.identity = "steinberg";
    int64_t expected = 1;
    for (int b = 0; b < n; ++b) expected *= p;
    ++rep.cases;
    if (st.dim != expected) rep.record({{"law", "dim St = p^N"}}, std::to_string(st.dim), std::to_string(expected));

    std::map<RootVec, int> mult, oracle;
    for (auto& nu : st.nu_of) ++mult[nu];
    Exps small{};
    while (true) {
        ++oracle[exps_weight(rs, small)];
        int b = 0;
        while (b < n && ++small[b] == p) small[b++] = 0;
        if (b == n) break;
    }
    for (auto& [nu, c] : oracle) {
        ++rep.cases;
        int got = mult.count(nu) ? mult[nu] : 0;
        if (got != c) rep.record({{"law", "weight multiplicity"}, {"nu", nu}}, std::to_string(got), std::to_string(c));
    }

    json uin = {{"law", "invariant pairings form a line"}};
    guarded(rep, uin, [&] {
        auto forms = invariant_forms(alg, st);
        if (forms.size() != 1) rep.record(uin, std::to_string(forms.size()), "1");
    });
    for (auto& [g, m] : st.gen_actions) {
        json in = {{"law", "eta(X a, b) = (-1)^n eta(a, X b)"},
                   {"generator", g[0] == 0 ? "E" : "F"},
                   {"i", g[1] + 1},
                   {"n", g[2]}};
        guarded(rep, in, [&] {
            if (!form_invariant_under(fp, st, st.eta, g)) rep.record(in, "not invariant", "invariant");
        });
    }
    json rin = {{"law", "eta is nondegenerate"}};
    guarded(rep, rin, [&] {
        int r = rank(fp, st.eta);
        if (r != st.dim) rep.record(rin, std::to_string(r), std::to_string(st.dim));
    });
    json nin = {{"law", "eta(F0 f_+, E0 f_-) = 1"}};
    guarded(rep, nin, [&] {
        int64_t v = eta_normalization(alg, st);
        if (v != 1) rep.record(nin, std::to_string(v), "1");
    });
    return rep;
}

VerifyReport suite_top_projection(Context& ctx, const RunSpec&) {
    Algebra& alg = *ctx.alg;
    const auto& rs = ctx.rs;
    int n = ctx.n(), p = ctx.p;
    VerifyReport rep;
    rep.identity = "top-projection";
    Exps z0{};
    for (int b = 0; b < n; ++b) z0[b] = static_cast<int16_t>(p - 1);
    HyperElt e0 = alg.e0();
    std::set<Exps> candidates;
    for (auto& a : exps_of_degree(n, ctx.top())) candidates.insert(a);
    for (auto& a : exps_of_weight(rs, exps_weight(rs, z0))) candidates.insert(a);
    for (auto& a : candidates) {
        json in = {{"law", "<yhat^a, E0> = [a = z0]"}, {"a", exps_json(a, n)}};
        guarded(rep, in, [&] {
            int64_t v = pair(alg, ctx.gm.from_hat(dual_monomial(Side::Plus, a)), e0);
            int64_t want = a == z0 ? 1 : 0;
            if (v != want) rep.record(in, std::to_string(v), std::to_string(want));
        });
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Splitting

VerifyReport suite_op_s_definition(Context& ctx, const RunSpec&) {
    VerifyReport rep;
    rep.identity = "op-s-definition";
    for (const Weight& lam : {ctx.rs.zero_weight(), ctx.rs.rho()}) {
        json in = {{"lambda", lam.coords}};
        VerifyReport part;
        try {
            part = check_op_s_definition(ctx, lam);
        } catch (const FrsplitError& e) {
            part.cases = 1;
            part.record(in, "error", e.what());
        }
        rep.merge(part);
    }
    return rep;
}

std::map<SectionKey, int64_t> as_map(const Fp& fp, const std::vector<std::pair<SectionKey, int64_t>>& terms) {
    std::map<SectionKey, int64_t> out;
    for (auto& [k, c] : terms) {
        int64_t& v = out[k];
        v = fp.add(v, c);
        if (!v) out.erase(k);
    }
    return out;
}

std::string map_text(const std::map<SectionKey, int64_t>& m, int n) {
    GradedSection s;
    s.lambda = Weight{std::vector<int>{0}};
    s.terms = m;
    return section_to_text(s, n);
}

/// Every monomial within the truncation.
std::vector<SectionKey> all_monomials(int n, const Truncation& t) {
    auto xs = exps_up_to(n, t.dx), ys = exps_up_to(n, t.dn);
    std::vector<SectionKey> out;
    out.reserve(xs.size() * ys.size());
    for (auto& a : xs)
        for (auto& b : ys) out.push_back(SectionKey{a, b});
    return out;
}

VerifyReport suite_frobenius_linearity(Context& ctx, const RunSpec& spec) {
    const Fp& fp = ctx.field();
    int p = ctx.p, n = ctx.n();
    VerifyReport rep;
    rep.identity = "frobenius-linearity";
    // Generators v suffice: sigma((v w)^p g) = v sigma(w^p g) by induction on the degree of f.
    std::vector<SectionKey> gens;
    for (int s = 0; s < n; ++s) {
        SectionKey kx, ky;
        kx.x[s] = 1;
        ky.y[s] = 1;
        gens.push_back(kx);
        gens.push_back(ky);
    }
    auto shift = [&](const SectionKey& k, const SectionKey& v, int times) {
        SectionKey r = k;
        for (int s = 0; s < n; ++s) {
            r.x[s] = static_cast<int16_t>(r.x[s] + times * v.x[s]);
            r.y[s] = static_cast<int16_t>(r.y[s] + times * v.y[s]);
        }
        return r;
    };
    for (auto& g : all_monomials(n, ctx.trunc)) {
        auto sg = sigma_tot_monomial(ctx, g);
        for (auto& v : gens) {
            SectionKey h = shift(g, v, p);
            if (total_degree(h.x) > ctx.trunc.dx || total_degree(h.y) > ctx.trunc.dn) continue;
            ++rep.cases;
            auto lhs = sigma_tot_monomial(ctx, h);
            bool same = lhs.size() == sg.size();
            for (size_t t = 0; same && t < lhs.size(); ++t)
                same = lhs[t].second == sg[t].second && lhs[t].first == shift(sg[t].first, v, 1);
            if (same) continue;
            std::vector<std::pair<SectionKey, int64_t>> rhs;
            for (auto& [k, c] : sg) rhs.emplace_back(shift(k, v, 1), c);
            auto lm = as_map(fp, lhs), rm = as_map(fp, rhs);
            if (lm != rm)
                rep.record({{"f", map_text({{v, 1}}, n)}, {"g", map_text({{g, 1}}, n)}}, map_text(lm, n), map_text(rm, n));
        }
    }
    // General sections through the public operations.
    std::mt19937_64 rng(spec.options.seed ^ name_hash(rep.identity));
    auto lam = ctx.rs.zero_weight();
    auto random_section = [&](int dx, int dn) {
        GradedSection f = section_unit(lam);
        f.terms.clear();
        int terms = 1 + static_cast<int>(rng() % 3);
        auto xs = exps_up_to(n, dx), ys = exps_up_to(n, dn);
        for (int t = 0; t < terms; ++t) {
            SectionKey k{xs[rng() % xs.size()], ys[rng() % ys.size()]};
            f = section_add(fp, f, section_monomial(lam, k.x, k.y, 1 + static_cast<int64_t>(rng() % (p - 1 ? p - 1 : 1))));
        }
        return f;
    };
    int fx = std::max(0, ctx.trunc.dx / (2 * p)), fn = std::max(0, ctx.trunc.dn / (2 * p));
    for (int t = 0; t < spec.options.sample_cases; ++t) {
        GradedSection f = random_section(fx, fn);
        GradedSection g = random_section(ctx.trunc.dx - p * fx, ctx.trunc.dn - p * fn);
        json in = {{"f", section_to_text(f, n)}, {"g", section_to_text(g, n)}};
        guarded(rep, in, [&] {
            auto lhs = sigma_tot(ctx, ring_mult(fp, frt_star(fp, f), g, &ctx.trunc));
            auto rhs = ring_mult(fp, f, sigma_tot(ctx, g));
            if (!(lhs == rhs)) rep.record(in, section_to_text(lhs, n), section_to_text(rhs, n));
        });
    }
    return rep;
}

VerifyReport suite_splitting_axiom(Context& ctx, const RunSpec&) {
    const Fp& fp = ctx.field();
    int p = ctx.p, n = ctx.n();
    VerifyReport rep;
    rep.identity = "splitting-axiom";
    auto lam = ctx.rs.zero_weight();
    json ein = {{"law", "sigma(e) = e"}};
    guarded(rep, ein, [&] {
        auto s = sigma_tot(ctx, section_unit(lam));
        if (!(s == section_unit(lam))) rep.record(ein, section_to_text(s, n), "e\n");
    });
    Truncation small{ctx.trunc.dx / p, ctx.trunc.dn / p};
    for (auto& k : all_monomials(n, small)) {
        GradedSection f = section_monomial(lam, k.x, k.y);
        json in = {{"law", "sigma(f^p) = f"}, {"f", section_to_text(f, n)}};
        guarded(rep, in, [&] {
            auto s = sigma_tot(ctx, frt_star(fp, f));
            if (!(s == f)) rep.record(in, section_to_text(s, n), section_to_text(f, n));
        });
    }
    return rep;
}

VerifyReport suite_equivariance(Context& ctx, const RunSpec& spec) {
    const Fp& fp = ctx.field();
    int p = ctx.p, n = ctx.n(), rank = ctx.rs.rank;
    VerifyReport rep;
    rep.identity = "equivariance";
    std::mt19937_64 rng(spec.options.seed ^ name_hash(rep.identity));
    auto lam = ctx.rs.zero_weight();
    Exps z0{};
    for (int b = 0; b < n; ++b) z0[b] = static_cast<int16_t>(p - 1);
    auto bump = [&](Exps a, int times, int maxdeg) {
        int d = static_cast<int>(rng() % (maxdeg + 1));
        for (int t = 0; t < d; ++t) a[rng() % n] += static_cast<int16_t>(times);
        return a;
    };
    int pairs = 0;
    while (pairs < spec.options.sample_cases) {
        GenWord z = random_word(rng, rank, {Atom::Kind::E, Atom::Kind::F, Atom::Kind::H}, 2, 3);
        GradedSection f = section_unit(lam);
        f.terms.clear();
        int terms = 1 + static_cast<int>(rng() % 2);
        for (int t = 0; t < terms; ++t) {
            Exps x = bump(z0, p, 2), y = bump(z0, p, 1);
            if (rng() % 3 == 0) x = bump(x, 1, 1);
            if (rng() % 4 == 0) y = bump(y, 1, 1);
            f = section_add(fp, f, section_monomial(lam, x, y, 1 + static_cast<int64_t>(rng() % (p - 1 ? p - 1 : 1))));
        }
        try {
            check_truncation(f, ctx.trunc);
        } catch (const TruncationExceeded&) {
            continue;
        }
        ++pairs;
        json in = {{"word", word_json(z)}, {"f", section_to_text(f, n)}};
        VerifyReport one;
        try {
            one = check_equivariance(ctx, z, f);
        } catch (const FrsplitError& e) {
            one.record(in, "error", e.what());
        }
        ++rep.cases;
        rep.failure_count += one.failure_count;
        for (auto& fl : one.failures)
            if (rep.failures.size() < 20) rep.failures.push_back(fl);
    }
    return rep;
}

VerifyReport suite_klt(Context& ctx, const RunSpec&) {
    VerifyReport rep;
    rep.identity = "klt";
    try {
        rep.merge(compare_klt(ctx, ctx.trunc.dn));
    } catch (const FrsplitError& e) {
        ++rep.cases;
        rep.record({{"D", ctx.trunc.dn}}, "error", e.what());
    }
    return rep;
}

VerifyReport suite_r_lambda(Context& ctx, const RunSpec&) {
    const auto& rs = ctx.rs;
    int p = ctx.p, n = ctx.n();
    VerifyReport rep;
    rep.identity = "r-lambda";
    Truncation t{std::min(ctx.trunc.dx, 2 * ctx.top() + p), std::min(ctx.trunc.dn, 2 * ctx.top() + p)};
    auto mons = all_monomials(n, t);
    for (const Weight& lam : {rs.zero_weight(), rs.rho(), rs.rho() * 2})
        for (auto& k : mons) {
            GradedSection f = section_monomial(lam, k.x, k.y);
            auto in = [&] { return json{{"lambda", lam.coords}, {"f", section_to_text(f, n)}}; };
            guarded(rep, in, [&] {
                auto lhs = r_lambda(sigma_tot(ctx, f));
                auto rhs = sigma_tot(ctx, r_lambda(f));
                if (!(lhs == rhs)) rep.record(in(), section_to_text(lhs, n), section_to_text(rhs, n));
            });
        }
    return rep;
}

VerifyReport suite_e0_commutation(Context& ctx, const RunSpec& spec) {
    Algebra& alg = *ctx.alg;
    int p = ctx.p, n = ctx.n(), top = ctx.top(), rank = ctx.rs.rank;
    VerifyReport rep;
    rep.identity = "e0-commutation";
    std::mt19937_64 rng(spec.options.seed ^ name_hash(rep.identity));
    HyperElt f0 = alg.f0(), e0 = alg.e0();
    auto xs = exps_up_to(n, 2);
    std::vector<Exps> bs;
    for (int d = 0; p * d + top <= ctx.trunc.dn && d <= 1; ++d)
        for (auto& b : exps_of_degree(n, d)) bs.push_back(b);
    int cases = std::max(1, spec.options.sample_cases / 5);
    for (int t = 0; t < cases; ++t) {
        int i = static_cast<int>(rng() % rank), m = 1 + static_cast<int>(rng() % 2);
        PbwKey kx;
        kx.f = xs[rng() % xs.size()];
        Exps b = bs[rng() % bs.size()];
        Weight lam = t % 2 ? ctx.rs.rho() : ctx.rs.zero_weight();
        int offset = t % 2 ? top : 0;
        json in = {{"i", i + 1}, {"m", m}, {"X", key_text(alg, kx)}, {"Y", exps_json(b, n)}, {"lambda", lam.coords}};
        guarded(rep, in, [&] {
            HyperElt x = alg.monomial(kx), e = alg.E(i, p * m);
            HyperElt y = alg.mult(e0, alg.fr_prime_via_words(graded_dual_element(alg, ctx.gm, b), Side::Plus));
            int grade = p * total_degree(b) + top;
            auto lhs = evaluation_functional(ctx, alg.mult(f0, alg.mult(e, x)), y, grade, lam, offset);
            auto rhs = evaluation_functional(ctx, alg.mult(e, alg.mult(f0, x)), y, grade, lam, offset);
            if (lhs != rhs) rep.record(in, map_text(lhs, n), map_text(rhs, n));
        });
    }
    return rep;
}

}  // namespace

Corruption parse_corruption(const std::string& s) {
    if (s == "none" || s.empty()) return Corruption::None;
    if (s == "structure-constant") return Corruption::StructureConstant;
    if (s == "psi") return Corruption::PsiCoefficient;
    if (s == "eta") return Corruption::EtaScale;
    throw ParseError("unknown corruption '" + s + "'");
}

std::string corruption_name(Corruption c) {
    switch (c) {
        case Corruption::StructureConstant: return "structure-constant";
        case Corruption::PsiCoefficient: return "psi";
        case Corruption::EtaScale: return "eta";
        default: return "none";
    }
}

const std::vector<std::string>& suite_names() { return kSuites; }

bool suite_needs_psi(const std::string& name) { return kPsiSuites.count(name) > 0; }

RootSystem corrupt_structure_constant(RootSystem rs) {
    if (rs.structure_constants.empty()) throw FrsplitError("root system has no structure constants to corrupt");
    auto it = rs.structure_constants.begin();
    int v = it->second + 1;
    auto [a, b] = it->first;
    rs.structure_constants[{a, b}] = v;
    rs.structure_constants[{b, a}] = -v;
    return rs;
}

void corrupt_psi(Context& ctx) {
    if (ctx.psi.terms.empty()) throw FrsplitError("psi has no terms to corrupt");
    auto& c = ctx.psi.terms.begin()->second;
    c = ctx.field().add(c, 1);
    if (!c) ctx.psi.terms.erase(ctx.psi.terms.begin());
    index_psi(ctx);
}

void corrupt_eta(Context& ctx) {
    const Fp& fp = ctx.field();
    int64_t s = fp.p > 2 ? 2 : 0;
    for (auto& row : ctx.st.eta)
        for (auto& x : row) x = fp.mul(x, s);
}

Context make_run_context(const RunSpec& spec) {
    RootSystem rs = spec.corruption == Corruption::StructureConstant ? corrupt_structure_constant(spec.rs) : spec.rs;
    return make_base_context(rs, spec.p, spec.trunc, spec.grading_degree);
}

void ensure_complete(Context& ctx, const RunSpec& spec) {
    if (ctx.complete) return;
    complete_context(ctx, spec.grading_degree);
    if (spec.corruption == Corruption::PsiCoefficient) corrupt_psi(ctx);
    if (spec.corruption == Corruption::EtaScale) corrupt_eta(ctx);
}

VerifyReport run_suite(Context& ctx, const RunSpec& spec, const std::string& name) {
    if (suite_needs_psi(name)) ensure_complete(ctx, spec);
    if (name == "hopf-axioms") return suite_hopf(ctx, spec);
    if (name == "frobenius-phi") return suite_frobenius_phi(ctx, spec);
    if (name == "mu0") return suite_mu0(ctx, spec);
    if (name == "small-lemmas") return suite_small_lemmas(ctx, spec);
    if (name == "adjoint-frobenius") return suite_adjoint_frobenius(ctx, spec);
    if (name == "steinberg") return suite_steinberg(ctx, spec);
    if (name == "top-projection") return suite_top_projection(ctx, spec);
    if (name == "op-s-definition") return suite_op_s_definition(ctx, spec);
    if (name == "frobenius-linearity") return suite_frobenius_linearity(ctx, spec);
    if (name == "splitting-axiom") return suite_splitting_axiom(ctx, spec);
    if (name == "equivariance") return suite_equivariance(ctx, spec);
    if (name == "klt") return suite_klt(ctx, spec);
    if (name == "r-lambda") return suite_r_lambda(ctx, spec);
    if (name == "e0-commutation") return suite_e0_commutation(ctx, spec);
    throw ParseError("unknown suite '" + name + "'");
}

std::vector<VerifyReport> run_suites(const RunSpec& spec, const std::vector<std::string>& names, int jobs) {
    for (auto& nm : names)
        if (std::find(kSuites.begin(), kSuites.end(), nm) == kSuites.end()) throw ParseError("unknown suite '" + nm + "'");
    std::vector<VerifyReport> out(names.size());
    int workers = std::max(1, std::min(jobs, static_cast<int>(names.size())));
    if (workers == 1) {
        Context ctx = make_run_context(spec);
        for (size_t s = 0; s < names.size(); ++s) out[s] = run_suite(ctx, spec, names[s]);
        return out;
    }
    std::atomic<size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;
    auto work = [&] {
        try {
            Context ctx = make_run_context(spec);
            for (size_t s = next++; s < names.size(); s = next++) out[s] = run_suite(ctx, spec, names[s]);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace frsplit
