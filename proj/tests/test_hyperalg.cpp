#include "doctest.h"

#include <gmpxx.h>

#include <functional>
#include <random>

#include "frsplit/hyperalg.hpp"

using namespace frsplit;

namespace {

using QMat = std::vector<std::vector<mpq_class>>;

QMat qzero(int n) { return QMat(n, std::vector<mpq_class>(n, 0)); }
QMat qid(int n) {
    auto m = qzero(n);
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}
QMat qmul(const QMat& a, const QMat& b) {
    int n = static_cast<int>(a.size());
    auto c = qzero(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (a[i][k] != 0)
                for (int j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}
QMat qadd(QMat a, const QMat& b, const mpq_class& s = 1) {
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) a[i][j] += s * b[i][j];
    return a;
}
QMat qbr(const QMat& a, const QMat& b) { return qadd(qmul(a, b), qmul(b, a), -1); }
QMat divpow(const QMat& x, int n) {
    QMat r = qid(static_cast<int>(x.size()));
    for (int k = 1; k <= n; ++k) {
        r = qmul(r, x);
        for (auto& row : r)
            for (auto& v : row) v /= k;
    }
    return r;
}
QMat binom_mat(const QMat& h, int n) {
    QMat r = qid(static_cast<int>(h.size()));
    for (int k = 0; k < n; ++k) {
        r = qmul(r, qadd(h, qid(static_cast<int>(h.size())), -k));
        for (auto& row : r)
            for (auto& v : row) v /= (k + 1);
    }
    return r;
}

// Defining representation of sl_2 / sl_3 with root vectors normalized by the library's constants.
struct Rep {
    std::vector<QMat> E, F, H;
    QMat of_key(const PbwKey& k) const {
        QMat r = qid(static_cast<int>(H[0].size()));
        for (size_t b = 0; b < E.size(); ++b) r = qmul(r, divpow(E[b], k.e[b]));
        for (size_t i = 0; i < H.size(); ++i) r = qmul(r, binom_mat(H[i], k.h[i]));
        for (size_t b = 0; b < F.size(); ++b) r = qmul(r, divpow(F[b], k.f[b]));
        return r;
    }
    QMat of_q(const QElt& x) const {
        QMat r = qzero(static_cast<int>(H[0].size()));
        for (auto& [k, c] : x) r = qadd(r, of_key(k), c);
        return r;
    }
};

QMat unit(int n, int i, int j) {
    auto m = qzero(n);
    m[i][j] = 1;
    return m;
}

Rep defining_rep(const RootSystem& rs) {
    Rep r;
    if (rs.kind == Kind::A1) {
        r.E = {unit(2, 0, 1)};
        r.F = {unit(2, 1, 0)};
    } else {
        // order: a1, a1+a2, a2 ; e_theta = [e_a1, e_a2] / N(a1, a2)
        int n12 = rs.structure_constants.at({0, 2});
        int m12 = rs.structure_constants.at({3, 5});
        QMat e1 = unit(3, 0, 1), e2 = unit(3, 1, 2);
        QMat f1 = unit(3, 1, 0), f2 = unit(3, 2, 1);
        QMat et = qbr(e1, e2), ft = qbr(f1, f2);
        for (auto& row : et)
            for (auto& v : row) v /= n12;
        for (auto& row : ft)
            for (auto& v : row) v /= m12;
        r.E = {e1, et, e2};
        r.F = {f1, ft, f2};
    }
    int l = rs.rank;
    for (int i = 0; i < l; ++i) {
        int k = rs.simple_position(i);
        r.H.push_back(qbr(r.E[k], r.F[k]));
    }
    return r;
}

std::vector<PbwKey> keys_up_to(const Algebra& alg, int deg) {
    std::vector<PbwKey> out;
    int n = alg.num_positive(), l = alg.rank();
    int slots = 2 * n + l;
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

GenWord random_word(std::mt19937_64& rng, int rank, bool e_only, int maxlen = 4, int maxn = 2) {
    GenWord w;
    int len = static_cast<int>(rng() % (maxlen + 1));
    for (int t = 0; t < len; ++t) {
        Atom a;
        int kind = e_only ? 0 : static_cast<int>(rng() % 3);
        a.kind = kind == 0 ? Atom::Kind::E : (kind == 1 ? Atom::Kind::F : Atom::Kind::H);
        a.i = static_cast<int>(rng() % rank);
        a.n = static_cast<int>(rng() % (maxn + 1));
        w.atoms.push_back(a);
    }
    return w;
}

}  // namespace

TEST_CASE("divided powers multiply by binomial coefficients") {
    auto rs = build_root_system(Kind::A1);
    Algebra alg(rs, 7);
    CHECK(alg.mult(alg.E(0, 1), alg.E(0, 1)) == alg.scale(alg.E(0, 2), 2));
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 6; ++b)
            CHECK(alg.mult(alg.E(0, a), alg.E(0, b)) == alg.scale(alg.E(0, a + b), alg.field().binom(a + b, a)));
}

TEST_CASE("sl2 bracket: EF - FE = H") {
    auto rs = build_root_system(Kind::A1);
    Algebra alg(rs, 5);
    auto ef = alg.mult(alg.E(0, 1), alg.F(0, 1));
    auto fe = alg.mult(alg.F(0, 1), alg.E(0, 1));
    CHECK(alg.sub(ef, fe) == alg.Hbin(0, 1));
    PbwKey k;
    k.e[0] = 1;
    k.f[0] = 1;
    CHECK(ef == alg.monomial(k));
}

TEST_CASE("rational straightening agrees with the defining representation") {
    for (auto kind : {Kind::A1, Kind::A2}) {
        auto rs = build_root_system(kind);
        Algebra alg(rs, 101);
        Rep rep = defining_rep(rs);
        auto keys = keys_up_to(alg, kind == Kind::A1 ? 4 : 2);
        for (auto& a : keys)
            for (auto& b : keys) {
                auto prod = alg.q_mult_keys(a, b);
                CHECK(rep.of_q(prod) == qmul(rep.of_key(a), rep.of_key(b)));
            }
    }
}

TEST_CASE("comultiplication examples and counit law") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 3);
    auto d1 = alg.comult(alg.one());
    REQUIRE(d1.terms.size() == 1);
    CHECK(d1.terms.begin()->first.first.is_unit());
    CHECK(d1.terms.begin()->first.second.is_unit());

    auto d = alg.comult(alg.E(0, 2));
    CHECK(d.terms.size() == 3);
    PbwKey k0, k1, k2;
    k1.e[rs.simple_position(0)] = 1;
    k2.e[rs.simple_position(0)] = 2;
    CHECK(d.terms.at({k2, k0}) == 1);
    CHECK(d.terms.at({k1, k1}) == 1);
    CHECK(d.terms.at({k0, k2}) == 1);

    std::mt19937_64 rng(11);
    auto keys = keys_up_to(alg, 3);
    for (int t = 0; t < 50; ++t) {
        auto k = keys[rng() % keys.size()];
        auto a = alg.monomial(k);
        auto dd = alg.comult(a);
        HyperElt left, right;
        for (auto& [kk, c] : dd.terms) {
            left = alg.add(left, alg.scale(alg.monomial(kk.second), alg.field().mul(c, alg.counit(alg.monomial(kk.first)))));
            right = alg.add(right, alg.scale(alg.monomial(kk.first), alg.field().mul(c, alg.counit(alg.monomial(kk.second)))));
        }
        CHECK(left == a);
        CHECK(right == a);
    }
}

TEST_CASE("antipode and counit basics") {
    auto rs = build_root_system(Kind::A1);
    Algebra alg(rs, 3);
    CHECK(alg.antipode(alg.one()) == alg.one());
    CHECK(alg.counit(alg.one()) == 1);
    CHECK(alg.antipode(alg.E(0, 1)) == alg.scale(alg.E(0, 1), -1));
    CHECK(alg.counit(alg.E(0, 1)) == 0);
}

TEST_CASE("antipode law on all monomials of degree <= 4") {
    for (auto [kind, p] : {std::pair{Kind::A1, 3}, std::pair{Kind::A2, 3}}) {
        auto rs = build_root_system(kind);
        Algebra alg(rs, p);
        for (auto& k : keys_up_to(alg, kind == Kind::A1 ? 4 : 3)) {
            auto a = alg.monomial(k);
            HyperElt s1, s2;
            for (auto& [kk, c] : alg.comult(a).terms) {
                auto x = alg.monomial(kk.first), y = alg.monomial(kk.second);
                s1 = alg.add(s1, alg.scale(alg.mult(alg.antipode(x), y), c));
                s2 = alg.add(s2, alg.scale(alg.mult(x, alg.antipode(y)), c));
            }
            auto expect = alg.scale(alg.one(), alg.counit(a));
            CHECK(s1 == expect);
            CHECK(s2 == expect);
        }
    }
}

TEST_CASE("Frobenius on divided powers and on mu0") {
    auto rs = build_root_system(Kind::A2);
    for (int p : {3, 5}) {
        Algebra alg(rs, p);
        CHECK(alg.frobenius(alg.E(0, p)) == alg.E(0, 1));
        CHECK(alg.frobenius(alg.E(0, 1)).is_zero());
        CHECK(alg.frobenius(alg.mu0()) == alg.one());
    }
}

TEST_CASE("Frobenius contraction on words") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 3, 24);
    GenWord w{{Atom{Atom::Kind::E, 0, 1}}};
    CHECK(alg.fr_prime_word(w) == alg.E(0, 3));
    CHECK(alg.fr_prime_word(GenWord{}) == alg.one());
    CHECK_THROWS_AS(alg.fr_prime_word(GenWord{{Atom{Atom::Kind::F, 0, 1}}}), WrongAtomKind);
    CHECK(alg.fr_prime_minus_word(GenWord{{Atom{Atom::Kind::F, 1, 2}}}) == alg.F(1, 6));
    CHECK(alg.fr_prime_zero_word(GenWord{{Atom{Atom::Kind::H, 1, 1}}}) == alg.Hbin(1, 3));
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        auto w2 = random_word(rng, 2, true);
        CHECK(alg.frobenius(alg.fr_prime_word(w2)) == alg.normalize(w2));
    }
}

TEST_CASE("componentwise contraction agrees with the word route") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 3);
    CHECK(alg.fr_prime_pbw(alg.one(), Side::Plus) == alg.one());
    // E_1 E_2 contains E_theta in its normal form; compare both extensions on E_theta
    auto et = alg.root_E(1, 1);
    auto via_words = alg.fr_prime_via_words(et, Side::Plus);
    auto comp = alg.fr_prime_pbw(et, Side::Plus);
    CHECK(alg.frobenius(via_words) == et);
    CHECK(alg.frobenius(comp) == et);
    CHECK(comp == alg.root_E(1, 3));
    PbwKey k;
    for (int b = 0; b < 3; ++b) k.f[b] = 6;
    CHECK(alg.fr_prime_pbw(alg.f0(), Side::Minus) == alg.monomial(k));
    CHECK_THROWS_AS(alg.fr_prime_pbw(alg.f0(), Side::Plus), WrongTriangularPart);
}

TEST_CASE("the word extension of Fr' differs from the componentwise stretch on E_theta") {
    auto rs = build_root_system(Kind::A2);
    for (int p : {3, 5}) {
        Algebra alg(rs, p, 40);
        auto via_words = alg.fr_prime_via_words(alg.root_E(1, 1), Side::Plus);
        // terms E_1^(j) E_theta^(p - j) E_2^(j) for j < p; the pure stretch has coefficient 1
        CHECK(via_words.terms.size() == static_cast<size_t>(p));
        PbwKey top;
        top.e[1] = static_cast<int16_t>(p);
        CHECK(via_words.terms.at(top) == 1);
        for (auto& [k, c] : via_words.terms) CHECK(k.e[0] == k.e[2]);
        CHECK(via_words != alg.fr_prime_pbw(alg.root_E(1, 1), Side::Plus));
    }
}

TEST_CASE("mu0 is an idempotent detecting p Lambda") {
    for (int p : {3, 5}) {
        auto rs = build_root_system(Kind::A2);
        Algebra alg(rs, p);
        auto m = alg.mu0();
        CHECK(alg.mult(m, m) == m);
        CHECK(alg.character(rs.zero_weight(), m) == 1);
        CHECK(alg.character(rs.rho(), m) == 0);
    }
    auto b2 = build_root_system(Kind::B2);
    Algebra bad(b2, 2);
    CHECK_THROWS_AS(bad.mu0(), BadPrime);
}

TEST_CASE("phi is a section of Fr") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 3, 12);
    CHECK(alg.phi_word(GenWord{}) == alg.mu0());
    CHECK(alg.phi_word(GenWord{{Atom{Atom::Kind::E, 0, 1}}}) == alg.mult(alg.E(0, 3), alg.mu0()));
    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
        auto w = random_word(rng, 2, false, 3, 1);
        CHECK(alg.frobenius(alg.phi_word(w)) == alg.normalize(w));
    }
}

TEST_CASE("characters of the torus part") {
    auto rs = build_root_system(Kind::A2);
    int p = 3;
    Algebra alg(rs, p);
    CHECK(alg.character(Weight{{4, -2}}, alg.one()) == 1);
    auto m = alg.mu0();
    for (int a = -p; a < p; ++a)
        for (int b = -p; b < p; ++b) {
            int expect = (a % p == 0 && b % p == 0) ? 1 : 0;
            CHECK(alg.character(Weight{{a, b}}, m) == expect);
        }
    for (auto& z : alg.small_spanning_set(Part::Torus))
        for (int a = -2; a <= 2; ++a)
            for (int b = -2; b <= 2; ++b) {
                Weight mu{{a, b}}, lam{{b + 1, a - 1}};
                CHECK(alg.character(lam * p + mu, z) == alg.character(mu, z));
            }
    CHECK_THROWS_AS(alg.character(rs.rho(), alg.E(0, 1)), NotTorusPart);
}

TEST_CASE("E0 and F0") {
    auto a1 = build_root_system(Kind::A1);
    Algebra alg1(a1, 3);
    CHECK(alg1.e0() == alg1.E(0, 2));
    auto rs = build_root_system(Kind::A2);
    for (int p : {3, 5}) {
        Algebra alg(rs, p);
        PbwKey k = alg.e0().terms.begin()->first;
        CHECK(alg.weight_of(k) == rs.rho() * (2 * (p - 1)));
        PbwKey kf = alg.f0().terms.begin()->first;
        CHECK(alg.weight_of(kf) == rs.rho() * (-2 * (p - 1)));
        auto e1 = alg.E(0, 1);
        CHECK(alg.sub(alg.mult(alg.e0(), e1), alg.mult(e1, alg.e0())).is_zero());
        CHECK(static_cast<int>(alg.small_spanning_set(Part::N).size()) == p * p * p);
    }
}

TEST_CASE("adjoint action") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 5);
    auto y = alg.E(1, 1);
    CHECK(alg.adjoint(alg.one(), y) == y);
    // [e_1, e_2] = N(a1, a2) e_theta
    int n12 = rs.structure_constants.at({0, 2});
    CHECK(alg.adjoint(alg.E(0, 1), alg.E(1, 1)) == alg.scale(alg.root_E(1, 1), n12));
    for (int m = 1; m < 5; ++m) CHECK(alg.adjoint(alg.E(0, m), alg.e0()).is_zero());
    CHECK_THROWS_AS(alg.adjoint(alg.F(0, 1), y), WrongTriangularPart);
}

TEST_CASE("weights of PBW monomials") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 3);
    CHECK(alg.weight_of(PbwKey{}).is_zero());
    for (int n = 0; n < 5; ++n)
        CHECK(alg.weight_of(alg.E(0, n).terms.begin()->first) == rs.root_weight({n, 0}));
    auto fe = alg.mult(alg.f0(), alg.e0());
    for (auto& [k, c] : fe.terms) CHECK(alg.weight_of(k).is_zero());
}

TEST_CASE("text form round trip") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 5);
    auto x = alg.add(alg.mult(alg.F(0, 2), alg.E(1, 3)), alg.scale(alg.mu0(), 3));
    auto text = alg.to_text(x);
    CHECK(text.find("E[") == 0);
    CHECK(alg.from_text(text) == x);
    CHECK(alg.to_text(alg.E(0, 1)) == "E[1,0,0] H[0,0] F[0,0,0] : 1\n");
}

TEST_CASE("exponent cap is enforced") {
    auto rs = build_root_system(Kind::A1);
    Algebra alg(rs, 3);
    CHECK(alg.cap() == 8);
    CHECK_THROWS_AS(alg.mult(alg.E(0, 5), alg.E(0, 4)), OverflowPolicy);
}
