#include "doctest.h"

#include <functional>
#include <random>

#include "frsplit/dualring.hpp"

using namespace frsplit;

namespace {

std::vector<Exps> exps_up_to(int n, int deg) {
    std::vector<Exps> out;
    Exps v{};
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n) {
            out.push_back(v);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            v[pos] = static_cast<int16_t>(a);
            rec(pos + 1, left - a);
        }
        v[pos] = 0;
    };
    rec(0, deg);
    return out;
}

HyperElt e_key(Algebra& alg, const Exps& a) {
    PbwKey k;
    k.e = a;
    return alg.monomial(k);
}

// Degree-homogeneity of a polynomial written in graded generators.
bool homogeneous(const DualPoly& hat, int d) {
    for (auto& [a, c] : hat.terms)
        if (total_degree(a) != d) return false;
    return true;
}

}  // namespace

TEST_CASE("pairing basics") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 3);
    CHECK(pair(alg, dual_one(Side::Plus), alg.one()) == 1);
    CHECK(pair(alg, dual_z0(Side::Plus, 3, 3), alg.e0()) == 1);
    CHECK(pair(alg, dual_z0(Side::Minus, 3, 3), alg.f0()) == 1);
    CHECK(pair(alg, dual_var(Side::Plus, 0), alg.E(0, 1)) == 1);
    CHECK(pair(alg, dual_var(Side::Plus, 0), alg.E(1, 1)) == 0);
    CHECK_THROWS_AS(pair(alg, dual_var(Side::Plus, 0), alg.F(0, 1)), SideMismatch);
    CHECK_THROWS_AS(pair(alg, dual_var(Side::Minus, 0), alg.E(0, 1)), SideMismatch);
}

TEST_CASE("product is dual to the coproduct") {
    for (auto [kind, p] : {std::pair{Kind::A2, 3}, std::pair{Kind::B2, 5}}) {
        auto rs = build_root_system(kind);
        Algebra alg(rs, p);
        int n = rs.num_positive();
        auto mons = exps_up_to(n, 2);
        auto zs = exps_up_to(n, 4);
        for (auto& a : mons)
            for (auto& b : mons) {
                auto f = dual_monomial(Side::Plus, a), g = dual_monomial(Side::Plus, b);
                auto fg = dual_mul(alg.field(), f, g);
                for (auto& z : zs) {
                    auto Z = e_key(alg, z);
                    int64_t rhs = 0;
                    for (auto& [kk, c] : alg.comult(Z).terms) {
                        int64_t t = alg.field().mul(pair(alg, f, alg.monomial(kk.first)), pair(alg, g, alg.monomial(kk.second)));
                        rhs = alg.field().add(rhs, alg.field().mul(c, t));
                    }
                    CHECK(pair(alg, fg, Z) == rhs);
                }
            }
    }
}

TEST_CASE("fr_star is the p-th power and dual to Fr") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 3, 24);
    const auto& fp = alg.field();
    CHECK(fr_star(fp, dual_one(Side::Plus)) == dual_one(Side::Plus));
    Exps y3{};
    y3[1] = 3;
    CHECK(fr_star(fp, dual_var(Side::Plus, 1)) == dual_monomial(Side::Plus, y3));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        DualPoly f{Side::Plus, {}};
        for (int s = 0; s < 3; ++s) {
            Exps a{};
            for (int b = 0; b < 3; ++b) a[b] = static_cast<int16_t>(rng() % 3);
            f = dual_add(fp, f, dual_monomial(Side::Plus, a, static_cast<int64_t>(rng() % 3)));
        }
        DualPoly pw = dual_one(Side::Plus);
        for (int s = 0; s < 3; ++s) pw = dual_mul(fp, pw, f);
        CHECK(fr_star(fp, f) == pw);
    }
    for (auto& a : exps_up_to(3, 2))
        for (auto& z : exps_up_to(3, 6)) {
            auto f = dual_monomial(Side::Plus, a);
            auto Z = e_key(alg, z);
            CHECK(pair(alg, fr_star(fp, f), Z) == pair(alg, f, alg.frobenius(Z)));
        }
}

TEST_CASE("dual adjoint action") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 5);
    const auto& fp = alg.field();
    auto y1 = dual_var(Side::Plus, 1);
    CHECK(dual_adjoint(alg, alg.one(), y1) == y1);
    for (int i = 0; i < 2; ++i)
        for (int b = 0; b < 3; ++b) {
            auto yb = dual_var(Side::Plus, b);
            int w = -rs.coroot_pairing(rs.positive_roots[b], i);
            CHECK(dual_adjoint(alg, alg.Hbin(i, 1), yb) == dual_scale(fp, yb, w));
        }
    CHECK_THROWS_AS(dual_adjoint(alg, alg.F(0, 1), y1), WrongTriangularPart);

    std::vector<HyperElt> acts{alg.E(0, 1), alg.E(1, 2), alg.mult(alg.E(0, 1), alg.Hbin(1, 1)), alg.root_E(1, 1)};
    auto mons = exps_up_to(3, 3);
    for (auto& A : acts) {
        auto sA = alg.antipode(A);
        for (auto& a : mons) {
            auto f = dual_monomial(Side::Plus, a);
            auto Af = dual_adjoint(alg, A, f);
            for (auto& z : exps_up_to(3, 3)) {
                auto Y = e_key(alg, z);
                CHECK(pair(alg, Af, Y) == pair(alg, f, alg.adjoint(sA, Y)));
            }
        }
        for (auto& a : exps_up_to(3, 2))
            for (auto& b : exps_up_to(3, 1)) {
                auto f = dual_monomial(Side::Plus, a), g = dual_monomial(Side::Plus, b);
                DualPoly rhs{Side::Plus, {}};
                for (auto& [kk, c] : alg.comult(A).terms)
                    rhs = dual_add(fp, rhs,
                                   dual_scale(fp,
                                              dual_mul(fp, dual_adjoint(alg, alg.monomial(kk.first), f),
                                                       dual_adjoint(alg, alg.monomial(kk.second), g)),
                                              c));
                CHECK(dual_adjoint(alg, A, dual_mul(fp, f, g)) == rhs);
            }
    }
}

TEST_CASE("second-kind grading is equivariant in rank one and for A2") {
    auto a1 = build_root_system(Kind::A1);
    Algebra alg1(a1, 3);
    auto g1 = build_grading(alg1, 6);
    CHECK(g1.kind == GradingKind::SecondKind);
    auto a2 = build_root_system(Kind::A2);
    Algebra alg2(a2, 3);
    auto g2 = build_grading(alg2, 6);
    CHECK(g2.kind == GradingKind::SecondKind);
}

TEST_CASE("solved grading preserves degrees under simple divided powers") {
    for (auto [kind, p, force] : {std::tuple{Kind::A2, 3, true}, std::tuple{Kind::B2, 5, false}}) {
        auto rs = build_root_system(kind);
        Algebra alg(rs, p);
        auto gm = build_grading(alg, 5, force);
        CHECK(gm.kind == GradingKind::SolvedEquivariant);
        int n = rs.num_positive();
        for (auto& a : exps_up_to(n, 4)) {
            auto f = gm.from_hat(dual_monomial(Side::Plus, a));
            RootVec wt(rs.rank, 0);
            for (int b = 0; b < n; ++b)
                for (int i = 0; i < rs.rank; ++i) wt[i] += a[b] * rs.positive_roots[b][i];
            for (int i = 0; i < rs.rank; ++i)
                for (int m = 1; m <= wt[i]; ++m) {
                    auto g = dual_adjoint(alg, alg.E(i, m), f);
                    CHECK(homogeneous(gm.to_hat(g), total_degree(a)));
                }
        }
        // the generators differ from y_beta by weight-homogeneous terms of higher degree
        for (int b = 0; b < n; ++b) {
            auto& gb = gm.gens[b];
            Exps unit{};
            unit[b] = 1;
            CHECK(gb.terms.at(unit) == 1);
            for (auto& [e, c] : gb.terms)
                if (e != unit) CHECK(total_degree(e) >= 2);
        }
    }
}

TEST_CASE("B2 second-kind grading is not equivariant") {
    auto rs = build_root_system(Kind::B2);
    Algebra alg(rs, 5);
    auto sk = second_kind_grading(alg);
    std::string witness;
    CHECK_FALSE(grading_equivariant(alg, sk, 4, &witness));
    CHECK_FALSE(witness.empty());
}

TEST_CASE("graded generators are a polynomial change of coordinates") {
    auto rs = build_root_system(Kind::B2);
    Algebra alg(rs, 5);
    auto gm = build_grading(alg, 5);
    std::mt19937_64 rng(4);
    const auto& fp = alg.field();
    for (int t = 0; t < 40; ++t) {
        DualPoly f{Side::Plus, {}};
        for (int s = 0; s < 4; ++s) {
            Exps a{};
            for (int b = 0; b < 4; ++b) a[b] = static_cast<int16_t>(rng() % 3);
            f = dual_add(fp, f, dual_monomial(Side::Plus, a, static_cast<int64_t>(rng() % 5)));
        }
        CHECK(gm.from_hat(gm.to_hat(f)) == f);
        CHECK(gm.to_hat(gm.from_hat(f)) == f);
        // trace in graded generators agrees with the trace in y
        CHECK(gm.from_hat(trace_plus(fp, 4, gm.to_hat(f))) == trace_plus(fp, 4, f));
    }
}

TEST_CASE("trace maps") {
    auto a1 = build_root_system(Kind::A1);
    int p = 3;
    Fp fp{p};
    CHECK(trace_plus(fp, 1, dual_z0(Side::Plus, 1, p)) == dual_one(Side::Plus));
    CHECK(trace_plus(fp, 1, dual_one(Side::Plus)).is_zero());
    Exps e5{};
    e5[0] = 2 * p - 1;
    CHECK(trace_plus(fp, 1, dual_monomial(Side::Plus, e5)) == dual_var(Side::Plus, 0));
    CHECK(trace_minus(fp, 1, dual_z0(Side::Minus, 1, p)) == dual_one(Side::Minus));
    CHECK_THROWS_AS(trace_plus(fp, 1, dual_one(Side::Minus)), SideMismatch);

    // Frobenius-linearity on monomial pairs
    for (auto& g : exps_up_to(3, 3))
        for (auto& h : exps_up_to(3, 8)) {
            auto G = dual_monomial(Side::Plus, g), H = dual_monomial(Side::Plus, h);
            auto lhs = trace_plus(fp, 3, dual_mul(fp, fr_star(fp, G), H));
            CHECK(lhs == dual_mul(fp, G, trace_plus(fp, 3, H)));
        }
}

TEST_CASE("degree projection") {
    auto rs = build_root_system(Kind::A2);
    Algebra alg(rs, 3);
    auto gm = build_grading(alg, 6);
    const auto& fp = alg.field();
    CHECK(project_degree(&gm, dual_one(Side::Plus), 0) == dual_one(Side::Plus));
    auto y0 = dual_z0(Side::Plus, 3, 3);
    CHECK(project_degree(&gm, y0, 6) == y0);
    CHECK_THROWS_AS(project_degree(nullptr, y0, 6), GradingMissing);
    DualPoly f = dual_add(fp, y0, dual_add(fp, dual_var(Side::Plus, 1), dual_one(Side::Plus)));
    DualPoly sum{Side::Plus, {}};
    for (int d = 0; d <= 6; ++d) sum = dual_add(fp, sum, project_degree(&gm, f, d));
    CHECK(sum == f);
}

TEST_CASE("E0 lies in the top graded piece") {
    for (auto [kind, p] : {std::pair{Kind::A1, 5}, std::pair{Kind::A2, 3}, std::pair{Kind::B2, 5}}) {
        auto rs = build_root_system(kind);
        Algebra alg(rs, p);
        auto gm = build_grading(alg, 4);
        int n = rs.num_positive();
        int top = (p - 1) * n;
        Exps z0{};
        for (int b = 0; b < n; ++b) z0[b] = static_cast<int16_t>(p - 1);
        for (auto& a : exps_up_to(n, top)) {
            if (total_degree(a) != top) continue;
            auto yhat = gm.from_hat(dual_monomial(Side::Plus, a));
            CHECK(pair(alg, yhat, alg.e0()) == (a == z0 ? 1 : 0));
        }
    }
}

TEST_CASE("graded dual basis") {
    auto rs = build_root_system(Kind::B2);
    Algebra alg(rs, 5);
    auto gm = build_grading(alg, 4);
    auto mons = exps_up_to(4, 3);
    for (auto& b : mons) {
        auto Eb = graded_dual_element(alg, gm, b);
        for (auto& a : mons) CHECK(pair(alg, gm.from_hat(dual_monomial(Side::Plus, a)), Eb) == (a == b ? 1 : 0));
    }
}

TEST_CASE("text form round trip") {
    Fp fp{5};
    Exps a{}, b{};
    a[0] = 2;
    b[2] = 1;
    DualPoly f = dual_add(fp, dual_monomial(Side::Minus, a, 3), dual_monomial(Side::Minus, b, 1));
    auto s = dual_to_text(f, 3);
    CHECK(s.find("x[") == 0);
    CHECK(dual_from_text(fp, s, 3) == f);
    CHECK(dual_to_text(dual_var(Side::Plus, 0), 1) == "x[0] y[1] : 1\n");
    CHECK_THROWS_AS(dual_from_text(fp, "x[1] y[1] : 1\n", 1), ParseError);
}
