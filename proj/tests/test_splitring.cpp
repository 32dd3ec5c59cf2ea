#include "doctest.h"

#include <random>

#include "frsplit/splitring.hpp"

using namespace frsplit;

namespace {

Context& ctx_for(Kind kind, int p) {
    static std::map<std::pair<Kind, int>, std::unique_ptr<Context>> cache;
    auto& slot = cache[{kind, p}];
    if (!slot) {
        auto rs = build_root_system(kind);
        slot = std::make_unique<Context>(make_context(rs, p, default_truncation(p, rs.num_positive())));
    }
    return *slot;
}

Exps random_exps(std::mt19937_64& rng, int n, int maxdeg) {
    Exps a{};
    int d = static_cast<int>(rng() % (maxdeg + 1));
    for (int t = 0; t < d; ++t) a[rng() % n] += 1;
    return a;
}

Exps z0(int n, int p) {
    Exps a{};
    for (int b = 0; b < n; ++b) a[b] = static_cast<int16_t>(p - 1);
    return a;
}

Exps times_p(const Exps& a, int p) {
    Exps r{};
    for (int b = 0; b < kMaxRoots; ++b) r[b] = static_cast<int16_t>(a[b] * p);
    return r;
}

Exps plus(const Exps& a, const Exps& b) {
    Exps r{};
    for (int s = 0; s < kMaxRoots; ++s) r[s] = static_cast<int16_t>(a[s] + b[s]);
    return r;
}

PbwKey random_key(std::mt19937_64& rng, int n, int l, int maxdeg) {
    PbwKey k;
    k.e = random_exps(rng, n, maxdeg);
    k.f = random_exps(rng, n, maxdeg);
    for (int i = 0; i < l; ++i) k.h[i] = static_cast<int16_t>(rng() % 2);
    return k;
}

}  // namespace

TEST_CASE("polynomial product and unit") {
    auto& ctx = ctx_for(Kind::A2, 3);
    const Fp& fp = ctx.field();
    auto lam = ctx.rs.zero_weight();
    auto e = section_unit(lam);
    Exps x{}, y{};
    x[1] = 2;
    y[0] = 1;
    auto f = section_monomial(lam, x, y, 2);
    CHECK(ring_mult(fp, e, f) == f);
    Exps xb{}, yb{};
    xb[0] = 1;
    yb[0] = 1;
    auto prod = ring_mult(fp, section_monomial(lam, xb, {}), section_monomial(lam, {}, yb));
    CHECK(prod == section_monomial(lam, xb, yb));
    CHECK(total_degree(prod.terms.begin()->first.y) == 1);
    CHECK_THROWS_AS(ring_mult(fp, e, section_unit(ctx.rs.rho())), LambdaMismatch);
    Truncation small{1, 1};
    CHECK_THROWS_AS(ring_mult(fp, f, f, &small), TruncationExceeded);
}

TEST_CASE("evaluation of the unit is the counit") {
    auto& ctx = ctx_for(Kind::A2, 3);
    Algebra& alg = *ctx.alg;
    auto e = section_unit(ctx.rs.zero_weight());
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        auto kx = random_key(rng, 3, 2, 2);
        PbwKey ky;
        ky.e = random_exps(rng, 3, 2);
        auto x = alg.monomial(kx, static_cast<int64_t>(rng() % 3));
        auto y = alg.monomial(ky, 1 + static_cast<int64_t>(rng() % 2));
        CHECK(evaluate(ctx, e, x, y, 0) == ctx.field().mul(alg.counit(x), alg.counit(y)));
    }
}

TEST_CASE("evaluation at X = 1 recovers the y-coefficients") {
    auto& ctx = ctx_for(Kind::A2, 3);
    Algebra& alg = *ctx.alg;
    auto lam = ctx.rs.zero_weight();
    GradedSection f;
    f.lambda = lam;
    std::mt19937_64 rng(4);
    for (int t = 0; t < 8; ++t) {
        Exps b{};
        for (int s = 0; s < 3; ++s) b[s] = static_cast<int16_t>(rng() % 2);
        f.terms[SectionKey{{}, b}] = 1 + static_cast<int64_t>(rng() % 2);
    }
    for (auto& [k, c] : f.terms)
        CHECK(evaluate(ctx, f, alg.one(), graded_dual_element(alg, ctx.gm, k.y), total_degree(k.y)) == c);
}

TEST_CASE("Borel peeling is consistent") {
    for (Kind kind : {Kind::A1, Kind::A2}) {
        auto& ctx = ctx_for(kind, 3);
        Algebra& alg = *ctx.alg;
        const Fp& fp = ctx.field();
        int n = ctx.n(), l = ctx.rs.rank;
        std::mt19937_64 rng(9);
        for (Weight lam : {ctx.rs.zero_weight(), ctx.rs.rho()}) {
            for (int t = 0; t < 40; ++t) {
                GradedSection f;
                f.lambda = lam;
                int grade = static_cast<int>(rng() % 3);
                for (int s = 0; s < 6; ++s) {
                    Exps y{};
                    for (int d = 0; d < grade; ++d) y[rng() % n] += 1;
                    f.terms[SectionKey{random_exps(rng, n, 3), y}] = 1 + static_cast<int64_t>(rng() % 2);
                }
                PbwKey kx, ky;
                kx.f = random_exps(rng, n, 3);
                for (int d = 0; d < grade; ++d) ky.e[rng() % n] += 1;
                auto x = alg.monomial(kx), y = alg.monomial(ky);
                // binom(H_i, 1) acts through the weight of Y x v
                for (int i = 0; i < l; ++i) {
                    Weight mu = alg.weight_of(ky) + lam * grade;
                    int64_t direct = evaluate(ctx, f, alg.mult(alg.Hbin(i, 1), x), y, grade);
                    CHECK(direct == fp.mul(fp.norm(-mu.coords[i]), evaluate(ctx, f, x, y, grade)));
                }
                // peeling a product equals peeling its factors one at a time
                int i = static_cast<int>(rng() % l), j = static_cast<int>(rng() % l);
                auto ei = alg.E(i, 1), ej = alg.E(j, 1);
                int64_t whole = evaluate(ctx, f, alg.mult(ei, alg.mult(ej, x)), y, grade);
                auto y1 = alg.adjoint(alg.antipode(ei), y);
                int64_t stepwise = evaluate(ctx, f, alg.mult(ej, x), y1, grade);
                CHECK(whole == stepwise);
            }
        }
    }
}

TEST_CASE("product agrees with the Sweedler formula") {
    auto& ctx = ctx_for(Kind::A2, 3);
    Algebra& alg = *ctx.alg;
    const Fp& fp = ctx.field();
    auto lam = ctx.rs.zero_weight();
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        auto f = section_monomial(lam, random_exps(rng, 3, 2), random_exps(rng, 3, 2));
        auto g = section_monomial(lam, random_exps(rng, 3, 2), random_exps(rng, 3, 2));
        auto fg = ring_mult(fp, f, g);
        int nf = total_degree(f.terms.begin()->first.y), ng = total_degree(g.terms.begin()->first.y);
        auto xs = fg.terms.begin()->first.x;
        auto ys = fg.terms.begin()->first.y;
        PbwKey kx;
        kx.f = xs;
        auto x = alg.monomial(kx);
        auto y = graded_dual_element(alg, ctx.gm, ys);
        int64_t rhs = 0;
        for (auto& [kk, c] : alg.comult(x).terms)
            for (auto& [ll, d] : alg.comult(y).terms) {
                int64_t a = evaluate(ctx, f, alg.monomial(kk.first), alg.monomial(ll.first), nf);
                int64_t b = evaluate(ctx, g, alg.monomial(kk.second), alg.monomial(ll.second), ng);
                rhs = fp.add(rhs, fp.mul(fp.mul(c, d), fp.mul(a, b)));
            }
        CHECK(evaluate(ctx, fg, x, y, nf + ng) == rhs);
    }
}

TEST_CASE("p-th power map") {
    auto& ctx = ctx_for(Kind::A2, 3);
    const Fp& fp = ctx.field();
    auto lam = ctx.rs.zero_weight();
    CHECK(frt_star(fp, section_unit(lam)) == section_unit(lam));
    Exps xb{};
    xb[2] = 1;
    CHECK(frt_star(fp, section_monomial(lam, xb, {})) == section_monomial(lam, times_p(xb, 3), {}));
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        auto f = section_monomial(lam, random_exps(rng, 3, 2), random_exps(rng, 3, 2), 2);
        auto g = section_monomial(lam, random_exps(rng, 3, 2), random_exps(rng, 3, 2));
        CHECK(ring_mult(fp, frt_star(fp, f), frt_star(fp, g)) == frt_star(fp, ring_mult(fp, f, g)));
    }
    auto twisted = section_unit(ctx.rs.rho());
    twisted.offset = 2;
    CHECK(frt_star(fp, twisted).offset == 6);
}

TEST_CASE("operator S through traces") {
    for (Kind kind : {Kind::A1, Kind::A2}) {
        auto& ctx = ctx_for(kind, 3);
        const Fp& fp = ctx.field();
        int n = ctx.n();
        auto lam = ctx.rs.zero_weight();
        CHECK(op_S(fp, n, section_monomial(lam, z0(n, 3), z0(n, 3))) == section_unit(lam));
        std::mt19937_64 rng(12);
        for (int t = 0; t < 300; ++t) {
            auto f = section_monomial(lam, random_exps(rng, n, 2), random_exps(rng, n, 2));
            GradedSection g;
            g.lambda = lam;
            for (int s = 0; s < 4; ++s) {
                Exps x = random_exps(rng, n, 6), y = random_exps(rng, n, 6);
                if (rng() % 2) {
                    x = plus(x, z0(n, 3));
                    y = plus(y, z0(n, 3));
                }
                g.terms[SectionKey{x, y}] = 1;
            }
            CHECK(op_S(fp, n, ring_mult(fp, frt_star(fp, f), g)) == ring_mult(fp, f, op_S(fp, n, g)));
            for (auto& [k, c] : ring_mult(fp, f, g).terms) {
                auto out = op_S(fp, n, section_monomial(lam, k.x, k.y));
                if (out.is_zero()) continue;
                auto w_in = section_weight(ctx.rs, k), w_out = section_weight(ctx.rs, out.terms.begin()->first);
                for (int i = 0; i < ctx.rs.rank; ++i) CHECK(w_in[i] == 3 * w_out[i]);
            }
        }
    }
}

TEST_CASE("operator S matches its definition") {
    for (auto [kind, p] : {std::pair{Kind::A1, 2}, std::pair{Kind::A1, 3}, std::pair{Kind::A1, 5}}) {
        auto& ctx = ctx_for(kind, p);
        auto rep = check_op_s_definition(ctx, ctx.rs.zero_weight());
        CHECK(rep.passed());
        CHECK(rep.cases > 0);
        auto twisted = check_op_s_definition(ctx, ctx.rs.rho());
        CHECK(twisted.passed());
    }
    auto& ctx = ctx_for(Kind::A2, 3);
    auto rep = check_op_s_definition(ctx, ctx.rs.zero_weight());
    CHECK(rep.passed());
    CHECK(rep.cases == 56 * 56);
}

TEST_CASE("multiplication by psi") {
    for (Kind kind : {Kind::A1, Kind::A2}) {
        auto& ctx = ctx_for(kind, 3);
        Algebra& alg = *ctx.alg;
        const Fp& fp = ctx.field();
        int n = ctx.n();
        auto lam = ctx.rs.zero_weight();
        auto m = mul_psi(ctx, section_unit(lam));
        CHECK(m == ctx.psi);
        std::mt19937_64 rng(6);
        for (int t = 0; t < 40; ++t) {
            auto f = section_monomial(lam, random_exps(rng, n, 3), random_exps(rng, n, 3));
            auto k = f.terms.begin()->first;
            for (auto& [kk, c] : mul_psi(ctx, f).terms) {
                CHECK(total_degree(kk.y) == total_degree(k.y) + ctx.top());
                CHECK(section_weight(ctx.rs, kk) == section_weight(ctx.rs, k));
            }
        }
        // psi(F0 Fr'X x E0 Fr'Y) = eps(X) eps(Y) on weight vectors
        for (int t = 0; t < 20; ++t) {
            PbwKey kx, ky;
            kx.f = random_exps(rng, n, 1);
            ky.e = random_exps(rng, n, 1);
            auto x = alg.mult(alg.f0(), alg.fr_prime_via_words(alg.monomial(kx), Side::Minus));
            auto y = alg.mult(alg.e0(), alg.fr_prime_via_words(alg.monomial(ky), Side::Plus));
            int64_t expect = fp.mul(alg.counit(alg.monomial(kx)), alg.counit(alg.monomial(ky)));
            CHECK(evaluate(ctx, m, x, y, ctx.top()) == expect);
        }
    }
}

TEST_CASE("splitting") {
    for (auto [kind, p] : {std::pair{Kind::A1, 3}, std::pair{Kind::A1, 5}, std::pair{Kind::A2, 3}}) {
        auto& ctx = ctx_for(kind, p);
        const Fp& fp = ctx.field();
        int n = ctx.n();
        auto lam = ctx.rs.zero_weight();
        CHECK(sigma_tot(ctx, section_unit(lam)) == section_unit(lam));
        Exps y1{};
        y1[0] = 1;
        CHECK(sigma_tot(ctx, section_monomial(lam, {}, y1)).is_zero());
        if (n % p != 0) CHECK(sigma_tot(ctx, section_monomial(lam, z0(n, p), z0(n, p))).is_zero());
        std::mt19937_64 rng(31);
        for (int t = 0; t < 200; ++t) {
            auto f = section_monomial(lam, random_exps(rng, n, 2), random_exps(rng, n, 2), 1 + rng() % (p - 1));
            CHECK(sigma_tot(ctx, frt_star(fp, f)) == f);
            f = section_monomial(lam, random_exps(rng, n, 1), random_exps(rng, n, 1), 1 + rng() % (p - 1));
            auto g = section_monomial(lam, random_exps(rng, n, 5), random_exps(rng, n, 5));
            CHECK(sigma_tot(ctx, ring_mult(fp, frt_star(fp, f), g)) == ring_mult(fp, f, sigma_tot(ctx, g)));
            CHECK(sigma_tot(ctx, g) == op_S(fp, n, mul_psi(ctx, total_degree(g.terms.begin()->first.y) % p
                                                                     ? GradedSection{lam, 0, {}}
                                                                     : g)));
        }
        Exps big{};
        big[0] = static_cast<int16_t>(ctx.trunc.dn + 1);
        CHECK_THROWS_AS(sigma_tot(ctx, section_monomial(lam, {}, big)), TruncationExceeded);
    }
}

TEST_CASE("dropping the twist commutes with the splitting") {
    auto& ctx = ctx_for(Kind::A2, 3);
    auto e = section_unit(ctx.rs.rho());
    CHECK(r_lambda(e) == section_unit(ctx.rs.zero_weight()));
    auto f0 = section_monomial(ctx.rs.zero_weight(), z0(3, 3), z0(3, 3));
    CHECK(r_lambda(f0) == f0);
    std::mt19937_64 rng(1);
    for (Weight lam : {ctx.rs.rho(), ctx.rs.rho() * 2}) {
        for (int t = 0; t < 100; ++t) {
            auto f = section_monomial(lam, random_exps(rng, 3, 8), random_exps(rng, 3, 8));
            CHECK(r_lambda(sigma_tot(ctx, f)) == sigma_tot(ctx, r_lambda(f)));
        }
    }
}

TEST_CASE("right action") {
    auto& ctx = ctx_for(Kind::A2, 3);
    Algebra& alg = *ctx.alg;
    auto lam = ctx.rs.zero_weight();
    std::mt19937_64 rng(44);
    for (int t = 0; t < 20; ++t) {
        auto f = section_monomial(lam, random_exps(rng, 3, 3), random_exps(rng, 3, 2));
        int grade = total_degree(f.terms.begin()->first.y);
        auto z = alg.monomial(random_key(rng, 3, 2, 1));
        auto zf = act_right(ctx, z, f);
        for (int s = 0; s < 10; ++s) {
            PbwKey kx;
            kx.f = random_exps(rng, 3, 3);
            Exps b{};
            for (int d = 0; d < grade; ++d) b[rng() % 3] += 1;
            auto x = alg.monomial(kx);
            auto y = graded_dual_element(alg, ctx.gm, b);
            CHECK(evaluate(ctx, zf, x, y, grade) == evaluate(ctx, f, alg.mult(x, z), y, grade));
        }
    }
}

TEST_CASE("equivariance of S") {
    for (Kind kind : {Kind::A1, Kind::A2}) {
        auto& ctx = ctx_for(kind, 3);
        int n = ctx.n();
        auto lam = ctx.rs.zero_weight();
        auto f = section_monomial(lam, z0(n, 3), z0(n, 3));
        CHECK(check_equivariance(ctx, GenWord{}, f).passed());
        CHECK(check_equivariance(ctx, GenWord{{Atom{Atom::Kind::F, 0, 1}}}, section_unit(lam)).passed());
        std::mt19937_64 rng(77);
        int nontrivial = 0;
        for (int t = 0; t < 30; ++t) {
            GenWord z;
            int len = 1 + static_cast<int>(rng() % 2);
            for (int s = 0; s < len; ++s) {
                auto kind_atom = static_cast<Atom::Kind>(rng() % 3);
                z.atoms.push_back(Atom{kind_atom, static_cast<int>(rng() % ctx.rs.rank), 1 + static_cast<int>(rng() % 2)});
            }
            Exps x = plus(z0(n, 3), times_p(random_exps(rng, n, 2), 3));
            Exps y = plus(z0(n, 3), times_p(random_exps(rng, n, 1), 3));
            if (t % 3 == 2) x = plus(x, random_exps(rng, n, 1));
            auto g = section_monomial(lam, x, y);
            auto rep = check_equivariance(ctx, z, g);
            CHECK(rep.passed());
            nontrivial += rep.cases > 0;
        }
        CHECK(nontrivial > 0);
    }
}

TEST_CASE("two routes through psi agree") {
    auto& ctx = ctx_for(Kind::A1, 3);
    auto rep = compare_klt(ctx, 6);
    CHECK(rep.passed());
    CHECK(rep.cases > 0);
    auto& ctx2 = ctx_for(Kind::A2, 3);
    CHECK(compare_klt(ctx2, 6).passed());
}

TEST_CASE("a corrupted psi is detected") {
    auto rs = build_root_system(Kind::A1);
    auto ctx = make_context(rs, 3, default_truncation(3, 1));
    auto& c = ctx.psi.terms.begin()->second;
    c = ctx.field().add(c, 1);
    auto rep = compare_klt(ctx, 6);
    CHECK_FALSE(rep.passed());
    CHECK_FALSE(rep.failures.empty());
}

TEST_CASE("text form") {
    auto& ctx = ctx_for(Kind::A2, 3);
    const Fp& fp = ctx.field();
    auto lam = ctx.rs.rho();
    Exps x{}, y{};
    x[0] = 2;
    y[2] = 1;
    auto f = section_add(fp, section_monomial(lam, x, y, 2), section_unit(lam));
    f.offset = 6;
    CHECK(section_from_text(fp, section_to_text(f, 3), 3, 2) == f);
    CHECK(section_to_text(section_unit(ctx.rs.zero_weight()), 3) == "e\n");
    CHECK(section_to_text(GradedSection{ctx.rs.zero_weight(), 0, {}}, 3) == "0\n");
    CHECK(section_from_text(fp, "e\n", 3, 2) == section_unit(ctx.rs.zero_weight()));
    CHECK(section_from_text(fp, "x[2,2,2] y[2,2,2] : 1\n", 3, 2) == section_monomial(ctx.rs.zero_weight(), z0(3, 3), z0(3, 3)));
    CHECK_THROWS_AS(section_from_text(fp, "x[1,2] y[0,0,0] : 1", 3, 2), ParseError);
    CHECK_THROWS_AS(section_from_text(fp, "hello", 3, 2), ParseError);
}
