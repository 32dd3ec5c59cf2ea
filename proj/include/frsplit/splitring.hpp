#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "frsplit/dualring.hpp"
#include "frsplit/hyperalg.hpp"
#include "frsplit/section.hpp"
#include "frsplit/steinberg.hpp"
#include "json.hpp"

namespace frsplit {

/// Bounds on the x-degree and the y-grade of sections.
struct Truncation {
    int dx = 0;
    int dn = 0;
};

/// Default dx = dn = p(p-1)N + p.
Truncation default_truncation(int p, int num_positive);

/// Everything the splitting needs for one (root system, p).
struct Context {
    RootSystem rs;
    int p = 2;
    std::unique_ptr<Algebra> alg;
    GradingMap gm;
    StModule st;
    GradedSection psi;
    GradedSection psi_hat;
    Truncation trunc;
    /// yhat^b written in the y, cached per b.
    std::map<Exps, DualPoly> hat_cache;
    /// Terms of psi grouped by the residues mod p a monomial needs to survive the traces after multiplication.
    std::vector<std::vector<std::pair<SectionKey, int64_t>>> psi_by_residue;
    /// Grading, St, eta and psi are present.
    bool complete = false;

    const Fp& field() const { return alg->field(); }
    int n() const { return rs.num_positive(); }
    /// (p-1)N, the grade of psi.
    int top() const { return (p - 1) * n(); }
};

/// Builds the grading, St, eta and psi. grading_degree bounds the equivariance check of the grading.
Context make_context(const RootSystem& rs, int p, Truncation trunc, int grading_degree = 6);
/// Only the algebra, with its exponent cap raised for the truncation.
Context make_base_context(const RootSystem& rs, int p, Truncation trunc, int grading_degree = 6);
/// Adds the grading, St, eta and psi to a base context; no-op when already complete.
void complete_context(Context& ctx, int grading_degree = 6);
/// Rebuilds psi_by_residue; needed after replacing ctx.psi.
void index_psi(Context& ctx);

GradedSection section_unit(const Weight& lambda);
GradedSection section_monomial(const Weight& lambda, const Exps& x, const Exps& y, int64_t c = 1);
GradedSection section_add(const Fp& fp, const GradedSection& f, const GradedSection& g);
GradedSection section_scale(const Fp& fp, const GradedSection& f, int64_t c);
/// wt(x) - wt(y) in root coordinates.
RootVec section_weight(const RootSystem& rs, const SectionKey& k);
/// Throws TruncationExceeded when a term lies outside the bounds.
void check_truncation(const GradedSection& f, const Truncation& t);

/// Polynomial product; throws LambdaMismatch on different lambda and TruncationExceeded when t is given and exceeded.
GradedSection ring_mult(const Fp& fp, const GradedSection& f, const GradedSection& g, const Truncation* t = nullptr);

/// Coefficients c_k with f(X x Y x v) = sum_k c_k f_k over sections of the given lambda and offset, grade n.
std::map<SectionKey, int64_t> evaluation_functional(Context& ctx, const HyperElt& x, const HyperElt& y, int n,
                                                    const Weight& lambda, int offset);
/// f(X x Y x v) with Y in U(n) and the grade-n part of f.
int64_t evaluate(Context& ctx, const GradedSection& f, const HyperElt& x, const HyperElt& y, int n);

GradedSection frt_star(const Fp& fp, const GradedSection& f);
/// Tr- x Tr+ on the x and yhat monomials.
GradedSection op_S(const Fp& fp, int num_positive, const GradedSection& f);
GradedSection mul_psi(Context& ctx, const GradedSection& f);
GradedSection sigma_tot(Context& ctx, const GradedSection& f);
/// sigma_tot of one monomial with coefficient 1 and lambda = 0, without the truncation check.
std::vector<std::pair<SectionKey, int64_t>> sigma_tot_monomial(const Context& ctx, const SectionKey& k);
GradedSection r_lambda(const GradedSection& f);

/// (Z.f)(X) = f(X Z).
GradedSection act_right(Context& ctx, const HyperElt& z, const GradedSection& f);
/// (Z1 ... Zk).f, applying the last factor first.
GradedSection act_right_factors(Context& ctx, const std::vector<HyperElt>& factors, const GradedSection& f);

/// Outcome of one identity check.
struct VerifyReport {
    struct Failure {
        nlohmann::json input;
        std::string lhs;
        std::string rhs;
    };
    std::string identity;
    int64_t cases = 0;
    int64_t failure_count = 0;
    /// First failures only; failure_count counts all.
    std::vector<Failure> failures;

    bool passed() const { return failure_count == 0; }
    void record(nlohmann::json input, std::string lhs, std::string rhs);
    void merge(const VerifyReport& other);
    nlohmann::json to_json() const;
};

/// S(phi Z . f) = Z . S(f).
VerifyReport check_equivariance(Context& ctx, const GenWord& z, const GradedSection& f);
/// Route A (full psi-hat, projection, traces) against route B (psi, op_S) on every monomial of y-grade pn <= d.
VerifyReport compare_klt(Context& ctx, int d);
/// op_S from traces against f(F0 phi X x E0 Fr' Y) on all dual-basis arguments within the truncation.
VerifyReport check_op_s_definition(Context& ctx, const Weight& lambda);

std::string section_to_text(const GradedSection& f, int num_positive);
GradedSection section_from_text(const Fp& fp, const std::string& s, int num_positive, int rank);

nlohmann::json to_json(const GradedSection& f, int num_positive);

}  // namespace frsplit
