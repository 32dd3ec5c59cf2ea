#pragma once

#include <map>
#include <string>
#include <vector>

#include "frsplit/hyperalg.hpp"
#include "json.hpp"

namespace frsplit {

/// Polynomial in y_beta (plus side, dual to U(n)) or x_beta (minus side, dual to U(n-)).
struct DualPoly {
    Side side = Side::Plus;
    std::map<Exps, int64_t> terms;
    bool is_zero() const { return terms.empty(); }
    bool operator==(const DualPoly&) const = default;
};

DualPoly dual_one(Side side);
DualPoly dual_var(Side side, int k);
DualPoly dual_monomial(Side side, const Exps& a, int64_t c = 1);
/// Product of all n variables to the power p - 1.
DualPoly dual_z0(Side side, int n, int p);
DualPoly dual_add(const Fp& fp, const DualPoly& a, const DualPoly& b);
DualPoly dual_scale(const Fp& fp, const DualPoly& a, int64_t c);
/// Polynomial product; terms of total degree above max_degree are dropped when max_degree >= 0.
DualPoly dual_mul(const Fp& fp, const DualPoly& a, const DualPoly& b, int max_degree = -1);

/// Dual-basis pairing with PBW monomials of the matching triangular part.
int64_t pair(const Algebra& alg, const DualPoly& f, const HyperElt& z);

/// The p-th power map.
DualPoly fr_star(const Fp& fp, const DualPoly& f);

/// Positive-part exponent vectors of root-coordinate weight nu.
std::vector<Exps> exps_of_weight(const RootSystem& rs, const RootVec& nu);
RootVec exps_weight(const RootSystem& rs, const Exps& a);

/// A * f defined by <A * f, Y> = <f, sigma(A) * Y>.
DualPoly dual_adjoint(Algebra& alg, const HyperElt& a, const DualPoly& f);

enum class GradingKind { SecondKind, SolvedEquivariant };

/// Graded generators yhat_beta of the plus-side dual ring, written in the y_beta.
struct GradingMap {
    GradingKind kind = GradingKind::SecondKind;
    int checked_degree = 0;
    int p = 2;
    int n = 0;
    std::vector<DualPoly> gens;
    /// y_beta written in the yhat_beta.
    std::vector<DualPoly> inverse;

    /// Rewrites a polynomial in y as a polynomial in yhat.
    DualPoly to_hat(const DualPoly& f) const;
    /// Rewrites a polynomial in yhat as a polynomial in y.
    DualPoly from_hat(const DualPoly& f) const;
    nlohmann::json to_json() const;
};

GradingMap second_kind_grading(const Algebra& alg);
/// True when every E(i,m) maps each graded piece of degree <= max_degree into itself.
bool grading_equivariant(Algebra& alg, const GradingMap& gm, int max_degree, std::string* witness = nullptr);
/// Second-kind grading when it is equivariant up to max_degree, otherwise the solved one.
GradingMap build_grading(Algebra& alg, int max_degree, bool force_solver = false);

/// Monomial trace rule z0 f^p -> f on an n-variable dual ring.
DualPoly trace_plus(const Fp& fp, int n, const DualPoly& f);
DualPoly trace_minus(const Fp& fp, int n, const DualPoly& f);

/// Homogeneous component of degree d for the grading.
DualPoly project_degree(const GradingMap* gm, const DualPoly& f, int d);

/// Element of U(n) dual to yhat^b in the graded dual basis.
HyperElt graded_dual_element(Algebra& alg, const GradingMap& gm, const Exps& b);

std::string dual_to_text(const DualPoly& f, int n);
DualPoly dual_from_text(const Fp& fp, const std::string& s, int n);

}  // namespace frsplit
