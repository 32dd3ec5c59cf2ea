#pragma once

#include <array>
#include <map>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "frsplit/dualring.hpp"
#include "frsplit/hyperalg.hpp"
#include "frsplit/linalg.hpp"
#include "frsplit/section.hpp"
#include "json.hpp"

namespace frsplit {

/// The Steinberg module L((p-1) rho), realized as a quotient of the lowest-weight Verma module.
struct StModule {
    int p = 2;
    int dim = 0;
    /// Weight of each basis vector, fundamental coordinates.
    std::vector<Weight> weights;
    /// Weight above the lowest weight, root coordinates.
    std::vector<RootVec> nu_of;
    /// Basis vector s is the image of E^(rep[s]) f_-.
    std::vector<Exps> rep;
    int f_plus = 0;
    int f_minus = 0;
    /// {0 for E or 1 for F, simple index, exponent} -> matrix acting on column vectors.
    std::map<std::array<int, 3>, FpMat> gen_actions;
    FpMat eta;
    bool has_eta = false;

    /// Verma weight space: PBW exponents, first basis index and the projection onto the quotient.
    struct Block {
        std::vector<Exps> keys;
        std::map<Exps, int> key_index;
        int start = 0;
        FpMat reduce;
    };
    std::map<RootVec, Block> blocks;
    std::unordered_map<PbwKey, std::map<int, FpVec>, PbwKeyHash> act_cache;
    /// F_beta^(m) E^(c) f_- in the Verma module, keyed by {beta, m, c}.
    std::map<std::tuple<int, int, Exps>, std::map<Exps, int64_t>> verma_cache;
};

/// size_bound limits p^N; generators E(i,n), F(i,n) are stored for n < p * cap_mult.
StModule build_st(Algebra& alg, int cap_mult = 2, int64_t size_bound = 1000);
void build_eta(Algebra& alg, StModule& st);
/// Basis of the invariant pairings, solved from the generators with exponent 1 and p.
std::vector<FpMat> invariant_forms(Algebra& alg, const StModule& st);
/// form(X a, b) = (-1)^n form(a, X b) for the stored generator g.
bool form_invariant_under(const Fp& fp, const StModule& st, const FpMat& form, const std::array<int, 3>& g);
/// eta(F0 f_+, E0 f_-).
int64_t eta_normalization(Algebra& alg, StModule& st);

FpVec st_basis(const StModule& st, int s);
FpVec st_act(Algebra& alg, StModule& st, const HyperElt& x, const FpVec& v);
int64_t eta_pair(const StModule& st, const Fp& fp, const FpVec& v, const FpVec& w);

/// Sum of eta(X_(1).v x pi(Y).X_(2).w), pi the projection to degree (p-1)N.
int64_t psi_eval_general(Algebra& alg, StModule& st, const GradingMap& gm, const FpVec& v, const FpVec& w,
                         const HyperElt& x, const HyperElt& y);
/// eta(X.f_+ x pi(Y).f_-).
int64_t psi_eval(Algebra& alg, StModule& st, const GradingMap& gm, const HyperElt& x, const HyperElt& y);
/// eta(v x X.w).
int64_t psi_bar(Algebra& alg, StModule& st, const FpVec& v, const FpVec& w, const HyperElt& x);

/// The distinguished section in x / yhat coordinates; requires max_degree >= (p-1)N.
GradedSection psi_section(Algebra& alg, StModule& st, const GradingMap& gm, int max_degree);
/// The same pairing without projecting Y to degree (p-1)N.
GradedSection psi_hat(Algebra& alg, StModule& st, const GradingMap& gm);

nlohmann::json to_json(const StModule& st);

}  // namespace frsplit
