#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "frsplit/common.hpp"
#include "frsplit/rootdata.hpp"

namespace frsplit {

/// Element with exact rational coefficients, used during straightening.
using QElt = std::unordered_map<PbwKey, mpq_class, PbwKeyHash>;

/// Element of the hyperalgebra over F_p in PBW normal form.
struct HyperElt {
    std::map<PbwKey, int64_t> terms;
    bool is_zero() const { return terms.empty(); }
    bool operator==(const HyperElt&) const = default;
};

/// Element of the tensor square in the basis of key pairs.
struct TensorElt {
    std::map<std::pair<PbwKey, PbwKey>, int64_t> terms;
    bool operator==(const TensorElt&) const = default;
};

struct Atom {
    enum class Kind { E, F, H };
    Kind kind = Kind::E;
    int i = 0;
    int n = 0;
};

/// Word in simple divided powers and torus binomials.
struct GenWord {
    std::vector<Atom> atoms;
};

enum class Side { Plus, Minus };
enum class Part { N, NMinus, Torus };

struct PairHash {
    size_t operator()(const std::pair<PbwKey, PbwKey>& k) const noexcept;
};

/// The divided-power hyperalgebra of a root system over F_p.
class Algebra {
public:
    /// cap < 0 selects the default p^2 - 1.
    Algebra(const RootSystem& rs, int p, int cap = -1);

    const RootSystem& roots() const { return rs_; }
    const Fp& field() const { return fp_; }
    int p() const { return static_cast<int>(fp_.p); }
    int cap() const { return cap_; }
    void set_cap(int cap) { cap_ = cap; }
    int num_positive() const { return n_; }
    int rank() const { return l_; }

    HyperElt one() const;
    HyperElt monomial(const PbwKey& k, int64_t c = 1) const;
    /// Simple divided powers with 0-based simple index i.
    HyperElt E(int i, int n) const;
    HyperElt F(int i, int n) const;
    HyperElt Hbin(int i, int n) const;
    /// Divided powers of the root vector at position k of the convex order.
    HyperElt root_E(int k, int n) const;
    HyperElt root_F(int k, int n) const;

    HyperElt add(const HyperElt& a, const HyperElt& b) const;
    HyperElt sub(const HyperElt& a, const HyperElt& b) const;
    HyperElt scale(const HyperElt& a, int64_t c) const;
    HyperElt mult(const HyperElt& a, const HyperElt& b);
    const std::vector<std::pair<PbwKey, int64_t>>& mult_keys(const PbwKey& a, const PbwKey& b);
    /// Exact product of two monomials in normal form.
    QElt q_mult_keys(const PbwKey& a, const PbwKey& b);

    TensorElt comult(const HyperElt& a) const;
    HyperElt antipode(const HyperElt& a);
    int64_t counit(const HyperElt& a) const;

    HyperElt frobenius(const HyperElt& a) const;
    HyperElt normalize(const GenWord& w);
    HyperElt fr_prime_word(const GenWord& w);
    HyperElt fr_prime_minus_word(const GenWord& w);
    HyperElt fr_prime_zero_word(const GenWord& w);
    /// Componentwise stretch of every exponent by p.
    HyperElt fr_prime_pbw(const HyperElt& a, Side side) const;
    /// Fr' computed by rewriting a in simple divided-power words.
    HyperElt fr_prime_via_words(const HyperElt& a, Side side);

    HyperElt mu0();
    HyperElt phi_word(const GenWord& w);
    /// mu0, Fr'(a1), mu0, ..., Fr'(ak), mu0 whose product is phi_word(w).
    std::vector<HyperElt> phi_factors(const GenWord& w);
    int64_t character(const Weight& lambda, const HyperElt& h) const;

    HyperElt e0() const;
    HyperElt f0() const;
    std::vector<HyperElt> small_spanning_set(Part part) const;

    /// X * Y = sum X_(1) Y sigma(X_(2)).
    HyperElt adjoint(const HyperElt& x, const HyperElt& y);
    /// Cached adjoint action of one Borel monomial on one positive-part monomial.
    const HyperElt& adjoint_key(const PbwKey& x, const PbwKey& y);

    Weight weight_of(const PbwKey& k) const;
    /// Weight in simple-root coordinates.
    RootVec root_weight_of(const PbwKey& k) const;

    std::string to_text(const HyperElt& a) const;
    HyperElt from_text(const std::string& s) const;

    /// Words of alternating simple divided powers of root-coordinate weight nu.
    std::vector<GenWord> words_of_weight(const RootVec& nu, Side side) const;

private:
    using LieVec = std::vector<std::pair<int, mpq_class>>;

    void check_cap(const PbwKey& k) const;
    LieVec lie_bracket(const LieVec& a, int y) const;
    const QElt& lie_mul(int x, const PbwKey& key);
    QElt lie_mul_elt(int x, const QElt& v);
    QElt pow_mul(int y, int n, const PbwKey& key);
    QElt pow_mul_elt(int y, int n, const QElt& v);
    const std::map<Exps, mpq_class>& e_into_E(int k, const Exps& a);
    const std::map<Exps, mpq_class>& f_into_F(int k, const Exps& a);
    std::map<Exps, mpq_class> pow_into(bool upper, int k, int n, const Exps& a);
    QElt compute_lie_mul(int x, const PbwKey& key);
    HyperElt export_q(const QElt& q) const;
    HyperElt antipode_key(const PbwKey& k);
    HyperElt word_product(const GenWord& w, int stretch);
    HyperElt atom_elt(const Atom& a, int stretch) const;

    RootSystem rs_;
    LieTable lie_;
    Fp fp_;
    int cap_;
    int n_, l_;
    std::unordered_map<PbwKey, QElt, PbwKeyHash> lie_cache_[3 * kMaxRoots];
    std::unordered_map<Exps, std::map<Exps, mpq_class>, ExpsHash> e_cache_[kMaxRoots], f_cache_[kMaxRoots];
    std::unordered_map<std::pair<PbwKey, PbwKey>, std::vector<std::pair<PbwKey, int64_t>>, PairHash> mult_cache_;
    std::unordered_map<PbwKey, HyperElt, PbwKeyHash> antipode_cache_;
    std::unordered_map<std::pair<PbwKey, PbwKey>, HyperElt, PairHash> adjoint_cache_;
    std::map<RootVec, std::pair<std::vector<GenWord>, bool>> word_cache_;
    HyperElt mu0_;
    bool mu0_ready_ = false;
};

}  // namespace frsplit
