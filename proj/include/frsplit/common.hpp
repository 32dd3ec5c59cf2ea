#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace frsplit {

/// Largest rank and number of positive roots handled (G2).
constexpr int kMaxRank = 2;
constexpr int kMaxRoots = 6;

/// Exponent vector indexed by positive roots in the fixed convex order.
using Exps = std::array<int16_t, kMaxRoots>;

/// PBW monomial E^(e) binom(H,h) F^(f), compared E-part first, then H, then F.
struct PbwKey {
    Exps e{};
    std::array<int16_t, kMaxRank> h{};
    Exps f{};
    auto operator<=>(const PbwKey&) const = default;
    bool operator==(const PbwKey&) const = default;

    bool is_unit() const;
    bool e_only() const;
    bool f_only() const;
    bool h_only() const;
    bool has_f() const;
    bool has_e() const;
    bool has_h() const;
};

struct PbwKeyHash {
    size_t operator()(const PbwKey& k) const noexcept;
};

struct ExpsHash {
    size_t operator()(const Exps& k) const noexcept;
};

int total_degree(const Exps& a);
/// All exponent vectors of total degree d in n variables.
std::vector<Exps> exps_of_degree(int n, int d);

// Errors raised by the library. The CLI maps them to exit codes.
struct FrsplitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadPrime : FrsplitError { using FrsplitError::FrsplitError; };
struct IntegralityViolation : FrsplitError { using FrsplitError::FrsplitError; };
struct OverflowPolicy : FrsplitError { using FrsplitError::FrsplitError; };
struct WrongAtomKind : FrsplitError { using FrsplitError::FrsplitError; };
struct WrongTriangularPart : FrsplitError { using FrsplitError::FrsplitError; };
struct NotTorusPart : FrsplitError { using FrsplitError::FrsplitError; };
struct SideMismatch : FrsplitError { using FrsplitError::FrsplitError; };
struct NoEquivariantGrading : FrsplitError { using FrsplitError::FrsplitError; };
struct GradingMissing : FrsplitError { using FrsplitError::FrsplitError; };
struct SizeBound : FrsplitError { using FrsplitError::FrsplitError; };
struct ClosureFailure : FrsplitError { using FrsplitError::FrsplitError; };
struct NonUniqueForm : FrsplitError { using FrsplitError::FrsplitError; };
struct TruncationTooSmall : FrsplitError { using FrsplitError::FrsplitError; };
struct TruncationExceeded : FrsplitError { using FrsplitError::FrsplitError; };
struct LambdaMismatch : FrsplitError { using FrsplitError::FrsplitError; };
struct ParseError : FrsplitError { using FrsplitError::FrsplitError; };

/// Arithmetic in F_p with representatives in [0, p).
struct Fp {
    int64_t p = 2;

    int64_t norm(int64_t a) const {
        a %= p;
        return a < 0 ? a + p : a;
    }
    int64_t add(int64_t a, int64_t b) const { return norm(a + b); }
    int64_t sub(int64_t a, int64_t b) const { return norm(a - b); }
    int64_t mul(int64_t a, int64_t b) const { return norm(a * b); }
    int64_t neg(int64_t a) const { return norm(-a); }
    int64_t pow(int64_t a, int64_t e) const;
    int64_t inv(int64_t a) const;
    /// binom(n, k) mod p for any integer n (generalized) and k >= 0, via Lucas on n mod p^big.
    int64_t binom(int64_t n, int64_t k) const;
};

bool is_prime(int64_t n);

/// Exact generalized binomial coefficient binom(n, k) for integer n, k >= 0.
int64_t binom_int(int64_t n, int64_t k);

}  // namespace frsplit
