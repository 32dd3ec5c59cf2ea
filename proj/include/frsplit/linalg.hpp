#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "frsplit/common.hpp"

namespace frsplit {

using FpVec = std::vector<int64_t>;
using FpMat = std::vector<FpVec>;

/// Rows kept in reduced echelon form; supports membership and coordinate queries.
class Echelon {
public:
    Echelon(const Fp& fp, int ncols) : fp_(fp), ncols_(ncols) {}

    /// Reduces v; returns true and stores it if it was independent.
    bool insert(const FpVec& v);
    /// Reduces v against the stored rows.
    FpVec reduce(FpVec v) const;
    int rank() const { return static_cast<int>(rows_.size()); }
    const FpMat& rows() const { return rows_; }

private:
    Fp fp_;
    int ncols_;
    FpMat rows_;
    std::vector<int> pivots_;
};

int rank(const Fp& fp, FpMat m);

/// Basis of {x : m x = 0}.
FpMat nullspace(const Fp& fp, FpMat m, int ncols);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<FpMat> inverse(const Fp& fp, const FpMat& m);

/// Some solution of m x = b, or nullopt when inconsistent.
std::optional<FpVec> solve(const Fp& fp, FpMat m, FpVec b, int ncols);

}  // namespace frsplit
