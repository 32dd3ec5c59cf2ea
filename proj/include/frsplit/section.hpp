#pragma once

#include <compare>
#include <map>

#include "frsplit/common.hpp"
#include "frsplit/rootdata.hpp"

namespace frsplit {

/// Monomial x^x yhat^y; y is written in the graded generators.
struct SectionKey {
    Exps x{};
    Exps y{};
    auto operator<=>(const SectionKey&) const = default;
    bool operator==(const SectionKey&) const = default;
};

/// Truncated element of the twisted induction ring. A term of y-degree m carries the twist (m - offset) lambda.
struct GradedSection {
    Weight lambda;
    int offset = 0;
    std::map<SectionKey, int64_t> terms;
    bool is_zero() const { return terms.empty(); }
    bool operator==(const GradedSection&) const = default;
};

}  // namespace frsplit
