#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace frsplit {

enum class Kind { A1, A2, B2, G2 };

std::string kind_name(Kind k);
Kind parse_kind(const std::string& s);

/// Element of the weight lattice in fundamental-weight coordinates.
struct Weight {
    std::vector<int> coords;

    Weight operator+(const Weight& o) const;
    Weight operator-(const Weight& o) const;
    Weight operator*(int c) const;
    bool operator==(const Weight&) const = default;
    bool is_zero() const;
    /// True iff every coordinate is divisible by p.
    bool divisible_by(int p) const;
};

/// Root vector in simple-root coordinates.
using RootVec = std::vector<int>;

struct RootSystem {
    Kind kind = Kind::A1;
    int rank = 1;
    /// cartan[i][j] = <alpha_j, alpha_i^vee>
    std::vector<std::vector<int>> cartan;
    /// Positive roots in the fixed convex order.
    std::vector<RootVec> positive_roots;
    /// N_{a,b} for root indices a, b with a+b a root. Index k < N is the k-th positive
    /// root, index N + k is its negative.
    std::map<std::pair<int, int>, int> structure_constants;

    int num_positive() const { return static_cast<int>(positive_roots.size()); }
    /// Position of alpha_i (0-based i) in positive_roots.
    int simple_position(int i) const;
    RootVec root(int idx) const;
    /// Root index of r, or -1 if r is not a root.
    int find_root(const RootVec& r) const;
    int positive_index(const RootVec& r) const;
    /// <beta, alpha_i^vee>, i 0-based.
    int coroot_pairing(const RootVec& beta, int i) const;
    Weight root_weight(const RootVec& beta) const;
    /// Coroot of the k-th positive root in simple-coroot coordinates.
    std::vector<int> coroot(int k) const;
    Weight rho() const;
    Weight zero_weight() const { return Weight{std::vector<int>(rank, 0)}; }
    int height(const RootVec& r) const;
};

RootSystem build_root_system(Kind kind);

bool is_good_prime(const RootSystem& rs, int p);

/// <lambda, alpha_i^vee> with 1 <= i <= rank.
int pair(const Weight& lambda, int i);

/// Invariant violations of a root system; empty when all hold.
std::vector<std::string> check_root_system(const RootSystem& rs);

/// Sparse bracket table on the Chevalley basis: e_0..e_{N-1}, h_0..h_{l-1}, f_0..f_{N-1}.
class LieTable {
public:
    explicit LieTable(const RootSystem& rs);
    int dim() const { return 2 * n_ + l_; }
    int e(int k) const { return k; }
    int h(int i) const { return n_ + i; }
    int f(int k) const { return n_ + l_ + k; }
    bool is_e(int x) const { return x < n_; }
    bool is_h(int x) const { return x >= n_ && x < n_ + l_; }
    bool is_f(int x) const { return x >= n_ + l_; }
    /// Positive-root position of an e or f basis element, simple index of an h.
    int index_of(int x) const;
    const std::vector<std::pair<int, int>>& bracket(int x, int y) const {
        return table_[x * dim() + y];
    }

private:
    int n_, l_;
    std::vector<std::vector<std::pair<int, int>>> table_;
};

nlohmann::json to_json(const RootSystem& rs);

}  // namespace frsplit
