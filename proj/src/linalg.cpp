#include "frsplit/linalg.hpp"

#include <algorithm>

namespace frsplit {

bool Echelon::insert(const FpVec& v) {
    FpVec r = reduce(v);
    int piv = -1;
    for (int j = 0; j < ncols_; ++j)
        if (r[j] != 0) {
            piv = j;
            break;
        }
    if (piv < 0) return false;
    int64_t s = fp_.inv(r[piv]);
    for (auto& x : r) x = fp_.mul(x, s);
    for (auto& row : rows_)
        if (row[piv] != 0) {
            int64_t c = row[piv];
            for (int j = 0; j < ncols_; ++j)
                if (r[j] != 0) row[j] = fp_.sub(row[j], fp_.mul(c, r[j]));
        }
    rows_.push_back(std::move(r));
    pivots_.push_back(piv);
    return true;
}

FpVec Echelon::reduce(FpVec v) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
        int64_t c = v[pivots_[k]];
        if (c == 0) continue;
        const FpVec& row = rows_[k];
        for (int j = 0; j < ncols_; ++j)
            if (row[j] != 0) v[j] = fp_.sub(v[j], fp_.mul(c, row[j]));
    }
    return v;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(const Fp& fp, FpMat& m, int ncols) {
    std::vector<int> piv;
    int r = 0;
    int nrows = static_cast<int>(m.size());
    for (int c = 0; c < ncols && r < nrows; ++c) {
        int sel = -1;
        for (int i = r; i < nrows; ++i)
            if (m[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[r], m[sel]);
        int64_t s = fp.inv(m[r][c]);
        for (auto& x : m[r]) x = fp.mul(x, s);
        for (int i = 0; i < nrows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            int64_t f = m[i][c];
            for (size_t j = 0; j < m[i].size(); ++j)
                if (m[r][j] != 0) m[i][j] = fp.sub(m[i][j], fp.mul(f, m[r][j]));
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

}  // namespace

int rank(const Fp& fp, FpMat m) {
    if (m.empty()) return 0;
    return static_cast<int>(rref(fp, m, static_cast<int>(m[0].size())).size());
}

FpMat nullspace(const Fp& fp, FpMat m, int ncols) {
    auto piv = rref(fp, m, ncols);
    std::vector<bool> is_piv(ncols, false);
    for (int c : piv) is_piv[c] = true;
    FpMat out;
    for (int fcol = 0; fcol < ncols; ++fcol) {
        if (is_piv[fcol]) continue;
        FpVec x(ncols, 0);
        x[fcol] = 1;
        for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = fp.neg(m[r][fcol]);
        out.push_back(std::move(x));
    }
    return out;
}

std::optional<FpMat> inverse(const Fp& fp, const FpMat& m) {
    int n = static_cast<int>(m.size());
    FpMat a(n, FpVec(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = fp.norm(m[i][j]);
        a[i][n + i] = 1;
    }
    auto piv = rref(fp, a, n);
    if (static_cast<int>(piv.size()) < n) return std::nullopt;
    FpMat inv(n, FpVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
    return inv;
}

std::optional<FpVec> solve(const Fp& fp, FpMat m, FpVec b, int ncols) {
    int nrows = static_cast<int>(m.size());
    for (int i = 0; i < nrows; ++i) m[i].push_back(fp.norm(b[i]));
    auto piv = rref(fp, m, ncols + 1);
    FpVec x(ncols, 0);
    for (size_t r = 0; r < piv.size(); ++r) {
        if (piv[r] == ncols) return std::nullopt;
        x[piv[r]] = m[r][ncols];
    }
    return x;
}

}  // namespace frsplit
