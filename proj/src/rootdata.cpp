#include "frsplit/rootdata.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>

namespace frsplit {

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::A1: return "A1";
        case Kind::A2: return "A2";
        case Kind::B2: return "B2";
        case Kind::G2: return "G2";
    }
    return "?";
}

Kind parse_kind(const std::string& s) {
    if (s == "A1") return Kind::A1;
    if (s == "A2") return Kind::A2;
    if (s == "B2") return Kind::B2;
    if (s == "G2") return Kind::G2;
    throw std::invalid_argument("unknown root system kind: " + s);
}

Weight Weight::operator+(const Weight& o) const {
    Weight r = *this;
    for (size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
    return r;
}
Weight Weight::operator-(const Weight& o) const {
    Weight r = *this;
    for (size_t i = 0; i < coords.size(); ++i) r.coords[i] -= o.coords[i];
    return r;
}
Weight Weight::operator*(int c) const {
    Weight r = *this;
    for (auto& v : r.coords) v *= c;
    return r;
}
bool Weight::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](int v) { return v == 0; });
}
bool Weight::divisible_by(int p) const {
    return std::all_of(coords.begin(), coords.end(), [p](int v) { return v % p == 0; });
}

int pair(const Weight& lambda, int i) {
    if (i < 1 || i > static_cast<int>(lambda.coords.size()))
        throw std::out_of_range("simple root index out of range");
    return lambda.coords[i - 1];
}

namespace {

using QMat = std::vector<std::vector<mpq_class>>;

QMat zero(int n) { return QMat(n, std::vector<mpq_class>(n, 0)); }

QMat unit(int n, int i, int j, const mpq_class& c = 1) {
    auto m = zero(n);
    m[i - 1][j - 1] = c;
    return m;
}

QMat operator+(QMat a, const QMat& b) {
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) a[i][j] += b[i][j];
    return a;
}

QMat scale(QMat a, const mpq_class& c) {
    for (auto& row : a)
        for (auto& v : row) v *= c;
    return a;
}

QMat mul(const QMat& a, const QMat& b) {
    size_t n = a.size();
    auto c = zero(static_cast<int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

QMat bracket(const QMat& a, const QMat& b) { return mul(a, b) + scale(mul(b, a), -1); }

bool is_zero(const QMat& a) {
    for (auto& row : a)
        for (auto& v : row)
            if (v != 0) return false;
    return true;
}

/// c with a = c * b; throws when a is not a multiple of b.
mpq_class ratio(const QMat& a, const QMat& b) {
    mpq_class c = 0;
    bool found = false;
    for (size_t i = 0; i < a.size() && !found; ++i)
        for (size_t j = 0; j < a.size() && !found; ++j)
            if (b[i][j] != 0) {
                c = a[i][j] / b[i][j];
                found = true;
            }
    if (!found || !is_zero(a + scale(b, -c))) throw std::logic_error("matrices are not proportional");
    return c;
}

// Simple generators e_i, f_i of a faithful representation; [e_i, f_i] is diagonal.
void generators(Kind kind, std::vector<QMat>& es, std::vector<QMat>& fs) {
    switch (kind) {
        case Kind::A1:
            es = {unit(2, 1, 2)};
            fs = {unit(2, 2, 1)};
            break;
        case Kind::A2:
            es = {unit(3, 1, 2), unit(3, 2, 3)};
            fs = {unit(3, 2, 1), unit(3, 3, 2)};
            break;
        case Kind::B2:  // so(5), alpha_1 long
            es = {unit(5, 1, 2) + unit(5, 4, 5, -1), unit(5, 2, 3) + unit(5, 3, 4)};
            fs = {unit(5, 2, 1) + unit(5, 5, 4, -1), unit(5, 3, 2, 2) + unit(5, 4, 3, 2)};
            break;
        case Kind::G2:  // 7-dimensional representation, alpha_1 short
            es = {unit(7, 1, 2) + unit(7, 3, 4) + unit(7, 4, 5, 2) + unit(7, 6, 7),
                  unit(7, 2, 3) + unit(7, 5, 6)};
            fs = {unit(7, 2, 1) + unit(7, 4, 3, 2) + unit(7, 5, 4) + unit(7, 7, 6),
                  unit(7, 3, 2) + unit(7, 6, 5)};
            break;
    }
}

std::vector<std::vector<int>> standard_cartan(Kind kind) {
    switch (kind) {
        case Kind::A1: return {{2}};
        case Kind::A2: return {{2, -1}, {-1, 2}};
        case Kind::B2: return {{2, -1}, {-2, 2}};
        case Kind::G2: return {{2, -3}, {-1, 2}};
    }
    return {};
}

int expected_count(Kind kind) {
    switch (kind) {
        case Kind::A1: return 1;
        case Kind::A2: return 3;
        case Kind::B2: return 4;
        case Kind::G2: return 6;
    }
    return 0;
}

/// Half squared lengths of the simple roots.
std::vector<int> half_lengths(const std::vector<std::vector<int>>& a) {
    if (a.size() == 1) return {1};
    if (a[0][1] == a[1][0]) return {1, 1};
    return {-a[1][0], -a[0][1]};
}

RootVec reflect(const std::vector<std::vector<int>>& cartan, const RootVec& r, int i) {
    int c = 0;
    for (size_t j = 0; j < r.size(); ++j) c += r[j] * cartan[i][j];
    RootVec s = r;
    s[i] -= c;
    return s;
}

}  // namespace

int RootSystem::simple_position(int i) const {
    RootVec a(rank, 0);
    a[i] = 1;
    return positive_index(a);
}

RootVec RootSystem::root(int idx) const {
    int n = num_positive();
    if (idx < n) return positive_roots[idx];
    RootVec r = positive_roots[idx - n];
    for (auto& v : r) v = -v;
    return r;
}

int RootSystem::positive_index(const RootVec& r) const {
    auto it = std::find(positive_roots.begin(), positive_roots.end(), r);
    return it == positive_roots.end() ? -1 : static_cast<int>(it - positive_roots.begin());
}

int RootSystem::find_root(const RootVec& r) const {
    int k = positive_index(r);
    if (k >= 0) return k;
    RootVec m = r;
    for (auto& v : m) v = -v;
    k = positive_index(m);
    return k >= 0 ? k + num_positive() : -1;
}

int RootSystem::coroot_pairing(const RootVec& beta, int i) const {
    int c = 0;
    for (int j = 0; j < rank; ++j) c += beta[j] * cartan[i][j];
    return c;
}

Weight RootSystem::root_weight(const RootVec& beta) const {
    Weight w{std::vector<int>(rank, 0)};
    for (int i = 0; i < rank; ++i) w.coords[i] = coroot_pairing(beta, i);
    return w;
}

std::vector<int> RootSystem::coroot(int k) const {
    auto l = half_lengths(cartan);
    const RootVec& c = positive_roots[k];
    int twice_lb = 0;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) twice_lb += c[i] * c[j] * l[i] * cartan[i][j];
    std::vector<int> out(rank);
    for (int i = 0; i < rank; ++i) {
        int num = 2 * c[i] * l[i];
        if (num % twice_lb != 0) throw std::logic_error("non-integral coroot");
        out[i] = num / twice_lb;
    }
    return out;
}

Weight RootSystem::rho() const { return Weight{std::vector<int>(rank, 1)}; }

int RootSystem::height(const RootVec& r) const {
    int h = 0;
    for (int v : r) h += v;
    return h;
}

RootSystem build_root_system(Kind kind) {
    RootSystem rs;
    rs.kind = kind;
    rs.cartan = standard_cartan(kind);
    rs.rank = static_cast<int>(rs.cartan.size());
    int n = expected_count(kind);

    // Convex order from the reduced word s_1 s_2 s_1 ... of the longest element.
    for (int k = 0; k < n; ++k) {
        int ik = (rs.rank == 1) ? 0 : k % 2;
        RootVec b(rs.rank, 0);
        b[ik] = 1;
        for (int t = k - 1; t >= 0; --t) b = reflect(rs.cartan, b, (rs.rank == 1) ? 0 : t % 2);
        rs.positive_roots.push_back(b);
    }

    std::vector<QMat> es, fs;
    generators(kind, es, fs);
    std::vector<QMat> hs;
    for (int i = 0; i < rs.rank; ++i) hs.push_back(bracket(es[i], fs[i]));

    std::vector<QMat> E(n), F(n);
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return rs.height(rs.positive_roots[a]) < rs.height(rs.positive_roots[b]);
    });
    for (int k : order) {
        const RootVec& beta = rs.positive_roots[k];
        if (rs.height(beta) == 1) {
            int i = static_cast<int>(std::find(beta.begin(), beta.end(), 1) - beta.begin());
            E[k] = es[i];
            F[k] = fs[i];
            continue;
        }
        for (int i = 0; i < rs.rank; ++i) {
            RootVec gamma = beta;
            gamma[i] -= 1;
            int g = rs.positive_index(gamma);
            if (g < 0) continue;
            int r = 0;
            for (;;) {
                RootVec t = gamma;
                t[i] -= r + 1;
                if (rs.find_root(t) < 0) break;
                ++r;
            }
            E[k] = scale(bracket(es[i], E[g]), mpq_class(1, r + 1));
            QMat fprime = bracket(fs[i], F[g]);
            auto cor = rs.coroot(k);
            QMat hb = zero(static_cast<int>(es[0].size()));
            for (int j = 0; j < rs.rank; ++j) hb = hb + scale(hs[j], cor[j]);
            mpq_class c = ratio(bracket(E[k], fprime), hb);
            F[k] = scale(fprime, 1 / c);
            break;
        }
    }

    auto X = [&](int idx) -> const QMat& { return idx < n ? E[idx] : F[idx - n]; };
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b) {
            RootVec s = rs.root(a);
            RootVec rb = rs.root(b);
            for (int i = 0; i < rs.rank; ++i) s[i] += rb[i];
            int c = rs.find_root(s);
            if (c < 0) continue;
            mpq_class v = ratio(bracket(X(a), X(b)), X(c));
            if (v.get_den() != 1) throw std::logic_error("non-integral structure constant");
            rs.structure_constants[{a, b}] = static_cast<int>(v.get_num().get_si());
        }
    return rs;
}

bool is_good_prime(const RootSystem& rs, int p) {
    switch (rs.kind) {
        case Kind::A1:
        case Kind::A2: return true;
        case Kind::B2: return p != 2;
        case Kind::G2: return p != 2 && p != 3;
    }
    return false;
}

LieTable::LieTable(const RootSystem& rs) : n_(rs.num_positive()), l_(rs.rank) {
    table_.assign(dim() * dim(), {});
    auto root_elem = [&](int idx) { return idx < n_ ? e(idx) : f(idx - n_); };
    auto signed_idx = [&](int x) { return is_e(x) ? x : n_ + (x - n_ - l_); };
    for (int x = 0; x < dim(); ++x)
        for (int y = 0; y < dim(); ++y) {
            auto& out = table_[x * dim() + y];
            if (is_h(x) && is_h(y)) continue;
            if (is_h(x) || is_h(y)) {
                int hh = is_h(x) ? x : y;
                int r = is_h(x) ? y : x;
                int i = hh - n_;
                int sidx = signed_idx(r);
                int c = rs.coroot_pairing(rs.root(sidx), i);
                if (!is_h(x)) c = -c;
                if (c != 0) out.push_back({r, c});
                continue;
            }
            int a = signed_idx(x), b = signed_idx(y);
            if ((a < n_ && b == a + n_) || (b < n_ && a == b + n_)) {
                int k = a < n_ ? a : b;
                int sign = a < n_ ? 1 : -1;
                auto cor = rs.coroot(k);
                for (int i = 0; i < l_; ++i)
                    if (cor[i] != 0) out.push_back({h(i), sign * cor[i]});
                continue;
            }
            auto it = rs.structure_constants.find({a, b});
            if (it == rs.structure_constants.end()) continue;
            RootVec s = rs.root(a);
            RootVec rb = rs.root(b);
            for (int i = 0; i < l_; ++i) s[i] += rb[i];
            out.push_back({root_elem(rs.find_root(s)), it->second});
        }
}

int LieTable::index_of(int x) const {
    if (is_e(x)) return x;
    if (is_h(x)) return x - n_;
    return x - n_ - l_;
}

std::vector<std::string> check_root_system(const RootSystem& rs) {
    std::vector<std::string> bad;
    if (rs.cartan != standard_cartan(rs.kind)) bad.push_back("cartan matrix is not standard");
    int n = rs.num_positive();
    if (n != expected_count(rs.kind)) bad.push_back("wrong number of positive roots");
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            RootVec s = rs.positive_roots[a];
            for (int i = 0; i < rs.rank; ++i) s[i] += rs.positive_roots[b][i];
            int c = rs.positive_index(s);
            if (c >= 0 && !(a < c && c < b)) bad.push_back("order not convex at roots " + std::to_string(a) + "," + std::to_string(b));
        }
    for (auto& [ab, v] : rs.structure_constants) {
        auto it = rs.structure_constants.find({ab.second, ab.first});
        if (it == rs.structure_constants.end() || it->second != -v)
            bad.push_back("antisymmetry fails for N(" + std::to_string(ab.first) + "," + std::to_string(ab.second) + ")");
    }
    LieTable lt(rs);
    int d = lt.dim();
    auto br = [&](const std::vector<int>& v, int y) {
        std::vector<int> out(d, 0);
        for (int x = 0; x < d; ++x)
            if (v[x] != 0)
                for (auto [z, c] : lt.bracket(x, y)) out[z] += v[x] * c;
        return out;
    };
    auto basis = [&](int x) {
        std::vector<int> v(d, 0);
        v[x] = 1;
        return v;
    };
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z) {
                // [[x,y],z] + [[y,z],x] + [[z,x],y]
                auto t1 = br(br(basis(x), y), z);
                auto t2 = br(br(basis(y), z), x);
                auto t3 = br(br(basis(z), x), y);
                for (int k = 0; k < d; ++k)
                    if (t1[k] + t2[k] + t3[k] != 0) {
                        bad.push_back("Jacobi fails on basis triple (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")");
                        k = d;
                    }
            }
    return bad;
}

nlohmann::json to_json(const RootSystem& rs) {
    nlohmann::json j;
    j["kind"] = kind_name(rs.kind);
    j["cartan"] = rs.cartan;
    j["positive_roots"] = rs.positive_roots;
    nlohmann::json sc = nlohmann::json::array();
    for (auto& [ab, v] : rs.structure_constants) sc.push_back({rs.root(ab.first), rs.root(ab.second), v});
    j["structure_constants"] = sc;
    return j;
}

}  // namespace frsplit
