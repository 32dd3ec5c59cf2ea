#include "frsplit/common.hpp"

#include <functional>

namespace frsplit {

namespace {
template <size_t M>
bool all_zero(const std::array<int16_t, M>& a) {
    for (auto v : a)
        if (v != 0) return false;
    return true;
}
}  // namespace

bool PbwKey::is_unit() const { return all_zero(e) && all_zero(h) && all_zero(f); }
bool PbwKey::e_only() const { return all_zero(h) && all_zero(f); }
bool PbwKey::f_only() const { return all_zero(e) && all_zero(h); }
bool PbwKey::h_only() const { return all_zero(e) && all_zero(f); }
bool PbwKey::has_e() const { return !all_zero(e); }
bool PbwKey::has_f() const { return !all_zero(f); }
bool PbwKey::has_h() const { return !all_zero(h); }

size_t PbwKeyHash::operator()(const PbwKey& k) const noexcept {
    uint64_t x = 1469598103934665603ULL;
    auto mix = [&x](int16_t v) {
        x ^= static_cast<uint16_t>(v);
        x *= 1099511628211ULL;
    };
    for (auto v : k.e) mix(v);
    for (auto v : k.h) mix(v);
    for (auto v : k.f) mix(v);
    return static_cast<size_t>(x);
}

size_t ExpsHash::operator()(const Exps& k) const noexcept {
    uint64_t x = 1469598103934665603ULL;
    for (auto v : k) {
        x ^= static_cast<uint16_t>(v);
        x *= 1099511628211ULL;
    }
    return static_cast<size_t>(x);
}

int total_degree(const Exps& a) {
    int s = 0;
    for (auto v : a) s += v;
    return s;
}

int64_t Fp::pow(int64_t a, int64_t e) const {
    int64_t r = 1 % p, b = norm(a);
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

int64_t Fp::inv(int64_t a) const {
    a = norm(a);
    if (a == 0) throw std::domain_error("inverse of zero in F_p");
    return pow(a, p - 2);
}

int64_t Fp::binom(int64_t n, int64_t k) const {
    if (k < 0) return 0;
    if (n < 0) {
        int64_t v = binom(k - n - 1, k);
        return (k % 2 == 0) ? v : neg(v);
    }
    // Lucas
    int64_t r = 1;
    while (n > 0 || k > 0) {
        int64_t ni = n % p, ki = k % p;
        if (ki > ni) return 0;
        int64_t num = 1, den = 1;
        for (int64_t j = 0; j < ki; ++j) {
            num = mul(num, ni - j);
            den = mul(den, j + 1);
        }
        r = mul(r, mul(num, inv(den)));
        n /= p;
        k /= p;
    }
    return r;
}

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int64_t binom_int(int64_t n, int64_t k) {
    if (k < 0) return 0;
    if (n < 0) {
        int64_t v = binom_int(k - n - 1, k);
        return (k % 2 == 0) ? v : -v;
    }
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    int64_t r = 1;
    for (int64_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

std::vector<Exps> exps_of_degree(int n, int d) {
    std::vector<Exps> out;
    Exps cur{};
    std::function<void(int, int)> rec = [&](int s, int left) {
        if (s == n - 1) {
            cur[s] = static_cast<int16_t>(left);
            out.push_back(cur);
            cur[s] = 0;
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[s] = static_cast<int16_t>(v);
            rec(s + 1, left - v);
        }
        cur[s] = 0;
    };
    if (n > 0) rec(0, d);
    return out;
}

}  // namespace frsplit
