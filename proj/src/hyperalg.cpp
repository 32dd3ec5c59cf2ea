#include "frsplit/hyperalg.hpp"

#include <functional>
#include <sstream>

#include "frsplit/linalg.hpp"

namespace frsplit {

namespace {

mpq_class factorial_q(int n) {
    mpz_class f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return mpq_class(f);
}

template <class M>
void add_to(M& m, const typename M::key_type& k, const mpq_class& c) {
    if (c == 0) return;
    auto [it, fresh] = m.try_emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) m.erase(it);
    }
}

int64_t mod_q(const mpq_class& c, int64_t p) {
    if (c.get_den() != 1) throw IntegralityViolation("non-integral coefficient " + c.get_str());
    return static_cast<int64_t>(mpz_fdiv_ui(c.get_num_mpz_t(), static_cast<unsigned long>(p)));
}

}  // namespace

size_t PairHash::operator()(const std::pair<PbwKey, PbwKey>& k) const noexcept {
    PbwKeyHash h;
    return h(k.first) * 0x9e3779b97f4a7c15ULL ^ h(k.second);
}

Algebra::Algebra(const RootSystem& rs, int p, int cap)
    : rs_(rs), lie_(rs), cap_(cap < 0 ? p * p - 1 : cap), n_(rs.num_positive()), l_(rs.rank) {
    if (!is_prime(p)) throw BadPrime("p = " + std::to_string(p) + " is not prime");
    fp_.p = p;
}

void Algebra::check_cap(const PbwKey& k) const {
    for (int b = 0; b < n_; ++b)
        if (k.e[b] > cap_ || k.f[b] > cap_)
            throw OverflowPolicy("PBW exponent exceeds cap " + std::to_string(cap_));
    for (int i = 0; i < l_; ++i)
        if (k.h[i] > cap_) throw OverflowPolicy("PBW exponent exceeds cap " + std::to_string(cap_));
}

HyperElt Algebra::one() const { return monomial(PbwKey{}); }

HyperElt Algebra::monomial(const PbwKey& k, int64_t c) const {
    check_cap(k);
    HyperElt out;
    c = fp_.norm(c);
    if (c != 0) out.terms[k] = c;
    return out;
}

HyperElt Algebra::root_E(int k, int n) const {
    PbwKey key;
    key.e[k] = static_cast<int16_t>(n);
    return monomial(key);
}

HyperElt Algebra::root_F(int k, int n) const {
    PbwKey key;
    key.f[k] = static_cast<int16_t>(n);
    return monomial(key);
}

HyperElt Algebra::E(int i, int n) const { return root_E(rs_.simple_position(i), n); }
HyperElt Algebra::F(int i, int n) const { return root_F(rs_.simple_position(i), n); }

HyperElt Algebra::Hbin(int i, int n) const {
    PbwKey key;
    key.h[i] = static_cast<int16_t>(n);
    return monomial(key);
}

HyperElt Algebra::add(const HyperElt& a, const HyperElt& b) const {
    HyperElt out = a;
    for (auto& [k, c] : b.terms) {
        int64_t v = fp_.add(out.terms[k], c);
        if (v == 0)
            out.terms.erase(k);
        else
            out.terms[k] = v;
    }
    return out;
}

HyperElt Algebra::sub(const HyperElt& a, const HyperElt& b) const { return add(a, scale(b, -1)); }

HyperElt Algebra::scale(const HyperElt& a, int64_t c) const {
    HyperElt out;
    c = fp_.norm(c);
    if (c == 0) return out;
    for (auto& [k, v] : a.terms) out.terms[k] = fp_.mul(v, c);
    return out;
}

Algebra::LieVec Algebra::lie_bracket(const LieVec& a, int y) const {
    std::map<int, mpq_class> acc;
    for (auto& [x, c] : a)
        for (auto [z, d] : lie_.bracket(x, y)) add_to(acc, z, c * d);
    return LieVec(acc.begin(), acc.end());
}

std::map<Exps, mpq_class> Algebra::pow_into(bool upper, int k, int n, const Exps& a) {
    std::map<Exps, mpq_class> out;
    bool direct = true;
    for (int j = 0; j < k; ++j)
        if (a[j] != 0) direct = false;
    if (direct) {
        Exps b = a;
        b[k] = static_cast<int16_t>(b[k] + n);
        out[b] = mpq_class(binom_int(a[k] + n, n));
        return out;
    }
    out[a] = 1;
    for (int s = 1; s <= n; ++s) {
        std::map<Exps, mpq_class> next;
        for (auto& [ex, c] : out) {
            const auto& r = upper ? e_into_E(k, ex) : f_into_F(k, ex);
            for (auto& [ex2, d] : r) add_to(next, ex2, c * d / s);
        }
        out = std::move(next);
    }
    return out;
}

const std::map<Exps, mpq_class>& Algebra::e_into_E(int k, const Exps& a) {
    auto& cache = e_cache_[k];
    if (auto it = cache.find(a); it != cache.end()) return it->second;
    std::map<Exps, mpq_class> out;
    int j = -1;
    for (int t = 0; t < k; ++t)
        if (a[t] != 0) {
            j = t;
            break;
        }
    if (j < 0) {
        Exps b = a;
        b[k] += 1;
        out[b] = b[k];
    } else {
        int c = a[j];
        Exps rest = a;
        rest[j] = 0;
        LieVec z{{lie_.e(k), mpq_class(1)}};
        for (int t = 0; t <= c && !z.empty(); ++t) {
            mpq_class inv_fact = 1 / factorial_q(t);
            for (auto& [g, coef] : z) {
                std::map<Exps, mpq_class> r = e_into_E(lie_.index_of(g), rest);
                for (auto& [ex, v] : r)
                    for (auto& [ex2, w] : pow_into(true, j, c - t, ex)) add_to(out, ex2, coef * v * w * inv_fact);
            }
            z = lie_bracket(z, lie_.e(j));
        }
    }
    return cache.emplace(a, std::move(out)).first->second;
}

const std::map<Exps, mpq_class>& Algebra::f_into_F(int k, const Exps& a) {
    auto& cache = f_cache_[k];
    if (auto it = cache.find(a); it != cache.end()) return it->second;
    std::map<Exps, mpq_class> out;
    int j = -1;
    for (int t = 0; t < k; ++t)
        if (a[t] != 0) {
            j = t;
            break;
        }
    if (j < 0) {
        Exps b = a;
        b[k] += 1;
        out[b] = b[k];
    } else {
        int c = a[j];
        Exps rest = a;
        rest[j] = 0;
        LieVec z{{lie_.f(k), mpq_class(1)}};
        for (int t = 0; t <= c && !z.empty(); ++t) {
            mpq_class inv_fact = 1 / factorial_q(t);
            for (auto& [g, coef] : z) {
                std::map<Exps, mpq_class> r = f_into_F(lie_.index_of(g), rest);
                for (auto& [ex, v] : r)
                    for (auto& [ex2, w] : pow_into(false, j, c - t, ex)) add_to(out, ex2, coef * v * w * inv_fact);
            }
            z = lie_bracket(z, lie_.f(j));
        }
    }
    return cache.emplace(a, std::move(out)).first->second;
}

const QElt& Algebra::lie_mul(int x, const PbwKey& key) {
    auto& cache = lie_cache_[x];
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    QElt r = compute_lie_mul(x, key);
    return cache.emplace(key, std::move(r)).first->second;
}

QElt Algebra::lie_mul_elt(int x, const QElt& v) {
    QElt out;
    for (auto& [k, c] : v)
        for (auto& [k2, d] : lie_mul(x, k)) add_to(out, k2, c * d);
    return out;
}

QElt Algebra::compute_lie_mul(int x, const PbwKey& key) {
    QElt out;
    if (lie_.is_e(x)) {
        for (auto& [ex, c] : e_into_E(lie_.index_of(x), key.e)) {
            PbwKey k2 = key;
            k2.e = ex;
            add_to(out, k2, c);
        }
        return out;
    }
    if (lie_.is_h(x)) {
        int i = lie_.index_of(x);
        int c = 0;
        for (int b = 0; b < n_; ++b) c += key.e[b] * rs_.coroot_pairing(rs_.positive_roots[b], i);
        int m = key.h[i];
        add_to(out, key, mpq_class(m + c));
        PbwKey up = key;
        up.h[i] += 1;
        add_to(out, up, mpq_class(m + 1));
        return out;
    }
    int k = lie_.index_of(x);
    if (key.has_e()) {
        int j = 0;
        while (key.e[j] == 0) ++j;
        int c = key.e[j];
        PbwKey rest = key;
        rest.e[j] = 0;
        LieVec z{{x, mpq_class(1)}};
        for (int t = 0; t <= c && !z.empty(); ++t) {
            QElt r;
            for (auto& [g, coef] : z)
                for (auto& [k2, d] : lie_mul(g, rest)) add_to(r, k2, coef * d);
            mpq_class inv_fact = 1 / factorial_q(t);
            for (auto& [k2, d] : pow_mul_elt(lie_.e(j), c - t, r)) add_to(out, k2, d * inv_fact);
            z = lie_bracket(z, lie_.e(j));
        }
        return out;
    }
    // f_k binom(H, m) = binom(H + c, m) f_k with c_i = <beta_k, alpha_i^vee>
    std::vector<std::pair<std::array<int16_t, kMaxRank>, mpq_class>> hs{{{}, mpq_class(1)}};
    for (int i = 0; i < l_; ++i) {
        int ci = rs_.coroot_pairing(rs_.positive_roots[k], i);
        int m = key.h[i];
        std::vector<std::pair<std::array<int16_t, kMaxRank>, mpq_class>> next;
        for (auto& [hv, cv] : hs)
            for (int t = 0; t <= m; ++t) {
                int64_t b = binom_int(ci, m - t);
                if (b == 0) continue;
                auto h2 = hv;
                h2[i] = static_cast<int16_t>(t);
                next.push_back({h2, cv * mpq_class(b)});
            }
        hs = std::move(next);
    }
    const auto& fr = f_into_F(k, key.f);
    for (auto& [hv, cv] : hs)
        for (auto& [ex, d] : fr) {
            PbwKey k2;
            k2.h = hv;
            k2.f = ex;
            add_to(out, k2, cv * d);
        }
    return out;
}

QElt Algebra::pow_mul(int y, int n, const PbwKey& key) {
    QElt out;
    if (lie_.is_e(y)) {
        for (auto& [ex, c] : pow_into(true, lie_.index_of(y), n, key.e)) {
            PbwKey k2 = key;
            k2.e = ex;
            add_to(out, k2, c);
        }
        return out;
    }
    out[key] = 1;
    for (int s = 1; s <= n; ++s) {
        QElt next;
        for (auto& [k, c] : out)
            for (auto& [k2, d] : lie_mul(y, k)) add_to(next, k2, c * d / s);
        out = std::move(next);
    }
    return out;
}

QElt Algebra::pow_mul_elt(int y, int n, const QElt& v) {
    if (n == 0) return v;
    QElt out;
    for (auto& [k, c] : v)
        for (auto& [k2, d] : pow_mul(y, n, k)) add_to(out, k2, c * d);
    return out;
}

QElt Algebra::q_mult_keys(const PbwKey& a, const PbwKey& b) {
    check_cap(a);
    check_cap(b);
    QElt v{{b, mpq_class(1)}};
    for (int k = n_ - 1; k >= 0; --k)
        if (a.f[k] > 0) v = pow_mul_elt(lie_.f(k), a.f[k], v);
    for (int i = 0; i < l_; ++i)
        for (int s = 0; s < a.h[i]; ++s) {
            QElt hv = lie_mul_elt(lie_.h(i), v);
            for (auto& [k, c] : v) add_to(hv, k, -s * c);
            for (auto& [k, c] : hv) c /= (s + 1);
            v = std::move(hv);
        }
    for (int k = n_ - 1; k >= 0; --k)
        if (a.e[k] > 0) v = pow_mul_elt(lie_.e(k), a.e[k], v);
    for (auto& [k, c] : v) check_cap(k);
    return v;
}

HyperElt Algebra::export_q(const QElt& q) const {
    HyperElt out;
    for (auto& [k, c] : q) {
        int64_t v = mod_q(c, fp_.p);
        if (v != 0) out.terms[k] = v;
    }
    return out;
}

const std::vector<std::pair<PbwKey, int64_t>>& Algebra::mult_keys(const PbwKey& a, const PbwKey& b) {
    auto key = std::make_pair(a, b);
    if (auto it = mult_cache_.find(key); it != mult_cache_.end()) return it->second;
    HyperElt r = export_q(q_mult_keys(a, b));
    std::vector<std::pair<PbwKey, int64_t>> v(r.terms.begin(), r.terms.end());
    return mult_cache_.emplace(key, std::move(v)).first->second;
}

HyperElt Algebra::mult(const HyperElt& a, const HyperElt& b) {
    std::map<PbwKey, int64_t> acc;
    for (auto& [ka, ca] : a.terms)
        for (auto& [kb, cb] : b.terms) {
            int64_t cab = fp_.mul(ca, cb);
            for (auto& [k, c] : mult_keys(ka, kb)) {
                auto& slot = acc[k];
                slot = fp_.add(slot, fp_.mul(cab, c));
            }
        }
    HyperElt out;
    for (auto& [k, c] : acc)
        if (c != 0) out.terms.emplace(k, c);
    return out;
}

TensorElt Algebra::comult(const HyperElt& a) const {
    TensorElt out;
    for (auto& [key, c] : a.terms) {
        int slots = 2 * n_ + l_;
        auto get = [&](const PbwKey& k, int s) -> int16_t {
            if (s < n_) return k.e[s];
            if (s < n_ + l_) return k.h[s - n_];
            return k.f[s - n_ - l_];
        };
        auto set = [&](PbwKey& k, int s, int16_t v) {
            if (s < n_)
                k.e[s] = v;
            else if (s < n_ + l_)
                k.h[s - n_] = v;
            else
                k.f[s - n_ - l_] = v;
        };
        PbwKey left, right;
        std::function<void(int)> rec = [&](int s) {
            if (s == slots) {
                auto& slot = out.terms[{left, right}];
                slot = fp_.add(slot, c);
                if (slot == 0) out.terms.erase({left, right});
                return;
            }
            int16_t total = get(key, s);
            for (int16_t u = 0; u <= total; ++u) {
                set(left, s, u);
                set(right, s, static_cast<int16_t>(total - u));
                rec(s + 1);
            }
            set(left, s, 0);
            set(right, s, 0);
        };
        rec(0);
    }
    return out;
}

int64_t Algebra::counit(const HyperElt& a) const {
    auto it = a.terms.find(PbwKey{});
    return it == a.terms.end() ? 0 : it->second;
}

HyperElt Algebra::antipode_key(const PbwKey& key) {
    if (auto it = antipode_cache_.find(key); it != antipode_cache_.end()) return it->second;
    HyperElt sf = one(), se = one(), sh = one();
    for (int k = n_ - 1; k >= 0; --k) {
        if (key.f[k] > 0) sf = mult(sf, scale(root_F(k, key.f[k]), key.f[k] % 2 ? -1 : 1));
        if (key.e[k] > 0) se = mult(se, scale(root_E(k, key.e[k]), key.e[k] % 2 ? -1 : 1));
    }
    for (int i = 0; i < l_; ++i) {
        int m = key.h[i];
        if (m == 0) continue;
        HyperElt s;
        for (int t = 0; t <= m; ++t) s = add(s, scale(Hbin(i, t), (m % 2 ? -1 : 1) * binom_int(m - 1, m - t)));
        sh = mult(sh, s);
    }
    HyperElt r = mult(sf, mult(sh, se));
    antipode_cache_.emplace(key, r);
    return r;
}

HyperElt Algebra::antipode(const HyperElt& a) {
    HyperElt out;
    for (auto& [k, c] : a.terms) out = add(out, scale(antipode_key(k), c));
    return out;
}

HyperElt Algebra::frobenius(const HyperElt& a) const {
    HyperElt out;
    int p = this->p();
    for (auto& [k, c] : a.terms) {
        PbwKey r;
        bool ok = true;
        for (int b = 0; b < n_ && ok; ++b) {
            ok = k.e[b] % p == 0 && k.f[b] % p == 0;
            r.e[b] = static_cast<int16_t>(k.e[b] / p);
            r.f[b] = static_cast<int16_t>(k.f[b] / p);
        }
        for (int i = 0; i < l_ && ok; ++i) {
            ok = k.h[i] % p == 0;
            r.h[i] = static_cast<int16_t>(k.h[i] / p);
        }
        if (ok) out.terms[r] = c;
    }
    return out;
}

HyperElt Algebra::atom_elt(const Atom& a, int stretch) const {
    int n = a.n * stretch;
    switch (a.kind) {
        case Atom::Kind::E: return E(a.i, n);
        case Atom::Kind::F: return F(a.i, n);
        case Atom::Kind::H: return Hbin(a.i, n);
    }
    return one();
}

HyperElt Algebra::word_product(const GenWord& w, int stretch) {
    HyperElt r = one();
    for (auto& a : w.atoms) r = mult(r, atom_elt(a, stretch));
    return r;
}

HyperElt Algebra::normalize(const GenWord& w) { return word_product(w, 1); }

HyperElt Algebra::fr_prime_word(const GenWord& w) {
    for (auto& a : w.atoms)
        if (a.kind != Atom::Kind::E) throw WrongAtomKind("Fr' accepts E atoms only");
    return word_product(w, p());
}

HyperElt Algebra::fr_prime_minus_word(const GenWord& w) {
    for (auto& a : w.atoms)
        if (a.kind != Atom::Kind::F) throw WrongAtomKind("Fr'- accepts F atoms only");
    return word_product(w, p());
}

HyperElt Algebra::fr_prime_zero_word(const GenWord& w) {
    for (auto& a : w.atoms)
        if (a.kind != Atom::Kind::H) throw WrongAtomKind("Fr'0 accepts H atoms only");
    return word_product(w, p());
}

HyperElt Algebra::fr_prime_pbw(const HyperElt& a, Side side) const {
    HyperElt out;
    for (auto& [k, c] : a.terms) {
        bool ok = side == Side::Plus ? k.e_only() : k.f_only();
        if (!ok) throw WrongTriangularPart("element is not in the requested triangular part");
        PbwKey r;
        for (int b = 0; b < n_; ++b) {
            r.e[b] = static_cast<int16_t>(k.e[b] * p());
            r.f[b] = static_cast<int16_t>(k.f[b] * p());
        }
        check_cap(r);
        out.terms[r] = c;
    }
    return out;
}

std::vector<GenWord> Algebra::words_of_weight(const RootVec& nu, Side side) const {
    std::vector<GenWord> out;
    Atom::Kind kind = side == Side::Plus ? Atom::Kind::E : Atom::Kind::F;
    GenWord cur;
    RootVec left = nu;
    std::function<void(int)> rec = [&](int last) {
        bool done = true;
        for (int v : left)
            if (v != 0) done = false;
        if (done) {
            out.push_back(cur);
            return;
        }
        for (int i = 0; i < l_; ++i) {
            if (i == last) continue;
            for (int n = 1; n <= left[i]; ++n) {
                cur.atoms.push_back(Atom{kind, i, n});
                left[i] -= n;
                rec(i);
                left[i] += n;
                cur.atoms.pop_back();
            }
        }
    };
    rec(-1);
    return out;
}

HyperElt Algebra::fr_prime_via_words(const HyperElt& a, Side side) {
    std::map<RootVec, HyperElt> by_weight;
    for (auto& [k, c] : a.terms) {
        bool ok = side == Side::Plus ? k.e_only() : k.f_only();
        if (!ok) throw WrongTriangularPart("element is not in the requested triangular part");
        RootVec nu = root_weight_of(k);
        for (auto& v : nu) v = std::abs(v);
        by_weight[nu].terms[k] = c;
    }
    auto fr = [&](const GenWord& w) { return side == Side::Plus ? fr_prime_word(w) : fr_prime_minus_word(w); };
    HyperElt out;
    for (auto& [nu, part] : by_weight) {
        auto words = words_of_weight(nu, side);
        std::vector<HyperElt> forms;
        std::map<PbwKey, int> row_of;
        for (auto& w : words) {
            forms.push_back(normalize(w));
            for (auto& [k, c] : forms.back().terms) row_of.emplace(k, 0);
        }
        for (auto& [k, c] : part.terms) row_of.emplace(k, 0);
        int r = 0;
        for (auto& [k, idx] : row_of) idx = r++;
        int ncols = static_cast<int>(words.size());
        FpMat m(r, FpVec(ncols, 0));
        for (int j = 0; j < ncols; ++j)
            for (auto& [k, c] : forms[j].terms) m[row_of[k]][j] = c;
        FpVec b(r, 0);
        for (auto& [k, c] : part.terms) b[row_of[k]] = c;
        auto x = solve(fp_, m, b, ncols);
        if (!x) throw ClosureFailure("element is not spanned by simple divided-power words");
        auto& checked = word_cache_[nu];
        if (!checked.second) {
            for (auto& rel : nullspace(fp_, m, ncols)) {
                HyperElt img;
                for (int j = 0; j < ncols; ++j)
                    if (rel[j] != 0) img = add(img, scale(fr(words[j]), rel[j]));
                if (!img.is_zero()) throw NonUniqueForm("Fr' does not respect a relation among words");
            }
            checked.second = true;
        }
        for (int j = 0; j < ncols; ++j)
            if ((*x)[j] != 0) out = add(out, scale(fr(words[j]), (*x)[j]));
    }
    return out;
}

HyperElt Algebra::mu0() {
    if (mu0_ready_) return mu0_;
    if (!is_good_prime(rs_, p())) throw BadPrime("p = " + std::to_string(p()) + " is not good");
    int p = this->p();
    HyperElt r = one();
    for (int i = 0; i < l_; ++i) {
        HyperElt s;
        for (int t = 0; t < p; ++t) s = add(s, scale(Hbin(i, t), (p - 1 - t) % 2 ? -1 : 1));
        r = mult(r, s);
    }
    if (mult(r, r) != r) throw std::logic_error("mu0 is not idempotent");
    mu0_ = r;
    mu0_ready_ = true;
    return r;
}

std::vector<HyperElt> Algebra::phi_factors(const GenWord& w) {
    HyperElt m = mu0();
    std::vector<HyperElt> out{m};
    for (auto& a : w.atoms) {
        out.push_back(atom_elt(a, p()));
        out.push_back(m);
    }
    return out;
}

HyperElt Algebra::phi_word(const GenWord& w) {
    HyperElt m = mu0();
    HyperElt r = m;
    for (auto& a : w.atoms) r = mult(r, mult(atom_elt(a, p()), m));
    return r;
}

int64_t Algebra::character(const Weight& lambda, const HyperElt& h) const {
    int64_t out = 0;
    for (auto& [k, c] : h.terms) {
        if (!k.h_only()) throw NotTorusPart("character is defined on the torus part only");
        int64_t v = c;
        for (int i = 0; i < l_; ++i) v = fp_.mul(v, fp_.binom(lambda.coords[i], k.h[i]));
        out = fp_.add(out, v);
    }
    return out;
}

HyperElt Algebra::e0() const {
    PbwKey k;
    for (int b = 0; b < n_; ++b) k.e[b] = static_cast<int16_t>(p() - 1);
    return monomial(k);
}

HyperElt Algebra::f0() const {
    PbwKey k;
    for (int b = 0; b < n_; ++b) k.f[b] = static_cast<int16_t>(p() - 1);
    return monomial(k);
}

std::vector<HyperElt> Algebra::small_spanning_set(Part part) const {
    int slots = part == Part::Torus ? l_ : n_;
    std::vector<HyperElt> out;
    std::vector<int> v(slots, 0);
    while (true) {
        PbwKey k;
        for (int s = 0; s < slots; ++s) {
            auto x = static_cast<int16_t>(v[s]);
            if (part == Part::N)
                k.e[s] = x;
            else if (part == Part::NMinus)
                k.f[s] = x;
            else
                k.h[s] = x;
        }
        out.push_back(monomial(k));
        int s = 0;
        while (s < slots && ++v[s] == p()) v[s++] = 0;
        if (s == slots) break;
    }
    return out;
}

HyperElt Algebra::adjoint(const HyperElt& x, const HyperElt& y) {
    for (auto& [k, c] : x.terms)
        if (k.has_f()) throw WrongTriangularPart("adjoint action needs a Borel element");
    for (auto& [k, c] : y.terms)
        if (!k.e_only()) throw WrongTriangularPart("adjoint action is taken on the positive part");
    HyperElt out;
    for (auto& [kk, c] : comult(x).terms) {
        HyperElt t = mult(mult(monomial(kk.first), y), antipode_key(kk.second));
        out = add(out, scale(t, c));
    }
    return out;
}

const HyperElt& Algebra::adjoint_key(const PbwKey& x, const PbwKey& y) {
    auto key = std::make_pair(x, y);
    if (auto it = adjoint_cache_.find(key); it != adjoint_cache_.end()) return it->second;
    HyperElt r = adjoint(monomial(x), monomial(y));
    return adjoint_cache_.emplace(key, std::move(r)).first->second;
}

RootVec Algebra::root_weight_of(const PbwKey& k) const {
    RootVec r(l_, 0);
    for (int b = 0; b < n_; ++b)
        for (int i = 0; i < l_; ++i) r[i] += (k.e[b] - k.f[b]) * rs_.positive_roots[b][i];
    return r;
}

Weight Algebra::weight_of(const PbwKey& k) const { return rs_.root_weight(root_weight_of(k)); }

std::string Algebra::to_text(const HyperElt& a) const {
    std::ostringstream os;
    auto list = [&](const char* tag, const int16_t* v, int n) {
        os << tag << '[';
        for (int s = 0; s < n; ++s) os << (s ? "," : "") << v[s];
        os << ']';
    };
    for (auto& [k, c] : a.terms) {
        list("E", k.e.data(), n_);
        os << ' ';
        list("H", k.h.data(), l_);
        os << ' ';
        list("F", k.f.data(), n_);
        os << " : " << c << '\n';
    }
    return os.str();
}

HyperElt Algebra::from_text(const std::string& s) const {
    HyperElt out;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        PbwKey k;
        size_t pos = 0;
        auto read_list = [&](char tag, int16_t* v, int n) {
            while (pos < line.size() && line[pos] == ' ') ++pos;
            if (line.compare(pos, 2, std::string{tag, '['}) != 0) throw ParseError("bad term: " + line);
            pos += 2;
            for (int t = 0; t < n; ++t) {
                size_t used = 0;
                int val = std::stoi(line.substr(pos), &used);
                if (val < 0) throw ParseError("negative exponent: " + line);
                v[t] = static_cast<int16_t>(val);
                pos += used;
                char want = t + 1 < n ? ',' : ']';
                if (pos >= line.size() || line[pos] != want) throw ParseError("bad term: " + line);
                ++pos;
            }
        };
        try {
            read_list('E', k.e.data(), n_);
            read_list('H', k.h.data(), l_);
            read_list('F', k.f.data(), n_);
            auto colon = line.find(':', pos);
            if (colon == std::string::npos) throw ParseError("missing coefficient: " + line);
            int64_t c = std::stoll(line.substr(colon + 1));
            out = add(out, monomial(k, c));
        } catch (const std::invalid_argument&) {
            throw ParseError("bad number in: " + line);
        } catch (const std::out_of_range&) {
            throw ParseError("number out of range in: " + line);
        }
    }
    return out;
}

}  // namespace frsplit
