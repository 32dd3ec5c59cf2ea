#include "frsplit/steinberg.hpp"

#include <deque>
#include <functional>

namespace frsplit {

namespace {

RootVec top_weight(const RootSystem& rs, int p) {
    RootVec top(rs.rank, 0);
    for (auto& r : rs.positive_roots)
        for (int i = 0; i < rs.rank; ++i) top[i] += (p - 1) * r[i];
    return top;
}

std::vector<RootVec> box(const RootVec& top) {
    std::vector<RootVec> out;
    RootVec cur(top.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == top.size()) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= top[i]; ++v) {
            cur[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

RootVec add_vec(const RootVec& a, const RootVec& b) {
    RootVec r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

int64_t lowest_character(const Fp& fp, const Weight& low, const PbwKey& k, int rank) {
    int64_t v = 1;
    for (int i = 0; i < rank; ++i) v = fp.mul(v, fp.binom(low.coords[i], k.h[i]));
    return v;
}

const std::map<Exps, int64_t>& verma_lower(Algebra& alg, StModule& st, int beta, int m, const Exps& c) {
    auto key = std::tuple{beta, m, c};
    auto it = st.verma_cache.find(key);
    if (it != st.verma_cache.end()) return it->second;
    const Fp& fp = alg.field();
    const auto& rs = alg.roots();
    Weight low = rs.rho() * (-(st.p - 1));
    PbwKey kf, ke;
    kf.f[beta] = static_cast<int16_t>(m);
    ke.e = c;
    std::map<Exps, int64_t> out;
    for (auto& [k, co] : alg.mult_keys(kf, ke)) {
        if (k.has_f()) continue;
        int64_t v = fp.mul(co, lowest_character(fp, low, k, rs.rank));
        if (!v) continue;
        auto& slot = out[k.e];
        slot = fp.add(slot, v);
        if (!slot) out.erase(k.e);
    }
    return st.verma_cache.emplace(key, std::move(out)).first->second;
}

/// key . E^(c) f_- in the Verma module.
std::map<Exps, int64_t> verma_act(Algebra& alg, StModule& st, const PbwKey& key, const Exps& c) {
    const Fp& fp = alg.field();
    const auto& rs = alg.roots();
    int n = rs.num_positive();
    std::map<Exps, int64_t> cur{{c, 1}};
    for (int b = n - 1; b >= 0 && !cur.empty(); --b) {
        if (!key.f[b]) continue;
        std::map<Exps, int64_t> next;
        for (auto& [x, v] : cur)
            for (auto& [y, w] : verma_lower(alg, st, b, key.f[b], x)) {
                auto& slot = next[y];
                slot = fp.add(slot, fp.mul(v, w));
            }
        std::erase_if(next, [](auto& kv) { return kv.second == 0; });
        cur = std::move(next);
    }
    if (key.has_h()) {
        Weight low = rs.rho() * (-(st.p - 1));
        for (auto& [x, v] : cur) {
            Weight w = low + rs.root_weight(exps_weight(rs, x));
            for (int i = 0; i < rs.rank; ++i) v = fp.mul(v, fp.binom(w.coords[i], key.h[i]));
        }
        std::erase_if(cur, [](auto& kv) { return kv.second == 0; });
    }
    if (!key.has_e()) return cur;
    PbwKey ke;
    ke.e = key.e;
    std::map<Exps, int64_t> out;
    for (auto& [x, v] : cur) {
        PbwKey kx;
        kx.e = x;
        for (auto& [k, w] : alg.mult_keys(ke, kx)) {
            auto& slot = out[k.e];
            slot = fp.add(slot, fp.mul(v, w));
        }
    }
    std::erase_if(out, [](auto& kv) { return kv.second == 0; });
    return out;
}

const FpVec& act_key(Algebra& alg, StModule& st, const PbwKey& key, int s) {
    auto& slot = st.act_cache[key];
    auto it = slot.find(s);
    if (it != slot.end()) return it->second;
    const Fp& fp = alg.field();
    FpVec out(st.dim, 0);
    RootVec nu = add_vec(st.nu_of[s], alg.root_weight_of(key));
    auto bit = st.blocks.find(nu);
    if (bit != st.blocks.end()) {
        const auto& blk = bit->second;
        FpVec a(blk.keys.size(), 0);
        for (auto& [e, c] : verma_act(alg, st, key, st.rep[s])) a[blk.key_index.at(e)] = c;
        for (size_t j = 0; j < blk.reduce.size(); ++j) {
            int64_t v = 0;
            for (size_t x = 0; x < a.size(); ++x)
                if (a[x]) v = fp.add(v, fp.mul(blk.reduce[j][x], a[x]));
            out[blk.start + j] = v;
        }
    }
    return slot.emplace(s, std::move(out)).first->second;
}

FpVec mat_vec(const Fp& fp, const FpMat& m, const FpVec& v) {
    FpVec out(m.size(), 0);
    for (size_t c = 0; c < v.size(); ++c)
        if (v[c])
            for (size_t r = 0; r < m.size(); ++r)
                if (m[r][c]) out[r] = fp.add(out[r], fp.mul(m[r][c], v[c]));
    return out;
}

bool is_zero_vec(const FpVec& v) {
    for (auto x : v)
        if (x) return false;
    return true;
}

/// Pi_{(p-1)N}(Y) written in the graded dual basis.
HyperElt project_top(Algebra& alg, const GradingMap& gm, const HyperElt& y) {
    const auto& rs = alg.roots();
    int top = (alg.p() - 1) * alg.num_positive();
    std::map<RootVec, bool> seen;
    HyperElt out;
    for (auto& [k, c] : y.terms) {
        if (!k.e_only()) throw WrongTriangularPart("Y must lie in the positive part");
        RootVec nu = exps_weight(rs, k.e);
        if (seen[nu]) continue;
        seen[nu] = true;
        for (auto& b : exps_of_weight(rs, nu)) {
            if (total_degree(b) != top) continue;
            int64_t coeff = pair(alg, gm.from_hat(dual_monomial(Side::Plus, b)), y);
            if (coeff) out = alg.add(out, alg.scale(graded_dual_element(alg, gm, b), coeff));
        }
    }
    return out;
}

std::vector<std::array<int, 3>> solving_generators(const StModule& st, int rank) {
    std::vector<std::array<int, 3>> out;
    for (auto& [g, m] : st.gen_actions) {
        int n = g[2];
        while (n % st.p == 0) n /= st.p;
        if (n == 1 && g[1] < rank) out.push_back(g);
    }
    return out;
}

}  // namespace

FpVec st_basis(const StModule& st, int s) {
    FpVec v(st.dim, 0);
    v[s] = 1;
    return v;
}

StModule build_st(Algebra& alg, int cap_mult, int64_t size_bound) {
    const auto& rs = alg.roots();
    const Fp& fp = alg.field();
    int p = alg.p();
    if (!is_good_prime(rs, p)) throw BadPrime("p is not good for the root system");
    int64_t expected = 1;
    for (int b = 0; b < rs.num_positive(); ++b) expected *= p;
    if (expected > size_bound) throw SizeBound("p^N exceeds the configured size bound");

    StModule st;
    st.p = p;
    RootVec top = top_weight(rs, p);
    int need = p * cap_mult - 1;
    for (int v : top) need = std::max(need, v);
    if (alg.cap() < need) alg.set_cap(need);
    Weight low = rs.rho() * (-(p - 1));

    for (auto& nu : box(top)) {
        auto keys = exps_of_weight(rs, nu);
        int m = static_cast<int>(keys.size());
        if (m == 0) continue;
        // g[b][c]: coefficient of f_- in F^(b) E^(c) f_-
        FpMat g(m, FpVec(m, 0));
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                PbwKey kf;
                kf.f = keys[b];
                auto img = verma_act(alg, st, kf, keys[c]);
                auto it = img.find(Exps{});
                if (it != img.end()) g[b][c] = it->second;
            }
        std::vector<int> cols, rows;
        Echelon ce(fp, m);
        for (int c = 0; c < m; ++c) {
            FpVec col(m);
            for (int b = 0; b < m; ++b) col[b] = g[b][c];
            if (ce.insert(col)) cols.push_back(c);
        }
        int r = static_cast<int>(cols.size());
        if (r == 0) continue;
        Echelon re(fp, r);
        for (int b = 0; b < m; ++b) {
            FpVec row(r);
            for (int j = 0; j < r; ++j) row[j] = g[b][cols[j]];
            if (re.insert(row)) rows.push_back(b);
        }
        FpMat sq(r, FpVec(r));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) sq[i][j] = g[rows[i]][cols[j]];
        auto inv = inverse(fp, sq);
        if (!inv) throw ClosureFailure("Shapovalov block is singular on its pivots");
        StModule::Block blk;
        blk.keys = keys;
        for (int x = 0; x < m; ++x) blk.key_index[keys[x]] = x;
        blk.start = st.dim;
        blk.reduce.assign(r, FpVec(m, 0));
        for (int i = 0; i < r; ++i)
            for (int x = 0; x < m; ++x) {
                int64_t v = 0;
                for (int j = 0; j < r; ++j) v = fp.add(v, fp.mul((*inv)[i][j], g[rows[j]][x]));
                blk.reduce[i][x] = v;
            }
        for (int j = 0; j < r; ++j) {
            st.weights.push_back(low + rs.root_weight(nu));
            st.nu_of.push_back(nu);
            st.rep.push_back(keys[cols[j]]);
        }
        st.dim += r;
        st.blocks.emplace(nu, std::move(blk));
    }

    auto lo = st.blocks.find(RootVec(rs.rank, 0));
    auto hi = st.blocks.find(top);
    if (lo == st.blocks.end() || hi == st.blocks.end() || lo->second.reduce.size() != 1 ||
        hi->second.reduce.size() != 1)
        throw ClosureFailure("extremal weight spaces are not one-dimensional");
    st.f_minus = lo->second.start;
    st.f_plus = hi->second.start;

    for (int kind = 0; kind < 2; ++kind)
        for (int i = 0; i < rs.rank; ++i)
            for (int n = 1; n < p * cap_mult; ++n) {
                HyperElt x = kind == 0 ? alg.E(i, n) : alg.F(i, n);
                const PbwKey& key = x.terms.begin()->first;
                FpMat mat(st.dim, FpVec(st.dim, 0));
                for (int s = 0; s < st.dim; ++s) {
                    const FpVec& col = act_key(alg, st, key, s);
                    for (int r = 0; r < st.dim; ++r) mat[r][s] = col[r];
                }
                st.gen_actions.emplace(std::array<int, 3>{kind, i, n}, std::move(mat));
            }

    Echelon span(fp, st.dim);
    std::deque<FpVec> queue;
    span.insert(st_basis(st, st.f_minus));
    queue.push_back(st_basis(st, st.f_minus));
    while (!queue.empty()) {
        FpVec v = std::move(queue.front());
        queue.pop_front();
        for (auto& [g, m] : st.gen_actions) {
            FpVec u = mat_vec(fp, m, v);
            if (!is_zero_vec(u) && span.insert(u)) queue.push_back(std::move(u));
        }
    }
    if (span.rank() != st.dim) throw ClosureFailure("generators do not reach every basis vector from f_-");
    return st;
}

FpVec st_act(Algebra& alg, StModule& st, const HyperElt& x, const FpVec& v) {
    const Fp& fp = alg.field();
    FpVec out(st.dim, 0);
    for (auto& [k, c] : x.terms)
        for (int s = 0; s < st.dim; ++s) {
            if (!v[s]) continue;
            const FpVec& col = act_key(alg, st, k, s);
            int64_t f = fp.mul(c, v[s]);
            for (int r = 0; r < st.dim; ++r)
                if (col[r]) out[r] = fp.add(out[r], fp.mul(f, col[r]));
        }
    return out;
}

int64_t eta_pair(const StModule& st, const Fp& fp, const FpVec& v, const FpVec& w) {
    int64_t out = 0;
    for (int s = 0; s < st.dim; ++s) {
        if (!v[s]) continue;
        for (int t = 0; t < st.dim; ++t)
            if (w[t] && st.eta[s][t]) out = fp.add(out, fp.mul(v[s], fp.mul(st.eta[s][t], w[t])));
    }
    return out;
}

std::vector<FpMat> invariant_forms(Algebra& alg, const StModule& st) {
    const Fp& fp = alg.field();
    const auto& rs = alg.roots();
    RootVec top = top_weight(rs, st.p);
    std::map<RootVec, std::vector<int>> by_nu;
    for (int s = 0; s < st.dim; ++s) by_nu[st.nu_of[s]].push_back(s);
    auto opposite = [&](const RootVec& nu) {
        RootVec r(nu.size());
        for (size_t i = 0; i < nu.size(); ++i) r[i] = top[i] - nu[i];
        return r;
    };
    std::map<std::pair<int, int>, int> unknown;
    for (int s = 0; s < st.dim; ++s) {
        auto it = by_nu.find(opposite(st.nu_of[s]));
        if (it == by_nu.end()) continue;
        for (int t : it->second) unknown.emplace(std::pair{s, t}, static_cast<int>(unknown.size()));
    }
    int nu_count = static_cast<int>(unknown.size());

    // eta(X v_s, v_t) - (-1)^n eta(v_s, X v_t) = 0
    Echelon eqs(fp, nu_count);
    for (auto& g : solving_generators(st, rs.rank)) {
        const FpMat& m = st.gen_actions.at(g);
        int64_t sign = g[2] % 2 ? fp.neg(1) : 1;
        RootVec shift(rs.rank, 0);
        shift[g[1]] = (g[0] == 0 ? 1 : -1) * g[2];
        for (int s = 0; s < st.dim; ++s) {
            RootVec target = opposite(add_vec(st.nu_of[s], shift));
            auto it = by_nu.find(target);
            if (it == by_nu.end()) continue;
            for (int t : it->second) {
                FpVec row(nu_count, 0);
                bool any = false;
                for (int r = 0; r < st.dim; ++r) {
                    if (m[r][s]) {
                        int u = unknown.at({r, t});
                        row[u] = fp.add(row[u], m[r][s]);
                        any = true;
                    }
                    if (m[r][t]) {
                        int u = unknown.at({s, r});
                        row[u] = fp.sub(row[u], fp.mul(sign, m[r][t]));
                        any = true;
                    }
                }
                if (any) eqs.insert(row);
            }
        }
    }
    std::vector<FpMat> out;
    for (auto& v : nullspace(fp, eqs.rows(), nu_count)) {
        FpMat form(st.dim, FpVec(st.dim, 0));
        for (auto& [st_pair, u] : unknown) form[st_pair.first][st_pair.second] = v[u];
        out.push_back(std::move(form));
    }
    return out;
}

bool form_invariant_under(const Fp& fp, const StModule& st, const FpMat& form, const std::array<int, 3>& g) {
    const FpMat& m = st.gen_actions.at(g);
    int64_t sign = g[2] % 2 ? fp.neg(1) : 1;
    for (int a = 0; a < st.dim; ++a)
        for (int b = 0; b < st.dim; ++b) {
            int64_t lhs = 0, rhs = 0;
            for (int r = 0; r < st.dim; ++r) {
                if (m[r][a] && form[r][b]) lhs = fp.add(lhs, fp.mul(m[r][a], form[r][b]));
                if (form[a][r] && m[r][b]) rhs = fp.add(rhs, fp.mul(form[a][r], m[r][b]));
            }
            if (lhs != fp.mul(sign, rhs)) return false;
        }
    return true;
}

int64_t eta_normalization(Algebra& alg, StModule& st) {
    auto u = st_act(alg, st, alg.f0(), st_basis(st, st.f_plus));
    auto w = st_act(alg, st, alg.e0(), st_basis(st, st.f_minus));
    return eta_pair(st, alg.field(), u, w);
}

void build_eta(Algebra& alg, StModule& st) {
    const Fp& fp = alg.field();
    auto forms = invariant_forms(alg, st);
    if (forms.size() != 1)
        throw NonUniqueForm("invariant pairings form a space of dimension " + std::to_string(forms.size()));
    st.eta = forms[0];
    for (auto& [g, m] : st.gen_actions)
        if (!form_invariant_under(fp, st, st.eta, g))
            throw NonUniqueForm("pairing is not invariant under a stored generator");
    if (rank(fp, st.eta) != st.dim) throw NonUniqueForm("invariant pairing is degenerate");

    st.has_eta = true;
    int64_t val = eta_normalization(alg, st);
    if (!val) throw NonUniqueForm("eta(F0 f_+, E0 f_-) vanishes");
    int64_t inv = fp.inv(val);
    for (auto& row : st.eta)
        for (auto& x : row) x = fp.mul(x, inv);
}

int64_t psi_eval_general(Algebra& alg, StModule& st, const GradingMap& gm, const FpVec& v, const FpVec& w,
                         const HyperElt& x, const HyperElt& y) {
    const Fp& fp = alg.field();
    for (auto& [k, c] : x.terms)
        if (!k.f_only()) throw WrongTriangularPart("X must lie in the negative part");
    HyperElt py = project_top(alg, gm, y);
    int64_t out = 0;
    for (auto& [kk, c] : alg.comult(x).terms) {
        auto left = st_act(alg, st, alg.monomial(kk.first), v);
        auto right = st_act(alg, st, py, st_act(alg, st, alg.monomial(kk.second), w));
        out = fp.add(out, fp.mul(c, eta_pair(st, fp, left, right)));
    }
    return out;
}

int64_t psi_eval(Algebra& alg, StModule& st, const GradingMap& gm, const HyperElt& x, const HyperElt& y) {
    for (auto& [k, c] : x.terms)
        if (!k.f_only()) throw WrongTriangularPart("X must lie in the negative part");
    HyperElt py = project_top(alg, gm, y);
    auto left = st_act(alg, st, x, st_basis(st, st.f_plus));
    auto right = st_act(alg, st, py, st_basis(st, st.f_minus));
    return eta_pair(st, alg.field(), left, right);
}

int64_t psi_bar(Algebra& alg, StModule& st, const FpVec& v, const FpVec& w, const HyperElt& x) {
    return eta_pair(st, alg.field(), v, st_act(alg, st, x, w));
}

namespace {

GradedSection pair_extremal(Algebra& alg, StModule& st, const GradingMap& gm, int y_degree) {
    const Fp& fp = alg.field();
    const auto& rs = alg.roots();
    GradedSection out;
    out.lambda = rs.zero_weight();
    FpVec fminus = st_basis(st, st.f_minus);
    for (auto& [nu, blk] : st.blocks) {
        for (auto& b : blk.keys) {
            if (y_degree >= 0 && total_degree(b) != y_degree) continue;
            auto wv = st_act(alg, st, graded_dual_element(alg, gm, b), fminus);
            if (is_zero_vec(wv)) continue;
            for (auto& a : blk.keys) {
                PbwKey kx;
                kx.f = a;
                int64_t c = eta_pair(st, fp, act_key(alg, st, kx, st.f_plus), wv);
                if (c) out.terms[SectionKey{a, b}] = c;
            }
        }
    }
    return out;
}

}  // namespace

GradedSection psi_section(Algebra& alg, StModule& st, const GradingMap& gm, int max_degree) {
    int top = (alg.p() - 1) * alg.num_positive();
    if (max_degree < top) throw TruncationTooSmall("truncation below the degree of psi");
    auto out = pair_extremal(alg, st, gm, top);
    for (auto& [k, c] : out.terms)
        if (total_degree(k.x) > max_degree) throw TruncationTooSmall("psi has x-degree beyond the truncation");
    return out;
}

GradedSection psi_hat(Algebra& alg, StModule& st, const GradingMap& gm) { return pair_extremal(alg, st, gm, -1); }

nlohmann::json to_json(const StModule& st) {
    auto sparse = [](const FpMat& m) {
        nlohmann::json out = nlohmann::json::array();
        for (size_t r = 0; r < m.size(); ++r)
            for (size_t c = 0; c < m[r].size(); ++c)
                if (m[r][c]) out.push_back({r, c, m[r][c]});
        return out;
    };
    nlohmann::json j;
    j["p"] = st.p;
    j["dim"] = st.dim;
    j["basis_weights"] = nlohmann::json::array();
    for (auto& w : st.weights) j["basis_weights"].push_back(w.coords);
    j["f_plus_index"] = st.f_plus;
    j["f_minus_index"] = st.f_minus;
    j["gen_actions"] = nlohmann::json::array();
    for (auto& [g, m] : st.gen_actions)
        j["gen_actions"].push_back({{"generator", g[0] == 0 ? "E" : "F"}, {"i", g[1] + 1}, {"n", g[2]}, {"entries", sparse(m)}});
    if (st.has_eta) j["eta"] = sparse(st.eta);
    return j;
}

}  // namespace frsplit
