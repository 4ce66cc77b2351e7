#pragma once

#include "redlab/gadgets.hpp"
#include "redlab/lc.hpp"
#include "redlab/rng.hpp"

namespace redlab {

// ---- balancing regularization ----

// copy layout of the balanced instance: source vertex w splits into d(w) copies, every
// copy ends up with degree exactly K = lcm(1..max degree)^2
struct BalanceShape {
    int source_nU = 0;
    int source_nV = 0;
    int64_t K = 0;
    std::vector<int> left_deg, right_deg;
    std::vector<int> left_offset, right_offset;

    int left_copy(int u, int i) const { return left_offset[u] + i; }
    int right_copy(int v, int j) const { return right_offset[v] + j; }
};

struct BalanceResult {
    LabelCoverInstance instance;
    BalanceShape shape;
};

inline BalanceResult balance(const LabelCoverInstance& I, double budget = 2e7) {
    I.validate();
    BalanceShape s;
    s.source_nU = I.nU;
    s.source_nV = I.nV;
    s.left_deg = I.left_degrees();
    s.right_deg = I.right_degrees();
    int max_deg = 0;
    for (int d : s.left_deg) max_deg = std::max(max_deg, d);
    for (int d : s.right_deg) max_deg = std::max(max_deg, d);
    for (int d : s.left_deg) require(d > 0, "balance: isolated left vertex");
    for (int d : s.right_deg) require(d > 0, "balance: isolated right vertex");
    int64_t root = lcm_upto(max_deg);
    s.K = root * root;
    require(static_cast<double>(s.K) * static_cast<double>(I.edges.size()) <= budget,
            "balance: edge budget exceeded");

    s.left_offset.assign(I.nU, 0);
    s.right_offset.assign(I.nV, 0);
    int nu = 0, nv = 0;
    for (int u = 0; u < I.nU; u++) {
        s.left_offset[u] = nu;
        nu += s.left_deg[u];
    }
    for (int v = 0; v < I.nV; v++) {
        s.right_offset[v] = nv;
        nv += s.right_deg[v];
    }

    BalanceResult out;
    out.shape = s;
    LabelCoverInstance& J = out.instance;
    J.nU = nu;
    J.nV = nv;
    J.sigmaU = I.sigmaU;
    J.sigmaV = I.sigmaV;
    for (int u = 0; u < I.nU; u++)
        for (int i = 0; i < s.left_deg[u]; i++) J.predicates.push_back(I.predicates[u]);
    for (size_t e = 0; e < I.edges.size(); e++) {
        auto [u, v] = I.edges[e];
        int64_t copies = s.K / (static_cast<int64_t>(s.left_deg[u]) * s.right_deg[v]);
        for (int i = 0; i < s.left_deg[u]; i++)
            for (int j = 0; j < s.right_deg[v]; j++)
                for (int64_t t = 0; t < copies; t++) {
                    J.edges.emplace_back(s.left_copy(u, i), s.right_copy(v, j));
                    J.projections.push_back(I.projections[e]);
                }
    }
    J.validate();
    return out;
}

// project an assignment on the balanced instance back through one uniform copy choice
// per source vertex
inline Assignment balance_project_choices(const BalanceShape& s, const Assignment& pi_hat,
                                          const std::vector<int>& left_choice,
                                          const std::vector<int>& right_choice) {
    Assignment out;
    out.left.resize(s.source_nU);
    out.right.resize(s.source_nV);
    for (int u = 0; u < s.source_nU; u++) out.left[u] = pi_hat.left[s.left_copy(u, left_choice[u])];
    for (int v = 0; v < s.source_nV; v++) out.right[v] = pi_hat.right[s.right_copy(v, right_choice[v])];
    return out;
}

inline Assignment balance_project(const BalanceShape& s, const Assignment& pi_hat, uint64_t seed) {
    SplitMix64 rng = task_stream(seed, "balance-project");
    std::vector<int> lc(s.source_nU), rc(s.source_nV);
    for (int u = 0; u < s.source_nU; u++) lc[u] = rng.below_int(s.left_deg[u]);
    for (int v = 0; v < s.source_nV; v++) rc[v] = rng.below_int(s.right_deg[v]);
    return balance_project_choices(s, pi_hat, lc, rc);
}

// exact expected source value of the projected assignment; per edge the two copy
// choices are independent and uniform
inline rat balance_expected_value(const LabelCoverInstance& I, const BalanceShape& s,
                                  const Assignment& pi_hat) {
    require(!I.edges.empty(), "balance_expected_value: no edges");
    rat total = 0;
    for (size_t e = 0; e < I.edges.size(); e++) {
        auto [u, v] = I.edges[e];
        int64_t sat = 0;
        for (int i = 0; i < s.left_deg[u]; i++)
            for (int j = 0; j < s.right_deg[v]; j++) {
                int a = pi_hat.left[s.left_copy(u, i)];
                int b = pi_hat.right[s.right_copy(v, j)];
                sat += I.predicates[u][a] && I.projections[e][a] == b;
            }
        total += rat(sat, static_cast<int64_t>(s.left_deg[u]) * s.right_deg[v]);
    }
    return total / rat(static_cast<int64_t>(I.edges.size()));
}

// exact expected Hamming distance between coupled projections of two assignments on
// the balanced instance (shared copy choices)
inline rat balance_coupled_expected_hamming(const BalanceShape& s, const Assignment& a,
                                            const Assignment& b) {
    rat total = 0;
    for (int u = 0; u < s.source_nU; u++) {
        int differ = 0;
        for (int i = 0; i < s.left_deg[u]; i++)
            differ += a.left[s.left_copy(u, i)] != b.left[s.left_copy(u, i)];
        total += rat(differ, s.left_deg[u]);
    }
    for (int v = 0; v < s.source_nV; v++) {
        int differ = 0;
        for (int j = 0; j < s.right_deg[v]; j++)
            differ += a.right[s.right_copy(v, j)] != b.right[s.right_copy(v, j)];
        total += rat(differ, s.right_deg[v]);
    }
    return total;
}

// ---- set cover ----

struct SetCoverInstance {
    int universe = 0;                          // ground elements are 0..universe-1
    std::vector<std::vector<uint8_t>> sets;    // membership masks over the ground set

    int num_sets() const { return static_cast<int>(sets.size()); }

    void validate() const {
        require(universe >= 1, "set_cover: empty ground set");
        for (const auto& s : sets)
            require(static_cast<int>(s.size()) == universe, "set_cover: membership mask size");
    }

    int set_size(int i) const {
        int n = 0;
        for (uint8_t b : sets[i]) n += b;
        return n;
    }

    int max_set_size() const {
        int best = 0;
        for (int i = 0; i < num_sets(); i++) best = std::max(best, set_size(i));
        return best;
    }

    int max_frequency() const {
        int best = 0;
        for (int e = 0; e < universe; e++) {
            int f = 0;
            for (const auto& s : sets) f += s[e];
            best = std::max(best, f);
        }
        return best;
    }
};

// index layout of the label-cover-to-set-cover reduction: right-label sets first
struct ScLayout {
    int nU, nV, sigmaU, sigmaV, nE, B;

    explicit ScLayout(const LabelCoverInstance& I, int universe_b)
        : nU(I.nU), nV(I.nV), sigmaU(I.sigmaU), sigmaV(I.sigmaV),
          nE(static_cast<int>(I.edges.size())), B(universe_b) {}

    int right_set(int v, int x) const { return v * sigmaV + x; }
    int left_set(int u, int y) const { return nV * sigmaV + u * sigmaU + y; }
    int ground(int e, int b) const { return e * B + b; }
    int num_sets() const { return nV * sigmaV + nU * sigmaU; }
};

// T_SC: ground set E x B; the set of (v, x) covers {e} x C_x over incident edges, the
// set of (u, y) covers {e} x complement(C_{f_e(y)}) when the predicate accepts y
inline SetCoverInstance sc_transform(const LabelCoverInstance& I, const SetSystem& S) {
    I.validate();
    require(S.m() == I.sigmaV, "sc_transform: set system rows must match the right alphabet");
    ScLayout L(I, S.universe);
    SetCoverInstance J;
    J.universe = L.nE * L.B;
    J.sets.assign(L.num_sets(), std::vector<uint8_t>(J.universe, 0));
    for (int e = 0; e < L.nE; e++) {
        auto [u, v] = I.edges[e];
        for (int x = 0; x < I.sigmaV; x++) {
            auto& row = J.sets[L.right_set(v, x)];
            for (int b = 0; b < L.B; b++)
                if (S.sets[x][b]) row[L.ground(e, b)] = 1;
        }
        for (int y = 0; y < I.sigmaU; y++) {
            if (!I.predicates[u][y]) continue;
            auto& row = J.sets[L.left_set(u, y)];
            int fx = I.projections[e][y];
            for (int b = 0; b < L.B; b++)
                if (!S.sets[fx][b]) row[L.ground(e, b)] = 1;
        }
    }
    return J;
}

inline bool sc_covers(const SetCoverInstance& J, const std::vector<uint8_t>& pick) {
    require(static_cast<int>(pick.size()) == J.num_sets(), "sc_covers: pick size mismatch");
    std::vector<uint8_t> hit(J.universe, 0);
    for (int i = 0; i < J.num_sets(); i++)
        if (pick[i])
            for (int e = 0; e < J.universe; e++) hit[e] |= J.sets[i][e];
    for (uint8_t h : hit)
        if (!h) return false;
    return true;
}

// the planted cover: the sets of (v, pi(v)) and (u, pi(u))
inline std::vector<uint8_t> sc_planted_pick(const LabelCoverInstance& I, const SetSystem& S,
                                            const Assignment& pi) {
    ScLayout L(I, S.universe);
    std::vector<uint8_t> pick(L.num_sets(), 0);
    for (int v = 0; v < I.nV; v++) pick[L.right_set(v, pi.right[v])] = 1;
    for (int u = 0; u < I.nU; u++) pick[L.left_set(u, pi.left[u])] = 1;
    return pick;
}

// label slices induced by a selection: predicate-accepted picked labels on the left,
// picked labels on the right
inline std::vector<int> sc_left_slice(const LabelCoverInstance& I, const ScLayout& L,
                                      const std::vector<uint8_t>& pick, int u) {
    std::vector<int> out;
    for (int y = 0; y < I.sigmaU; y++)
        if (pick[L.left_set(u, y)] && I.predicates[u][y]) out.push_back(y);
    return out;
}

inline std::vector<int> sc_right_slice(const LabelCoverInstance& I, const ScLayout& L,
                                       const std::vector<uint8_t>& pick, int v) {
    std::vector<int> out;
    for (int x = 0; x < I.sigmaV; x++)
        if (pick[L.right_set(v, x)]) out.push_back(x);
    return out;
}

// R_SC: independent uniform picks from the slices, label 0 when a slice is empty.
// Each vertex draws from its own stream, so toggling one selected index perturbs at
// most the coordinate owning that index.
inline Assignment sc_recover(const LabelCoverInstance& I, const SetSystem& S,
                             const std::vector<uint8_t>& pick, uint64_t seed) {
    ScLayout L(I, S.universe);
    require(static_cast<int>(pick.size()) == L.num_sets(), "sc_recover: pick size mismatch");
    Assignment out;
    out.left.assign(I.nU, 0);
    out.right.assign(I.nV, 0);
    for (int u = 0; u < I.nU; u++) {
        std::vector<int> slice = sc_left_slice(I, L, pick, u);
        if (slice.empty()) continue;
        SplitMix64 rng = task_stream(seed, "sc-recover", static_cast<uint64_t>(u));
        out.left[u] = slice[rng.below_int(static_cast<int>(slice.size()))];
    }
    for (int v = 0; v < I.nV; v++) {
        std::vector<int> slice = sc_right_slice(I, L, pick, v);
        if (slice.empty()) continue;
        SplitMix64 rng = task_stream(seed, "sc-recover", static_cast<uint64_t>(I.nU + v));
        out.right[v] = slice[rng.below_int(static_cast<int>(slice.size()))];
    }
    return out;
}

// exact per-edge satisfaction probability of the recovery distribution
inline rat sc_edge_satisfaction(const LabelCoverInstance& I, const ScLayout& L,
                                const std::vector<uint8_t>& pick, int e) {
    auto [u, v] = I.edges[e];
    std::vector<int> lu = sc_left_slice(I, L, pick, u);
    std::vector<int> lv = sc_right_slice(I, L, pick, v);
    std::vector<int> lu_eff = lu.empty() ? std::vector<int>{0} : lu;
    std::vector<int> lv_eff = lv.empty() ? std::vector<int>{0} : lv;
    int64_t sat = 0;
    for (int y : lu_eff)
        for (int x : lv_eff) sat += I.predicates[u][y] && I.projections[e][y] == x;
    return rat(sat, static_cast<int64_t>(lu_eff.size()) * lv_eff.size());
}

inline rat sc_expected_recovered_value(const LabelCoverInstance& I, const SetSystem& S,
                                       const std::vector<uint8_t>& pick) {
    ScLayout L(I, S.universe);
    require(!I.edges.empty(), "sc_expected_recovered_value: no edges");
    rat total = 0;
    for (int e = 0; e < L.nE; e++) total += sc_edge_satisfaction(I, L, pick, e);
    return total / rat(L.nE);
}

// the set-cover swap model: flip one membership bit
inline SetCoverInstance sc_apply_toggle(const SetCoverInstance& J, int set_index, int element) {
    require(set_index >= 0 && set_index < J.num_sets(), "sc_apply_toggle: set index");
    require(element >= 0 && element < J.universe, "sc_apply_toggle: element index");
    SetCoverInstance out = J;
    out.sets[set_index][element] ^= 1;
    return out;
}

// membership toggles between two set-cover instances over the same layout
inline std::vector<std::pair<int, int>> sc_toggle_diff(const SetCoverInstance& a,
                                                       const SetCoverInstance& b) {
    require(a.universe == b.universe && a.num_sets() == b.num_sets(), "sc_toggle_diff: incomparable instances");
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < a.num_sets(); i++)
        for (int e = 0; e < a.universe; e++)
            if (a.sets[i][e] != b.sets[i][e]) out.emplace_back(i, e);
    return out;
}

// ---- brute-force oracles and greedy baselines ----

struct CoverWitness {
    int size = -1;
    std::vector<uint8_t> pick;
};

namespace detail {

inline std::vector<int> mask_indices(uint64_t mask, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; i++)
        if (mask >> i & 1) out.push_back(i);
    return out;
}

}  // namespace detail

inline CoverWitness sc_opt_bruteforce(const SetCoverInstance& J, double budget = 5e7) {
    J.validate();
    int m = J.num_sets();
    require(m <= 62 && std::ldexp(1.0, m) <= budget, "sc_opt_bruteforce: budget exceeded");
    {
        std::vector<uint8_t> all(m, 1);
        require(sc_covers(J, all), "sc_opt_bruteforce: uncoverable element");
    }
    int words = (J.universe + 63) / 64;
    std::vector<std::vector<uint64_t>> bits(m, std::vector<uint64_t>(words, 0));
    for (int i = 0; i < m; i++)
        for (int e = 0; e < J.universe; e++)
            if (J.sets[i][e]) bits[i][e / 64] |= uint64_t(1) << (e % 64);
    std::vector<uint64_t> full(words, 0);
    for (int e = 0; e < J.universe; e++) full[e / 64] |= uint64_t(1) << (e % 64);

    int best = m + 1;
    std::vector<int> best_idx;
    std::vector<uint64_t> acc(words);
    for (uint64_t mask = 0; mask < (uint64_t(1) << m); mask++) {
        int size = __builtin_popcountll(mask);
        if (size > best) continue;
        std::fill(acc.begin(), acc.end(), 0);
        for (int i = 0; i < m; i++)
            if (mask >> i & 1)
                for (int w = 0; w < words; w++) acc[w] |= bits[i][w];
        if (acc != full) continue;
        std::vector<int> idx = detail::mask_indices(mask, m);
        if (size < best || (size == best && idx < best_idx)) {
            best = size;
            best_idx = std::move(idx);
        }
    }
    CoverWitness w;
    w.size = best;
    w.pick.assign(m, 0);
    for (int i : best_idx) w.pick[i] = 1;
    return w;
}

inline std::vector<uint8_t> greedy_cover(const SetCoverInstance& J) {
    J.validate();
    std::vector<uint8_t> pick(J.num_sets(), 0), hit(J.universe, 0);
    int uncovered = J.universe;
    while (uncovered > 0) {
        int best = -1, gain = 0;
        for (int i = 0; i < J.num_sets(); i++) {
            if (pick[i]) continue;
            int g = 0;
            for (int e = 0; e < J.universe; e++) g += J.sets[i][e] && !hit[e];
            if (g > gain) {
                gain = g;
                best = i;
            }
        }
        require(best >= 0, "greedy_cover: uncoverable element");
        pick[best] = 1;
        for (int e = 0; e < J.universe; e++)
            if (J.sets[best][e] && !hit[e]) {
                hit[e] = 1;
                uncovered--;
            }
    }
    return pick;
}

// ---- dominating set ----

struct DomSetGraph {
    enum class Role { Element, Set, Helper, Padding };

    int n = 0;
    std::vector<std::vector<int>> adj;
    std::vector<Role> roles;
    int gamma = 0;
    int n_elements = 0;
    int n_sets = 0;
    int n_helpers = 0;
    std::vector<int> sigma_table;  // per element: smallest incident set index, -1 if none

    int element_vertex(int u) const { return u; }
    int set_vertex(int i) const { return n_elements + i; }
    int helper_vertex(int h) const { return n_elements + n_sets + h; }

    int max_degree() const {
        size_t best = 0;
        for (const auto& a : adj) best = std::max(best, a.size());
        return static_cast<int>(best);
    }

    bool has_edge(int a, int b) const {
        return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
    }

    bool dominates(const std::vector<uint8_t>& d) const {
        require(static_cast<int>(d.size()) == n, "dominates: mask size mismatch");
        for (int v = 0; v < n; v++) {
            if (d[v]) continue;
            bool ok = false;
            for (int w : adj[v]) ok = ok || d[w];
            if (!ok) return false;
        }
        return true;
    }

    void add_edge(int a, int b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
};

// T_DS: bipartite incidence graph plus one helper per Gamma consecutive set indices
inline DomSetGraph ds_transform(const SetCoverInstance& J, int gamma) {
    J.validate();
    require(gamma >= 1, "ds_transform: Gamma must be positive");
    require(J.max_set_size() <= gamma, "ds_transform: set size exceeds Gamma");
    require(J.max_frequency() <= gamma, "ds_transform: element frequency exceeds Gamma");
    DomSetGraph G;
    G.gamma = gamma;
    G.n_elements = J.universe;
    G.n_sets = J.num_sets();
    G.n_helpers = (J.num_sets() + gamma - 1) / gamma;
    G.n = G.n_elements + G.n_sets + G.n_helpers;
    G.adj.assign(G.n, {});
    G.roles.assign(G.n, DomSetGraph::Role::Element);
    for (int i = 0; i < G.n_sets; i++) G.roles[G.set_vertex(i)] = DomSetGraph::Role::Set;
    for (int h = 0; h < G.n_helpers; h++) G.roles[G.helper_vertex(h)] = DomSetGraph::Role::Helper;
    for (int i = 0; i < G.n_sets; i++) {
        for (int u = 0; u < G.n_elements; u++)
            if (J.sets[i][u]) G.add_edge(G.element_vertex(u), G.set_vertex(i));
        G.add_edge(G.set_vertex(i), G.helper_vertex(i / gamma));
    }
    G.sigma_table.assign(G.n_elements, -1);
    for (int u = 0; u < G.n_elements; u++)
        for (int i = 0; i < G.n_sets; i++)
            if (J.sets[i][u]) {
                G.sigma_table[u] = i;
                break;
            }
    return G;
}

// append the canonical star forest: floor(t/Delta) full stars K_{1,Delta-1} and one
// K_{1,b-1} remainder; layout depends only on (n_target, Delta, |V(G)|)
inline DomSetGraph ds_pad(const DomSetGraph& G, int n_target, int delta) {
    require(n_target >= G.n, "ds_pad: target below current size");
    require(delta >= 1, "ds_pad: Delta must be positive");
    DomSetGraph H = G;
    int t = n_target - G.n;
    int base = G.n;
    H.n = n_target;
    H.adj.resize(n_target);
    H.roles.resize(n_target, DomSetGraph::Role::Padding);
    int full = t / delta;
    for (int s = 0; s < full; s++) {
        int center = base + s * delta;
        for (int leaf = 1; leaf < delta; leaf++) H.add_edge(center, center + leaf);
    }
    int rem = t - full * delta;
    if (rem > 0) {
        int center = base + full * delta;
        for (int leaf = 1; leaf < rem; leaf++) H.add_edge(center, center + leaf);
    }
    return H;
}

inline int ds_padding_domination(int t, int delta) { return (t + delta - 1) / delta; }

// R_DS: selected set vertices, plus each selected element's designated set
inline std::vector<uint8_t> ds_recover(const DomSetGraph& G, const std::vector<uint8_t>& d) {
    require(static_cast<int>(d.size()) == G.n, "ds_recover: mask size mismatch");
    std::vector<uint8_t> pick(G.n_sets, 0);
    for (int i = 0; i < G.n_sets; i++)
        if (d[G.set_vertex(i)]) pick[i] = 1;
    for (int u = 0; u < G.n_elements; u++)
        if (d[G.element_vertex(u)] && G.sigma_table[u] >= 0) pick[G.sigma_table[u]] = 1;
    return pick;
}

inline CoverWitness ds_opt_bruteforce(const DomSetGraph& G, double budget = 5e7) {
    require(G.n <= 62 && std::ldexp(1.0, G.n) <= budget, "ds_opt_bruteforce: budget exceeded");
    int best = G.n + 1;
    std::vector<int> best_idx;
    for (uint64_t mask = 0; mask < (uint64_t(1) << G.n); mask++) {
        int size = __builtin_popcountll(mask);
        if (size > best) continue;
        std::vector<uint8_t> d(G.n, 0);
        for (int v = 0; v < G.n; v++) d[v] = mask >> v & 1;
        if (!G.dominates(d)) continue;
        std::vector<int> idx = detail::mask_indices(mask, G.n);
        if (size < best || (size == best && idx < best_idx)) {
            best = size;
            best_idx = std::move(idx);
        }
    }
    CoverWitness w;
    w.size = best;
    w.pick.assign(G.n, 0);
    for (int i : best_idx) w.pick[i] = 1;
    return w;
}

inline std::vector<uint8_t> greedy_domset(const DomSetGraph& G) {
    std::vector<uint8_t> d(G.n, 0), dominated(G.n, 0);
    int missing = G.n;
    auto gain_of = [&](int v) {
        int g = !dominated[v];
        for (int w : G.adj[v]) g += !dominated[w];
        return g;
    };
    while (missing > 0) {
        int best = -1, gain = 0;
        for (int v = 0; v < G.n; v++) {
            if (d[v]) continue;
            int g = gain_of(v);
            if (g > gain) {
                gain = g;
                best = v;
            }
        }
        require(best >= 0, "greedy_domset: stuck");
        d[best] = 1;
        if (!dominated[best]) {
            dominated[best] = 1;
            missing--;
        }
        for (int w : G.adj[best])
            if (!dominated[w]) {
                dominated[w] = 1;
                missing--;
            }
    }
    return d;
}

}  // namespace redlab
