#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "redlab/common.hpp"
#include "redlab/lc.hpp"
#include "redlab/rng.hpp"

namespace redlab {

// finite-support distribution with exact rational weights summing to 1
template <class P>
struct Dist {
    std::vector<std::pair<P, rat>> support;

    void normalize() {
        std::map<P, rat> merged;
        for (auto& [p, w] : support) {
            require(w >= 0, "distribution: negative weight");
            if (w > 0) merged[p] += w;
        }
        support.assign(merged.begin(), merged.end());
        rat total = 0;
        for (auto& [p, w] : support) total += w;
        require(total == 1, "distribution: weights must sum to 1");
    }

    static Dist point(const P& p) { return Dist{{{p, rat(1)}}}; }
};

// min-cost flow on a small dense network, successive shortest paths with potentials;
// capacities are exact big integers, costs are small non-negative integers
struct MinCostFlow {
    struct Edge {
        int to;
        bigint cap;
        int64_t cost;
        int rev;
    };
    int n;
    std::vector<std::vector<Edge>> g;

    explicit MinCostFlow(int n_) : n(n_), g(n_) {}

    void add_edge(int a, int b, bigint cap, int64_t cost) {
        g[a].push_back({b, std::move(cap), cost, static_cast<int>(g[b].size())});
        g[b].push_back({a, 0, -cost, static_cast<int>(g[a].size()) - 1});
    }

    // sends as much flow as possible from s to t, returns (flow, cost)
    std::pair<bigint, bigint> run(int s, int t) {
        const int64_t INF = std::numeric_limits<int64_t>::max() / 4;
        std::vector<int64_t> pot(n, 0);  // all costs non-negative, so zero potentials start valid
        bigint flow = 0, cost = 0;
        while (true) {
            std::vector<int64_t> dist(n, INF);
            std::vector<int> pe(n, -1), pv(n, -1);
            std::vector<char> done(n, 0);
            dist[s] = 0;
            for (int iter = 0; iter < n; iter++) {  // dense Dijkstra, n is tiny
                int best = -1;
                for (int i = 0; i < n; i++)
                    if (!done[i] && dist[i] < INF && (best < 0 || dist[i] < dist[best])) best = i;
                if (best < 0) break;
                done[best] = 1;
                for (size_t k = 0; k < g[best].size(); k++) {
                    const Edge& e = g[best][k];
                    if (e.cap == 0) continue;
                    int64_t nd = dist[best] + e.cost + pot[best] - pot[e.to];
                    if (nd < dist[e.to]) {
                        dist[e.to] = nd;
                        pv[e.to] = best;
                        pe[e.to] = static_cast<int>(k);
                    }
                }
            }
            if (dist[t] >= INF) break;
            for (int i = 0; i < n; i++)
                if (dist[i] < INF) pot[i] += dist[i];
            bigint push = -1;
            for (int v = t; v != s; v = pv[v]) {
                const bigint& c = g[pv[v]][pe[v]].cap;
                if (push < 0 || c < push) push = c;
            }
            for (int v = t; v != s; v = pv[v]) {
                Edge& e = g[pv[v]][pe[v]];
                e.cap -= push;
                g[v][e.rev].cap += push;
                cost += push * e.cost;
            }
            flow += push;
        }
        return {flow, cost};
    }
};

// exact earth mover's distance under an integer-valued ground metric, solved as a
// transportation problem with weights scaled to a common denominator
template <class P, class DistFn>
rat emd_exact(const Dist<P>& A, const Dist<P>& B, DistFn point_dist, size_t budget = 1 << 20) {
    size_t n = A.support.size(), m = B.support.size();
    require(n > 0 && m > 0, "emd: empty distribution");
    require(n * m <= budget, "emd: budget exceeded");

    bigint L = 1;
    for (auto& [p, w] : A.support) L = lcm(L, bigint(denominator(w)));
    for (auto& [p, w] : B.support) L = lcm(L, bigint(denominator(w)));

    MinCostFlow f(static_cast<int>(n + m) + 2);
    int src = static_cast<int>(n + m), snk = src + 1;
    bigint total = 0;
    for (size_t i = 0; i < n; i++) {
        bigint a = bigint(numerator(A.support[i].second)) * (L / bigint(denominator(A.support[i].second)));
        total += a;
        f.add_edge(src, static_cast<int>(i), a, 0);
    }
    for (size_t j = 0; j < m; j++) {
        bigint b = bigint(numerator(B.support[j].second)) * (L / bigint(denominator(B.support[j].second)));
        f.add_edge(static_cast<int>(n + j), snk, b, 0);
    }
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < m; j++) {
            int64_t c = point_dist(A.support[i].first, B.support[j].first);
            require(c >= 0, "emd: negative ground distance");
            f.add_edge(static_cast<int>(i), static_cast<int>(n + j), total, c);
        }
    auto [flow, cost] = f.run(src, snk);
    require(flow == total, "emd: transportation infeasible (weights must both sum to 1)");
    return rat(cost, L);
}

inline rat emd_exact_assignments(const Dist<Assignment>& A, const Dist<Assignment>& B) {
    return emd_exact(A, B, [](const Assignment& a, const Assignment& b) { return hamming(a, b); });
}

// randomized algorithm wrapper: deterministic given (instance, seed); a declared finite
// randomness space enables exact output distributions
template <class Inst, class Out>
struct RandAlg {
    std::function<Out(const Inst&, uint64_t)> run;
    uint64_t space = 0;
};

template <class Inst, class Out>
Dist<Out> output_dist(const RandAlg<Inst, Out>& A, const Inst& I, size_t budget = 1 << 20) {
    require(A.space > 0, "output_dist: algorithm has no declared randomness space");
    require(A.space <= budget, "output_dist: budget exceeded");
    Dist<Out> d;
    rat w(1, static_cast<int64_t>(A.space));
    for (uint64_t s = 0; s < A.space; s++) d.support.emplace_back(A.run(I, s), w);
    d.normalize();
    return d;
}

// Monte-Carlo estimate of E[d_H(A(I,s), A(J,s))] under the shared-seed coupling;
// an upper bound on EMD in expectation
template <class Inst, class Out, class DistFn>
rat emd_coupled_upper(const RandAlg<Inst, Out>& A, const Inst& I, const Inst& J, DistFn point_dist,
                      int n_samples, uint64_t seed) {
    require(n_samples > 0, "emd_coupled_upper: need samples");
    SplitMix64 rng = task_stream(seed, "emd-coupled");
    bigint acc = 0;
    for (int i = 0; i < n_samples; i++) {
        uint64_t s = rng.next();
        acc += point_dist(A.run(I, s), A.run(J, s));
    }
    return rat(acc, n_samples);
}

template <class Inst, class Out, class DistFn>
struct SwapSensResult {
    rat max_emd;
    int argmax_swap = -1;
    std::vector<rat> per_swap;
};

// max over supplied swaps of EMD(A(I), A(I^s)); exact mode enumerates the declared
// randomness space of A
template <class Inst, class Out, class DistFn>
SwapSensResult<Inst, Out, DistFn> swap_sensitivity_exact(const RandAlg<Inst, Out>& A, const Inst& I,
                                                         const std::vector<Swap>& swaps,
                                                         DistFn point_dist) {
    SwapSensResult<Inst, Out, DistFn> res;
    res.max_emd = 0;
    Dist<Out> base = output_dist(A, I);
    for (size_t k = 0; k < swaps.size(); k++) {
        Inst J = apply_swap(I, swaps[k]);
        rat e = emd_exact(base, output_dist(A, J), point_dist);
        res.per_swap.push_back(e);
        if (e > res.max_emd) {
            res.max_emd = e;
            res.argmax_swap = static_cast<int>(k);
        }
    }
    return res;
}

struct WitnessStep {
    int step = -1;
    rat emd_at_step;
    rat total_emd;
    int path_length = 0;
};

// neighboring-witness extraction: along the canonical shortest swap path, some step has
// EMD at least total/k (the averaging bound); returns the first such step
template <class Out, class DistFn>
WitnessStep neighboring_witness(const RandAlg<LabelCoverInstance, Out>& A,
                                const LabelCoverInstance& I, const LabelCoverInstance& J,
                                DistFn point_dist) {
    std::vector<LabelCoverInstance> path = swap_path(I, J);
    int k = static_cast<int>(path.size()) - 1;
    require(k > 0, "neighboring_witness: zero distance");
    std::vector<Dist<Out>> dists;
    dists.reserve(path.size());
    for (auto& inst : path) dists.push_back(output_dist(A, inst));
    WitnessStep w;
    w.path_length = k;
    w.total_emd = emd_exact(dists.front(), dists.back(), point_dist);
    rat bound = w.total_emd / k;
    for (int t = 0; t < k; t++) {
        rat e = emd_exact(dists[t], dists[t + 1], point_dist);
        if (e >= bound) {
            w.step = t;
            w.emd_at_step = e;
            return w;
        }
    }
    fail("neighboring_witness: averaging bound violated");  // unreachable if EMD is a metric
}

}  // namespace redlab
