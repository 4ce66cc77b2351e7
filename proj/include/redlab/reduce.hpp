#pragma once

#include <map>
#include <set>

#include "redlab/gadgets.hpp"
#include "redlab/lc.hpp"
#include "redlab/metrics.hpp"

namespace redlab {

// ---- right-degree reduction ----

// one d-regular graph per right-degree value occurring in the source family
struct ExpanderPackage {
    int d = 0;
    std::map<int, RegularGraph> by_degree;  // D -> graph on D vertices

    const RegularGraph& at(int D) const {
        auto it = by_degree.find(D);
        require(it != by_degree.end(), "expander package: degree not covered");
        return it->second;
    }

    double max_lambda() const {
        double m = 0.0;
        for (auto& [D, G] : by_degree) m = std::max(m, G.measured_lambda);
        return m;
    }
};

inline ExpanderPackage build_expander_package(const LabelCoverInstance& I, int d, uint64_t seed,
                                              double lambda_target = 0.0) {
    require(d % 2 == 0, "expander package: d must be even");
    require(d >= 4, "expander package: d must be at least 4");
    if (lambda_target <= 0.0) lambda_target = 2.0 / std::sqrt(static_cast<double>(d));
    ExpanderPackage pkg;
    pkg.d = d;
    std::set<int> degrees;
    for (int D : I.right_degrees()) degrees.insert(D);
    for (int D : degrees) {
        require(d < D, "expander package: no d-regular cloud graph exists (d >= right degree)");
        pkg.by_degree.emplace(D, build_expander(D, d, lambda_target, task_stream(seed, "expander-package", D).next()));
    }
    return pkg;
}

// cloud layout of a degree-reduced instance: target right vertex (v,i) lives at
// cloud_offset[v] + i, for i in [source right degree of v]
struct DrShape {
    int d = 0;
    int source_nV = 0;
    std::vector<int> source_right_degrees;
    std::vector<int> cloud_offset;

    int target_nV() const { return cloud_offset.empty() ? 0 : cloud_offset.back() + source_right_degrees.back(); }

    void validate_against(const Assignment& pi_target) const {
        require(static_cast<int>(pi_target.right.size()) == target_nV(), "degree-reduction shape mismatch");
    }
};

inline DrShape dr_shape(const LabelCoverInstance& I, int d) {
    DrShape s;
    s.d = d;
    s.source_nV = I.nV;
    s.source_right_degrees = I.right_degrees();
    s.cloud_offset.resize(I.nV);
    int off = 0;
    for (int v = 0; v < I.nV; v++) {
        s.cloud_offset[v] = off;
        off += s.source_right_degrees[v];
    }
    return s;
}

// Algorithm: replace each right vertex v by a cloud of deg(v) copies and wire the k-th
// neighbor of (v,i) to the left endpoint of v's Gamma_{H_v}(i,k)-th incident edge; each
// target edge inherits the source edge's projection, predicates stay put
inline LabelCoverInstance degree_reduce(const LabelCoverInstance& I, int d, const ExpanderPackage& pkg) {
    require(d % 2 == 0, "degree_reduce: d must be even");
    require(d >= 4, "degree_reduce: d must be at least 4");
    require(pkg.d == d, "degree_reduce: package degree mismatch");
    auto rdeg = I.right_degrees();
    for (int v = 0; v < I.nV; v++) {
        require(rdeg[v] >= 1, "degree_reduce: isolated right vertex");
        require(d <= rdeg[v], "degree_reduce: d exceeds min right degree");
    }
    auto inc = I.right_incident();
    DrShape shape = dr_shape(I, d);

    LabelCoverInstance out;
    out.nU = I.nU;
    out.nV = shape.target_nV();
    out.sigmaU = I.sigmaU;
    out.sigmaV = I.sigmaV;
    out.predicates = I.predicates;
    for (int v = 0; v < I.nV; v++) {
        const RegularGraph& H = pkg.at(rdeg[v]);
        require(H.n == rdeg[v] && H.d == d, "degree_reduce: package entry shape");
        for (int i = 0; i < rdeg[v]; i++) {
            for (int k = 0; k < d; k++) {
                int j = H.neighbor_table[i][k];
                int e = inc[v][j];
                out.edges.emplace_back(I.edges[e].first, shape.cloud_offset[v] + i);
                out.projections.push_back(I.projections[e]);
            }
        }
    }
    return out;
}

// deterministic core: right label of v is its cloud entry at the supplied index
inline Assignment dr_recover_indices(const Assignment& pi_target, const DrShape& shape,
                                     const std::vector<int>& indices) {
    shape.validate_against(pi_target);
    require(static_cast<int>(indices.size()) == shape.source_nV, "dr_recover: index vector size");
    Assignment out;
    out.left = pi_target.left;
    out.right.resize(shape.source_nV);
    for (int v = 0; v < shape.source_nV; v++) {
        require(indices[v] >= 0 && indices[v] < shape.source_right_degrees[v], "dr_recover: index out of cloud");
        out.right[v] = pi_target.right[shape.cloud_offset[v] + indices[v]];
    }
    return out;
}

inline Assignment dr_recover(const LabelCoverInstance& I_target, const Assignment& pi_target,
                             const DrShape& shape, uint64_t seed) {
    require(I_target.nV == shape.target_nV(), "degree-reduction shape mismatch");
    require(static_cast<int>(pi_target.left.size()) == I_target.nU, "dr_recover: left domain mismatch");
    SplitMix64 rng = task_stream(seed, "dr-recover");
    std::vector<int> idx(shape.source_nV);
    for (int v = 0; v < shape.source_nV; v++) idx[v] = rng.below_int(shape.source_right_degrees[v]);
    return dr_recover_indices(pi_target, shape, idx);
}

// exact output distribution over all index vectors (product measure)
inline Dist<Assignment> dr_recover_dist(const Assignment& pi_target, const DrShape& shape,
                                        double budget = 1 << 20) {
    double space = 1.0;
    for (int D : shape.source_right_degrees) space *= D;
    require(space <= budget, "dr_recover_dist: randomness space too large");
    Dist<Assignment> dist;
    std::vector<int> idx(shape.source_nV, 0);
    int64_t total = 1;
    for (int D : shape.source_right_degrees) total *= D;
    while (true) {
        dist.support.emplace_back(dr_recover_indices(pi_target, shape, idx), rat(1, total));
        int v = shape.source_nV - 1;
        for (; v >= 0; v--) {
            if (++idx[v] < shape.source_right_degrees[v]) break;
            idx[v] = 0;
        }
        if (v < 0) break;
    }
    dist.normalize();
    return dist;
}

// shared-index coupling: the pair differs at v with probability (# differing cloud slots)/D_v
inline rat dr_coupled_expected_hamming(const Assignment& a, const Assignment& b, const DrShape& shape) {
    shape.validate_against(a);
    shape.validate_against(b);
    rat acc = hamming_vec(a.left, b.left);
    for (int v = 0; v < shape.source_nV; v++) {
        int D = shape.source_right_degrees[v];
        int differ = 0;
        for (int i = 0; i < D; i++) differ += a.right[shape.cloud_offset[v] + i] != b.right[shape.cloud_offset[v] + i];
        acc += rat(differ, D);
    }
    return acc;
}

// exact expectation of the source value after recovery, by per-edge counting
inline rat dr_expected_recovered_value(const LabelCoverInstance& I_source, const DrShape& shape,
                                       const Assignment& pi_target) {
    shape.validate_against(pi_target);
    require(!I_source.edges.empty(), "dr_expected_recovered_value: no edges");
    rat acc = 0;
    for (size_t e = 0; e < I_source.edges.size(); e++) {
        auto [u, v] = I_source.edges[e];
        int a = pi_target.left[u];
        if (!I_source.predicates[u][a]) continue;
        int want = I_source.projections[e][a];
        int D = shape.source_right_degrees[v];
        int hit = 0;
        for (int i = 0; i < D; i++) hit += pi_target.right[shape.cloud_offset[v] + i] == want;
        acc += rat(hit, D);
    }
    return acc / static_cast<int64_t>(I_source.edges.size());
}

// ---- alphabet reduction ----

// target right side is V x [k]; the edge (u,(v,i)) projects a to coordinate i of the
// codeword encoding f_{(u,v)}(a)
inline LabelCoverInstance alphabet_reduce(const LabelCoverInstance& I, const Code& code) {
    require(code.sigma == I.sigmaV, "alphabet_reduce: code alphabet mismatch");
    LabelCoverInstance out;
    out.nU = I.nU;
    out.nV = I.nV * code.k;
    out.sigmaU = I.sigmaU;
    out.sigmaV = code.target_sigma;
    out.predicates = I.predicates;
    for (size_t e = 0; e < I.edges.size(); e++) {
        auto [u, v] = I.edges[e];
        for (int i = 0; i < code.k; i++) {
            out.edges.emplace_back(u, v * code.k + i);
            std::vector<int> f(I.sigmaU);
            for (int a = 0; a < I.sigmaU; a++) f[a] = code.table[I.projections[e][a]][i];
            out.projections.push_back(std::move(f));
        }
    }
    return out;
}

// deterministic core: v's label is the source projection, through the chosen incident
// edge, of that edge's left endpoint label; choices index right-incidence lists
inline Assignment ar_recover_choices(const LabelCoverInstance& I_source, const Assignment& pi_target,
                                     const std::vector<int>& choices) {
    require(static_cast<int>(pi_target.left.size()) == I_source.nU, "ar_recover: left domain mismatch");
    require(static_cast<int>(choices.size()) == I_source.nV, "ar_recover: choice vector size");
    auto inc = I_source.right_incident();
    Assignment out;
    out.left = pi_target.left;
    out.right.resize(I_source.nV);
    for (int v = 0; v < I_source.nV; v++) {
        if (inc[v].empty()) {
            out.right[v] = 0;  // isolated right vertex: no votes, pick the first label
            continue;
        }
        require(choices[v] >= 0 && choices[v] < static_cast<int>(inc[v].size()), "ar_recover: choice out of range");
        int e = inc[v][choices[v]];
        out.right[v] = I_source.projections[e][pi_target.left[I_source.edges[e].first]];
    }
    return out;
}

inline Assignment ar_recover(const LabelCoverInstance& I_source, const Assignment& pi_target,
                             uint64_t seed) {
    SplitMix64 rng = task_stream(seed, "ar-recover");
    auto rdeg = I_source.right_degrees();
    std::vector<int> choices(I_source.nV, 0);
    for (int v = 0; v < I_source.nV; v++)
        if (rdeg[v] > 0) choices[v] = rng.below_int(rdeg[v]);
    return ar_recover_choices(I_source, pi_target, choices);
}

inline Dist<Assignment> ar_recover_dist(const LabelCoverInstance& I_source, const Assignment& pi_target,
                                        double budget = 1 << 20) {
    auto rdeg = I_source.right_degrees();
    double space = 1.0;
    int64_t total = 1;
    for (int v = 0; v < I_source.nV; v++)
        if (rdeg[v] > 0) {
            space *= rdeg[v];
            total *= rdeg[v];
        }
    require(space <= budget, "ar_recover_dist: randomness space too large");
    Dist<Assignment> dist;
    std::vector<int> choices(I_source.nV, 0);
    while (true) {
        dist.support.emplace_back(ar_recover_choices(I_source, pi_target, choices), rat(1, total));
        int v = I_source.nV - 1;
        for (; v >= 0; v--) {
            if (rdeg[v] == 0) continue;
            if (++choices[v] < rdeg[v]) break;
            choices[v] = 0;
        }
        if (v < 0) break;
    }
    dist.normalize();
    return dist;
}

// shared-choice coupling for two target assignments over the same source
inline rat ar_coupled_expected_hamming(const LabelCoverInstance& I_source, const Assignment& a,
                                       const Assignment& b) {
    rat acc = hamming_vec(a.left, b.left);
    auto inc = I_source.right_incident();
    for (int v = 0; v < I_source.nV; v++) {
        if (inc[v].empty()) continue;
        int differ = 0;
        for (int e : inc[v]) {
            int u = I_source.edges[e].first;
            differ += I_source.projections[e][a.left[u]] != I_source.projections[e][b.left[u]];
        }
        acc += rat(differ, static_cast<int64_t>(inc[v].size()));
    }
    return acc;
}

// shared-choice coupling across a source swap (same pi_target on both sides)
inline rat ar_source_swap_coupled_hamming(const LabelCoverInstance& I, const LabelCoverInstance& J,
                                          const Assignment& pi_target) {
    require(I.edges == J.edges, "incomparable instances");
    auto inc = I.right_incident();
    rat acc = 0;
    for (int v = 0; v < I.nV; v++) {
        if (inc[v].empty()) continue;
        int differ = 0;
        for (int e : inc[v]) {
            int u = I.edges[e].first;
            differ += I.projections[e][pi_target.left[u]] != J.projections[e][pi_target.left[u]];
        }
        acc += rat(differ, static_cast<int64_t>(inc[v].size()));
    }
    return acc;
}

// exact expectation of the source value after recovery; the recovered label of v is a
// uniform incident-edge vote, independent across right vertices
inline rat ar_expected_recovered_value(const LabelCoverInstance& I_source, const Assignment& pi_target) {
    require(!I_source.edges.empty(), "ar_expected_recovered_value: no edges");
    auto inc = I_source.right_incident();
    rat acc = 0;
    for (size_t e = 0; e < I_source.edges.size(); e++) {
        auto [u, v] = I_source.edges[e];
        int a = pi_target.left[u];
        if (!I_source.predicates[u][a]) continue;
        int want = I_source.projections[e][a];
        int hit = 0;
        for (int e2 : inc[v]) {
            int u2 = I_source.edges[e2].first;
            hit += I_source.projections[e2][pi_target.left[u2]] == want;
        }
        acc += rat(hit, static_cast<int64_t>(inc[v].size()));
    }
    return acc / static_cast<int64_t>(I_source.edges.size());
}

// soundness threshold of the alphabet reduction at proximity parameter eta
inline double ar_soundness_threshold(double epsilon, double eta) {
    return epsilon / std::sqrt(eta) + 2.0 * std::sqrt(eta);
}

// ---- combined reduction ----

struct RedHandle {
    rat epsilon;
    rat eta;       // epsilon / 4
    Code code;     // distance >= 1 - eta^3
    bool dr_applied = false;
    int d = 0;
    ExpanderPackage pkg;   // populated iff dr_applied
    DrShape dr_layout;     // shape of the intermediate (alphabet-reduced) instance
};

struct RedResult {
    LabelCoverInstance instance;
    RedHandle handle;
};

// alphabet reduction always; degree reduction only when the right degrees clear the
// branch threshold c/epsilon and a strictly smaller even d exists for the clouds
inline RedResult reduce_combined(const LabelCoverInstance& I, const rat& epsilon, uint64_t seed,
                                 int branch_c = 16) {
    require(epsilon > 0 && epsilon < rat(1, 16), "reduce_combined: epsilon out of range");
    RedHandle h;
    h.epsilon = epsilon;
    h.eta = epsilon / 4;
    rat delta = h.eta * h.eta * h.eta;
    h.code = build_code(I.sigmaV, delta);
    LabelCoverInstance mid = alphabet_reduce(I, h.code);

    rat threshold = rat(branch_c) / epsilon;
    auto rdeg = mid.right_degrees();
    int min_rdeg = *std::min_element(rdeg.begin(), rdeg.end());
    int d = 4;
    while (rat(d) < threshold) d += 2;
    if (rat(min_rdeg) > threshold && d < min_rdeg) {
        h.dr_applied = true;
        h.d = d;
        h.pkg = build_expander_package(mid, d, task_stream(seed, "red-package").next());
        h.dr_layout = dr_shape(mid, d);
        LabelCoverInstance out = degree_reduce(mid, d, h.pkg);
        return {std::move(out), std::move(h)};
    }
    return {std::move(mid), std::move(h)};
}

// recovery composes the two stage recoveries with independent derived streams
inline Assignment red_recover(const LabelCoverInstance& I_source, const RedHandle& h,
                              const Assignment& pi_target, uint64_t seed) {
    Assignment mid_pi = pi_target;
    if (h.dr_applied) {
        SplitMix64 rng = task_stream(seed, "red-recover-dr");
        std::vector<int> idx(h.dr_layout.source_nV);
        for (int v = 0; v < h.dr_layout.source_nV; v++)
            idx[v] = rng.below_int(h.dr_layout.source_right_degrees[v]);
        mid_pi = dr_recover_indices(pi_target, h.dr_layout, idx);
    }
    return ar_recover(I_source, mid_pi, task_stream(seed, "red-recover-ar").next());
}

}  // namespace redlab
