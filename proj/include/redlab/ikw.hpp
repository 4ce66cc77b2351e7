#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "redlab/lc.hpp"
#include "redlab/metrics.hpp"
#include "redlab/rng.hpp"

namespace redlab {

// ---- label packing ----
// tuple labels are little-endian base-sigma digit strings packed into ints

inline int pack_digits(const std::vector<int>& digits, int sigma) {
    int64_t acc = 0;
    for (size_t i = digits.size(); i > 0; i--) acc = acc * sigma + digits[i - 1];
    require(acc <= (1 << 30), "pack_digits: label overflow");
    return static_cast<int>(acc);
}

inline int unpack_digit(int label, int pos, int sigma) {
    for (int i = 0; i < pos; i++) label /= sigma;
    return label % sigma;
}

namespace detail {
// all size-r index subsets of [n], lexicographic
inline std::vector<std::vector<int>> combinations(int n, int r) {
    std::vector<std::vector<int>> out;
    if (r > n || r < 0) return out;
    std::vector<int> c(r);
    for (int i = 0; i < r; i++) c[i] = i;
    while (true) {
        out.push_back(c);
        int i = r - 1;
        while (i >= 0 && c[i] == n - r + i) i--;
        if (i < 0) break;
        c[i]++;
        for (int j = i + 1; j < r; j++) c[j] = c[j - 1] + 1;
    }
    return out;
}
}  // namespace detail

struct IkwParams {
    int k = 2;
    int k_prime = 1;
    double epsilon = 0.1;     // decoder soundness scale, drives default sampling effort
    int samples_per_vertex = 4;
};

// materialized combinatorial repetition instance over a regular base 2-CSP; left
// vertices are disjoint edge-set pairs (E_A block of k', E_B block of k-k'), right
// vertices are k'-subsets of base vertices, and the label cover view carries one edge
// row per process outcome with equal weight
struct IkwInstance {
    TwoCspInstance base;
    IkwParams params;
    bool exhaustive = true;
    int64_t sampled_m = 0;
    uint64_t build_seed = 0;

    LabelCoverInstance lc;
    std::vector<std::vector<int>> left_edge_sets;    // per left: E_A sorted, then E_B sorted
    std::vector<std::vector<int>> left_slot_vertex;  // per left: base vertex of each of the 2k slots
    std::vector<std::vector<int>> right_sets;        // per right: sorted base vertices
    std::vector<std::vector<int>> lefts_containing;  // per base edge: left ids whose edge set contains it

    // first slot (in canonical slot order) carrying base vertex x; the E_A block comes
    // first, so for x in the step-2 part this is also the first E_A occurrence
    int slot_of(int left, int x) const {
        const auto& sv = left_slot_vertex[left];
        for (size_t s = 0; s < sv.size(); s++)
            if (sv[s] == x) return static_cast<int>(s);
        fail("ikw: vertex not on the sampled edges");
    }

    bool step2_contains(int left, const std::vector<int>& A) const {
        for (int x : A) {
            bool found = false;
            for (int s = 0; s < 2 * params.k_prime && !found; s++) found = left_slot_vertex[left][s] == x;
            if (!found) return false;
        }
        return true;
    }
};

// exact fraction of left vertices whose check block contains a marked base edge
inline rat ikw_blowup_fraction(int nE, int k, int k_prime) {
    int j = k - k_prime;
    return 1 - rat(binom(nE - 1, j)) / rat(binom(nE, j));
}

namespace detail {

inline void ikw_add_edge_row(IkwInstance& ikw, int left, int right) {
    const TwoCspInstance& phi = ikw.base;
    int sigma = phi.sigma;
    int kp = ikw.params.k_prime;
    const std::vector<int>& A = ikw.right_sets[right];
    std::vector<int> slot(kp);
    for (int t = 0; t < kp; t++) slot[t] = ikw.slot_of(left, A[t]);
    std::vector<int> f(ikw.lc.sigmaU);
    std::vector<int> digits(kp);
    for (int lab = 0; lab < ikw.lc.sigmaU; lab++) {
        for (int t = 0; t < kp; t++) digits[t] = unpack_digit(lab, slot[t], sigma);
        f[lab] = pack_digits(digits, sigma);
    }
    ikw.lc.edges.emplace_back(left, right);
    ikw.lc.projections.push_back(std::move(f));
}

}  // namespace detail

// Build the repetition instance. Exhaustive mode enumerates every process outcome
// (A, injective incident-edge pick c, check set B) with equal multiplicity; sampled mode
// draws M outcomes i.i.d. Collisions in step 2 are rejected globally, i.e. the realized
// distribution is uniform over valid outcomes (the base must be regular for this to
// match the per-step process).
inline IkwInstance ikw_build(const TwoCspInstance& phi, const IkwParams& params, bool exhaustive,
                             int64_t sampled_m = 0, uint64_t seed = 0, double budget = 5e6) {
    phi.validate();
    require(phi.regular(), "ikw_build: base must be regular");
    int nE = static_cast<int>(phi.constraints.size());
    require(params.k_prime >= 1 && params.k_prime <= params.k && params.k <= nE, "ikw_build: bad (k, k')");
    require(params.samples_per_vertex >= 1, "ikw_build: samples_per_vertex < 1");
    for (const auto& c : phi.constraints) require(c.a != c.b, "ikw_build: self-loop in base");
    require(static_cast<double>(binom(nE, params.k)) * static_cast<double>(binom(phi.n, params.k_prime)) <= budget,
            "ikw_build: exhaustive budget exceeded");

    int k = params.k, kp = params.k_prime, j = k - kp;
    IkwInstance ikw;
    ikw.base = phi;
    ikw.params = params;
    ikw.exhaustive = exhaustive;
    ikw.sampled_m = sampled_m;
    ikw.build_seed = seed;

    double sigU = std::pow(static_cast<double>(phi.sigma), 2 * k);
    require(sigU <= (1 << 20), "ikw_build: left alphabet too large");
    ikw.lc.sigmaU = 1;
    for (int i = 0; i < 2 * k; i++) ikw.lc.sigmaU *= phi.sigma;
    ikw.lc.sigmaV = 1;
    for (int i = 0; i < kp; i++) ikw.lc.sigmaV *= phi.sigma;

    // left side: all disjoint (E_A, E_B) pairs, E_A-major lexicographic order
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> left_index;
    for (const auto& ea : detail::combinations(nE, kp)) {
        std::vector<int> rest;
        for (int e = 0; e < nE; e++)
            if (std::find(ea.begin(), ea.end(), e) == ea.end()) rest.push_back(e);
        for (const auto& eb_pos : detail::combinations(static_cast<int>(rest.size()), j)) {
            std::vector<int> eb;
            for (int p : eb_pos) eb.push_back(rest[p]);
            int id = static_cast<int>(ikw.left_edge_sets.size());
            left_index[{ea, eb}] = id;
            std::vector<int> es = ea;
            es.insert(es.end(), eb.begin(), eb.end());
            std::vector<int> slots;
            for (int e : es) {
                slots.push_back(phi.constraints[e].a);
                slots.push_back(phi.constraints[e].b);
            }
            ikw.left_edge_sets.push_back(std::move(es));
            ikw.left_slot_vertex.push_back(std::move(slots));
        }
    }
    ikw.lc.nU = static_cast<int>(ikw.left_edge_sets.size());
    require(static_cast<double>(ikw.lc.nU) * ikw.lc.sigmaU <= 64 * budget, "ikw_build: predicate tables exceed budget");

    // left predicate: the check-block constraints must all accept the slot values
    for (int u = 0; u < ikw.lc.nU; u++) {
        std::vector<uint8_t> p(ikw.lc.sigmaU, 1);
        for (int lab = 0; lab < ikw.lc.sigmaU; lab++) {
            for (int t = kp; t < k; t++) {
                int e = ikw.left_edge_sets[u][t];
                int xa = unpack_digit(lab, 2 * t, phi.sigma);
                int xb = unpack_digit(lab, 2 * t + 1, phi.sigma);
                if (!phi.constraints[e].rel[xa * phi.sigma + xb]) {
                    p[lab] = 0;
                    break;
                }
            }
        }
        ikw.lc.predicates.push_back(std::move(p));
    }

    // right side: every k'-subset of base vertices
    ikw.right_sets = detail::combinations(phi.n, kp);
    ikw.lc.nV = static_cast<int>(ikw.right_sets.size());

    ikw.lefts_containing.assign(nE, {});
    for (int u = 0; u < ikw.lc.nU; u++)
        for (int e : ikw.left_edge_sets[u]) ikw.lefts_containing[e].push_back(u);

    // base incidence for the pick step
    std::vector<std::vector<int>> incident(phi.n);
    for (int e = 0; e < nE; e++) {
        incident[phi.constraints[e].a].push_back(e);
        incident[phi.constraints[e].b].push_back(e);
    }

    auto emit_outcome = [&](const std::vector<int>& picks) {
        std::vector<int> ea = picks;
        std::sort(ea.begin(), ea.end());
        std::vector<int> rest;
        for (int e = 0; e < nE; e++)
            if (std::find(ea.begin(), ea.end(), e) == ea.end()) rest.push_back(e);
        return std::pair<std::vector<int>, std::vector<int>>{std::move(ea), std::move(rest)};
    };

    if (exhaustive) {
        for (int right = 0; right < ikw.lc.nV; right++) {
            const std::vector<int>& A = ikw.right_sets[right];
            std::vector<int> choice(kp, 0);
            while (true) {
                std::vector<int> picks(kp);
                for (int t = 0; t < kp; t++) picks[t] = incident[A[t]][choice[t]];
                std::vector<int> sorted = picks;
                std::sort(sorted.begin(), sorted.end());
                bool injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
                if (injective) {
                    auto [ea, rest] = emit_outcome(picks);
                    for (const auto& eb_pos : detail::combinations(static_cast<int>(rest.size()), j)) {
                        std::vector<int> eb;
                        for (int p : eb_pos) eb.push_back(rest[p]);
                        detail::ikw_add_edge_row(ikw, left_index.at({ea, eb}), right);
                    }
                }
                int t = kp - 1;
                for (; t >= 0; t--) {
                    if (++choice[t] < static_cast<int>(incident[A[t]].size())) break;
                    choice[t] = 0;
                }
                if (t < 0) break;
            }
        }
    } else {
        require(sampled_m >= 1, "ikw_build: sampled mode needs M >= 1");
        SplitMix64 rng = task_stream(seed, "ikw-build");
        std::vector<int> vpool(phi.n);
        std::vector<int> epool;
        for (int64_t row = 0; row < sampled_m; row++) {
            std::vector<int> A, picks;
            while (true) {  // global rejection keeps valid outcomes uniform
                std::iota(vpool.begin(), vpool.end(), 0);
                for (int t = 0; t < kp; t++) std::swap(vpool[t], vpool[t + rng.below_int(phi.n - t)]);
                A.assign(vpool.begin(), vpool.begin() + kp);
                std::sort(A.begin(), A.end());
                picks.resize(kp);
                for (int t = 0; t < kp; t++) picks[t] = incident[A[t]][rng.below_int(static_cast<int>(incident[A[t]].size()))];
                std::vector<int> sorted = picks;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) break;
            }
            auto [ea, rest] = emit_outcome(picks);
            epool = rest;
            for (int t = 0; t < j; t++) std::swap(epool[t], epool[t + rng.below_int(static_cast<int>(epool.size()) - t)]);
            std::vector<int> eb(epool.begin(), epool.begin() + j);
            std::sort(eb.begin(), eb.end());
            int right = 0;
            {
                // index of A in the lexicographic subset order
                const auto& all = ikw.right_sets;
                right = static_cast<int>(std::lower_bound(all.begin(), all.end(), A) - all.begin());
            }
            detail::ikw_add_edge_row(ikw, left_index.at({ea, eb}), right);
        }
    }
    ikw.lc.validate();
    return ikw;
}

// honest lift of a base assignment: slot values copied from the base labels
inline Assignment ikw_honest_lift(const IkwInstance& ikw, const std::vector<int>& base_labels) {
    require(static_cast<int>(base_labels.size()) == ikw.base.n, "ikw_honest_lift: domain mismatch");
    Assignment pi;
    for (int u = 0; u < ikw.lc.nU; u++) {
        std::vector<int> digits;
        for (int x : ikw.left_slot_vertex[u]) digits.push_back(base_labels[x]);
        pi.left.push_back(pack_digits(digits, ikw.base.sigma));
    }
    for (int v = 0; v < ikw.lc.nV; v++) {
        std::vector<int> digits;
        for (int x : ikw.right_sets[v]) digits.push_back(base_labels[x]);
        pi.right.push_back(pack_digits(digits, ikw.base.sigma));
    }
    return pi;
}

// true iff pi's label on left vertex S_E restricts on A to the right label a
// (restriction reads, per vertex, the first slot carrying it)
inline bool cons_member(const IkwInstance& ikw, const Assignment& pi, int right, int right_label,
                        int left) {
    require(ikw.step2_contains(left, ikw.right_sets[right]), "cons_member: A not contained in the step-2 part");
    const std::vector<int>& A = ikw.right_sets[right];
    for (size_t t = 0; t < A.size(); t++) {
        int got = unpack_digit(pi.left[left], ikw.slot_of(left, A[t]), ikw.base.sigma);
        int want = unpack_digit(right_label, static_cast<int>(t), ikw.base.sigma);
        if (got != want) return false;
    }
    return true;
}

struct IkwRecoveryTrace {
    int right_index = -1;
    int right_label = 0;
    std::vector<int> drawn_edge;                 // per base vertex
    std::vector<std::vector<int>> drawn_lefts;   // per base vertex, samples_per_vertex ids
    std::vector<uint8_t> hit;                    // per base vertex: some consistent sample found
};

// low-sensitivity recovery: one uniform right draw fixes (A, a); each base vertex then
// votes through consistent sampled left tuples containing one of its edges, with
// fallback symbol 0
inline std::vector<int> ikw_recover(const IkwInstance& ikw, const Assignment& pi, uint64_t seed,
                                    IkwRecoveryTrace* trace = nullptr) {
    require(static_cast<int>(pi.left.size()) == ikw.lc.nU && static_cast<int>(pi.right.size()) == ikw.lc.nV,
            "ikw_recover: assignment shape mismatch");
    const TwoCspInstance& phi = ikw.base;
    std::vector<std::vector<int>> incident(phi.n);
    for (size_t e = 0; e < phi.constraints.size(); e++) {
        incident[phi.constraints[e].a].push_back(static_cast<int>(e));
        incident[phi.constraints[e].b].push_back(static_cast<int>(e));
    }

    SplitMix64 rng = task_stream(seed, "ikw-recover");
    int right = rng.below_int(ikw.lc.nV);
    int a = pi.right[right];
    if (trace) {
        trace->right_index = right;
        trace->right_label = a;
        trace->drawn_edge.assign(phi.n, -1);
        trace->drawn_lefts.assign(phi.n, {});
        trace->hit.assign(phi.n, 0);
    }

    std::vector<int> out(phi.n, 0);
    for (int x = 0; x < phi.n; x++) {
        require(!incident[x].empty(), "ikw_recover: isolated base vertex");
        int e = incident[x][rng.below_int(static_cast<int>(incident[x].size()))];
        if (trace) trace->drawn_edge[x] = e;
        std::vector<int> consistent;
        for (int s = 0; s < ikw.params.samples_per_vertex; s++) {
            const auto& pool = ikw.lefts_containing[e];
            int left = pool[rng.below_int(static_cast<int>(pool.size()))];
            if (trace) trace->drawn_lefts[x].push_back(left);
            if (ikw.step2_contains(left, ikw.right_sets[right]) && cons_member(ikw, pi, right, a, left))
                consistent.push_back(left);
        }
        if (!consistent.empty()) {
            int pick = consistent[rng.below_int(static_cast<int>(consistent.size()))];
            out[x] = unpack_digit(pi.left[pick], ikw.slot_of(pick, x), phi.sigma);
            if (trace) trace->hit[x] = 1;
        }
    }
    return out;
}

// ---- random-threshold selector ----

// theta is drawn from the G-point midpoint grid of [lo, hi]; the selector returns the
// first candidate whose value clears theta, falling back to the supplied default
inline rat threshold_grid_point(const rat& lo, const rat& hi, int64_t g, int64_t grid) {
    return lo + (hi - lo) * rat(2 * g + 1, 2 * grid);
}

inline int threshold_select_index(const std::vector<rat>& values, const rat& theta) {
    for (size_t j = 0; j < values.size(); j++)
        if (values[j] >= theta) return static_cast<int>(j);
    return -1;
}

inline Assignment threshold_select(const std::vector<Assignment>& candidates,
                                   const std::vector<rat>& values, const rat& lo, const rat& hi,
                                   uint64_t seed, const Assignment& fallback,
                                   int64_t grid = 1 << 20) {
    require(candidates.size() == values.size(), "threshold_select: list size mismatch");
    require(!candidates.empty(), "threshold_select: no candidates");
    require(lo < hi, "threshold_select: empty interval");
    require(grid >= 1, "threshold_select: bad grid");
    SplitMix64 rng = task_stream(seed, "threshold-select");
    rat theta = threshold_grid_point(lo, hi, static_cast<int64_t>(rng.below(static_cast<uint64_t>(grid))), grid);
    int j = threshold_select_index(values, theta);
    return j >= 0 ? candidates[j] : fallback;
}

// exact chosen-index distribution over the theta grid: index j wins exactly when theta
// lands in (prefix_max_{<j}, v_j], so the weight is an exact grid-interval count
inline std::vector<std::pair<int, rat>> threshold_select_dist(const std::vector<rat>& values,
                                                              const rat& lo, const rat& hi,
                                                              int64_t grid = 1 << 20) {
    require(lo < hi, "threshold_select_dist: empty interval");
    require(grid >= 1, "threshold_select_dist: bad grid");
    // count grid points with theta_g <= b: theta_g = lo + w(2g+1)/(2G) <= b
    // <=> g <= (b-lo)*G/w - 1/2, clamped to [0, G]
    auto count_le = [&](const rat& b) -> int64_t {
        if (b < lo) return 0;
        rat w = hi - lo;
        rat t = (b - lo) * grid / w - rat(1, 2);
        if (t < 0) return 0;
        bigint fl = numerator(t) / denominator(t);  // floor for nonnegative t
        int64_t g = static_cast<int64_t>(fl);
        return std::min<int64_t>(g + 1, grid);
    };
    std::vector<std::pair<int, rat>> out;
    rat prefix = lo;  // thresholds never fall at or below lo's open end
    int64_t assigned = 0;
    for (size_t j = 0; j < values.size(); j++) {
        // interval (max(prefix, lo), min(v_j, hi-open end)] in grid counts
        rat top = values[j];
        int64_t cnt = count_le(top) - count_le(prefix);
        if (values[j] > prefix) prefix = values[j];
        if (cnt > 0) {
            out.emplace_back(static_cast<int>(j), rat(cnt, grid));
            assigned += cnt;
        }
    }
    if (assigned < grid) out.emplace_back(-1, rat(grid - assigned, grid));
    return out;
}

}  // namespace redlab
