#pragma once

#include <array>
#include <functional>

#include "redlab/lc.hpp"
#include "redlab/rng.hpp"

namespace redlab {

// ---- admissible-neighborhood circuits ----

// the local constraint at a left vertex, written as the explicit list of neighbor-tuple
// values realizable by an accepted label; tuple coordinate t corresponds to the t-th
// incident edge in edge-id order
struct Circuit {
    int u = -1;
    std::vector<int> neighbor_edges;          // incident edge ids, ascending
    std::vector<std::vector<int>> tuples;     // sorted, deduplicated, each of length deg(u)

    int degree() const { return static_cast<int>(neighbor_edges.size()); }
};

inline Circuit admissible_tuples(const LabelCoverInstance& I, int u) {
    require(u >= 0 && u < I.nU, "admissible_tuples: vertex out of range");
    Circuit c;
    c.u = u;
    for (size_t e = 0; e < I.edges.size(); e++)
        if (I.edges[e].first == u) c.neighbor_edges.push_back(static_cast<int>(e));
    for (int a = 0; a < I.sigmaU; a++) {
        if (!I.predicates[u][a]) continue;
        std::vector<int> t;
        for (int e : c.neighbor_edges) t.push_back(I.projections[e][a]);
        c.tuples.push_back(std::move(t));
    }
    std::sort(c.tuples.begin(), c.tuples.end());
    c.tuples.erase(std::unique(c.tuples.begin(), c.tuples.end()), c.tuples.end());
    return c;
}

inline uint64_t circuit_hash(const Circuit& c) {
    uint64_t h = fnv1a64("circuit");
    auto mix = [&](int64_t v) { h = fnv1a64(&v, sizeof v, h); };
    mix(c.u);
    mix(c.degree());
    for (int e : c.neighbor_edges) mix(e);
    for (const auto& t : c.tuples) {
        mix(-1);
        for (int s : t) mix(s);
    }
    return h;
}

// ---- decoder interface ----

struct QueryPlan {
    std::vector<int> positions;  // q entries in [m]
    std::vector<int> table;      // sigma^q entries, decoded symbol or -1 for bottom
};

// proof-system decoder: queries a length-m proof over [sigma] at q positions chosen
// from (j, r) and locally decodes coordinate j of an admissible tuple
struct Decoder {
    int m = 0;
    int q = 0;
    int r_bits = 0;
    int sigma = 0;
    double declared_delta = 1.0;
    int declared_list = 0;
    std::function<QueryPlan(const Circuit&, int, int)> query;
    std::function<std::vector<int>(const Circuit&, const std::vector<int>&)> encode_proof;
};

// two-query decoder over the identity encoding: the proof is the admissible tuple
// padded with zeros, and a query cross-checks position j against one r-chosen position
inline Decoder toy_decoder(int max_degree, int sigma) {
    require(max_degree >= 1, "toy_decoder: need proof length >= 1");
    require(sigma >= 1, "toy_decoder: empty alphabet");
    Decoder d;
    d.m = max_degree;
    d.q = 2;
    d.r_bits = 0;
    while ((1 << d.r_bits) < max_degree) d.r_bits++;
    d.sigma = sigma;
    d.query = [m = d.m, sigma](const Circuit& c, int j, int r) {
        require(j >= 0 && j < m, "toy_decoder: query position out of range");
        int x = r % m;
        QueryPlan plan;
        plan.positions = {j, x};
        plan.table.assign(sigma * sigma, -1);
        int t = c.degree();
        for (int s1 = 0; s1 < sigma; s1++)
            for (int s2 = 0; s2 < sigma; s2++) {
                bool ok = false;
                for (const auto& y : c.tuples) {
                    bool match = (j >= t || y[j] == s1) && (x >= t || y[x] == s2);
                    if (match) {
                        ok = true;
                        break;
                    }
                }
                if (ok) plan.table[s1 * sigma + s2] = s1;
            }
        return plan;
    };
    d.encode_proof = [m = d.m](const Circuit& c, const std::vector<int>& tuple) {
        require(static_cast<int>(tuple.size()) == c.degree(), "toy_decoder: tuple length mismatch");
        std::vector<int> proof(m, 0);
        for (size_t i = 0; i < tuple.size(); i++) proof[i] = tuple[i];
        return proof;
    };
    return d;
}

// table index is big-endian over the read slots in position order
inline int decode_at(const Decoder& d, const QueryPlan& plan, const std::vector<int>& proof) {
    int folded = 0;
    for (int s = 0; s < d.q; s++) folded = folded * d.sigma + proof[plan.positions[s]];
    return plan.table[folded];
}

// exact worst-proof list-decoding error: max over proofs of the best size-L admissible
// list's failure probability under uniform (j, r); j runs over the circuit's live
// tuple coordinates
inline rat decoder_soundness(const Decoder& d, const Circuit& c, int list_size,
                             double budget = 2e7) {
    int t = c.degree();
    require(t >= 1, "decoder_soundness: empty circuit");
    require(std::pow(static_cast<double>(d.sigma), d.m) <= budget, "decoder_soundness: proof space too large");
    int64_t denom = static_cast<int64_t>(t) << d.r_bits;
    int64_t proofs = 1;
    for (int i = 0; i < d.m; i++) proofs *= d.sigma;

    // plans are proof-independent; build once
    std::vector<std::vector<QueryPlan>> plans(t);
    for (int j = 0; j < t; j++)
        for (int r = 0; r < (1 << d.r_bits); r++) plans[j].push_back(d.query(c, j, r));

    rat worst = 0;
    std::vector<int> proof(d.m, 0);
    std::vector<std::vector<int>> lists;  // all size-list_size tuple index sets
    {
        int n = static_cast<int>(c.tuples.size());
        int r = std::min(list_size, n);
        std::vector<int> idx(r);
        for (int i = 0; i < r; i++) idx[i] = i;
        while (true) {
            lists.push_back(idx);
            int i = r - 1;
            while (i >= 0 && idx[i] == n - r + i) i--;
            if (i < 0) break;
            idx[i]++;
            for (int j = i + 1; j < r; j++) idx[j] = idx[j - 1] + 1;
        }
    }
    for (int64_t p = 0; p < proofs; p++) {
        int64_t v = p;
        for (int i = 0; i < d.m; i++) {
            proof[i] = static_cast<int>(v % d.sigma);
            v /= d.sigma;
        }
        // decode outcomes for this proof
        std::vector<std::vector<int>> out(t);
        for (int j = 0; j < t; j++)
            for (int r = 0; r < (1 << d.r_bits); r++) out[j].push_back(decode_at(d, plans[j][r], proof));
        rat best = 1;
        for (const auto& list : lists) {
            int64_t bad = 0;
            for (int j = 0; j < t; j++)
                for (int r = 0; r < (1 << d.r_bits); r++) {
                    int z = out[j][r];
                    if (z < 0) continue;
                    bool listed = false;
                    for (int li : list) listed = listed || c.tuples[li][j] == z;
                    if (!listed) bad++;
                }
            rat err = rat(bad, denom);
            if (err < best) best = err;
            if (best == 0) break;
        }
        if (best > worst) worst = best;
    }
    return worst;
}

// ---- composition on the common padded graph ----

// assignment on a composed instance: one flattened max_right_degree-by-m symbol matrix
// per (right source vertex, randomness string), one proof symbol per (left source
// vertex, proof position)
struct ComposedAssignment {
    std::vector<std::vector<int>> left;
    std::vector<int> right;
};

// composed instance, kept lazy: the left alphabet sigma^(d_V*m) is never enumerated;
// predicates and projections are evaluated on supplied labels only
struct ComposedInstance {
    LabelCoverInstance source;
    Decoder decoder;
    int m = 0;
    int r_bits = 0;
    int d_v = 0;  // matrix rows, the maximum source right degree
    std::vector<Circuit> circuits;                 // per source left vertex
    std::vector<std::vector<int>> rows;            // per source right vertex: incident edge ids
    std::vector<int> row_left;                     // per source edge: its left endpoint
    std::vector<int> row_j;                        // per source edge: position in that endpoint's circuit

    int num_left() const { return source.nV << r_bits; }
    int num_right() const { return source.nU * m; }
    int64_t num_edges() const { return static_cast<int64_t>(source.edges.size()) * m << r_bits; }
    int left_index(int v, int r) const { return (v << r_bits) + r; }
    int right_index(int u, int p) const { return u * m + p; }

    int matrix_entry(const std::vector<int>& matrix, int row, int col) const { return matrix[row * m + col]; }

    // decoder verdict for one active row of (v, r) on a supplied matrix label
    int row_decode(int v, int r, int t, const std::vector<int>& matrix) const {
        int e = rows[v][t];
        QueryPlan plan = decoder.query(circuits[row_left[e]], row_j[e], r);
        int folded = 0;
        for (int s = 0; s < decoder.q; s++) folded = folded * decoder.sigma + matrix_entry(matrix, t, plan.positions[s]);
        return plan.table[folded];
    }

    // unanimity predicate of composed left vertex (v, r); degree-zero v accepts all
    bool predicate_eval(int v, int r, const std::vector<int>& matrix) const {
        require(static_cast<int>(matrix.size()) == d_v * m, "composed predicate: matrix shape");
        int t = static_cast<int>(rows[v].size());
        if (t == 0) return true;
        int first = row_decode(v, r, 0, matrix);
        if (first < 0) return false;
        for (int i = 1; i < t; i++)
            if (row_decode(v, r, i, matrix) != first) return false;
        return true;
    }

    bool edge_satisfied(int v, int r, int t, int p, const ComposedAssignment& pi) const {
        const std::vector<int>& matrix = pi.left[left_index(v, r)];
        if (!predicate_eval(v, r, matrix)) return false;
        int e = rows[v][t];
        return matrix_entry(matrix, t, p) == pi.right[right_index(row_left[e], p)];
    }

    rat value(const ComposedAssignment& pi) const {
        require(static_cast<int>(pi.left.size()) == num_left() && static_cast<int>(pi.right.size()) == num_right(),
                "composed value: assignment shape mismatch");
        require(num_edges() > 0, "composed value: no edges");
        int64_t sat = 0;
        for (int v = 0; v < source.nV; v++)
            for (int r = 0; r < (1 << r_bits); r++)
                for (int t = 0; t < static_cast<int>(rows[v].size()); t++)
                    for (int p = 0; p < m; p++) sat += edge_satisfied(v, r, t, p, pi);
        return rat(sat, num_edges());
    }

    // hash of everything except predicates: vertex counts, edge list, and the
    // coordinate-projection structure
    uint64_t structure_hash() const {
        uint64_t h = fnv1a64("composed-structure");
        auto mix = [&](int64_t x) { h = fnv1a64(&x, sizeof x, h); };
        mix(num_left());
        mix(num_right());
        mix(m);
        mix(r_bits);
        for (int v = 0; v < source.nV; v++)
            for (int r = 0; r < (1 << r_bits); r++)
                for (int t = 0; t < static_cast<int>(rows[v].size()); t++)
                    for (int p = 0; p < m; p++) {
                        mix(left_index(v, r));
                        mix(right_index(row_left[rows[v][t]], p));
                        mix(t);
                        mix(p);
                    }
        return h;
    }
};

inline ComposedInstance compose(const LabelCoverInstance& I, const Decoder& D, double budget = 1e8) {
    I.validate();
    require(D.sigma == I.sigmaV, "compose: decoder alphabet must match the right source alphabet");
    ComposedInstance C;
    C.source = I;
    C.decoder = D;
    C.m = D.m;
    C.r_bits = D.r_bits;

    auto rdeg = I.right_degrees();
    C.d_v = 0;
    for (int v = 0; v < I.nV; v++) C.d_v = std::max(C.d_v, rdeg[v]);
    int max_ldeg = 0;
    {
        auto ldeg = I.left_degrees();
        for (int u = 0; u < I.nU; u++) max_ldeg = std::max(max_ldeg, ldeg[u]);
    }
    require(max_ldeg <= D.m, "compose: decoder proof shorter than a left neighborhood");

    require(static_cast<double>(I.nV) * (1 << C.r_bits) <= budget, "compose: left side exceeds budget");
    require(static_cast<double>(I.nU) * C.m <= budget, "compose: right side exceeds budget");
    require(static_cast<double>(I.edges.size()) * C.m * (1 << C.r_bits) <= budget, "compose: edge count exceeds budget");
    require(static_cast<double>(C.d_v) * C.m * std::log2(std::max(2, D.sigma)) <= 62.0,
            "compose: composed left alphabet exceeds 2^62");

    for (int u = 0; u < I.nU; u++) C.circuits.push_back(admissible_tuples(I, u));
    C.rows.assign(I.nV, {});
    C.row_left.assign(I.edges.size(), -1);
    C.row_j.assign(I.edges.size(), -1);
    for (size_t e = 0; e < I.edges.size(); e++) {
        C.rows[I.edges[e].second].push_back(static_cast<int>(e));
        C.row_left[e] = I.edges[e].first;
        const auto& ne = C.circuits[I.edges[e].first].neighbor_edges;
        C.row_j[e] = static_cast<int>(std::find(ne.begin(), ne.end(), static_cast<int>(e)) - ne.begin());
    }
    return C;
}

// honest composed assignment from a source assignment: every left source vertex writes
// the encoded proof of its realized tuple, every (v, r) copies its neighbors' proofs
inline ComposedAssignment compose_honest_lift(const ComposedInstance& C, const Assignment& pi) {
    const LabelCoverInstance& I = C.source;
    require(static_cast<int>(pi.left.size()) == I.nU && static_cast<int>(pi.right.size()) == I.nV,
            "compose_honest_lift: assignment shape mismatch");
    std::vector<std::vector<int>> proofs(I.nU);
    for (int u = 0; u < I.nU; u++) {
        std::vector<int> tuple;
        for (int e : C.circuits[u].neighbor_edges) tuple.push_back(I.projections[e][pi.left[u]]);
        proofs[u] = C.decoder.encode_proof(C.circuits[u], tuple);
    }
    ComposedAssignment out;
    out.right.assign(C.num_right(), 0);
    for (int u = 0; u < I.nU; u++)
        for (int p = 0; p < C.m; p++) out.right[C.right_index(u, p)] = proofs[u][p];
    out.left.assign(C.num_left(), std::vector<int>(C.d_v * C.m, 0));
    for (int v = 0; v < I.nV; v++)
        for (int r = 0; r < (1 << C.r_bits); r++) {
            std::vector<int>& matrix = out.left[C.left_index(v, r)];
            for (int t = 0; t < static_cast<int>(C.rows[v].size()); t++)
                for (int p = 0; p < C.m; p++) matrix[t * C.m + p] = proofs[C.row_left[C.rows[v][t]]][p];
        }
    return out;
}

// deterministic recovery core at a fixed randomness string; reads only composed right
// labels (the proofs), never the matrix labels
inline Assignment comp_recover_with_rand(const ComposedInstance& C, const ComposedAssignment& pi,
                                         int rand) {
    const LabelCoverInstance& I = C.source;
    require(static_cast<int>(pi.right.size()) == C.num_right(), "comp_recover: proof side shape mismatch");
    require(rand >= 0 && rand < (1 << C.r_bits), "comp_recover: randomness out of range");
    Assignment out;
    out.right.assign(I.nV, 0);
    for (int v = 0; v < I.nV; v++) {
        int verdict = -1;
        bool unanimous = !C.rows[v].empty();
        for (int t = 0; t < static_cast<int>(C.rows[v].size()) && unanimous; t++) {
            int e = C.rows[v][t];
            int u = C.row_left[e];
            QueryPlan plan = C.decoder.query(C.circuits[u], C.row_j[e], rand);
            int folded = 0;
            for (int s = 0; s < C.decoder.q; s++)
                folded = folded * C.decoder.sigma + pi.right[C.right_index(u, plan.positions[s])];
            int z = plan.table[folded];
            if (z < 0 || (t > 0 && z != verdict)) unanimous = false;
            if (t == 0) verdict = z;
        }
        out.right[v] = unanimous ? verdict : 0;
    }
    out.left.assign(I.nU, 0);
    for (int u = 0; u < I.nU; u++) {
        int chosen = 0;
        for (int a = 0; a < I.sigmaU; a++) {
            if (!I.predicates[u][a]) continue;
            bool consistent = true;
            for (int e : C.circuits[u].neighbor_edges)
                consistent = consistent && I.projections[e][a] == out.right[I.edges[e].second];
            if (consistent) {
                chosen = a;
                break;
            }
        }
        out.left[u] = chosen;
    }
    return out;
}

inline Assignment comp_recover(const ComposedInstance& C, const ComposedAssignment& pi, uint64_t seed) {
    SplitMix64 rng = task_stream(seed, "comp-recover");
    return comp_recover_with_rand(C, pi, rng.below_int(1 << C.r_bits));
}

// exact count of (j, r, slot) query triples of u's circuit reading proof position p,
// with j over the live tuple coordinates
inline int query_degree(const ComposedInstance& C, int u, int p) {
    int count = 0;
    const Circuit& c = C.circuits[u];
    for (int j = 0; j < c.degree(); j++)
        for (int r = 0; r < (1 << C.r_bits); r++) {
            QueryPlan plan = C.decoder.query(c, j, r);
            for (int pos : plan.positions) count += pos == p;
        }
    return count;
}

inline int max_query_degree(const ComposedInstance& C) {
    int best = 0;
    for (int u = 0; u < C.source.nU; u++)
        for (int p = 0; p < C.m; p++) best = std::max(best, query_degree(C, u, p));
    return best;
}

}  // namespace redlab
