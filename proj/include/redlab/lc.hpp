#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "redlab/common.hpp"

namespace redlab {

// Assignment for a bipartite instance: one label per left vertex, one per right vertex.
struct Assignment {
    std::vector<int> left;
    std::vector<int> right;

    bool operator==(const Assignment& o) const { return left == o.left && right == o.right; }
    bool operator<(const Assignment& o) const {
        if (left != o.left) return left < o.left;
        return right < o.right;
    }
};

inline int hamming_vec(const std::vector<int>& a, const std::vector<int>& b) {
    require(a.size() == b.size(), "hamming: domain mismatch");
    int d = 0;
    for (size_t i = 0; i < a.size(); i++) d += (a[i] != b[i]);
    return d;
}

struct DistanceVector {
    int left = 0;
    int right = 0;
};

inline DistanceVector distance_vector(const Assignment& a, const Assignment& b) {
    return {hamming_vec(a.left, b.left), hamming_vec(a.right, b.right)};
}

inline int hamming(const Assignment& a, const Assignment& b) {
    DistanceVector d = distance_vector(a, b);
    return d.left + d.right;
}

// Left-predicate label cover. Edges form an ordered multilist; parallel edges are
// first-class and every per-edge/per-vertex table is explicit and index-aligned.
struct LabelCoverInstance {
    int nU = 0;
    int nV = 0;
    int sigmaU = 0;
    int sigmaV = 0;
    std::vector<std::pair<int, int>> edges;        // (u, v)
    std::vector<std::vector<int>> projections;     // per edge: Sigma_U -> Sigma_V
    std::vector<std::vector<uint8_t>> predicates;  // per left vertex: Sigma_U -> {0,1}

    void validate() const {
        require(nU >= 0 && nV >= 0 && sigmaU >= 1 && sigmaV >= 1, "instance: bad sizes");
        require(projections.size() == edges.size(), "instance: projection count");
        require(static_cast<int>(predicates.size()) == nU, "instance: predicate count");
        for (auto& [u, v] : edges)
            require(u >= 0 && u < nU && v >= 0 && v < nV, "instance: edge endpoint out of range");
        for (auto& f : projections) {
            require(static_cast<int>(f.size()) == sigmaU, "instance: projection table size");
            for (int y : f) require(y >= 0 && y < sigmaV, "instance: projection value out of range");
        }
        for (auto& p : predicates)
            require(static_cast<int>(p.size()) == sigmaU, "instance: predicate table size");
    }

    bool ordinary() const {
        for (auto& p : predicates)
            for (uint8_t b : p)
                if (!b) return false;
        return true;
    }

    std::vector<int> left_degrees() const {
        std::vector<int> d(nU, 0);
        for (auto& [u, v] : edges) d[u]++;
        return d;
    }

    std::vector<int> right_degrees() const {
        std::vector<int> d(nV, 0);
        for (auto& [u, v] : edges) d[v]++;
        return d;
    }

    // per-vertex incident edge ids, in edge-index order (the canonical neighbor ordering)
    std::vector<std::vector<int>> left_incident() const {
        std::vector<std::vector<int>> inc(nU);
        for (size_t e = 0; e < edges.size(); e++) inc[edges[e].first].push_back(static_cast<int>(e));
        return inc;
    }

    std::vector<std::vector<int>> right_incident() const {
        std::vector<std::vector<int>> inc(nV);
        for (size_t e = 0; e < edges.size(); e++) inc[edges[e].second].push_back(static_cast<int>(e));
        return inc;
    }

    bool edge_satisfied(size_t e, const Assignment& pi) const {
        auto [u, v] = edges[e];
        int a = pi.left[u];
        return predicates[u][a] && projections[e][a] == pi.right[v];
    }
};

inline rat value(const LabelCoverInstance& I, const Assignment& pi) {
    require(static_cast<int>(pi.left.size()) == I.nU && static_cast<int>(pi.right.size()) == I.nV,
            "value: assignment domain mismatch");
    require(!I.edges.empty(), "value: no edges");
    int64_t sat = 0;
    for (size_t e = 0; e < I.edges.size(); e++) sat += I.edge_satisfied(e, pi);
    return rat(sat, static_cast<int64_t>(I.edges.size()));
}

struct OptResult {
    rat value;
    Assignment witness;
};

// exact maximum by full enumeration; ties broken lexicographically on (left, right)
inline OptResult opt_bruteforce(const LabelCoverInstance& I, double budget = 5e7) {
    double space = 1.0;
    for (int i = 0; i < I.nU; i++) space *= I.sigmaU;
    for (int i = 0; i < I.nV; i++) space *= I.sigmaV;
    require(space <= budget, "opt_bruteforce: instance too large for exhaustive oracle");
    require(!I.edges.empty(), "opt_bruteforce: no edges");

    Assignment cur{std::vector<int>(I.nU, 0), std::vector<int>(I.nV, 0)};
    OptResult best{rat(-1), cur};
    int64_t total = static_cast<int64_t>(I.edges.size());
    while (true) {
        int64_t sat = 0;
        for (size_t e = 0; e < I.edges.size(); e++) sat += I.edge_satisfied(e, cur);
        rat v(sat, total);
        if (v > best.value) best = {v, cur};
        // odometer over (left, right); lexicographic order makes the first maximum stick
        int i = I.nU + I.nV - 1;
        for (; i >= 0; i--) {
            int& slot = i < I.nU ? cur.left[i] : cur.right[i - I.nU];
            int cap = i < I.nU ? I.sigmaU : I.sigmaV;
            if (++slot < cap) break;
            slot = 0;
        }
        if (i < 0) break;
    }
    return best;
}

// 2-CSP over a single vertex set; constraints carry explicit relation tables.
struct TwoCspInstance {
    int n = 0;
    int sigma = 0;
    struct Constraint {
        int a = 0;
        int b = 0;
        std::vector<uint8_t> rel;  // sigma*sigma, row-major over (label(a), label(b))
    };
    std::vector<Constraint> constraints;

    void validate() const {
        require(n >= 0 && sigma >= 1, "two_csp: bad sizes");
        for (auto& c : constraints) {
            require(c.a >= 0 && c.a < n && c.b >= 0 && c.b < n, "two_csp: endpoint out of range");
            require(static_cast<int>(c.rel.size()) == sigma * sigma, "two_csp: relation size");
        }
    }

    bool constraint_satisfied(size_t i, const std::vector<int>& labels) const {
        const Constraint& c = constraints[i];
        return c.rel[labels[c.a] * sigma + labels[c.b]] != 0;
    }

    std::vector<int> degrees() const {
        std::vector<int> d(n, 0);
        for (auto& c : constraints) {
            d[c.a]++;
            d[c.b]++;
        }
        return d;
    }

    bool regular() const {
        auto d = degrees();
        for (int x : d)
            if (x != d[0]) return false;
        return true;
    }
};

inline rat csp_value(const TwoCspInstance& phi, const std::vector<int>& labels) {
    require(static_cast<int>(labels.size()) == phi.n, "csp_value: domain mismatch");
    require(!phi.constraints.empty(), "csp_value: no constraints");
    int64_t sat = 0;
    for (size_t i = 0; i < phi.constraints.size(); i++) sat += phi.constraint_satisfied(i, labels);
    return rat(sat, static_cast<int64_t>(phi.constraints.size()));
}

struct Swap {
    enum class Kind { Projection, Predicate, CspConstraint, ScToggle };
    Kind kind = Kind::Projection;
    int index = 0;              // edge id / left vertex / constraint id / set index
    int element = -1;           // ScToggle only
    std::vector<int> table;     // Projection only
    std::vector<uint8_t> bits;  // Predicate / CspConstraint
};

inline LabelCoverInstance apply_swap(const LabelCoverInstance& I, const Swap& s) {
    LabelCoverInstance out = I;
    switch (s.kind) {
        case Swap::Kind::Projection: {
            require(s.index >= 0 && s.index < static_cast<int>(I.edges.size()), "invalid swap: edge index");
            require(static_cast<int>(s.table.size()) == I.sigmaU, "invalid swap: projection shape");
            for (int y : s.table) require(y >= 0 && y < I.sigmaV, "invalid swap: projection value");
            out.projections[s.index] = s.table;
            break;
        }
        case Swap::Kind::Predicate: {
            require(s.index >= 0 && s.index < I.nU, "invalid swap: left vertex");
            require(static_cast<int>(s.bits.size()) == I.sigmaU, "invalid swap: predicate shape");
            out.predicates[s.index] = s.bits;
            break;
        }
        default:
            fail("invalid swap: kind not applicable to label cover");
    }
    return out;
}

inline TwoCspInstance apply_swap(const TwoCspInstance& phi, const Swap& s) {
    require(s.kind == Swap::Kind::CspConstraint, "invalid swap: kind not applicable to 2-CSP");
    require(s.index >= 0 && s.index < static_cast<int>(phi.constraints.size()), "invalid swap: constraint index");
    require(static_cast<int>(s.bits.size()) == phi.sigma * phi.sigma, "invalid swap: relation shape");
    TwoCspInstance out = phi;
    out.constraints[s.index].rel = s.bits;
    return out;
}

// count of differing tables; minimal since substitutions commute
inline int swap_distance(const LabelCoverInstance& I, const LabelCoverInstance& J) {
    require(I.nU == J.nU && I.nV == J.nV && I.sigmaU == J.sigmaU && I.sigmaV == J.sigmaV &&
                I.edges == J.edges,
            "incomparable instances");
    int d = 0;
    for (size_t e = 0; e < I.edges.size(); e++) d += (I.projections[e] != J.projections[e]);
    for (int u = 0; u < I.nU; u++) d += (I.predicates[u] != J.predicates[u]);
    return d;
}

// canonical shortest swap path: replace differing projections in edge order, then predicates
inline std::vector<LabelCoverInstance> swap_path(const LabelCoverInstance& I,
                                                 const LabelCoverInstance& J) {
    require(I.nU == J.nU && I.nV == J.nV && I.sigmaU == J.sigmaU && I.sigmaV == J.sigmaV &&
                I.edges == J.edges,
            "incomparable instances");
    std::vector<LabelCoverInstance> path;
    path.push_back(I);
    LabelCoverInstance cur = I;
    for (size_t e = 0; e < I.edges.size(); e++) {
        if (cur.projections[e] != J.projections[e]) {
            cur.projections[e] = J.projections[e];
            path.push_back(cur);
        }
    }
    for (int u = 0; u < I.nU; u++) {
        if (cur.predicates[u] != J.predicates[u]) {
            cur.predicates[u] = J.predicates[u];
            path.push_back(cur);
        }
    }
    return path;
}

}  // namespace redlab
