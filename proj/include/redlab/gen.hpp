#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "redlab/lc.hpp"
#include "redlab/rng.hpp"

namespace redlab {

// planted-satisfiable label cover: projections and predicates are random but always
// accept the planted assignment, so value(I, plant) = 1 by construction
struct PlantedLabelCover {
    LabelCoverInstance instance;
    Assignment plant;
};

inline PlantedLabelCover planted_label_cover(int nU, int nV, int nE, int sigmaU, int sigmaV,
                                             SplitMix64& rng) {
    require(nU >= 1 && nV >= 1 && nE >= 1, "planted_label_cover: empty shape");
    PlantedLabelCover out;
    LabelCoverInstance& I = out.instance;
    I.nU = nU;
    I.nV = nV;
    I.sigmaU = sigmaU;
    I.sigmaV = sigmaV;

    out.plant.left.resize(nU);
    out.plant.right.resize(nV);
    for (int u = 0; u < nU; u++) out.plant.left[u] = rng.below_int(sigmaU);
    for (int v = 0; v < nV; v++) out.plant.right[v] = rng.below_int(sigmaV);

    // first nU+nV-ish edges touch every vertex so nothing is isolated
    for (int e = 0; e < nE; e++) {
        int u = e < nU ? e : rng.below_int(nU);
        int v = e < nU ? rng.below_int(nV) : (e - nU < nV ? e - nU : rng.below_int(nV));
        I.edges.emplace_back(u, v);
        std::vector<int> f(sigmaU);
        for (int a = 0; a < sigmaU; a++) f[a] = rng.below_int(sigmaV);
        f[out.plant.left[u]] = out.plant.right[v];
        I.projections.push_back(std::move(f));
    }
    for (int u = 0; u < nU; u++) {
        std::vector<uint8_t> p(sigmaU);
        for (int a = 0; a < sigmaU; a++) p[a] = static_cast<uint8_t>(rng.below(2));
        p[out.plant.left[u]] = 1;
        I.predicates.push_back(std::move(p));
    }
    I.validate();
    return out;
}

// planted label cover with every left degree exactly dl and every right degree exactly dr
// (requires nU*dl == nV*dr); wiring is a union of shifted round-robins
inline PlantedLabelCover planted_biregular_label_cover(int nU, int nV, int dl, int dr, int sigmaU,
                                                       int sigmaV, SplitMix64& rng) {
    require(nU * dl == nV * dr, "planted_biregular_label_cover: degree mismatch");
    PlantedLabelCover out;
    LabelCoverInstance& I = out.instance;
    I.nU = nU;
    I.nV = nV;
    I.sigmaU = sigmaU;
    I.sigmaV = sigmaV;

    out.plant.left.resize(nU);
    out.plant.right.resize(nV);
    for (int u = 0; u < nU; u++) out.plant.left[u] = rng.below_int(sigmaU);
    for (int v = 0; v < nV; v++) out.plant.right[v] = rng.below_int(sigmaV);

    int nE = nU * dl;
    std::vector<int> rights(nE);
    for (int i = 0; i < nE; i++) rights[i] = i % nV;  // each right vertex dr times
    rng.shuffle(rights);
    for (int i = 0; i < nE; i++) {
        int u = i / dl;
        int v = rights[i];
        I.edges.emplace_back(u, v);
        std::vector<int> f(sigmaU);
        for (int a = 0; a < sigmaU; a++) f[a] = rng.below_int(sigmaV);
        f[out.plant.left[u]] = out.plant.right[v];
        I.projections.push_back(std::move(f));
    }
    for (int u = 0; u < nU; u++) {
        std::vector<uint8_t> p(sigmaU);
        for (int a = 0; a < sigmaU; a++) p[a] = static_cast<uint8_t>(rng.below(2));
        p[out.plant.left[u]] = 1;
        I.predicates.push_back(std::move(p));
    }
    I.validate();
    return out;
}

struct PlantedCsp {
    TwoCspInstance instance;
    std::vector<int> plant;
};

// planted-satisfiable regular 2-CSP on a cycle (degree 2) or a cycle plus a parallel
// shifted cycle (degree 4), binary or larger alphabet; relations keep the planted pair
inline PlantedCsp planted_regular_csp(int n, int sigma, int degree, SplitMix64& rng,
                                      bool full_relations = false) {
    require(n >= 3, "planted_regular_csp: need at least 3 vertices");
    require(degree == 2 || degree == 4, "planted_regular_csp: degree must be 2 or 4");
    PlantedCsp out;
    TwoCspInstance& phi = out.instance;
    phi.n = n;
    phi.sigma = sigma;
    out.plant.resize(n);
    for (int i = 0; i < n; i++) out.plant[i] = rng.below_int(sigma);

    auto add_edge = [&](int a, int b) {
        TwoCspInstance::Constraint c;
        c.a = a;
        c.b = b;
        c.rel.assign(sigma * sigma, full_relations ? 1 : 0);
        if (!full_relations) {
            for (int x = 0; x < sigma; x++)
                for (int y = 0; y < sigma; y++) c.rel[x * sigma + y] = static_cast<uint8_t>(rng.below(2));
        }
        c.rel[out.plant[a] * sigma + out.plant[b]] = 1;
        phi.constraints.push_back(std::move(c));
    };

    for (int i = 0; i < n; i++) add_edge(i, (i + 1) % n);
    if (degree == 4) {
        int shift = 2 + rng.below_int(std::max(1, n - 3));
        for (int i = 0; i < n; i++) add_edge(i, (i + shift) % n);
    }
    phi.validate();
    require(phi.regular(), "planted_regular_csp: construction not regular");
    return out;
}

inline PlantedCsp triangle_csp(SplitMix64& rng, bool full_relations = false) {
    return planted_regular_csp(3, 2, 2, rng, full_relations);
}

inline Swap random_projection_swap(const LabelCoverInstance& I, SplitMix64& rng) {
    Swap s;
    s.kind = Swap::Kind::Projection;
    s.index = rng.below_int(static_cast<int>(I.edges.size()));
    while (true) {
        s.table.assign(I.sigmaU, 0);
        for (int a = 0; a < I.sigmaU; a++) s.table[a] = rng.below_int(I.sigmaV);
        if (s.table != I.projections[s.index]) return s;  // must actually differ
    }
}

inline Swap random_predicate_swap(const LabelCoverInstance& I, SplitMix64& rng) {
    Swap s;
    s.kind = Swap::Kind::Predicate;
    s.index = rng.below_int(I.nU);
    while (true) {
        s.bits.assign(I.sigmaU, 0);
        for (int a = 0; a < I.sigmaU; a++) s.bits[a] = static_cast<uint8_t>(rng.below(2));
        if (s.bits != I.predicates[s.index]) return s;
    }
}

inline Swap random_constraint_swap(const TwoCspInstance& phi, SplitMix64& rng) {
    Swap s;
    s.kind = Swap::Kind::CspConstraint;
    s.index = rng.below_int(static_cast<int>(phi.constraints.size()));
    while (true) {
        s.bits.assign(phi.sigma * phi.sigma, 0);
        for (size_t i = 0; i < s.bits.size(); i++) s.bits[i] = static_cast<uint8_t>(rng.below(2));
        if (s.bits != phi.constraints[s.index].rel) return s;
    }
}

inline Assignment random_assignment(const LabelCoverInstance& I, SplitMix64& rng) {
    Assignment pi;
    pi.left.resize(I.nU);
    pi.right.resize(I.nV);
    for (int u = 0; u < I.nU; u++) pi.left[u] = rng.below_int(I.sigmaU);
    for (int v = 0; v < I.nV; v++) pi.right[v] = rng.below_int(I.sigmaV);
    return pi;
}

}  // namespace redlab
