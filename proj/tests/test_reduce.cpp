#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "redlab/gen.hpp"
#include "redlab/reduce.hpp"

using namespace redlab;

namespace {

// biregular planted fixture with right degree 6 so d=4 clouds exist
PlantedLabelCover dr_fixture(uint64_t seed) {
    SplitMix64 rng(seed);
    return planted_biregular_label_cover(4, 2, 3, 6, 2, 3, rng);
}

Assignment lift_to_clouds(const Assignment& pi, const DrShape& shape, int nU) {
    Assignment out;
    out.left = pi.left;
    REQUIRE(static_cast<int>(pi.left.size()) == nU);
    for (int v = 0; v < shape.source_nV; v++)
        for (int i = 0; i < shape.source_right_degrees[v]; i++) out.right.push_back(pi.right[v]);
    return out;
}

Assignment lift_through_code(const Assignment& pi, const Code& c) {
    Assignment out;
    out.left = pi.left;
    for (int label : pi.right)
        for (int i = 0; i < c.k; i++) out.right.push_back(c.table[label][i]);
    return out;
}

}  // namespace

TEST_CASE("degree reduction counts and regularity") {
    auto planted = dr_fixture(3001);
    const LabelCoverInstance& I = planted.instance;
    ExpanderPackage pkg = build_expander_package(I, 4, 77);
    LabelCoverInstance J = degree_reduce(I, 4, pkg);
    J.validate();

    CHECK(J.nU == I.nU);
    CHECK(J.nV == static_cast<int>(I.edges.size()));  // one cloud slot per source edge
    CHECK(J.edges.size() == I.edges.size() * 4);
    for (int deg : J.right_degrees()) CHECK(deg == 4);
    auto src_left = I.left_degrees();
    auto dst_left = J.left_degrees();
    for (int u = 0; u < I.nU; u++) CHECK(dst_left[u] == 4 * src_left[u]);
    CHECK(J.predicates == I.predicates);

    SECTION("each source edge is copied exactly d times, tables inherited") {
        std::map<std::pair<int, std::vector<int>>, int> src_count, dst_count;
        for (size_t e = 0; e < I.edges.size(); e++) src_count[{I.edges[e].first, I.projections[e]}]++;
        for (size_t e = 0; e < J.edges.size(); e++) dst_count[{J.edges[e].first, J.projections[e]}]++;
        for (auto& [key, n] : src_count) CHECK(dst_count[key] == 4 * n);
    }
}

TEST_CASE("degree reduction preconditions") {
    auto planted = dr_fixture(3002);
    const LabelCoverInstance& I = planted.instance;
    CHECK_THROWS_AS(build_expander_package(I, 3, 1), Error);   // odd
    CHECK_THROWS_AS(build_expander_package(I, 2, 1), Error);   // below 4
    CHECK_THROWS_AS(build_expander_package(I, 6, 1), Error);   // no 6-regular graph on 6 cloud vertices
    ExpanderPackage pkg = build_expander_package(I, 4, 1);
    CHECK_THROWS_AS(degree_reduce(I, 6, pkg), Error);          // package degree mismatch
}

TEST_CASE("degree reduction completeness via the cloud-constant lift") {
    auto planted = dr_fixture(3003);
    const LabelCoverInstance& I = planted.instance;
    ExpanderPackage pkg = build_expander_package(I, 4, 78);
    LabelCoverInstance J = degree_reduce(I, 4, pkg);
    DrShape shape = dr_shape(I, 4);

    SECTION("planted optimum lifts to a perfect assignment") {
        Assignment lifted = lift_to_clouds(planted.plant, shape, I.nU);
        CHECK(value(J, lifted) == rat(1));
    }
    SECTION("any cloud-constant lift preserves the value exactly") {
        SplitMix64 rng(31);
        for (int rep = 0; rep < 20; rep++) {
            Assignment pi = random_assignment(I, rng);
            CHECK(value(J, lift_to_clouds(pi, shape, I.nU)) == value(I, pi));
        }
    }
}

TEST_CASE("degree reduction swap factors are exact") {
    auto planted = dr_fixture(3004);
    const LabelCoverInstance& I = planted.instance;
    ExpanderPackage pkg = build_expander_package(I, 4, 79);
    SplitMix64 rng(32);
    for (int rep = 0; rep < 15; rep++) {
        Swap s = random_projection_swap(I, rng);
        CHECK(swap_distance(degree_reduce(I, 4, pkg), degree_reduce(apply_swap(I, s), 4, pkg)) == 4);
    }
    for (int rep = 0; rep < 15; rep++) {
        Swap s = random_predicate_swap(I, rng);
        CHECK(swap_distance(degree_reduce(I, 4, pkg), degree_reduce(apply_swap(I, s), 4, pkg)) == 1);
    }
}

TEST_CASE("degree reduction recovery") {
    auto planted = dr_fixture(3005);
    const LabelCoverInstance& I = planted.instance;
    ExpanderPackage pkg = build_expander_package(I, 4, 80);
    LabelCoverInstance J = degree_reduce(I, 4, pkg);
    DrShape shape = dr_shape(I, 4);

    SECTION("cloud-constant assignments recover deterministically") {
        Assignment lifted = lift_to_clouds(planted.plant, shape, I.nU);
        for (uint64_t seed : {0ull, 1ull, 99ull})
            CHECK(dr_recover(J, lifted, shape, seed) == planted.plant);
    }
    SECTION("one differing cloud slot moves mass exactly 1/D_v") {
        SplitMix64 rng(33);
        Assignment a = lift_to_clouds(random_assignment(I, rng), shape, I.nU);
        Assignment b = a;
        int v = 1;
        int slot = shape.cloud_offset[v] + 2;
        b.right[slot] = (b.right[slot] + 1) % I.sigmaV;
        CHECK(dr_coupled_expected_hamming(a, b, shape) == rat(1, shape.source_right_degrees[v]));
    }
    SECTION("closed-form coupling matches full enumeration of index draws") {
        // tiny shape so the product space stays enumerable: right degrees (6,6) -> 36 draws
        SplitMix64 rng(34);
        Assignment a = random_assignment(J, rng);
        Assignment b = random_assignment(J, rng);
        std::vector<int> idx(shape.source_nV, 0);
        int64_t total = 1;
        for (int D : shape.source_right_degrees) total *= D;
        rat acc = 0;
        while (true) {
            acc += rat(hamming(dr_recover_indices(a, shape, idx), dr_recover_indices(b, shape, idx)), total);
            int v = shape.source_nV - 1;
            for (; v >= 0; v--) {
                if (++idx[v] < shape.source_right_degrees[v]) break;
                idx[v] = 0;
            }
            if (v < 0) break;
        }
        CHECK(acc == dr_coupled_expected_hamming(a, b, shape));
    }
    SECTION("coupled recovery is 1-Lipschitz in the target assignment") {
        SplitMix64 rng(35);
        for (int rep = 0; rep < 30; rep++) {
            Assignment a = random_assignment(J, rng);
            Assignment b = random_assignment(J, rng);
            CHECK(dr_coupled_expected_hamming(a, b, shape) <= rat(hamming(a, b)));
        }
    }
}

TEST_CASE("degree reduction soundness spot-check with measured lambda") {
    // clouds of 80 with d=44 push measured lambda low enough for a non-vacuous premise
    SplitMix64 rng(3006);
    auto planted = planted_biregular_label_cover(40, 2, 4, 80, 2, 2, rng);
    const LabelCoverInstance& I = planted.instance;
    ExpanderPackage pkg = build_expander_package(I, 44, 81);
    LabelCoverInstance J = degree_reduce(I, 44, pkg);
    DrShape shape = dr_shape(I, 44);
    double lambda = pkg.max_lambda();
    INFO("measured lambda " << lambda);
    REQUIRE(lambda < 0.45);  // premise below is vacuous otherwise

    const double margin = 0.1;
    int checked = 0, flagged = 0;
    auto probe = [&](const Assignment& pi_target, double eps) {
        double val = static_cast<double>(value(J, pi_target));
        double rec = static_cast<double>(dr_expected_recovered_value(I, shape, pi_target));
        if (val >= eps + 2 * lambda + margin) {
            checked++;
            CHECK(rec >= eps);
        } else if (val >= eps + 2 * lambda) {
            flagged++;  // near-threshold: record, do not fail
        }
    };
    probe(lift_to_clouds(planted.plant, shape, I.nU), 0.05);
    for (int rep = 0; rep < 30; rep++) {
        // noised honest lifts keep the premise reachable
        Assignment pi = lift_to_clouds(planted.plant, shape, I.nU);
        for (int v = 0; v < static_cast<int>(pi.right.size()); v++)
            if (rng.below(10) == 0) pi.right[v] = rng.below_int(I.sigmaV);
        probe(pi, 0.05);
    }
    INFO("premise held with margin " << checked << " times, near-threshold " << flagged);
    CHECK(checked >= 1);
}

TEST_CASE("alphabet reduction counts and completeness") {
    SplitMix64 rng(3007);
    auto planted = planted_label_cover(3, 2, 5, 2, 4, rng);
    const LabelCoverInstance& I = planted.instance;
    Code c = build_code(4, rat(1, 100));  // q=4, t=1, k=4, distance 1
    REQUIRE(c.t == 1);
    LabelCoverInstance J = alphabet_reduce(I, c);
    J.validate();

    CHECK(J.nU == I.nU);
    CHECK(J.nV == I.nV * c.k);
    CHECK(J.sigmaV == c.target_sigma);
    CHECK(J.edges.size() == I.edges.size() * c.k);
    CHECK(J.predicates == I.predicates);
    CHECK(value(J, lift_through_code(planted.plant, c)) == rat(1));

    SECTION("alphabet mismatch is rejected") {
        Code wrong = build_code(3, rat(1, 100));
        CHECK_THROWS_AS(alphabet_reduce(I, wrong), Error);
    }
    SECTION("encoded lifts preserve the value exactly for distance-1 codes") {
        // every coordinate of a distance-1 code separates labels, so each copied edge
        // is satisfied iff its source edge is
        for (int rep = 0; rep < 20; rep++) {
            Assignment pi = random_assignment(I, rng);
            CHECK(value(J, lift_through_code(pi, c)) == value(I, pi));
        }
    }
}

TEST_CASE("alphabet reduction swap factors") {
    SplitMix64 rng(3008);
    auto planted = planted_label_cover(3, 2, 5, 2, 4, rng);
    const LabelCoverInstance& I = planted.instance;

    SECTION("distance-1 code: projection swap factor is exactly k") {
        Code c = build_code(4, rat(1, 100));
        REQUIRE(c.certified_distance == rat(1));
        for (int rep = 0; rep < 15; rep++) {
            Swap s = random_projection_swap(I, rng);
            CHECK(swap_distance(alphabet_reduce(I, c), alphabet_reduce(apply_swap(I, s), c)) == c.k);
        }
    }
    SECTION("general code: factor is between 1 and k") {
        SplitMix64 rng8(3009);
        auto planted8 = planted_label_cover(3, 2, 5, 2, 8, rng8);
        const LabelCoverInstance& I8 = planted8.instance;
        Code c = build_code(8, rat(1, 2));  // distance 2/3: coordinates may coincide
        for (int rep = 0; rep < 15; rep++) {
            Swap s = random_projection_swap(I8, rng8);
            int dist = swap_distance(alphabet_reduce(I8, c), alphabet_reduce(apply_swap(I8, s), c));
            CHECK(dist >= 1);
            CHECK(dist <= c.k);
        }
    }
    SECTION("predicate swap factor is exactly 1") {
        Code c = build_code(4, rat(1, 100));
        for (int rep = 0; rep < 15; rep++) {
            Swap s = random_predicate_swap(I, rng);
            CHECK(swap_distance(alphabet_reduce(I, c), alphabet_reduce(apply_swap(I, s), c)) == 1);
        }
    }
}

TEST_CASE("alphabet reduction recovery distributions") {
    SplitMix64 rng(3010);
    auto planted = planted_label_cover(3, 2, 5, 2, 3, rng);
    const LabelCoverInstance& I = planted.instance;
    Code c = build_code(3, rat(1, 100));
    LabelCoverInstance J = alphabet_reduce(I, c);

    SECTION("unanimous neighborhoods recover deterministically") {
        Assignment lifted = lift_through_code(planted.plant, c);
        for (uint64_t seed : {0ull, 5ull, 123ull})
            CHECK(ar_recover(I, lifted, seed) == planted.plant);
    }
    SECTION("a split 2-edge neighborhood recovers each vote with probability 1/2") {
        LabelCoverInstance S;
        S.nU = 2;
        S.nV = 1;
        S.sigmaU = 1;
        S.sigmaV = 3;
        S.edges = {{0, 0}, {1, 0}};
        S.projections = {{1}, {2}};  // votes b1=1, b2=2
        S.predicates = {{1}, {1}};
        Assignment pi{{0, 0}, {0, 0, 0}};  // right part shaped for T_AR, unused by recovery
        Dist<Assignment> d = ar_recover_dist(S, pi);
        REQUIRE(d.support.size() == 2);
        std::map<int, rat> marginal;
        for (auto& [a, w] : d.support) marginal[a.right[0]] += w;
        CHECK(marginal[1] == rat(1, 2));
        CHECK(marginal[2] == rat(1, 2));
    }
    SECTION("coupled recovery obeys the degree-ratio Lipschitz bound") {
        auto ldeg = I.left_degrees();
        auto rdeg = I.right_degrees();
        int max_left = *std::max_element(ldeg.begin(), ldeg.end());
        int min_right = *std::min_element(rdeg.begin(), rdeg.end());
        rat L = 1 + rat(max_left, min_right);
        for (int rep = 0; rep < 30; rep++) {
            Assignment a = random_assignment(J, rng);
            Assignment b = random_assignment(J, rng);
            int h = hamming(a, b);
            if (h == 0) continue;
            CHECK(ar_coupled_expected_hamming(I, a, b) <= L * h);
        }
    }
    SECTION("closed-form coupling matches shared-choice enumeration") {
        auto rdeg = I.right_degrees();
        for (int rep = 0; rep < 10; rep++) {
            Assignment a = random_assignment(J, rng);
            Assignment b = random_assignment(J, rng);
            // enumerate choice vectors directly
            std::vector<int> choices(I.nV, 0);
            rat acc = 0;
            int64_t total = 1;
            for (int d : rdeg) total *= d;
            while (true) {
                acc += rat(hamming(ar_recover_choices(I, a, choices), ar_recover_choices(I, b, choices)), total);
                int v = I.nV - 1;
                for (; v >= 0; v--) {
                    if (++choices[v] < rdeg[v]) break;
                    choices[v] = 0;
                }
                if (v < 0) break;
            }
            CHECK(acc == ar_coupled_expected_hamming(I, a, b));
        }
    }
    SECTION("a source projection swap drifts recovery by at most 1/deg(v)") {
        auto rdeg = I.right_degrees();
        for (int rep = 0; rep < 20; rep++) {
            Swap s = random_projection_swap(I, rng);
            LabelCoverInstance I2 = apply_swap(I, s);
            int v = I.edges[s.index].second;
            Assignment pi = random_assignment(J, rng);
            rat drift = ar_source_swap_coupled_hamming(I, I2, pi);
            CHECK(drift <= rat(1, rdeg[v]));
        }
    }
}

TEST_CASE("alphabet reduction soundness spot-check") {
    // exhaustively scan target assignments; above the threshold the expected recovered
    // value must clear epsilon. eta=1/16 keeps the threshold below 1.
    SplitMix64 rng(3011);
    auto planted = planted_label_cover(2, 2, 4, 2, 2, rng);
    const LabelCoverInstance& I = planted.instance;
    rat eta(1, 16);
    Code c = build_code(2, rat(eta * eta * eta));
    REQUIRE(c.certified_distance >= 1 - eta * eta * eta);
    LabelCoverInstance J = alphabet_reduce(I, c);

    double eps = 0.1;
    double threshold = ar_soundness_threshold(eps, 1.0 / 16.0);
    REQUIRE(threshold < 1.0);
    const double margin = 0.05;
    int checked = 0, flagged = 0;

    Assignment pi{std::vector<int>(J.nU, 0), std::vector<int>(J.nV, 0)};
    while (true) {
        double val = static_cast<double>(value(J, pi));
        if (val >= threshold + margin) {
            checked++;
            CHECK(static_cast<double>(ar_expected_recovered_value(I, pi)) >= eps);
        } else if (val >= threshold) {
            flagged++;
        }
        int i = J.nU + J.nV - 1;
        for (; i >= 0; i--) {
            int& slot = i < J.nU ? pi.left[i] : pi.right[i - J.nU];
            int cap = i < J.nU ? J.sigmaU : J.sigmaV;
            if (++slot < cap) break;
            slot = 0;
        }
        if (i < 0) break;
    }
    INFO("checked " << checked << ", flagged " << flagged);
    CHECK(checked >= 1);  // the encoded plant clears the threshold
}

TEST_CASE("combined reduction branches") {
    SECTION("low right degrees: alphabet reduction only") {
        SplitMix64 rng(3012);
        auto planted = planted_biregular_label_cover(3, 2, 2, 3, 2, 2, rng);
        RedResult r = reduce_combined(planted.instance, rat(1, 20), 91, 1);
        CHECK_FALSE(r.handle.dr_applied);
        CHECK(r.instance.nV == planted.instance.nV * r.handle.code.k);
    }
    SECTION("default branch constant keeps desk-scale instances on the alphabet path") {
        SplitMix64 rng(3013);
        auto planted = planted_biregular_label_cover(4, 2, 3, 6, 2, 2, rng);
        RedResult r = reduce_combined(planted.instance, rat(1, 20), 92);
        CHECK_FALSE(r.handle.dr_applied);
    }
    SECTION("high right degrees with c=1 take the degree-reduction branch") {
        SplitMix64 rng(3014);
        auto planted = planted_biregular_label_cover(12, 2, 4, 24, 2, 2, rng);
        rat eps(1, 20);
        RedResult r = reduce_combined(planted.instance, eps, 93, 1);
        REQUIRE(r.handle.dr_applied);
        CHECK(r.handle.d == 20);  // min even integer >= c/eps = 20
        for (int deg : r.instance.right_degrees()) CHECK(deg == r.handle.d);
        CHECK(r.instance.nV == static_cast<int>(planted.instance.edges.size()) * r.handle.code.k);
    }
    SECTION("epsilon range is enforced") {
        SplitMix64 rng(3015);
        auto planted = planted_biregular_label_cover(3, 2, 2, 3, 2, 2, rng);
        CHECK_THROWS_AS(reduce_combined(planted.instance, rat(1, 16), 1), Error);
        CHECK_THROWS_AS(reduce_combined(planted.instance, rat(0), 1), Error);
    }
}

TEST_CASE("combined reduction preserves satisfiability and recovers the plant") {
    SplitMix64 rng(3016);
    for (int rep = 0; rep < 10; rep++) {
        // alternate between branch-skipping and branch-taking shapes
        bool big = rep % 2 == 1;
        auto planted = big ? planted_biregular_label_cover(12, 2, 4, 24, 2, 2, rng)
                           : planted_biregular_label_cover(3, 2, 2, 3, 2, 2, rng);
        const LabelCoverInstance& I = planted.instance;
        RedResult r = reduce_combined(I, rat(1, 20), 94 + rep, 1);
        CHECK(r.handle.dr_applied == big);

        // lift the plant through the code, then constant across clouds if reduced
        Assignment mid = lift_through_code(planted.plant, r.handle.code);
        Assignment lifted = mid;
        if (r.handle.dr_applied) {
            lifted.right.clear();
            for (int v = 0; v < r.handle.dr_layout.source_nV; v++)
                for (int i = 0; i < r.handle.dr_layout.source_right_degrees[v]; i++)
                    lifted.right.push_back(mid.right[v]);
        }
        CHECK(value(r.instance, lifted) == rat(1));
        CHECK(red_recover(I, r.handle, lifted, 555 + rep) == planted.plant);
    }
}
