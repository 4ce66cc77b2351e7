#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "redlab/gen.hpp"
#include "redlab/ikw.hpp"

using namespace redlab;

namespace {

PlantedCsp cycle_fixture(int n, uint64_t seed, bool full = false) {
    SplitMix64 rng = task_stream(seed, "ikw-fixture");
    return planted_regular_csp(n, 2, 2, rng, full);
}

IkwParams params(int k, int kp, int samples = 4) {
    IkwParams p;
    p.k = k;
    p.k_prime = kp;
    p.samples_per_vertex = samples;
    return p;
}

// count left vertices whose predicate tables differ between two builds
int differing_predicates(const IkwInstance& a, const IkwInstance& b) {
    REQUIRE(a.lc.nU == b.lc.nU);
    int diff = 0;
    for (int u = 0; u < a.lc.nU; u++) diff += a.lc.predicates[u] != b.lc.predicates[u];
    return diff;
}

// majority decode of the right label at A from the left table, smallest label on ties;
// comparison oracle only
int majority_decode(const IkwInstance& ikw, const Assignment& pi, int right) {
    std::vector<int> votes(ikw.lc.sigmaV, 0);
    for (int u = 0; u < ikw.lc.nU; u++) {
        if (!ikw.step2_contains(u, ikw.right_sets[right])) continue;
        for (int a = 0; a < ikw.lc.sigmaV; a++)
            if (cons_member(ikw, pi, right, a, u)) votes[a]++;
    }
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace

TEST_CASE("exhaustive build matches direct outcome enumeration on a triangle") {
    auto pc = cycle_fixture(3, 41);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 1), true);

    CHECK(ikw.lc.nU == 6);  // ordered disjoint pairs of the 3 edges
    CHECK(ikw.lc.nV == 3);
    CHECK(ikw.lc.sigmaU == 16);
    CHECK(ikw.lc.sigmaV == 2);
    REQUIRE(ikw.lc.edges.size() == 12);

    // independent enumeration of the process: A={x}, an incident pick, one check edge
    std::multiset<std::vector<int>> expected;
    std::vector<std::vector<int>> incident(3);
    for (int e = 0; e < 3; e++) {
        incident[pc.instance.constraints[e].a].push_back(e);
        incident[pc.instance.constraints[e].b].push_back(e);
    }
    for (int x = 0; x < 3; x++)
        for (int e : incident[x])
            for (int eb = 0; eb < 3; eb++)
                if (eb != e) expected.insert({e, eb, x});
    std::multiset<std::vector<int>> got;
    for (size_t r = 0; r < ikw.lc.edges.size(); r++) {
        const auto& es = ikw.left_edge_sets[ikw.lc.edges[r].first];
        got.insert({es[0], es[1], ikw.right_sets[ikw.lc.edges[r].second][0]});
    }
    CHECK(got == expected);

    auto ldeg = ikw.lc.left_degrees();
    auto rdeg = ikw.lc.right_degrees();
    for (int d : ldeg) CHECK(d == 2);
    for (int d : rdeg) CHECK(d == 4);

    // slot layout: pick block first, then check block, two slots per edge
    for (int u = 0; u < ikw.lc.nU; u++) {
        const auto& es = ikw.left_edge_sets[u];
        REQUIRE(ikw.left_slot_vertex[u].size() == 4);
        CHECK(ikw.left_slot_vertex[u][0] == pc.instance.constraints[es[0]].a);
        CHECK(ikw.left_slot_vertex[u][1] == pc.instance.constraints[es[0]].b);
        CHECK(ikw.left_slot_vertex[u][2] == pc.instance.constraints[es[1]].a);
        CHECK(ikw.left_slot_vertex[u][3] == pc.instance.constraints[es[1]].b);
    }
}

TEST_CASE("build rejects bad bases and bad parameters") {
    auto pc = cycle_fixture(4, 42);

    TwoCspInstance path;
    path.n = 3;
    path.sigma = 2;
    path.constraints.resize(2);
    path.constraints[0].a = 0;
    path.constraints[0].b = 1;
    path.constraints[0].rel.assign(4, 1);
    path.constraints[1].a = 1;
    path.constraints[1].b = 2;
    path.constraints[1].rel.assign(4, 1);
    CHECK_THROWS_AS(ikw_build(path, params(2, 1), true), Error);

    TwoCspInstance loops;
    loops.n = 2;
    loops.sigma = 2;
    loops.constraints.resize(2);
    loops.constraints[0].a = 0;
    loops.constraints[0].b = 0;
    loops.constraints[0].rel.assign(4, 1);
    loops.constraints[1].a = 1;
    loops.constraints[1].b = 1;
    loops.constraints[1].rel.assign(4, 1);
    CHECK_THROWS_AS(ikw_build(loops, params(2, 1), true), Error);

    CHECK_THROWS_AS(ikw_build(pc.instance, params(5, 1), true), Error);          // k > |E|
    CHECK_THROWS_AS(ikw_build(pc.instance, params(2, 3), true), Error);          // k' > k
    CHECK_THROWS_AS(ikw_build(pc.instance, params(2, 0), true), Error);          // k' < 1
    CHECK_THROWS_AS(ikw_build(pc.instance, params(2, 1, 0), true), Error);       // no samples
    CHECK_THROWS_AS(ikw_build(pc.instance, params(2, 1), true, 0, 0, 1.0), Error);  // budget
}

TEST_CASE("honest lifts of satisfying base assignments have value one") {
    struct Shape {
        int n;
        int k;
        int kp;
    };
    std::vector<Shape> shapes = {{3, 2, 1}, {4, 2, 1}, {5, 2, 1}, {6, 2, 1}, {7, 2, 1},
                                 {5, 2, 2}, {6, 2, 2}, {5, 3, 1}, {6, 3, 2}, {4, 4, 2}};
    for (size_t i = 0; i < shapes.size(); i++) {
        auto pc = cycle_fixture(shapes[i].n, 500 + i);
        REQUIRE(csp_value(pc.instance, pc.plant) == 1);
        IkwInstance ikw = ikw_build(pc.instance, params(shapes[i].k, shapes[i].kp), true);
        Assignment lift = ikw_honest_lift(ikw, pc.plant);
        CHECK(value(ikw.lc, lift) == 1);
    }
}

TEST_CASE("honest lift edges are satisfied exactly when their check edges are") {
    auto pc = cycle_fixture(5, 77);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 1), true);

    // a deliberately imperfect base assignment
    std::vector<int> labels = pc.plant;
    labels[0] ^= 1;
    Assignment lift = ikw_honest_lift(ikw, labels);

    rat sat = 0;
    for (size_t r = 0; r < ikw.lc.edges.size(); r++) {
        int u = ikw.lc.edges[r].first;
        bool checks_ok = true;
        for (int t = ikw.params.k_prime; t < ikw.params.k; t++)
            checks_ok = checks_ok && pc.instance.constraint_satisfied(ikw.left_edge_sets[u][t], labels);
        CHECK(ikw.lc.edge_satisfied(r, lift) == checks_ok);
        sat += checks_ok ? 1 : 0;
    }
    CHECK(value(ikw.lc, lift) == sat / rat(static_cast<int64_t>(ikw.lc.edges.size())));
}

TEST_CASE("one base constraint swap changes the exact blowup fraction of left predicates") {
    // single check edge, arbitrary relations
    for (int n = 4; n <= 8; n++) {
        auto pc = cycle_fixture(n, 900 + n);
        SplitMix64 rng = task_stream(900 + n, "swap");
        Swap s = random_constraint_swap(pc.instance, rng);
        TwoCspInstance swapped = apply_swap(pc.instance, s);

        IkwInstance before = ikw_build(pc.instance, params(2, 1), true);
        IkwInstance after = ikw_build(swapped, params(2, 1), true);
        rat frac = rat(differing_predicates(before, after), before.lc.nU);
        CHECK(frac == ikw_blowup_fraction(n, 2, 1));
        CHECK(ikw_blowup_fraction(n, 2, 1) == rat(1, n));
    }

    // two check edges; full relations elsewhere so no second check can mask the change
    for (int n = 5; n <= 9; n++) {
        auto pc = cycle_fixture(n, 950 + n, true);
        SplitMix64 rng = task_stream(950 + n, "swap");
        Swap s = random_constraint_swap(pc.instance, rng);
        TwoCspInstance swapped = apply_swap(pc.instance, s);

        IkwInstance before = ikw_build(pc.instance, params(3, 1), true);
        IkwInstance after = ikw_build(swapped, params(3, 1), true);
        rat frac = rat(differing_predicates(before, after), before.lc.nU);
        CHECK(frac == ikw_blowup_fraction(n, 3, 1));
        CHECK(ikw_blowup_fraction(n, 3, 1) == rat(2, n));
    }
}

TEST_CASE("restriction membership agrees with per-vertex slot reads") {
    auto pc = cycle_fixture(5, 313);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 2), true);
    Assignment honest = ikw_honest_lift(ikw, pc.plant);

    for (int v = 0; v < ikw.lc.nV; v++) {
        const auto& A = ikw.right_sets[v];
        std::vector<int> digits;
        for (int x : A) digits.push_back(pc.plant[x]);
        int want = pack_digits(digits, pc.instance.sigma);
        for (int u = 0; u < ikw.lc.nU; u++) {
            if (!ikw.step2_contains(u, A)) {
                CHECK_THROWS_AS(cons_member(ikw, honest, v, want, u), Error);
                continue;
            }
            for (int a = 0; a < ikw.lc.sigmaV; a++) CHECK(cons_member(ikw, honest, v, a, u) == (a == want));
        }
    }

    // a left label with inconsistent slot copies still restricts by first occurrence
    auto pc3 = cycle_fixture(3, 314);
    IkwInstance tri = ikw_build(pc3.instance, params(2, 1), true);
    Assignment pi = ikw_honest_lift(tri, pc3.plant);
    for (int u = 0; u < tri.lc.nU; u++) {
        for (int v = 0; v < tri.lc.nV; v++) {
            if (!tri.step2_contains(u, tri.right_sets[v])) continue;
            int x = tri.right_sets[v][0];
            int slot = tri.slot_of(u, x);
            for (int a = 0; a < 2; a++) {
                int label = 0;
                for (int s = 0; s < 4; s++)
                    if (s == slot) label |= a << s;  // other slots 0, including later copies of x
                pi.left[u] = label;
                CHECK(cons_member(tri, pi, v, a, u));
                CHECK_FALSE(cons_member(tri, pi, v, a ^ 1, u));
            }
        }
        pi.left[u] = 0;
    }
}

TEST_CASE("majority decoding recovers planted right labels and tolerates one corruption") {
    auto pc = cycle_fixture(4, 606);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 1), true);
    Assignment honest = ikw_honest_lift(ikw, pc.plant);

    for (int v = 0; v < ikw.lc.nV; v++) {
        std::vector<int> digits = {pc.plant[ikw.right_sets[v][0]]};
        CHECK(majority_decode(ikw, honest, v) == pack_digits(digits, 2));
    }

    Assignment corrupt = honest;
    corrupt.left[2] ^= 0xF;
    for (int v = 0; v < ikw.lc.nV; v++) {
        std::vector<int> digits = {pc.plant[ikw.right_sets[v][0]]};
        CHECK(majority_decode(ikw, corrupt, v) == pack_digits(digits, 2));
    }
}

TEST_CASE("recovery returns planted labels or the fallback symbol on honest lifts") {
    auto pc = cycle_fixture(3, 808);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 1, 16), true);
    Assignment honest = ikw_honest_lift(ikw, pc.plant);

    int full = 0;
    for (uint64_t seed = 0; seed < 200; seed++) {
        IkwRecoveryTrace trace;
        std::vector<int> out = ikw_recover(ikw, honest, seed, &trace);
        bool all_planted = true;
        for (int x = 0; x < 3; x++) {
            if (trace.hit[x]) {
                CHECK(out[x] == pc.plant[x]);
            } else {
                CHECK(out[x] == 0);
                all_planted = false;
            }
            all_planted = all_planted && out[x] == pc.plant[x];
        }
        full += all_planted || out == pc.plant;
    }
    CHECK(full >= 150);
}

TEST_CASE("recovery falls back to symbol zero when nothing is consistent") {
    auto pc = cycle_fixture(3, 809);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 1, 8), true);
    Assignment pi;
    pi.left.assign(ikw.lc.nU, 0);   // every restriction reads 0
    pi.right.assign(ikw.lc.nV, 1);  // every target asks for 1
    for (uint64_t seed = 0; seed < 20; seed++) {
        IkwRecoveryTrace trace;
        std::vector<int> out = ikw_recover(ikw, pi, seed, &trace);
        CHECK(out == std::vector<int>(3, 0));
        for (int x = 0; x < 3; x++) CHECK_FALSE(trace.hit[x]);
    }
}

TEST_CASE("recovery is insensitive to a right label it did not draw") {
    auto pc = cycle_fixture(4, 810);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 1, 4), true);
    Assignment honest = ikw_honest_lift(ikw, pc.plant);
    int changed = 1;
    Assignment moved = honest;
    moved.right[changed] ^= 1;

    const int N = 200;
    int hits = 0, disagreements = 0;
    for (uint64_t seed = 0; seed < N; seed++) {
        IkwRecoveryTrace ta, tb;
        std::vector<int> a = ikw_recover(ikw, honest, seed, &ta);
        std::vector<int> b = ikw_recover(ikw, moved, seed, &tb);
        CHECK(ta.right_index == tb.right_index);
        if (ta.right_index != changed) {
            REQUIRE(a == b);
        } else {
            hits++;
            disagreements += a != b;
        }
    }
    // the changed target is drawn 1/|V'| of the time; disagreement needs that draw
    CHECK(std::abs(hits - N / ikw.lc.nV) <= 20);  // 3 sigma around 50
    CHECK(disagreements <= hits);
    CHECK(disagreements > 0);
}

TEST_CASE("recovery is insensitive to a left label it did not sample") {
    auto pc = cycle_fixture(4, 811);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 1, 4), true);
    Assignment honest = ikw_honest_lift(ikw, pc.plant);
    int changed = 3;
    Assignment moved = honest;
    moved.left[changed] ^= 0x5;

    for (uint64_t seed = 0; seed < 200; seed++) {
        IkwRecoveryTrace ta, tb;
        std::vector<int> a = ikw_recover(ikw, honest, seed, &ta);
        std::vector<int> b = ikw_recover(ikw, moved, seed, &tb);
        bool sampled = false;
        for (const auto& row : ta.drawn_lefts)
            sampled = sampled || std::find(row.begin(), row.end(), changed) != row.end();
        if (!sampled) REQUIRE(a == b);
    }
}

TEST_CASE("recovery marginals are uniform over their draw pools") {
    auto pc = cycle_fixture(3, 812);
    IkwInstance ikw = ikw_build(pc.instance, params(2, 1, 1), true);
    Assignment honest = ikw_honest_lift(ikw, pc.plant);

    const int N = 3000;
    std::vector<int> right_freq(ikw.lc.nV, 0);
    std::map<std::pair<int, int>, int> edge_freq;  // (vertex, edge)
    std::map<std::pair<int, int>, int> left_freq;  // (edge, left)
    for (uint64_t seed = 0; seed < N; seed++) {
        IkwRecoveryTrace t;
        ikw_recover(ikw, honest, seed, &t);
        right_freq[t.right_index]++;
        for (int x = 0; x < 3; x++) {
            edge_freq[{x, t.drawn_edge[x]}]++;
            left_freq[{t.drawn_edge[x], t.drawn_lefts[x][0]}]++;
        }
    }
    for (int v = 0; v < ikw.lc.nV; v++) CHECK(std::abs(right_freq[v] - N / 3) < 130);  // 5 sigma

    for (int x = 0; x < 3; x++) {
        int covered = 0;
        for (int e = 0; e < 3; e++) {
            auto it = edge_freq.find({x, e});
            if (it == edge_freq.end()) continue;
            covered++;
            CHECK(std::abs(it->second - N / 2) < 140);  // two incident edges, 5 sigma
        }
        CHECK(covered == 2);
    }

    // each edge is drawn by each of its two endpoints with probability 1/2, then the
    // tuple pick is uniform over the 4 left tuples containing it
    for (int e = 0; e < 3; e++) {
        int total = 0, cells = 0;
        for (int u : ikw.lefts_containing[e]) {
            auto it = left_freq.find({e, u});
            if (it != left_freq.end()) {
                total += it->second;
                cells++;
                CHECK(std::abs(it->second - N / 4) < 130);  // 5 sigma around 750
            }
        }
        CHECK(cells == 4);
        CHECK(std::abs(total - N) < 200);  // 5 sigma around 3000
    }
}

TEST_CASE("sampled mode draws valid outcomes with the exhaustive marginals") {
    auto pc = cycle_fixture(3, 813);
    const int64_t M = 6000;
    IkwInstance sampled = ikw_build(pc.instance, params(2, 1), false, M, 99);
    IkwInstance again = ikw_build(pc.instance, params(2, 1), false, M, 99);
    IkwInstance other = ikw_build(pc.instance, params(2, 1), false, M, 100);

    REQUIRE(sampled.lc.edges.size() == static_cast<size_t>(M));
    CHECK(sampled.lc.edges == again.lc.edges);
    CHECK(sampled.lc.edges != other.lc.edges);

    std::map<std::pair<int, int>, int> freq;
    for (const auto& [u, v] : sampled.lc.edges) {
        CHECK(sampled.step2_contains(u, sampled.right_sets[v]));
        freq[{u, v}]++;
    }
    REQUIRE(freq.size() == 12);  // every exhaustive outcome class appears
    for (const auto& [key, count] : freq) CHECK(std::abs(count - 500) < 110);  // 5 sigma

    Assignment lift = ikw_honest_lift(sampled, pc.plant);
    CHECK(value(sampled.lc, lift) == 1);
}

TEST_CASE("threshold grid points sit strictly inside the interval") {
    CHECK(threshold_grid_point(0, 1, 0, 4) == rat(1, 8));
    CHECK(threshold_grid_point(0, 1, 3, 4) == rat(7, 8));
    CHECK(threshold_grid_point(rat(1, 2), rat(3, 4), 0, 2) == rat(9, 16));
    for (int64_t g = 0; g < 8; g++) {
        rat t = threshold_grid_point(rat(1, 3), rat(2, 3), g, 8);
        CHECK(t > rat(1, 3));
        CHECK(t < rat(2, 3));
    }
}

TEST_CASE("selector distribution equals the per-point brute force") {
    SplitMix64 rng = task_stream(7100, "selector");
    for (int trial = 0; trial < 40; trial++) {
        int n = 1 + rng.below_int(5);
        std::vector<rat> values;
        for (int j = 0; j < n; j++) values.push_back(rat(rng.below_int(33), 32));
        rat lo = trial % 2 == 0 ? rat(0) : rat(1, 4);
        rat hi = trial % 2 == 0 ? rat(1) : rat(7, 8);
        int64_t G = trial % 3 == 0 ? 64 : 257;

        std::map<int, int64_t> brute;
        for (int64_t g = 0; g < G; g++) brute[threshold_select_index(values, threshold_grid_point(lo, hi, g, G))]++;

        auto dist = threshold_select_dist(values, lo, hi, G);
        rat total = 0;
        for (const auto& [idx, w] : dist) {
            REQUIRE(brute.count(idx) == 1);
            CHECK(w == rat(brute[idx], G));
            total += w;
        }
        CHECK(total == 1);
        CHECK(dist.size() == brute.size());
    }
}

TEST_CASE("selector keeps qualified candidates and falls back below the window") {
    std::vector<Assignment> cands(2);
    cands[0].left = {1};
    cands[1].left = {2};
    Assignment fallback;
    fallback.left = {9};

    // one candidate clears the top of the window: the fallback never fires and any
    // selected value clears the bottom
    std::vector<rat> values = {rat(1, 2), rat(19, 20)};
    auto dist = threshold_select_dist(values, rat(3, 5), rat(9, 10), 1 << 12);
    for (const auto& [idx, w] : dist) {
        REQUIRE(idx >= 0);
        CHECK(values[idx] > rat(3, 5));
        CHECK(w > 0);
    }

    for (uint64_t seed = 0; seed < 16; seed++) {
        Assignment pick = threshold_select(cands, values, rat(3, 5), rat(9, 10), seed, fallback);
        CHECK(pick.left[0] != 9);
        CHECK(pick == threshold_select(cands, values, rat(3, 5), rat(9, 10), seed, fallback));
    }

    // everything below the window: always the fallback
    std::vector<rat> low = {rat(1, 10), rat(2, 10)};
    auto dlow = threshold_select_dist(low, rat(1, 2), rat(3, 4), 1 << 12);
    REQUIRE(dlow.size() == 1);
    CHECK(dlow[0].first == -1);
    CHECK(dlow[0].second == 1);
    for (uint64_t seed = 0; seed < 4; seed++)
        CHECK(threshold_select(cands, low, rat(1, 2), rat(3, 4), seed, fallback).left[0] == 9);
}

TEST_CASE("shared-threshold coupling differs only inside moved value gaps") {
    SplitMix64 rng = task_stream(7200, "selector-coupling");
    const int64_t G = 4096;
    for (int trial = 0; trial < 30; trial++) {
        int n = 2 + rng.below_int(3);
        std::vector<rat> a, b;
        for (int j = 0; j < n; j++) a.push_back(rat(rng.below_int(65), 64));
        b = a;
        int moved = rng.below_int(n);
        b[moved] = rat(rng.below_int(65), 64);
        rat lo = 0, hi = 1;

        int64_t differ = 0;
        for (int64_t g = 0; g < G; g++) {
            rat theta = threshold_grid_point(lo, hi, g, G);
            differ += threshold_select_index(a, theta) != threshold_select_index(b, theta);
        }
        // grid count of the moved gap, plus one cell of rounding
        rat gap = a[moved] > b[moved] ? a[moved] - b[moved] : b[moved] - a[moved];
        CHECK(rat(differ, G) <= gap / (hi - lo) + rat(1, G));
    }
}
