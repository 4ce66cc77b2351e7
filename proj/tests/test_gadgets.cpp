#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "redlab/gadgets.hpp"

using namespace redlab;

namespace {

RegularGraph disjoint_union(const RegularGraph& A, const RegularGraph& B) {
    REQUIRE(A.d == B.d);
    RegularGraph G;
    G.n = A.n + B.n;
    G.d = A.d;
    G.neighbor_table = A.neighbor_table;
    for (const auto& row : B.neighbor_table) {
        std::vector<int> shifted;
        for (int x : row) shifted.push_back(x + A.n);
        G.neighbor_table.push_back(shifted);
    }
    return G;
}

}  // namespace

TEST_CASE("second eigenvalue of small pinned graphs") {
    double resid = 0;
    SECTION("complete graph on 4 vertices") {
        RegularGraph K4 = complete_graph(4);
        K4.validate();
        CHECK(second_eigenvalue(K4, &resid) == Catch::Approx(1.0 / 3.0).margin(1e-10));
        CHECK(resid < 1e-10);
    }
    SECTION("4-cycle is bipartite so the spectrum touches -1") {
        RegularGraph C4;
        C4.n = 4;
        C4.d = 2;
        C4.neighbor_table = {{1, 3}, {2, 0}, {3, 1}, {0, 2}};
        C4.validate();
        CHECK(second_eigenvalue(C4, &resid) == Catch::Approx(1.0).margin(1e-10));
    }
    SECTION("disconnected union keeps a second unit eigenvalue") {
        RegularGraph G = disjoint_union(complete_graph(4), complete_graph(4));
        G.validate();
        CHECK(second_eigenvalue(G, &resid) == Catch::Approx(1.0).margin(1e-10));
    }
    SECTION("complete graphs across sizes") {
        for (int n : {3, 5, 8, 17}) {
            RegularGraph K = complete_graph(n);
            CHECK(second_eigenvalue(K, &resid) == Catch::Approx(1.0 / (n - 1)).margin(1e-10));
        }
    }
}

TEST_CASE("sampled regular graphs have the declared degrees") {
    SplitMix64 rng(2001);
    for (auto [n, d] : std::vector<std::pair<int, int>>{{8, 3}, {9, 4}, {12, 5}, {16, 6}}) {
        RegularGraph G = sample_regular_graph(n, d, rng);
        G.validate();
        CHECK(G.n == n);
        CHECK(G.d == d);
        for (const auto& row : G.neighbor_table) CHECK(static_cast<int>(row.size()) == d);
    }
    CHECK_THROWS_AS(sample_regular_graph(7, 3, rng), Error);  // nd odd
    CHECK_THROWS_AS(sample_regular_graph(4, 4, rng), Error);  // d >= n
}

TEST_CASE("build_expander certifies its spectral bound") {
    SECTION("complete graph shortcut hits 1/(n-1) exactly") {
        RegularGraph G = build_expander(6, 5, 0.5, 42);
        CHECK(G.n == 6);
        CHECK(G.d == 5);
        CHECK(G.measured_lambda == Catch::Approx(0.2).margin(1e-10));
    }
    SECTION("sampled expander meets a loose target") {
        RegularGraph G = build_expander(20, 6, 0.9, 42);
        G.validate();
        CHECK(G.measured_lambda <= 0.9);
        double resid = 0;
        CHECK(second_eigenvalue(G, &resid) == Catch::Approx(G.measured_lambda).margin(1e-12));
    }
    SECTION("degenerate requests are rejected") {
        CHECK_THROWS_AS(build_expander(5, 3, 0.9, 1), Error);  // nd odd
        CHECK_THROWS_AS(build_expander(4, 5, 0.9, 1), Error);  // d >= n
    }
    SECTION("same seed reproduces the same graph") {
        RegularGraph A = build_expander(14, 4, 0.95, 7);
        RegularGraph B = build_expander(14, 4, 0.95, 7);
        CHECK(A.neighbor_table == B.neighbor_table);
    }
}

TEST_CASE("galois field arithmetic") {
    SECTION("prime field is integers mod p") {
        GaloisField F = GaloisField::make(7);
        CHECK(F.p == 7);
        CHECK(F.e == 1);
        for (int a = 0; a < 7; a++)
            for (int b = 0; b < 7; b++) {
                CHECK(F.add(a, b) == (a + b) % 7);
                CHECK(F.mul(a, b) == (a * b) % 7);
            }
    }
    SECTION("GF(4) has characteristic 2 and no zero divisors") {
        GaloisField F = GaloisField::make(4);
        CHECK(F.p == 2);
        CHECK(F.e == 2);
        for (int a = 0; a < 4; a++) CHECK(F.add(a, a) == 0);
        for (int a = 1; a < 4; a++)
            for (int b = 1; b < 4; b++) CHECK(F.mul(a, b) != 0);
        // multiplicative group is cyclic of order 3
        std::set<int> powers;
        int x = 2, acc = 1;
        for (int i = 0; i < 3; i++) {
            acc = F.mul(acc, x);
            powers.insert(acc);
        }
        CHECK(powers == std::set<int>{1, 2, 3});
    }
    SECTION("non prime powers are rejected") {
        CHECK_THROWS_AS(GaloisField::make(6), Error);
        CHECK_THROWS_AS(GaloisField::make(12), Error);
        CHECK_THROWS_AS(GaloisField::make(1), Error);
    }
}

TEST_CASE("code construction hits the pinned search outcome") {
    SECTION("eight symbols at distance target one half") {
        Code C = build_code(8, rat(1, 2));
        // smallest q with q^t >= 8 and q >= (t-1)/delta = 2(t-1): q=3,t=2
        CHECK(C.sigma == 8);
        CHECK(C.q == 3);
        CHECK(C.t == 2);
        CHECK(C.k == 3);
        CHECK(C.certified_distance == rat(2, 3));
        CHECK(C.certified_distance >= rat(1, 2));
        CHECK(verify_code(C) == rat(2, 3));
    }
    SECTION("tiny delta forces single-digit encodings at the first prime power past sigma") {
        // every q < sigma needs t >= 2 and then fails q >= (t-1)/delta; q=5 passes with t=1,
        // where codewords are distinct constant polynomials differing in every coordinate
        Code C = build_code(5, rat(1, 100));
        CHECK(C.q == 5);
        CHECK(C.t == 1);
        CHECK(C.certified_distance == rat(1));
    }
    SECTION("every codeword pair meets the certified distance") {
        Code C = build_code(6, rat(1, 3));
        for (size_t a = 0; a < C.table.size(); a++)
            for (size_t b = a + 1; b < C.table.size(); b++) {
                int diff = 0;
                for (int i = 0; i < C.k; i++) diff += C.table[a][i] != C.table[b][i];
                CHECK(rat(diff, C.k) >= C.certified_distance);
            }
    }
}

TEST_CASE("list_count respects the Johnson style budget") {
    Code C = build_code(8, rat(1, 2));  // q=3, k=3, delta=2/3 attained, eta budget needs eta^2 > 4*(1-2/3)
    SECTION("precondition flag") {
        auto r = list_count(C, {0, 0, 0}, rat(1, 2));
        CHECK_FALSE(r.precondition_met);  // (1/2)^2 = 1/4 < 4/3
    }
    SECTION("high agreement lists are short") {
        // eta = 6/5: impossible agreement, empty list, precondition holds since 36/25 > 4/3
        auto r = list_count(C, C.table[0], rat(6, 5));
        CHECK(r.precondition_met);
        CHECK(r.count == 0);
        // eta = 1 requires exact match: exactly one codeword agrees with itself everywhere
        auto r2 = list_count(C, C.table[0], rat(1));
        CHECK_FALSE(r2.precondition_met);  // 1 < 2*sqrt(1/3)
        CHECK(r2.count == 1);
    }
}

TEST_CASE("set system verification on hand built families") {
    SECTION("two singletons: fine one at a time, their union covers") {
        SetSystem S;
        S.universe = 2;
        S.sets = {{1, 0}, {0, 1}};
        CHECK(verify_set_system(S, 1));
        CHECK_FALSE(verify_set_system(S, 2));  // C_1 together with C_2 covers both points
    }
    SECTION("a set equal to the universe is covered by itself alone") {
        SetSystem S;
        S.universe = 2;
        S.sets = {{1, 1}};
        CHECK_FALSE(verify_set_system(S, 1));
    }
    SECTION("pattern system is verified up to its certified level") {
        for (int m = 1; m <= 3; m++) {
            SetSystem S = pattern_set_system(m);
            CHECK(S.certified_l == 2 * m);
            CHECK(S.universe == (1 << m));
            CHECK(verify_set_system(S, 2 * m));
        }
    }
    SECTION("pattern system survives even past its certified level") {
        // a non-complementary selection uses at most one literal per set, and the
        // pattern dodging all chosen literals is always present in the universe
        SetSystem S = pattern_set_system(2);
        CHECK(verify_set_system(S, 2 * 2 + 1));
    }
}

TEST_CASE("randomized set system construction verifies at small scale") {
    SetSystem S = build_set_system(3, 2, 2002);
    CHECK(static_cast<int>(S.sets.size()) == 3);
    CHECK(S.certified_l >= 2);
    CHECK(verify_set_system(S, 2));
    SECTION("construction is deterministic in the seed") {
        SetSystem T = build_set_system(3, 2, 2002);
        CHECK(S.sets == T.sets);
        CHECK(S.universe == T.universe);
    }
}
