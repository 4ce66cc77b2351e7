#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "redlab/common.hpp"
#include "redlab/rng.hpp"

namespace redlab {

// d-regular multigraph given by an ordered neighbor table (slot k of vertex i is its
// k-th neighbor); self-loops and parallel edges allowed, adjacency symmetric as a multiset
struct RegularGraph {
    int n = 0;
    int d = 0;
    std::vector<std::vector<int>> neighbor_table;
    double measured_lambda = 1.0;
    double solver_residual = 0.0;

    void validate() const {
        require(static_cast<int>(neighbor_table.size()) == n, "regular graph: table rows");
        std::vector<std::vector<int>> counts(n, std::vector<int>(n, 0));
        for (int i = 0; i < n; i++) {
            require(static_cast<int>(neighbor_table[i].size()) == d, "regular graph: not d-regular");
            for (int j : neighbor_table[i]) {
                require(j >= 0 && j < n, "regular graph: neighbor out of range");
                counts[i][j]++;
            }
        }
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++)
                require(counts[i][j] == counts[j][i], "regular graph: adjacency not symmetric");
        require(static_cast<int64_t>(n) * d % 2 == 0, "regular graph: nd odd");
    }
};

// second-largest absolute eigenvalue of the normalized adjacency matrix (one top
// eigenvalue 1 removed); dense symmetric solve
inline double second_eigenvalue(const RegularGraph& G, double* residual_out = nullptr) {
    require(G.n >= 1 && G.d >= 1, "second_eigenvalue: empty graph");
    require(G.n <= 4096, "second_eigenvalue: spectral budget exceeded");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(G.n, G.n);
    for (int i = 0; i < G.n; i++) {
        require(static_cast<int>(G.neighbor_table[i].size()) == G.d, "second_eigenvalue: non-regular input");
        for (int j : G.neighbor_table[i]) M(i, j) += 1.0 / G.d;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    require(solver.info() == Eigen::Success, "second_eigenvalue: eigensolver failed");
    Eigen::VectorXd ev = solver.eigenvalues();
    std::vector<double> abs_ev(G.n);
    for (int i = 0; i < G.n; i++) abs_ev[i] = std::abs(ev(i));
    std::sort(abs_ev.rbegin(), abs_ev.rend());
    if (residual_out) {
        // largest eigenvalue of a normalized regular adjacency is exactly 1
        *residual_out = std::abs(abs_ev[0] - 1.0);
    }
    return G.n >= 2 ? abs_ev[1] : 0.0;
}

inline RegularGraph complete_graph(int n) {
    require(n >= 2, "complete_graph: need n >= 2");
    RegularGraph G;
    G.n = n;
    G.d = n - 1;
    G.neighbor_table.resize(n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++)
            if (j != i) G.neighbor_table[i].push_back(j);
    G.measured_lambda = second_eigenvalue(G, &G.solver_residual);
    return G;
}

// permutation-union model: d/2 random permutations contribute sigma(i) and
// sigma^{-1}(i); odd d adds a random perfect matching (n even by the parity precondition)
inline RegularGraph sample_regular_graph(int n, int d, SplitMix64& rng) {
    require(static_cast<int64_t>(n) * d % 2 == 0, "sample_regular_graph: nd must be even");
    require(d >= 1 && d < n, "sample_regular_graph: need 1 <= d < n");
    RegularGraph G;
    G.n = n;
    G.d = d;
    G.neighbor_table.assign(n, {});
    std::vector<int> perm(n);
    for (int k = 0; k < d / 2; k++) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        std::vector<int> inv(n);
        for (int i = 0; i < n; i++) inv[perm[i]] = i;
        for (int i = 0; i < n; i++) {
            G.neighbor_table[i].push_back(perm[i]);
            G.neighbor_table[i].push_back(inv[i]);
        }
    }
    if (d % 2 == 1) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        for (int i = 0; i + 1 < n; i += 2) {
            G.neighbor_table[perm[i]].push_back(perm[i + 1]);
            G.neighbor_table[perm[i + 1]].push_back(perm[i]);
        }
    }
    return G;
}

// sample-and-certify: returns the first sample meeting lambda_target, otherwise the best
// found with its measured lambda (caller decides whether that is acceptable)
inline RegularGraph build_expander(int n, int d, double lambda_target, uint64_t seed,
                                   int retries = 64) {
    require(static_cast<int64_t>(n) * d % 2 == 0, "build_expander: parity violation (nd odd)");
    require(d < n, "build_expander: d >= n");
    require(d >= 1, "build_expander: d < 1");
    if (d == n - 1) return complete_graph(n);  // K_n, lambda = 1/(n-1)

    SplitMix64 rng = task_stream(seed, "expander");
    RegularGraph best;
    for (int t = 0; t < retries; t++) {
        RegularGraph G = sample_regular_graph(n, d, rng);
        G.measured_lambda = second_eigenvalue(G, &G.solver_residual);
        if (t == 0 || G.measured_lambda < best.measured_lambda) best = G;
        if (best.measured_lambda <= lambda_target) break;
    }
    return best;
}

// ---- finite fields ----

// GF(p^e) with elements encoded as base-p digit strings packed into ints; arithmetic is
// polynomial arithmetic modulo a monic irreducible found by exhaustive search
struct GaloisField {
    int p = 2;
    int e = 1;
    int q = 2;
    std::vector<int> irreducible;  // degree e, monic, coefficients in [0,p)

    static bool is_prime(int x) {
        if (x < 2) return false;
        for (int i = 2; i * i <= x; i++)
            if (x % i == 0) return false;
        return true;
    }

    static GaloisField make(int q) {
        int p = 0, e = 0;
        for (int cand = 2; cand <= q; cand++) {
            if (!is_prime(cand)) continue;
            int acc = cand, k = 1;
            while (acc < q) {
                acc *= cand;
                k++;
            }
            if (acc == q) {
                p = cand;
                e = k;
                break;
            }
        }
        require(p != 0, "galois field: q is not a prime power");
        GaloisField F;
        F.p = p;
        F.e = e;
        F.q = q;
        if (e > 1) F.irreducible = F.find_irreducible();
        return F;
    }

    std::vector<int> digits(int a) const {
        std::vector<int> out(e);
        for (int i = 0; i < e; i++) {
            out[i] = a % p;
            a /= p;
        }
        return out;
    }

    int pack(const std::vector<int>& dg) const {
        int a = 0;
        for (int i = e - 1; i >= 0; i--) a = a * p + dg[i];
        return a;
    }

    int add(int a, int b) const {
        if (e == 1) return (a + b) % p;
        auto da = digits(a), db = digits(b);
        for (int i = 0; i < e; i++) da[i] = (da[i] + db[i]) % p;
        return pack(da);
    }

    int mul(int a, int b) const {
        if (e == 1) return static_cast<int>(static_cast<int64_t>(a) * b % p);
        auto da = digits(a), db = digits(b);
        std::vector<int> prod(2 * e - 1, 0);
        for (int i = 0; i < e; i++)
            for (int j = 0; j < e; j++) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        // reduce modulo the monic irreducible
        for (int i = 2 * e - 2; i >= e; i--) {
            int c = prod[i];
            if (c == 0) continue;
            prod[i] = 0;
            for (int j = 0; j < e; j++) prod[i - e + j] = ((prod[i - e + j] - c * irreducible[j]) % p + p * p) % p;
        }
        prod.resize(e);
        return pack(prod);
    }

private:
    // monic poly x^e + c_{e-1}x^{e-1} + ... + c_0 with no roots and no nontrivial factors,
    // found by checking divisibility against all lower-degree monics
    std::vector<int> find_irreducible() const {
        int total = 1;
        for (int i = 0; i < e; i++) total *= p;
        for (int code = 0; code < total; code++) {
            std::vector<int> cand(e + 1, 0);
            int c = code;
            for (int i = 0; i < e; i++) {
                cand[i] = c % p;
                c /= p;
            }
            cand[e] = 1;
            if (poly_irreducible(cand)) {
                std::vector<int> low(cand.begin(), cand.end() - 1);
                return low;
            }
        }
        fail("galois field: no irreducible polynomial found");
    }

    bool poly_irreducible(const std::vector<int>& f) const {
        // trial division by all monic polynomials of degree 1..e/2
        for (int deg = 1; deg <= e / 2; deg++) {
            int total = 1;
            for (int i = 0; i < deg; i++) total *= p;
            for (int code = 0; code < total; code++) {
                std::vector<int> g(deg + 1, 0);
                int c = code;
                for (int i = 0; i < deg; i++) {
                    g[i] = c % p;
                    c /= p;
                }
                g[deg] = 1;
                if (poly_divides(g, f)) return false;
            }
        }
        return true;
    }

    bool poly_divides(const std::vector<int>& g, std::vector<int> f) const {
        int dg = static_cast<int>(g.size()) - 1;
        for (int i = static_cast<int>(f.size()) - 1; i >= dg; i--) {
            int c = f[i] % p;
            if (c == 0) continue;
            for (int j = 0; j <= dg; j++) f[i - dg + j] = ((f[i - dg + j] - c * g[j]) % p + p * p) % p;
        }
        for (int x : f)
            if (x % p != 0) return false;
        return true;
    }
};

// ---- codes ----

struct Code {
    int sigma = 0;        // source alphabet size
    int k = 0;            // block length
    int target_sigma = 0; // code alphabet size
    std::vector<std::vector<int>> table;  // sigma rows of length k
    rat certified_distance;               // true pairwise-minimum relative distance
    int q = 0;            // field size chosen by the search
    int t = 0;            // digits per symbol (polynomial coefficient count)
};

inline rat verify_code(const Code& c) {
    require(c.sigma >= 2, "verify_code: need at least two codewords");
    rat best = 1;
    for (int a = 0; a < c.sigma; a++)
        for (int b = a + 1; b < c.sigma; b++) {
            int differ = 0;
            for (int i = 0; i < c.k; i++) differ += (c.table[a][i] != c.table[b][i]);
            rat rel(differ, c.k);
            if (rel < best) best = rel;
        }
    return best;
}

// Reed-Solomon instantiation: smallest prime power q (linear search) such that the digit
// count t = ceil(log_q sigma) satisfies q >= (t-1)/delta; symbol i encodes as the
// degree-<t polynomial with i's base-q digits, evaluated at all q field points
inline Code build_code(int sigma_size, const rat& delta) {
    require(sigma_size >= 2, "build_code: sigma_size < 2");
    require(delta > 0 && delta < 1, "build_code: delta out of range");
    for (int q = 2; q <= (1 << 16); q++) {
        int p = 0;
        for (int cand = 2; cand <= q; cand++) {
            if (!GaloisField::is_prime(cand)) continue;
            int acc = cand;
            while (acc < q) acc *= cand;
            if (acc == q) {
                p = cand;
                break;
            }
        }
        if (p == 0) continue;  // not a prime power
        int t = 1;
        {
            int64_t acc = q;
            while (acc < sigma_size) {
                acc *= q;
                t++;
            }
        }
        if (rat(q) < rat(t - 1) / delta) continue;
        GaloisField F = GaloisField::make(q);
        Code c;
        c.sigma = sigma_size;
        c.k = q;
        c.target_sigma = q;
        c.q = q;
        c.t = t;
        c.table.assign(sigma_size, std::vector<int>(q, 0));
        for (int sym = 0; sym < sigma_size; sym++) {
            // base-q digits of sym are the polynomial coefficients
            std::vector<int> coeff(t, 0);
            int s = sym;
            for (int i = 0; i < t; i++) {
                coeff[i] = s % q;
                s /= q;
            }
            for (int x = 0; x < q; x++) {
                int acc = 0, pw = 1;
                for (int i = 0; i < t; i++) {
                    acc = F.add(acc, F.mul(coeff[i], pw));
                    pw = F.mul(pw, x);
                }
                c.table[sym][x] = acc;
            }
        }
        c.certified_distance = verify_code(c);
        return c;
    }
    fail("build_code: no prime power q <= 2^16 satisfies the distance constraint");
}

// exact count of source symbols agreeing with w on at least an eta fraction of coordinates
struct ListCountResult {
    int count = 0;
    bool precondition_met = true;  // eta > 2*sqrt(delta); when false the bound is not asserted
};

inline ListCountResult list_count(const Code& c, const std::vector<int>& w, const rat& eta) {
    require(static_cast<int>(w.size()) == c.k, "list_count: word length mismatch");
    ListCountResult res;
    rat delta = 1 - c.certified_distance;
    res.precondition_met = eta * eta > 4 * delta && eta > 0;  // eta > 2*sqrt(delta), exactly
    for (int a = 0; a < c.sigma; a++) {
        int agree = 0;
        for (int i = 0; i < c.k; i++) agree += (c.table[a][i] == w[i]);
        if (rat(agree, c.k) >= eta) res.count++;
    }
    return res;
}

// ---- (m,l)-set systems ----

struct SetSystem {
    int universe = 0;                        // |B|
    std::vector<std::vector<uint8_t>> sets;  // m rows of |B| membership bits
    int certified_l = 0;

    int m() const { return static_cast<int>(sets.size()); }
};

namespace detail {
// enumerate selections of at most l literals (set i or its complement), no complementary
// pair, and check that none covers B
inline bool cover_search(const SetSystem& S, int l, int start, int chosen,
                         std::vector<uint8_t>& covered, int covered_count) {
    if (covered_count == S.universe) return true;  // found a covering selection: property fails
    if (chosen == l) return false;
    for (int i = start; i < S.m(); i++) {
        for (int sign = 0; sign < 2; sign++) {
            std::vector<int> added;
            for (int b = 0; b < S.universe; b++) {
                bool in = sign == 0 ? S.sets[i][b] != 0 : S.sets[i][b] == 0;
                if (in && !covered[b]) {
                    covered[b] = 1;
                    added.push_back(b);
                }
            }
            bool found = cover_search(S, l, i + 1, chosen + 1, covered,
                                      covered_count + static_cast<int>(added.size()));
            for (int b : added) covered[b] = 0;
            if (found) return true;
        }
    }
    return false;
}
}  // namespace detail

// brute-force check of the (m,l) property: no selection of at most l sets from
// {C_i, complement(C_i)} without a complementary pair covers B
inline bool verify_set_system(const SetSystem& S, int l, double budget = 2e7) {
    require(S.universe >= 1 && S.m() >= 1, "verify_set_system: empty system");
    double work = 0, layer = 1;
    for (int j = 1; j <= l; j++) {
        layer *= 2.0 * S.m();
        work += layer;
    }
    require(work * S.universe <= budget, "verify_set_system: budget exceeded");
    std::vector<uint8_t> covered(S.universe, 0);
    return !detail::cover_search(S, l, 0, 0, covered, 0);
}

// randomized construction with the pinned universe size, verified before returning
inline SetSystem build_set_system(int m, int l, uint64_t seed, int max_attempts = 64) {
    require(m >= 1 && l >= 1, "build_set_system: bad parameters");
    double b_real = 8.0 * std::pow(4.0, l) * std::log(2.0 * m * std::pow(2.0 * m, l));
    int B = static_cast<int>(std::ceil(b_real));
    SplitMix64 rng = task_stream(seed, "set-system");
    for (int attempt = 0; attempt < max_attempts; attempt++) {
        SetSystem S;
        S.universe = B;
        S.sets.assign(m, std::vector<uint8_t>(B, 0));
        for (int i = 0; i < m; i++)
            for (int b = 0; b < B; b++) S.sets[i][b] = static_cast<uint8_t>(rng.below(2));
        if (verify_set_system(S, l)) {
            S.certified_l = l;
            return S;
        }
    }
    fail("build_set_system: no verified system within attempt budget");
}

// deterministic system with B = all membership patterns; an (m,l)-system for every
// l <= 2m since every pattern (hence every "missed" element) is present
inline SetSystem pattern_set_system(int m) {
    require(m >= 1 && m <= 16, "pattern_set_system: m out of range");
    SetSystem S;
    S.universe = 1 << m;
    S.sets.assign(m, std::vector<uint8_t>(S.universe, 0));
    for (int i = 0; i < m; i++)
        for (int b = 0; b < S.universe; b++) S.sets[i][b] = static_cast<uint8_t>((b >> i) & 1);
    S.certified_l = 2 * m;
    return S;
}

}  // namespace redlab
