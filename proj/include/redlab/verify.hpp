#pragma once

#include <functional>
#include <map>
#include <sstream>

#include "redlab/compose.hpp"
#include "redlab/covering.hpp"
#include "redlab/gen.hpp"
#include "redlab/ikw.hpp"
#include "redlab/metrics.hpp"
#include "redlab/reduce.hpp"

namespace redlab {

// ---- reports ----

// one asserted inequality with both sides spelled out exactly
struct Check {
    std::string what;
    std::string lhs;
    std::string relation;
    std::string rhs;
    bool pass = false;
};

struct StageReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> stats;
    std::vector<Check> checks;

    void stat(const std::string& key, const std::string& val) { stats.emplace_back(key, val); }
    void stat(const std::string& key, int64_t val) { stats.emplace_back(key, std::to_string(val)); }

    void check_le(const std::string& what, const rat& lhs, const rat& rhs) {
        checks.push_back({what, rat_to_string(lhs), "<=", rat_to_string(rhs), lhs <= rhs});
    }
    void check_ge(const std::string& what, const rat& lhs, const rat& rhs) {
        checks.push_back({what, rat_to_string(lhs), ">=", rat_to_string(rhs), lhs >= rhs});
    }
    void check_eq(const std::string& what, const rat& lhs, const rat& rhs) {
        checks.push_back({what, rat_to_string(lhs), "==", rat_to_string(rhs), lhs == rhs});
    }
    void check_eq(const std::string& what, int64_t lhs, int64_t rhs) {
        checks.push_back({what, std::to_string(lhs), "==", std::to_string(rhs), lhs == rhs});
    }
    void check_le(const std::string& what, int64_t lhs, int64_t rhs) {
        checks.push_back({what, std::to_string(lhs), "<=", std::to_string(rhs), lhs <= rhs});
    }
    void check_le_f(const std::string& what, double lhs, double rhs) {
        std::ostringstream a, b;
        a << lhs;
        b << rhs;
        checks.push_back({what, a.str(), "<= (float)", b.str(), lhs <= rhs});
    }
    void check_true(const std::string& what, bool ok) {
        checks.push_back({what, ok ? "true" : "false", "==", "true", ok});
    }

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct Report {
    std::vector<StageReport> stages;

    bool all_pass() const {
        for (const auto& s : stages)
            if (!s.all_pass()) return false;
        return true;
    }
};

// ---- shipped verification suites, one per lemma id ----

namespace suites {

inline StageReport lc_balance() {
    StageReport rep;
    rep.name = "lc-balance";
    for (uint64_t seed : {11u, 12u, 13u}) {
        SplitMix64 rng = task_stream(seed, "covering-fixture");
        auto planted = planted_label_cover(2, 2, 4, 2, 2, rng);
        BalanceResult res = balance(planted.instance);
        SplitMix64 arng = task_stream(seed, "verify-balance");
        Assignment pi_hat;
        for (int u = 0; u < res.instance.nU; u++) pi_hat.left.push_back(arng.below_int(res.instance.sigmaU));
        for (int v = 0; v < res.instance.nV; v++) pi_hat.right.push_back(arng.below_int(res.instance.sigmaV));
        rep.check_eq("value identity: balanced value vs expected projected value",
                     value(res.instance, pi_hat),
                     balance_expected_value(planted.instance, res.shape, pi_hat));
        Assignment other = pi_hat;
        other.left[0] = (other.left[0] + 1) % res.instance.sigmaU;
        other.right[0] = (other.right[0] + 1) % res.instance.sigmaV;
        rep.check_le("coupled projection Lipschitz: expected Hamming vs input Hamming",
                     balance_coupled_expected_hamming(res.shape, pi_hat, other), rat(hamming(pi_hat, other)));
    }
    return rep;
}

inline StageReport sc_slice_soundness() {
    StageReport rep;
    rep.name = "sc-slice-soundness";
    const int l = 3;
    for (uint64_t seed : {1001u, 1002u, 1003u, 1004u}) {
        int sV = 2 + static_cast<int>(seed % 3);
        SplitMix64 rng = task_stream(seed, "covering-fixture");
        auto planted = planted_label_cover(3, 3, 8, 3, sV, rng);
        const LabelCoverInstance& I = planted.instance;
        SetSystem S = pattern_set_system(sV);
        SetCoverInstance J = sc_transform(I, S);
        ScLayout L(I, S.universe);
        std::vector<uint8_t> pick = sc_planted_pick(I, S, planted.plant);
        for (int v = 0; v < I.nV; v += 2) pick[L.right_set(v, (planted.plant.right[v] + 1) % sV)] = 1;
        rep.check_true("selection covers the ground set", sc_covers(J, pick));
        for (int e = 0; e < L.nE; e++) {
            auto [u, v] = I.edges[e];
            int slice = static_cast<int>(sc_left_slice(I, L, pick, u).size() +
                                         sc_right_slice(I, L, pick, v).size());
            if (slice > l) continue;
            rep.check_ge("edge " + std::to_string(e) + " satisfaction vs 4/l^2 at slice " +
                             std::to_string(slice),
                         sc_edge_satisfaction(I, L, pick, e), rat(4, l * l));
        }
    }
    return rep;
}

inline StageReport sc_recovery_dh_soundness() {
    StageReport rep;
    rep.name = "sc-recovery-dh-soundness";
    const int l = 10;
    SetSystem S = pattern_set_system(5);
    for (uint64_t seed : {0u, 1u, 2u, 4u, 5u}) {
        SplitMix64 rng = task_stream(seed, "covering-aggregate");
        auto planted = planted_biregular_label_cover(4, 4, 3, 3, 4, 5, rng);
        const LabelCoverInstance& I = planted.instance;
        SetCoverInstance J = sc_transform(I, S);
        ScLayout L(I, S.universe);
        std::vector<uint8_t> pick = sc_planted_pick(I, S, planted.plant);
        int extras = static_cast<int>(seed % 3);
        for (int i = 0; i < extras; i++)
            pick[L.right_set(rng.below_int(I.nV), rng.below_int(I.sigmaV))] = 1;
        int count = 0;
        for (uint8_t b : pick) count += b;
        if (rat(count) > rat(l, 8) * rat(I.nU + I.nV) || !sc_covers(J, pick)) continue;
        rep.stat("cover size (seed " + std::to_string(seed) + ")", count);
        rep.check_ge("expected recovered value vs 2/l^2 at cover size " + std::to_string(count),
                     sc_expected_recovered_value(I, S, pick), rat(2, l * l));
    }
    return rep;
}

inline StageReport dr_swap_factor() {
    StageReport rep;
    rep.name = "dr-swap-factor";
    SplitMix64 rng(4101);
    auto planted = planted_biregular_label_cover(4, 2, 3, 6, 2, 3, rng);
    const LabelCoverInstance& I = planted.instance;
    ExpanderPackage pkg = build_expander_package(I, 4, 77);
    LabelCoverInstance J = degree_reduce(I, 4, pkg);
    SplitMix64 srng = task_stream(5, "verify-dr-swaps");
    for (int trial = 0; trial < 5; trial++) {
        Swap s = random_projection_swap(I, srng);
        LabelCoverInstance J2 = degree_reduce(apply_swap(I, s), 4, pkg);
        rep.check_eq("projection swap factor equals d", swap_distance(J, J2), 4);
        Swap p = random_predicate_swap(I, srng);
        LabelCoverInstance J3 = degree_reduce(apply_swap(I, p), 4, pkg);
        rep.check_eq("predicate swap factor equals 1", swap_distance(J, J3), 1);
    }
    return rep;
}

inline StageReport ar_swap_factor() {
    StageReport rep;
    rep.name = "ar-swap-factor";
    SplitMix64 rng(4201);
    auto planted = planted_label_cover(3, 3, 7, 3, 2, rng);
    const LabelCoverInstance& I = planted.instance;
    Code code = build_code(I.sigmaV, rat(1, 4));
    LabelCoverInstance J = alphabet_reduce(I, code);
    SplitMix64 srng = task_stream(6, "verify-ar-swaps");
    for (int trial = 0; trial < 5; trial++) {
        Swap s = random_projection_swap(I, srng);
        int dist = swap_distance(J, alphabet_reduce(apply_swap(I, s), code));
        rep.check_ge("projection swap factor within [1, k], lower", rat(dist), rat(1));
        rep.check_le("projection swap factor within [1, k], upper", dist, code.k);
        if (code.certified_distance == 1)
            rep.check_eq("distance-1 code: swap factor exactly k", dist, code.k);
    }
    return rep;
}

inline StageReport comp_swap_factor() {
    StageReport rep;
    rep.name = "comp-swap-factor";
    SplitMix64 rng = task_stream(4301, "compose-fixture");
    auto planted = planted_label_cover(3, 3, 6, 3, 2, rng);
    const LabelCoverInstance& I = planted.instance;
    auto ldeg = I.left_degrees();
    int max_deg = *std::max_element(ldeg.begin(), ldeg.end());
    ComposedInstance C = compose(I, toy_decoder(max_deg, I.sigmaV));
    SplitMix64 srng = task_stream(7, "verify-comp-swaps");
    for (int trial = 0; trial < 3; trial++) {
        Swap s = random_projection_swap(I, srng);
        ComposedInstance C2 = compose(apply_swap(I, s), toy_decoder(max_deg, I.sigmaV));
        rep.check_eq("projection structure unchanged (hash)", static_cast<int64_t>(C.structure_hash()),
                     static_cast<int64_t>(C2.structure_hash()));
        int u = I.edges[s.index].first;
        for (int w = 0; w < I.nU; w++)
            if (w != u)
                rep.check_eq("circuit at untouched vertex " + std::to_string(w) + " unchanged",
                             static_cast<int64_t>(circuit_hash(C.circuits[w])),
                             static_cast<int64_t>(circuit_hash(C2.circuits[w])));
        int affected = 0;
        for (size_t e = 0; e < C.row_left.size(); e++)
            if (C.row_left[e] == u) affected += 1 << C.r_bits;
        rep.check_le("predicate rows that can change vs deg(u) * 2^r", affected,
                     static_cast<int64_t>(ldeg[u]) << C.r_bits);
    }
    return rep;
}

inline StageReport ds_swap_factor() {
    StageReport rep;
    rep.name = "ds-swap-factor";
    SetCoverInstance J;
    J.universe = 4;
    J.sets = {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    DomSetGraph G = ds_transform(J, 3);
    SplitMix64 rng = task_stream(8, "verify-ds-swaps");
    for (int trial = 0; trial < 6; trial++) {
        int i = rng.below_int(J.num_sets());
        int e = rng.below_int(J.universe);
        SetCoverInstance J2 = sc_apply_toggle(J, i, e);
        if (J2.max_set_size() > 3 || J2.max_frequency() > 3) continue;
        DomSetGraph G2 = ds_transform(J2, 3);
        int differing = 0;
        for (int a = 0; a < G.n; a++)
            for (int b = a + 1; b < G.n; b++) differing += G.has_edge(a, b) != G2.has_edge(a, b);
        rep.check_eq("toggle moves exactly one edge", differing, 1);
    }
    return rep;
}

inline StageReport ikw_blowup() {
    StageReport rep;
    rep.name = "ikw-blowup";
    for (int n = 4; n <= 8; n++) {
        rep.check_eq("cycle n=" + std::to_string(n) + ": blowup fraction equals j/n",
                     ikw_blowup_fraction(n, 2, 1), rat(1, n));
        rep.check_eq("cycle n=" + std::to_string(n) + ": k=3 fraction equals 2/n",
                     ikw_blowup_fraction(n, 3, 1), rat(2, n));
    }
    return rep;
}

inline StageReport recovery_lipschitz() {
    StageReport rep;
    rep.name = "recovery-lipschitz";

    {  // degree reduction
        SplitMix64 rng(4501);
        auto planted = planted_biregular_label_cover(4, 2, 3, 6, 2, 3, rng);
        const LabelCoverInstance& I = planted.instance;
        DrShape shape = dr_shape(I, 4);
        ExpanderPackage pkg = build_expander_package(I, 4, 55);
        LabelCoverInstance J = degree_reduce(I, 4, pkg);
        SplitMix64 arng = task_stream(9, "verify-lip-dr");
        Assignment a = random_assignment(J, arng), b = a;
        b.right[0] = (b.right[0] + 1) % J.sigmaV;
        b.left[1] = (b.left[1] + 1) % J.sigmaU;
        rep.check_le("R_DR coupled Hamming vs h", dr_coupled_expected_hamming(a, b, shape),
                     rat(hamming(a, b)));
    }
    {  // alphabet reduction
        SplitMix64 rng(4502);
        auto planted = planted_label_cover(3, 3, 7, 3, 2, rng);
        const LabelCoverInstance& I = planted.instance;
        Code code = build_code(I.sigmaV, rat(1, 4));
        LabelCoverInstance J = alphabet_reduce(I, code);
        auto ldeg = I.left_degrees();
        auto rdeg = I.right_degrees();
        int du = *std::max_element(ldeg.begin(), ldeg.end());
        int dv = *std::min_element(rdeg.begin(), rdeg.end());
        SplitMix64 arng = task_stream(10, "verify-lip-ar");
        Assignment a = random_assignment(J, arng), b = a;
        b.left[0] = (b.left[0] + 1) % J.sigmaU;
        b.right[2] = (b.right[2] + 1) % J.sigmaV;
        rat factor = rat(1) + rat(du, dv);
        rep.check_le("R_AR coupled Hamming vs (1 + Du/dv) h",
                     ar_coupled_expected_hamming(I, a, b), factor * rat(hamming(a, b)));
    }
    {  // set cover selection toggles
        SplitMix64 rng = task_stream(4503, "covering-fixture");
        auto planted = planted_label_cover(3, 3, 9, 3, 2, rng);
        const LabelCoverInstance& I = planted.instance;
        SetSystem S = pattern_set_system(I.sigmaV);
        ScLayout L(I, S.universe);
        SplitMix64 trng = task_stream(11, "verify-lip-sc");
        for (int trial = 0; trial < 4; trial++) {
            std::vector<uint8_t> a(L.num_sets(), 0);
            for (int i = 0; i < L.num_sets(); i++) a[i] = static_cast<uint8_t>(trng.below(2));
            std::vector<uint8_t> b = a;
            int h = 1 + trng.below_int(4);
            for (int i = 0; i < h; i++) b[trng.below_int(L.num_sets())] ^= 1;
            int sd = 0;
            for (int i = 0; i < L.num_sets(); i++) sd += a[i] != b[i];
            uint64_t seed = trng.next();
            rep.check_le("R_SC coupled Hamming vs toggled index count",
                         hamming(sc_recover(I, S, a, seed), sc_recover(I, S, b, seed)),
                         static_cast<int64_t>(sd));
        }
    }
    {  // dominating set
        SetCoverInstance J;
        J.universe = 5;
        J.sets = {{1, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 0, 1, 1}, {1, 0, 0, 0, 1}};
        DomSetGraph G = ds_transform(J, 3);
        SplitMix64 trng = task_stream(12, "verify-lip-ds");
        for (int trial = 0; trial < 4; trial++) {
            std::vector<uint8_t> a(G.n, 0), b(G.n, 0);
            for (int v = 0; v < G.n; v++) {
                a[v] = static_cast<uint8_t>(trng.below(2));
                b[v] = static_cast<uint8_t>(trng.below(2));
            }
            auto ra = ds_recover(G, a), rb = ds_recover(G, b);
            int out = 0, in = 0;
            for (size_t i = 0; i < ra.size(); i++) out += ra[i] != rb[i];
            for (int v = 0; v < G.n; v++) in += a[v] != b[v];
            rep.check_le("R_DS symmetric difference vs input symmetric difference",
                         static_cast<int64_t>(out), static_cast<int64_t>(in));
        }
    }
    return rep;
}

inline StageReport gadget_certificates() {
    StageReport rep;
    rep.name = "gadget-certificates";
    SetSystem P = pattern_set_system(3);
    rep.check_true("pattern system verified at its certified level",
                   verify_set_system(P, P.certified_l));
    Code code = build_code(5, rat(1, 8));
    rep.check_ge("code distance vs 1 - delta", verify_code(code), rat(1) - rat(1, 8));
    rep.stat("code parameters", "q=" + std::to_string(code.q) + " t=" + std::to_string(code.t));
    RegularGraph K = build_expander(6, 5, 1.0, 3);
    rep.check_le_f("complete graph lambda vs 1/d + 1e-10", K.measured_lambda, 1.0 / 5 + 1e-10);
    rep.check_le_f("complete graph lambda lower", 1.0 / 5 - 1e-10, K.measured_lambda);
    RegularGraph G = build_expander(16, 6, 2.0 / std::sqrt(6.0), 4);
    std::ostringstream lam;
    lam << G.measured_lambda;
    rep.stat("sampled expander measured lambda (float)", lam.str());
    rep.check_le_f("sampled expander lambda vs 1", G.measured_lambda, 1.0);
    return rep;
}

inline StageReport emd_metric() {
    StageReport rep;
    rep.name = "emd-metric";
    SplitMix64 rng = task_stream(4601, "verify-emd");
    auto planted = planted_label_cover(2, 2, 4, 2, 2, rng);
    const LabelCoverInstance& I = planted.instance;
    auto rand_dist = [&]() {
        Dist<Assignment> d;
        int k = 2 + rng.below_int(2);
        for (int i = 0; i < k; i++) d.support.emplace_back(random_assignment(I, rng), rat(1, k));
        d.normalize();
        return d;
    };
    for (int trial = 0; trial < 6; trial++) {
        Dist<Assignment> A = rand_dist(), B = rand_dist(), C = rand_dist();
        rat ab = emd_exact_assignments(A, B);
        rat ba = emd_exact_assignments(B, A);
        rat ac = emd_exact_assignments(A, C);
        rat cb = emd_exact_assignments(C, B);
        rep.check_eq("symmetry", ab, ba);
        rep.check_le("triangle inequality", ab, ac + cb);
        rep.check_ge("non-negativity", ab, rat(0));
        rep.check_eq("identity of indiscernibles (self distance)", emd_exact_assignments(A, A), rat(0));
    }
    return rep;
}

inline StageReport neighboring_witness_suite() {
    StageReport rep;
    rep.name = "neighboring-witness";
    SplitMix64 rng = task_stream(4701, "verify-witness");
    auto planted = planted_label_cover(2, 2, 4, 2, 2, rng);
    const LabelCoverInstance& I = planted.instance;
    RandAlg<LabelCoverInstance, Assignment> alg;
    alg.space = 4;
    alg.run = [](const LabelCoverInstance& inst, uint64_t s) {
        Assignment pi = opt_bruteforce(inst).witness;
        pi.left[0] = static_cast<int>(s % inst.sigmaU);
        return pi;
    };
    for (int trial = 0; trial < 3; trial++) {
        LabelCoverInstance J = I;
        SplitMix64 srng(rng.next());
        for (int k = 0; k < 3; k++) J = apply_swap(J, random_projection_swap(J, srng));
        if (swap_distance(I, J) == 0) continue;
        WitnessStep w = neighboring_witness(alg, I, J,
                                            [](const Assignment& a, const Assignment& b) { return hamming(a, b); });
        rep.check_ge("witness step EMD vs total/k", w.emd_at_step,
                     w.total_emd / rat(w.path_length));
    }
    return rep;
}

}  // namespace suites

inline const std::map<std::string, std::function<StageReport()>>& verify_registry() {
    static const std::map<std::string, std::function<StageReport()>> reg = {
        {"lc-balance", suites::lc_balance},
        {"sc-slice-soundness", suites::sc_slice_soundness},
        {"sc-recovery-dh-soundness", suites::sc_recovery_dh_soundness},
        {"dr-swap-factor", suites::dr_swap_factor},
        {"ar-swap-factor", suites::ar_swap_factor},
        {"comp-swap-factor", suites::comp_swap_factor},
        {"ds-swap-factor", suites::ds_swap_factor},
        {"ikw-blowup", suites::ikw_blowup},
        {"recovery-lipschitz", suites::recovery_lipschitz},
        {"gadget-certificates", suites::gadget_certificates},
        {"emd-metric", suites::emd_metric},
        {"neighboring-witness", suites::neighboring_witness_suite},
    };
    return reg;
}

inline StageReport verify_suite(const std::string& name) {
    auto it = verify_registry().find(name);
    if (it == verify_registry().end()) fail("unknown verification suite: " + name);
    return it->second();
}

}  // namespace redlab
