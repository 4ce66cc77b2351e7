// redlab: reduction-engineering workbench CLI.
//
// Subcommands: gen, transform, recover, value, opt, sens, verify, pipeline.
// Exit codes: 0 all checks pass, 2 a checked inequality failed, 1 usage/IO error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "redlab/compose.hpp"
#include "redlab/ikw.hpp"
#include "redlab/jsonio.hpp"

using namespace redlab;
namespace fs = std::filesystem;

namespace {

// ---- small shared helpers ----

struct CspOpt {
    rat value;
    std::vector<int> witness;
};

// exhaustive 2-CSP maximum, lexicographically first witness
CspOpt csp_opt_bruteforce(const TwoCspInstance& phi, double budget) {
    double space = 1.0;
    for (int i = 0; i < phi.n; i++) space *= phi.sigma;
    require(space <= budget, "csp opt: instance too large for exhaustive oracle");
    require(!phi.constraints.empty(), "csp opt: no constraints");
    std::vector<int> labels(phi.n, 0);
    CspOpt best{rat(-1), labels};
    while (true) {
        rat v = csp_value(phi, labels);
        if (v > best.value) best = {v, labels};
        int i = phi.n - 1;
        for (; i >= 0; i--) {
            if (++labels[i] < phi.sigma) break;
            labels[i] = 0;
        }
        if (i < 0) break;
    }
    return best;
}

Assignment lift_plant_through_code(const Assignment& pi, const Code& code) {
    Assignment out;
    out.left = pi.left;
    for (int label : pi.right)
        for (int i = 0; i < code.k; i++) out.right.push_back(code.table[label][i]);
    return out;
}

Assignment lift_plant_to_clouds(const Assignment& pi, const DrShape& shape) {
    Assignment out;
    out.left = pi.left;
    for (int v = 0; v < shape.source_nV; v++)
        for (int i = 0; i < shape.source_right_degrees[v]; i++) out.right.push_back(pi.right[v]);
    return out;
}

// swap-sensitivity reports in the shared schema
njson sens_label_cover(const LabelCoverInstance& I, int n_swaps, uint64_t seed, double budget) {
    require(n_swaps >= 1, "sens: need at least one swap");
    RandAlg<LabelCoverInstance, Assignment> alg;
    alg.space = 1;
    alg.run = [budget](const LabelCoverInstance& inst, uint64_t) {
        return opt_bruteforce(inst, budget).witness;
    };
    SplitMix64 rng = task_stream(seed, "sens-swaps");
    std::vector<Swap> swaps;
    for (int i = 0; i < n_swaps; i++)
        swaps.push_back(i % 2 == 0 ? random_projection_swap(I, rng) : random_predicate_swap(I, rng));
    auto metric = [](const Assignment& a, const Assignment& b) { return hamming(a, b); };
    auto res = swap_sensitivity_exact(alg, I, swaps, metric);

    njson rep;
    rep["op"] = "swap_sensitivity";
    rep["instance"] = hex64(json_content_hash(lc_to_json(I)));
    rep["mode"] = "exact";
    rep["algorithm"] = "opt-witness";
    rep["per_swap"] = njson::array();
    for (size_t i = 0; i < swaps.size(); i++) {
        const char* kind = swaps[i].kind == Swap::Kind::Projection ? "projection" : "predicate";
        rep["per_swap"].push_back(
            {{"swap", {{"kind", kind}, {"index", swaps[i].index}}}, {"emd", rat_to_string(res.per_swap[i])}});
    }
    rep["max"] = rat_to_string(res.max_emd);
    return rep;
}

njson sens_set_cover(const SetCoverInstance& J, int n_swaps, uint64_t seed) {
    require(n_swaps >= 1, "sens: need at least one swap");
    SplitMix64 rng = task_stream(seed, "sens-toggles");
    auto metric = [](const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
        int64_t h = 0;
        for (size_t i = 0; i < a.size(); i++) h += a[i] != b[i];
        return h;
    };
    std::vector<uint8_t> base = greedy_cover(J);
    njson rep;
    rep["op"] = "swap_sensitivity";
    rep["instance"] = hex64(json_content_hash(sc_to_json(J)));
    rep["mode"] = "exact";
    rep["algorithm"] = "greedy-cover";
    rep["per_swap"] = njson::array();
    rat max_emd = 0;
    for (int t = 0; t < n_swaps; t++) {
        int i = rng.below_int(J.num_sets());
        int e = rng.below_int(J.universe);
        SetCoverInstance J2 = sc_apply_toggle(J, i, e);
        rat emd;
        try {
            emd = emd_exact(Dist<std::vector<uint8_t>>::point(base),
                            Dist<std::vector<uint8_t>>::point(greedy_cover(J2)), metric);
        } catch (const Error&) {
            // toggled instance became uncoverable; maximal possible movement
            emd = rat(J.num_sets());
        }
        rep["per_swap"].push_back({{"swap", {{"kind", "sc-membership-toggle"}, {"index", i}, {"element", e}}},
                                   {"emd", rat_to_string(emd)}});
        if (emd > max_emd) max_emd = emd;
    }
    rep["max"] = rat_to_string(max_emd);
    return rep;
}

void emit(const njson& j, const std::string& format, const std::string& out_path) {
    if (!out_path.empty()) write_json_file(out_path, j);
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        for (auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

// ---- pipeline machinery ----

// everything a later recover stage needs to map a witness back through one transform
struct ChainLink {
    std::string stage;
    LabelCoverInstance lc_src;    // source label cover for lc-level transforms
    BalanceShape bal;             // balance
    DrShape drs;                  // dr
    LabelCoverInstance produced;  // dr target (recovery validates against it)
    Code code;                    // ar
    RedHandle red;                // red
    IkwInstance ikw;              // ikw (carries the base CSP)
    SetSystem ss;                 // setcover
    SetCoverInstance ds_src;      // domset source instance
    DomSetGraph ds_graph;         // domset produced graph
    int pre_pad_n = 0;            // pad
    std::optional<ComposedInstance> comp;  // compose
};

struct PipeState {
    std::string kind;  // two_csp | label_cover | set_cover | graph | composed
    TwoCspInstance csp;
    LabelCoverInstance lc;
    SetCoverInstance sc;
    DomSetGraph graph;
    std::optional<ComposedInstance> comp;

    bool has_plant = false;
    std::vector<int> plant_labels;
    Assignment plant;
    std::vector<uint8_t> plant_pick;
    std::vector<uint8_t> plant_dom;
    std::optional<ComposedAssignment> plant_comp;

    std::vector<ChainLink> chain;
};

std::string expected_output_kind(const std::string& stage, const njson& params, const std::string& cur) {
    if (stage == "gen") {
        std::string k = params.value("kind", "planted-lc");
        return k == "planted-lc" ? "label_cover" : "two_csp";
    }
    if (stage == "ikw") return "label_cover";
    if (stage == "balance" || stage == "dr" || stage == "ar" || stage == "red") return "label_cover";
    if (stage == "compose") return "composed";
    if (stage == "setcover") return "set_cover";
    if (stage == "domset") return "graph";
    if (stage == "pad") return "graph";
    return cur;  // recover / sens / verify leave the artifact untouched
}

const std::map<std::string, std::string>& stage_input_kinds() {
    static const std::map<std::string, std::string> m = {
        {"ikw", "two_csp"},    {"balance", "label_cover"}, {"dr", "label_cover"},
        {"ar", "label_cover"}, {"red", "label_cover"},     {"compose", "label_cover"},
        {"setcover", "label_cover"}, {"domset", "set_cover"}, {"pad", "graph"},
    };
    return m;
}

bool stage_needs_seed(const std::string& stage, const njson& params) {
    if (stage == "gen" || stage == "dr" || stage == "red" || stage == "recover" || stage == "sens")
        return true;
    if (stage == "ikw") return true;  // sampled mode draws; exhaustive ignores the stream
    return false;
}

void validate_pipeline(const njson& stages) {
    require(stages.is_array() && !stages.empty(), "pipeline: empty stage list");
    std::string kind = "";
    for (size_t i = 0; i < stages.size(); i++) {
        const njson& st = stages[i];
        require(st.is_object() && st.contains("stage"), "pipeline: stage " + std::to_string(i) + " missing \"stage\"");
        std::string name = st["stage"].get<std::string>();
        static const std::set<std::string> known = {"gen",      "balance", "ikw",     "dr",  "ar",
                                                    "red",      "compose", "setcover", "domset", "pad",
                                                    "recover",  "sens",    "verify"};
        require(known.count(name), "pipeline: unknown stage \"" + name + "\"");
        require(i > 0 || name == "gen", "pipeline: the first stage must be gen");
        require(i == 0 || name != "gen", "pipeline: gen is only valid first");
        if (stage_needs_seed(name, st))
            require(st.contains("seed"), "pipeline: randomized stage \"" + name + "\" needs an explicit seed");
        auto it = stage_input_kinds().find(name);
        if (it != stage_input_kinds().end())
            require(kind == it->second, "pipeline: stage kind mismatch: \"" + name + "\" expects " +
                                            it->second + ", gets " + (kind.empty() ? "nothing" : kind));
        if (name == "sens")
            require(kind == "label_cover" || kind == "set_cover",
                    "pipeline: stage kind mismatch: sens needs label_cover or set_cover, gets " + kind);
        kind = expected_output_kind(name, st, kind);
    }
}

njson pipe_artifact_json(const PipeState& ps) {
    if (ps.kind == "two_csp") return csp_to_json(ps.csp);
    if (ps.kind == "label_cover") return lc_to_json(ps.lc);
    if (ps.kind == "set_cover") return sc_to_json(ps.sc);
    if (ps.kind == "graph") return graph_to_json(ps.graph);
    njson j;  // composed instances stay implicit; persist the structural summary
    j["kind"] = "composed";
    j["num_left"] = ps.comp->num_left();
    j["num_right"] = ps.comp->num_right();
    j["num_edges"] = ps.comp->num_edges();
    j["structure_hash"] = hex64(ps.comp->structure_hash());
    return j;
}

struct PipeRunner {
    double budget = 5e7;
    std::string out_dir = ".";
    PipeState ps;
    Report report;

    StageReport& fresh(const std::string& name) {
        report.stages.push_back({});
        report.stages.back().name = name;
        return report.stages.back();
    }

    void cache_artifact(StageReport& rep) {
        njson j = pipe_artifact_json(ps);
        uint64_t h = json_content_hash(j);
        fs::path dir = fs::path(out_dir) / ".cache";
        fs::create_directories(dir);
        fs::path file = dir / (hex64(h) + ".json");
        write_json_file(file.string(), j);
        rep.stat("artifact_kind", ps.kind);
        rep.stat("artifact_hash", hex64(h));
    }

    void run_gen(const njson& p, StageReport& rep) {
        std::string kind = p.value("kind", "planted-lc");
        uint64_t seed = p.at("seed").get<uint64_t>();
        if (kind == "planted-lc") {
            SplitMix64 rng = task_stream(seed, "gen-planted-lc");
            auto planted = planted_label_cover(p.value("nU", 3), p.value("nV", 3), p.value("nE", 8),
                                               p.value("sigmaU", 3), p.value("sigmaV", 2), rng);
            ps.kind = "label_cover";
            ps.lc = planted.instance;
            ps.plant = planted.plant;
            ps.has_plant = true;
            rep.check_eq("planted assignment satisfies everything", value(ps.lc, ps.plant), rat(1));
        } else if (kind == "planted-csp" || kind == "triangle") {
            SplitMix64 rng = task_stream(seed, "gen-planted-csp");
            int n = kind == "triangle" ? 3 : p.value("n", 5);
            int degree = kind == "triangle" ? 2 : p.value("degree", 2);
            auto planted = planted_regular_csp(n, p.value("sigma", 2), degree, rng, p.value("full", false));
            ps.kind = "two_csp";
            ps.csp = planted.instance;
            ps.plant_labels = planted.plant;
            ps.has_plant = true;
            rep.check_eq("planted labels satisfy everything", csp_value(ps.csp, ps.plant_labels), rat(1));
        } else {
            fail("gen: unknown kind \"" + kind + "\"");
        }
        rep.stat("seed", static_cast<int64_t>(seed));
    }

    void run_balance(const njson&, StageReport& rep) {
        BalanceResult res = balance(ps.lc, budget);
        ChainLink link;
        link.stage = "balance";
        link.lc_src = ps.lc;
        link.bal = res.shape;
        ps.chain.push_back(std::move(link));
        rep.stat("K", res.shape.K);
        rep.stat("edges", static_cast<int64_t>(res.instance.edges.size()));
        if (ps.has_plant) {
            Assignment lifted;
            for (int u = 0; u < res.shape.source_nU; u++)
                for (int i = 0; i < res.shape.left_deg[u]; i++) lifted.left.push_back(ps.plant.left[u]);
            for (int v = 0; v < res.shape.source_nV; v++)
                for (int j = 0; j < res.shape.right_deg[v]; j++) lifted.right.push_back(ps.plant.right[v]);
            ps.plant = lifted;
            rep.check_eq("lifted plant stays satisfying", value(res.instance, ps.plant), rat(1));
        }
        ps.lc = std::move(res.instance);
    }

    void run_ikw(const njson& p, StageReport& rep) {
        IkwParams params;
        params.k = p.value("k", 2);
        params.k_prime = p.value("kprime", 1);
        params.samples_per_vertex = p.value("samples", 4);
        std::string mode = p.value("mode", "exhaustive");
        uint64_t seed = p.at("seed").get<uint64_t>();
        bool exhaustive = mode == "exhaustive";
        int sampled_m = 0;
        if (!exhaustive) {
            require(mode == "sampled", "ikw: mode must be exhaustive or sampled");
            sampled_m = p.at("samples_m").get<int>();
        }
        IkwInstance ikw = ikw_build(ps.csp, params, exhaustive, sampled_m, seed, budget);
        rep.stat("left_vertices", ikw.lc.nU);
        rep.stat("right_vertices", ikw.lc.nV);
        rep.stat("edge_rows", static_cast<int64_t>(ikw.lc.edges.size()));
        rep.stat("blowup_fraction",
                 rat_to_string(ikw_blowup_fraction(static_cast<int>(ps.csp.constraints.size()), params.k,
                                                   params.k_prime)));
        if (ps.has_plant) {
            ps.plant = ikw_honest_lift(ikw, ps.plant_labels);
            rep.check_eq("lifted plant stays satisfying", value(ikw.lc, ps.plant), rat(1));
        }
        ChainLink link;
        link.stage = "ikw";
        link.ikw = ikw;
        ps.chain.push_back(std::move(link));
        ps.kind = "label_cover";
        ps.lc = std::move(ikw.lc);
    }

    void run_dr(const njson& p, StageReport& rep) {
        int d = p.at("d").get<int>();
        uint64_t seed = p.at("seed").get<uint64_t>();
        auto rdeg = ps.lc.right_degrees();
        int min_rdeg = *std::min_element(rdeg.begin(), rdeg.end());
        bool eligible = d % 2 == 0 && d >= 4 && d < min_rdeg;
        if (!eligible && p.value("skip_if_ineligible", false)) {
            rep.stat("skipped", "no d-regular cloud exists (d >= min right degree " +
                                    std::to_string(min_rdeg) + ")");
            return;
        }
        ExpanderPackage pkg = build_expander_package(ps.lc, d, seed);
        DrShape shape = dr_shape(ps.lc, d);
        LabelCoverInstance out = degree_reduce(ps.lc, d, pkg);
        ChainLink link;
        link.stage = "dr";
        link.lc_src = ps.lc;
        link.drs = shape;
        link.produced = out;
        ps.chain.push_back(std::move(link));
        rep.stat("d", d);
        rep.stat("right_vertices", out.nV);
        if (ps.has_plant) {
            ps.plant = lift_plant_to_clouds(ps.plant, shape);
            rep.check_eq("lifted plant stays satisfying", value(out, ps.plant), rat(1));
        }
        ps.lc = std::move(out);
    }

    void run_ar(const njson& p, StageReport& rep) {
        rat delta = rat_from_string(p.value("delta", "1/4"));
        Code code = build_code(ps.lc.sigmaV, delta);
        LabelCoverInstance out = alphabet_reduce(ps.lc, code);
        ChainLink link;
        link.stage = "ar";
        link.lc_src = ps.lc;
        link.code = code;
        ps.chain.push_back(std::move(link));
        rep.stat("code", "q=" + std::to_string(code.q) + " t=" + std::to_string(code.t) +
                             " k=" + std::to_string(code.k));
        rep.stat("code_distance", rat_to_string(code.certified_distance));
        if (ps.has_plant) {
            ps.plant = lift_plant_through_code(ps.plant, code);
            rep.check_eq("lifted plant stays satisfying", value(out, ps.plant), rat(1));
        }
        ps.lc = std::move(out);
    }

    void run_red(const njson& p, StageReport& rep) {
        rat epsilon = rat_from_string(p.value("epsilon", "1/20"));
        uint64_t seed = p.at("seed").get<uint64_t>();
        RedResult res = reduce_combined(ps.lc, epsilon, seed, p.value("branch_c", 16));
        ChainLink link;
        link.stage = "red";
        link.lc_src = ps.lc;
        link.red = res.handle;
        ps.chain.push_back(std::move(link));
        rep.stat("dr_applied", res.handle.dr_applied ? "true" : "false");
        rep.stat("code", "q=" + std::to_string(res.handle.code.q) + " k=" + std::to_string(res.handle.code.k));
        if (ps.has_plant) {
            Assignment lifted = lift_plant_through_code(ps.plant, res.handle.code);
            if (res.handle.dr_applied) lifted = lift_plant_to_clouds(lifted, res.handle.dr_layout);
            ps.plant = lifted;
            rep.check_eq("lifted plant stays satisfying", value(res.instance, ps.plant), rat(1));
        }
        ps.lc = std::move(res.instance);
    }

    void run_compose(const njson&, StageReport& rep) {
        auto ldeg = ps.lc.left_degrees();
        int max_deg = *std::max_element(ldeg.begin(), ldeg.end());
        ComposedInstance C = compose(ps.lc, toy_decoder(max_deg, ps.lc.sigmaV), budget);
        rep.stat("left_vertices", C.num_left());
        rep.stat("right_vertices", C.num_right());
        rep.stat("edges", C.num_edges());
        rep.stat("structure_hash", hex64(C.structure_hash()));
        ChainLink link;
        link.stage = "compose";
        link.lc_src = ps.lc;
        link.comp = C;
        ps.chain.push_back(std::move(link));
        if (ps.has_plant) {
            ps.plant_comp = compose_honest_lift(C, ps.plant);
            rep.check_eq("lifted plant stays satisfying", C.value(*ps.plant_comp), rat(1));
        }
        ps.kind = "composed";
        ps.comp = std::move(C);
    }

    void run_setcover(const njson& p, StageReport& rep) {
        int m = p.value("pattern_m", ps.lc.sigmaV);
        require(m == ps.lc.sigmaV, "setcover: pattern_m must equal the right alphabet size");
        SetSystem S = pattern_set_system(m);
        SetCoverInstance J = sc_transform(ps.lc, S);
        int max_deg = 0;
        for (int d : ps.lc.left_degrees()) max_deg = std::max(max_deg, d);
        for (int d : ps.lc.right_degrees()) max_deg = std::max(max_deg, d);
        rep.stat("ground_elements", J.universe);
        rep.stat("sets", J.num_sets());
        rep.check_le("max set size within Delta * |B|", J.max_set_size(),
                     static_cast<int64_t>(max_deg) * S.universe);
        rep.check_le("max frequency within |SigmaU| + |SigmaV|", J.max_frequency(),
                     static_cast<int64_t>(ps.lc.sigmaU + ps.lc.sigmaV));
        ChainLink link;
        link.stage = "setcover";
        link.lc_src = ps.lc;
        link.ss = S;
        ps.chain.push_back(std::move(link));
        if (ps.has_plant) {
            ps.plant_pick = sc_planted_pick(ps.lc, S, ps.plant);
            int size = 0;
            for (uint8_t b : ps.plant_pick) size += b;
            rep.check_true("planted selection covers the ground set", sc_covers(J, ps.plant_pick));
            rep.check_eq("planted cover size equals |U| + |V|", static_cast<int64_t>(size),
                         static_cast<int64_t>(ps.lc.nU + ps.lc.nV));
        }
        ps.kind = "set_cover";
        ps.sc = std::move(J);
    }

    void run_domset(const njson& p, StageReport& rep) {
        int gamma = p.value("gamma", 0);
        if (gamma == 0) gamma = std::max(ps.sc.max_set_size(), ps.sc.max_frequency());
        DomSetGraph G = ds_transform(ps.sc, gamma);
        int helpers = (ps.sc.num_sets() + gamma - 1) / gamma;
        rep.stat("gamma", gamma);
        rep.check_eq("|V(G)| equals N + m + ceil(m/Gamma)", static_cast<int64_t>(G.n),
                     static_cast<int64_t>(ps.sc.universe + ps.sc.num_sets() + helpers));
        rep.check_le("max degree within Gamma + 1", G.max_degree(), static_cast<int64_t>(gamma) + 1);
        ChainLink link;
        link.stage = "domset";
        link.ds_src = ps.sc;
        link.ds_graph = G;
        ps.chain.push_back(std::move(link));
        if (ps.has_plant) {
            ps.plant_dom.assign(G.n, 0);
            for (int i = 0; i < G.n_sets; i++) ps.plant_dom[G.set_vertex(i)] = ps.plant_pick[i];
            for (int h = 0; h < G.n_helpers; h++) ps.plant_dom[G.helper_vertex(h)] = 1;
            rep.check_true("planted cover plus helpers dominates", G.dominates(ps.plant_dom));
        }
        ps.kind = "graph";
        ps.graph = std::move(G);
    }

    void run_pad(const njson& p, StageReport& rep) {
        int fan = p.value("fan", 3);
        int n_target = p.contains("n_target") ? p.at("n_target").get<int>()
                                              : ps.graph.n + p.value("pad_by", 0);
        DomSetGraph H = ds_pad(ps.graph, n_target, fan);
        ChainLink link;
        link.stage = "pad";
        link.pre_pad_n = ps.graph.n;
        ps.chain.push_back(std::move(link));
        int t = n_target - ps.graph.n;
        rep.stat("padding_vertices", t);
        rep.stat("padding_domination", ds_padding_domination(t, fan));
        if (ps.has_plant) {
            ps.plant_dom.resize(H.n, 0);
            int full = t / fan, rem = t - full * fan;
            for (int s = 0; s < full; s++) ps.plant_dom[ps.graph.n + s * fan] = 1;
            if (rem > 0) ps.plant_dom[ps.graph.n + full * fan] = 1;
            rep.check_true("extended plant dominates the padded graph", H.dominates(ps.plant_dom));
        }
        ps.graph = std::move(H);
    }

    void run_recover(const njson& p, StageReport& rep) {
        std::string witness = p.value("witness", "plant");
        uint64_t seed = p.at("seed").get<uint64_t>();
        std::string stop_at = p.value("stop_at", "");

        // level-local witness state
        std::string level = ps.kind;
        std::vector<uint8_t> dom, pick;
        Assignment pi;
        std::vector<int> labels;
        std::optional<ComposedAssignment> cpi;

        if (witness == "plant") {
            require(ps.has_plant, "recover: no plant carried by this pipeline");
            if (level == "graph") dom = ps.plant_dom;
            else if (level == "set_cover") pick = ps.plant_pick;
            else if (level == "label_cover") pi = ps.plant;
            else if (level == "two_csp") labels = ps.plant_labels;
            else cpi = ps.plant_comp;
        } else if (witness == "opt") {
            if (level == "graph") dom = ds_opt_bruteforce(ps.graph, budget).pick;
            else if (level == "set_cover") pick = sc_opt_bruteforce(ps.sc, budget).pick;
            else if (level == "label_cover") pi = opt_bruteforce(ps.lc, budget).witness;
            else if (level == "two_csp") labels = csp_opt_bruteforce(ps.csp, budget).witness;
            else fail("recover: no exhaustive oracle at the composed level");
        } else if (witness == "greedy") {
            if (level == "graph") dom = greedy_domset(ps.graph);
            else if (level == "set_cover") pick = greedy_cover(ps.sc);
            else fail("recover: greedy witnesses exist only for set_cover and graph");
        } else {
            fail("recover: witness must be plant, opt, or greedy");
        }

        if (p.value("oracle_checks", false)) {
            // exact optimum sandwich on the covering suffix
            const ChainLink* dsl = nullptr;
            for (auto it = ps.chain.rbegin(); it != ps.chain.rend(); ++it)
                if (it->stage == "domset") {
                    dsl = &*it;
                    break;
                }
            require(dsl != nullptr, "recover: oracle_checks needs a domset stage in the chain");
            CoverWitness sco = sc_opt_bruteforce(dsl->ds_src, budget);
            CoverWitness dso = ds_opt_bruteforce(dsl->ds_graph, budget);
            int helpers = (dsl->ds_src.num_sets() + dsl->ds_graph.gamma - 1) / dsl->ds_graph.gamma;
            rep.stat("sc_opt", sco.size);
            rep.stat("ds_opt", dso.size);
            rep.check_le("cover number below domination number", static_cast<int64_t>(sco.size),
                         static_cast<int64_t>(dso.size));
            rep.check_le("domination number within cover number + ceil(m/Gamma)",
                         static_cast<int64_t>(dso.size), static_cast<int64_t>(sco.size + helpers));
        }

        // instance the current witness lives on, updated as the chain unwinds
        const LabelCoverInstance* cur_lc = level == "label_cover" ? &ps.lc : nullptr;
        const TwoCspInstance* cur_csp = level == "two_csp" ? &ps.csp : nullptr;

        int idx = 0;
        for (auto it = ps.chain.rbegin(); it != ps.chain.rend(); ++it, ++idx) {
            if (level == stop_at) break;
            uint64_t link_seed = task_stream(seed, "pipeline-recover", static_cast<uint64_t>(idx)).next();
            const ChainLink& link = *it;
            if (link.stage == "pad") {
                dom.resize(static_cast<size_t>(link.pre_pad_n));
            } else if (link.stage == "domset") {
                pick = ds_recover(link.ds_graph, dom);
                level = "set_cover";
                int size = 0;
                for (uint8_t b : pick) size += b;
                rep.stat("recovered selection size", size);
                rep.check_true("recovered selection covers the ground set", sc_covers(link.ds_src, pick));
            } else if (link.stage == "setcover") {
                pi = sc_recover(link.lc_src, link.ss, pick, link_seed);
                level = "label_cover";
                cur_lc = &link.lc_src;
                rep.stat("value after unwinding setcover", rat_to_string(value(*cur_lc, pi)));
            } else if (link.stage == "balance") {
                pi = balance_project(link.bal, pi, link_seed);
                cur_lc = &link.lc_src;
                rep.stat("value after unwinding balance", rat_to_string(value(*cur_lc, pi)));
            } else if (link.stage == "dr") {
                pi = dr_recover(link.produced, pi, link.drs, link_seed);
                cur_lc = &link.lc_src;
                rep.stat("value after unwinding dr", rat_to_string(value(*cur_lc, pi)));
            } else if (link.stage == "ar") {
                pi = ar_recover(link.lc_src, pi, link_seed);
                cur_lc = &link.lc_src;
                rep.stat("value after unwinding ar", rat_to_string(value(*cur_lc, pi)));
            } else if (link.stage == "red") {
                pi = red_recover(link.lc_src, link.red, pi, link_seed);
                cur_lc = &link.lc_src;
                rep.stat("value after unwinding red", rat_to_string(value(*cur_lc, pi)));
            } else if (link.stage == "compose") {
                require(cpi.has_value(), "recover: composed witness missing");
                pi = comp_recover(*link.comp, *cpi, link_seed);
                level = "label_cover";
                cur_lc = &link.lc_src;
                rep.stat("value after unwinding compose", rat_to_string(value(*cur_lc, pi)));
            } else if (link.stage == "ikw") {
                labels = ikw_recover(link.ikw, pi, link_seed);
                level = "two_csp";
                cur_csp = &link.ikw.base;
                rep.stat("value after unwinding ikw", rat_to_string(csp_value(*cur_csp, labels)));
            }
        }

        if (p.contains("expect_value")) {
            rat expected = rat_from_string(p.at("expect_value").get<std::string>());
            rat got;
            if (level == "label_cover" && cur_lc)
                got = value(*cur_lc, pi);
            else if (level == "two_csp" && cur_csp)
                got = csp_value(*cur_csp, labels);
            else
                fail("recover: expect_value needs the unwinding to reach an instance level");
            rep.check_eq("recovered value matches expectation", got, expected);
        }
    }

    void run_sens(const njson& p, StageReport& rep) {
        int swaps = p.value("swaps", 4);
        uint64_t seed = p.at("seed").get<uint64_t>();
        njson r = ps.kind == "label_cover" ? sens_label_cover(ps.lc, swaps, seed, budget)
                                           : sens_set_cover(ps.sc, swaps, seed);
        rep.stat("algorithm", r["algorithm"].get<std::string>());
        rep.stat("max_emd", r["max"].get<std::string>());
        for (auto& e : r["per_swap"]) rep.stat("swap " + e["swap"].dump(), e["emd"].get<std::string>());
    }

    void run_verify(const njson& p, StageReport& rep) {
        StageReport sub = redlab::verify_suite(p.at("suite").get<std::string>());
        rep.name = "verify:" + sub.name;
        rep.stats = sub.stats;
        rep.checks = sub.checks;
    }

    void run(const njson& stages) {
        validate_pipeline(stages);
        for (const auto& st : stages) {
            std::string name = st["stage"].get<std::string>();
            StageReport& rep = fresh(name);
            if (name == "gen") run_gen(st, rep);
            else if (name == "balance") run_balance(st, rep);
            else if (name == "ikw") run_ikw(st, rep);
            else if (name == "dr") run_dr(st, rep);
            else if (name == "ar") run_ar(st, rep);
            else if (name == "red") run_red(st, rep);
            else if (name == "compose") run_compose(st, rep);
            else if (name == "setcover") run_setcover(st, rep);
            else if (name == "domset") run_domset(st, rep);
            else if (name == "pad") run_pad(st, rep);
            else if (name == "recover") run_recover(st, rep);
            else if (name == "sens") run_sens(st, rep);
            else run_verify(st, rep);
            if (name != "recover" && name != "sens" && name != "verify") cache_artifact(rep);
        }
    }
};

// ---- subcommand state ----

struct Options {
    std::string format = "text";
    std::string out;
    std::string out_dir = ".";
    double budget = 5e7;
    uint64_t seed = 0;
};

int report_exit(const Report& rep, const std::string& format, const std::string& out) {
    if (!out.empty()) write_json_file(out, report_to_json(rep));
    if (format == "json")
        std::cout << report_to_json(rep).dump(2) << "\n";
    else
        std::cout << report_to_text(rep);
    return rep.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reduction-engineering workbench"};
    app.require_subcommand(1);
    Options opt;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a planted instance");
    std::string gen_type = "planted-lc";
    int g_nU = 3, g_nV = 3, g_nE = 8, g_sigmaU = 3, g_sigmaV = 2, g_n = 5, g_sigma = 2, g_degree = 2;
    bool g_full = false;
    std::string g_out, g_plant_out;
    gen->add_option("--type", gen_type, "planted-lc | planted-csp | triangle");
    gen->add_option("--nU", g_nU);
    gen->add_option("--nV", g_nV);
    gen->add_option("--nE", g_nE);
    gen->add_option("--sigmaU", g_sigmaU);
    gen->add_option("--sigmaV", g_sigmaV);
    gen->add_option("--n", g_n);
    gen->add_option("--sigma", g_sigma);
    gen->add_option("--degree", g_degree, "2 or 4");
    gen->add_flag("--full", g_full, "satisfiable-by-construction full relations");
    gen->add_option("--seed", opt.seed)->required();
    gen->add_option("--out", g_out)->required();
    gen->add_option("--plant-out", g_plant_out, "write the planted witness");

    // transform
    auto* transform = app.add_subcommand("transform", "apply one reduction step");
    transform->require_subcommand(1);
    std::string t_in, t_out;
    int t_d = 4, t_k = 2, t_kprime = 1, t_samples_m = 0, t_pattern_m = 0, t_gamma = 0;
    int t_n_target = 0, t_fan = 3, t_branch_c = 16, t_samples = 4;
    std::string t_delta = "1/4", t_epsilon = "1/20", t_mode = "exhaustive";
    auto add_io = [&](CLI::App* sub, bool in_required = true) {
        auto* o = sub->add_option("--in", t_in, "input artifact");
        if (in_required) o->required();
        sub->add_option("--out", t_out)->required();
    };
    auto* t_balance = transform->add_subcommand("balance", "equalize degrees");
    add_io(t_balance);
    auto* t_dr = transform->add_subcommand("dr", "degree reduction");
    add_io(t_dr);
    t_dr->add_option("--d", t_d)->required();
    t_dr->add_option("--seed", opt.seed)->required();
    auto* t_ar = transform->add_subcommand("ar", "alphabet reduction");
    add_io(t_ar);
    t_ar->add_option("--delta", t_delta, "code distance parameter p/q");
    auto* t_red = transform->add_subcommand("red", "combined reduction");
    add_io(t_red);
    t_red->add_option("--epsilon", t_epsilon)->required();
    t_red->add_option("--branch-c", t_branch_c);
    t_red->add_option("--seed", opt.seed)->required();
    auto* t_ikw = transform->add_subcommand("ikw", "parallel repetition");
    t_ikw->add_option("--base,--in", t_in, "base 2-CSP")->required();
    t_ikw->add_option("--out", t_out)->required();
    t_ikw->add_option("--k", t_k);
    t_ikw->add_option("--kprime", t_kprime);
    t_ikw->add_option("--samples", t_samples, "recovery samples per vertex");
    t_ikw->add_option("--mode", t_mode, "exhaustive | sampled:M");
    t_ikw->add_option("--seed", opt.seed)->required();
    auto* t_sc = transform->add_subcommand("setcover", "covering reduction");
    add_io(t_sc);
    t_sc->add_option("--pattern-m", t_pattern_m, "pattern system rows (default: right alphabet)");
    auto* t_ds = transform->add_subcommand("domset", "incidence-graph reduction");
    add_io(t_ds);
    t_ds->add_option("--gamma", t_gamma, "capacity (default: max set size / frequency)");
    auto* t_pad = transform->add_subcommand("pad", "append the canonical star forest");
    add_io(t_pad);
    t_pad->add_option("--n-target", t_n_target)->required();
    t_pad->add_option("--fan", t_fan);

    // recover
    auto* recover = app.add_subcommand("recover", "map a witness back through one step");
    recover->require_subcommand(1);
    std::string r_source, r_target, r_witness, r_out;
    uint64_t r_build_seed = 0;
    auto add_recover_common = [&](CLI::App* sub, const char* witness_name) {
        sub->add_option("--source", r_source, "pre-transform artifact")->required();
        sub->add_option(witness_name, r_witness)->required();
        sub->add_option("--out", r_out)->required();
    };
    auto* r_balance = recover->add_subcommand("balance", "uniform copy projection");
    add_recover_common(r_balance, "--assignment");
    r_balance->add_option("--seed", opt.seed)->required();
    auto* r_dr = recover->add_subcommand("dr", "uniform cloud-slot projection");
    add_recover_common(r_dr, "--assignment");
    r_dr->add_option("--target", r_target, "post-transform artifact")->required();
    r_dr->add_option("--d", t_d)->required();
    r_dr->add_option("--seed", opt.seed)->required();
    auto* r_ar = recover->add_subcommand("ar", "incident-edge plurality vote");
    add_recover_common(r_ar, "--assignment");
    r_ar->add_option("--seed", opt.seed)->required();
    auto* r_red = recover->add_subcommand("red", "combined recovery");
    add_recover_common(r_red, "--assignment");
    r_red->add_option("--epsilon", t_epsilon)->required();
    r_red->add_option("--branch-c", t_branch_c);
    r_red->add_option("--build-seed", r_build_seed)->required();
    r_red->add_option("--seed", opt.seed)->required();
    auto* r_ikw = recover->add_subcommand("ikw", "consistent-sample decoding");
    r_ikw->add_option("--base,--source", r_source)->required();
    r_ikw->add_option("--assignment", r_witness)->required();
    r_ikw->add_option("--out", r_out)->required();
    r_ikw->add_option("--k", t_k);
    r_ikw->add_option("--kprime", t_kprime);
    r_ikw->add_option("--samples", t_samples);
    r_ikw->add_option("--mode", t_mode);
    r_ikw->add_option("--build-seed", r_build_seed);
    r_ikw->add_option("--seed", opt.seed)->required();
    auto* r_sc = recover->add_subcommand("setcover", "slice sampling");
    add_recover_common(r_sc, "--selection");
    r_sc->add_option("--pattern-m", t_pattern_m);
    r_sc->add_option("--seed", opt.seed)->required();
    auto* r_ds = recover->add_subcommand("domset", "designated-set pullback");
    r_ds->add_option("--graph", r_source)->required();
    r_ds->add_option("--dominating", r_witness)->required();
    r_ds->add_option("--out", r_out)->required();

    // value / opt
    auto* value_cmd = app.add_subcommand("value", "exact value of a witness");
    std::string v_instance, v_witness;
    value_cmd->add_option("--instance", v_instance)->required();
    value_cmd->add_option("--witness", v_witness)->required();
    value_cmd->add_option("--format", opt.format, "json | text");

    auto* opt_cmd = app.add_subcommand("opt", "brute-force optimum with witness");
    std::string o_instance, o_witness_out;
    opt_cmd->add_option("--instance", o_instance)->required();
    opt_cmd->add_option("--witness-out", o_witness_out);
    opt_cmd->add_option("--budget", opt.budget);
    opt_cmd->add_option("--format", opt.format);

    // sens
    auto* sens = app.add_subcommand("sens", "measured swap sensitivity of a baseline algorithm");
    std::string s_instance;
    int s_swaps = 4;
    sens->add_option("--instance", s_instance)->required();
    sens->add_option("--swaps", s_swaps);
    sens->add_option("--seed", opt.seed)->required();
    sens->add_option("--budget", opt.budget);
    sens->add_option("--out", opt.out);
    sens->add_option("--format", opt.format);

    // verify
    auto* verify = app.add_subcommand("verify", "run shipped lemma suites");
    std::vector<std::string> suites;
    bool list_suites = false;
    verify->add_option("suites", suites, "suite names, or: all");
    verify->add_flag("--list", list_suites, "list available suites");
    verify->add_option("--format", opt.format);
    verify->add_option("--out", opt.out);

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "run a staged reduction chain");
    std::string p_spec;
    pipeline->add_option("--spec", p_spec)->required();
    pipeline->add_option("--out-dir", opt.out_dir);
    pipeline->add_option("--budget", opt.budget);
    pipeline->add_option("--format", opt.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            if (gen_type == "planted-lc") {
                SplitMix64 rng = task_stream(opt.seed, "gen-planted-lc");
                auto planted = planted_label_cover(g_nU, g_nV, g_nE, g_sigmaU, g_sigmaV, rng);
                write_json_file(g_out, lc_to_json(planted.instance));
                if (!g_plant_out.empty()) write_json_file(g_plant_out, assignment_to_json(planted.plant));
            } else if (gen_type == "planted-csp" || gen_type == "triangle") {
                SplitMix64 rng = task_stream(opt.seed, "gen-planted-csp");
                int n = gen_type == "triangle" ? 3 : g_n;
                int degree = gen_type == "triangle" ? 2 : g_degree;
                auto planted = planted_regular_csp(n, g_sigma, degree, rng, g_full);
                write_json_file(g_out, csp_to_json(planted.instance));
                if (!g_plant_out.empty()) write_json_file(g_plant_out, labels_to_json(planted.plant));
            } else {
                fail("gen: unknown type \"" + gen_type + "\"");
            }
            return 0;
        }

        if (transform->parsed()) {
            if (t_balance->parsed()) {
                write_json_file(t_out, lc_to_json(balance(lc_from_json(read_json_file(t_in))).instance));
            } else if (t_dr->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(t_in));
                write_json_file(t_out, lc_to_json(degree_reduce(I, t_d, build_expander_package(I, t_d, opt.seed))));
            } else if (t_ar->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(t_in));
                write_json_file(t_out, lc_to_json(alphabet_reduce(I, build_code(I.sigmaV, rat_from_string(t_delta)))));
            } else if (t_red->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(t_in));
                write_json_file(t_out, lc_to_json(reduce_combined(I, rat_from_string(t_epsilon), opt.seed, t_branch_c).instance));
            } else if (t_ikw->parsed()) {
                TwoCspInstance phi = csp_from_json(read_json_file(t_in));
                IkwParams params;
                params.k = t_k;
                params.k_prime = t_kprime;
                params.samples_per_vertex = t_samples;
                bool exhaustive = t_mode == "exhaustive";
                int sampled_m = 0;
                if (!exhaustive) {
                    require(t_mode.rfind("sampled:", 0) == 0, "ikw: mode must be exhaustive or sampled:M");
                    sampled_m = std::stoi(t_mode.substr(8));
                }
                write_json_file(t_out, lc_to_json(ikw_build(phi, params, exhaustive, sampled_m, opt.seed).lc));
            } else if (t_sc->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(t_in));
                int m = t_pattern_m > 0 ? t_pattern_m : I.sigmaV;
                require(m == I.sigmaV, "setcover: pattern rows must equal the right alphabet size");
                write_json_file(t_out, sc_to_json(sc_transform(I, pattern_set_system(m))));
            } else if (t_ds->parsed()) {
                SetCoverInstance J = sc_from_json(read_json_file(t_in));
                int gamma = t_gamma > 0 ? t_gamma : std::max(J.max_set_size(), J.max_frequency());
                write_json_file(t_out, graph_to_json(ds_transform(J, gamma)));
            } else if (t_pad->parsed()) {
                write_json_file(t_out, graph_to_json(ds_pad(graph_from_json(read_json_file(t_in)), t_n_target, t_fan)));
            }
            return 0;
        }

        if (recover->parsed()) {
            if (r_balance->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(r_source));
                Assignment pi = assignment_from_json(read_json_file(r_witness));
                write_json_file(r_out, assignment_to_json(balance_project(balance(I).shape, pi, opt.seed)));
            } else if (r_dr->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(r_source));
                LabelCoverInstance T = lc_from_json(read_json_file(r_target));
                Assignment pi = assignment_from_json(read_json_file(r_witness));
                write_json_file(r_out, assignment_to_json(dr_recover(T, pi, dr_shape(I, t_d), opt.seed)));
            } else if (r_ar->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(r_source));
                Assignment pi = assignment_from_json(read_json_file(r_witness));
                write_json_file(r_out, assignment_to_json(ar_recover(I, pi, opt.seed)));
            } else if (r_red->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(r_source));
                Assignment pi = assignment_from_json(read_json_file(r_witness));
                RedResult res = reduce_combined(I, rat_from_string(t_epsilon), r_build_seed, t_branch_c);
                write_json_file(r_out, assignment_to_json(red_recover(I, res.handle, pi, opt.seed)));
            } else if (r_ikw->parsed()) {
                TwoCspInstance phi = csp_from_json(read_json_file(r_source));
                Assignment pi = assignment_from_json(read_json_file(r_witness));
                IkwParams params;
                params.k = t_k;
                params.k_prime = t_kprime;
                params.samples_per_vertex = t_samples;
                bool exhaustive = t_mode == "exhaustive";
                int sampled_m = 0;
                if (!exhaustive) {
                    require(t_mode.rfind("sampled:", 0) == 0, "ikw: mode must be exhaustive or sampled:M");
                    sampled_m = std::stoi(t_mode.substr(8));
                }
                IkwInstance ikw = ikw_build(phi, params, exhaustive, sampled_m, r_build_seed);
                write_json_file(r_out, labels_to_json(ikw_recover(ikw, pi, opt.seed)));
            } else if (r_sc->parsed()) {
                LabelCoverInstance I = lc_from_json(read_json_file(r_source));
                int m = t_pattern_m > 0 ? t_pattern_m : I.sigmaV;
                SetSystem S = pattern_set_system(m);
                std::vector<uint8_t> pick = mask_from_json(read_json_file(r_witness), "selection");
                write_json_file(r_out, assignment_to_json(sc_recover(I, S, pick, opt.seed)));
            } else if (r_ds->parsed()) {
                DomSetGraph G = graph_from_json(read_json_file(r_source));
                std::vector<uint8_t> d = mask_from_json(read_json_file(r_witness), "vertex_set");
                write_json_file(r_out, mask_to_json("selection", ds_recover(G, d)));
            }
            return 0;
        }

        if (value_cmd->parsed()) {
            njson inst = read_json_file(v_instance);
            njson wit = read_json_file(v_witness);
            std::string kind = json_kind(inst);
            njson out;
            out["op"] = "value";
            out["instance"] = hex64(json_content_hash(inst));
            if (kind == "label_cover") {
                out["value"] = rat_to_string(value(lc_from_json(inst), assignment_from_json(wit)));
            } else if (kind == "two_csp") {
                out["value"] = rat_to_string(csp_value(csp_from_json(inst), labels_from_json(wit)));
            } else if (kind == "set_cover") {
                SetCoverInstance J = sc_from_json(inst);
                std::vector<uint8_t> pick = mask_from_json(wit, "selection");
                int size = 0;
                for (uint8_t b : pick) size += b;
                out["covers"] = sc_covers(J, pick);
                out["size"] = size;
            } else if (kind == "graph") {
                DomSetGraph G = graph_from_json(inst);
                std::vector<uint8_t> d = mask_from_json(wit, "vertex_set");
                int size = 0;
                for (uint8_t b : d) size += b;
                out["dominates"] = G.dominates(d);
                out["size"] = size;
            } else {
                fail("value: unsupported instance kind \"" + kind + "\"");
            }
            emit(out, opt.format, "");
            return 0;
        }

        if (opt_cmd->parsed()) {
            njson inst = read_json_file(o_instance);
            std::string kind = json_kind(inst);
            njson out;
            out["op"] = "opt";
            out["instance"] = hex64(json_content_hash(inst));
            if (kind == "label_cover") {
                OptResult res = opt_bruteforce(lc_from_json(inst), opt.budget);
                out["value"] = rat_to_string(res.value);
                if (!o_witness_out.empty()) write_json_file(o_witness_out, assignment_to_json(res.witness));
            } else if (kind == "two_csp") {
                CspOpt res = csp_opt_bruteforce(csp_from_json(inst), opt.budget);
                out["value"] = rat_to_string(res.value);
                if (!o_witness_out.empty()) write_json_file(o_witness_out, labels_to_json(res.witness));
            } else if (kind == "set_cover") {
                CoverWitness res = sc_opt_bruteforce(sc_from_json(inst), opt.budget);
                out["size"] = res.size;
                if (!o_witness_out.empty()) write_json_file(o_witness_out, mask_to_json("selection", res.pick));
            } else if (kind == "graph") {
                CoverWitness res = ds_opt_bruteforce(graph_from_json(inst), opt.budget);
                out["size"] = res.size;
                if (!o_witness_out.empty()) write_json_file(o_witness_out, mask_to_json("vertex_set", res.pick));
            } else {
                fail("opt: unsupported instance kind \"" + kind + "\"");
            }
            emit(out, opt.format, "");
            return 0;
        }

        if (sens->parsed()) {
            njson inst = read_json_file(s_instance);
            std::string kind = json_kind(inst);
            njson out;
            if (kind == "label_cover")
                out = sens_label_cover(lc_from_json(inst), s_swaps, opt.seed, opt.budget);
            else if (kind == "set_cover")
                out = sens_set_cover(sc_from_json(inst), s_swaps, opt.seed);
            else
                fail("sens: unsupported instance kind \"" + kind + "\"");
            emit(out, opt.format, opt.out);
            return 0;
        }

        if (verify->parsed()) {
            if (list_suites) {
                for (auto& [name, fn] : verify_registry()) std::cout << name << "\n";
                return 0;
            }
            require(!suites.empty(), "verify: name at least one suite (or: all)");
            Report rep;
            if (suites.size() == 1 && suites[0] == "all")
                for (auto& [name, fn] : verify_registry()) rep.stages.push_back(fn());
            else
                for (auto& name : suites) rep.stages.push_back(verify_suite(name));
            return report_exit(rep, opt.format, opt.out);
        }

        if (pipeline->parsed()) {
            njson spec = read_json_file(p_spec);
            njson stages = spec.is_array() ? spec : spec.at("pipeline");
            PipeRunner runner;
            runner.budget = opt.budget;
            runner.out_dir = opt.out_dir;
            runner.run(stages);
            fs::create_directories(opt.out_dir);
            write_json_file((fs::path(opt.out_dir) / "report.json").string(), report_to_json(runner.report));
            return report_exit(runner.report, opt.format, "");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
