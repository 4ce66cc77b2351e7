#pragma once

#include <fstream>

#include <json.hpp>

#include "redlab/covering.hpp"
#include "redlab/verify.hpp"

namespace redlab {

using njson = nlohmann::json;

// ---- file plumbing ----

inline njson read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open file: " + path);
    njson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail("cannot parse JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void write_json_file(const std::string& path, const njson& j) {
    std::ofstream out(path);
    require(out.good(), "cannot write file: " + path);
    out << j.dump(2) << "\n";
}

inline std::string json_kind(const njson& j) {
    require(j.is_object() && j.contains("kind") && j["kind"].is_string(),
            "artifact JSON must carry a \"kind\" string");
    return j["kind"].get<std::string>();
}

inline void require_kind(const njson& j, const std::string& kind) {
    require(json_kind(j) == kind, "expected \"" + kind + "\" artifact, got \"" + json_kind(j) + "\"");
}

// content hash of the canonical dump; object keys are sorted by the JSON library,
// so equal artifacts hash equally
inline uint64_t json_content_hash(const njson& j) { return fnv1a64(j.dump()); }

// ---- instances ----

inline njson lc_to_json(const LabelCoverInstance& I) {
    njson j;
    j["kind"] = "label_cover";
    j["nU"] = I.nU;
    j["nV"] = I.nV;
    j["sigmaU"] = I.sigmaU;
    j["sigmaV"] = I.sigmaV;
    j["edges"] = njson::array();
    for (auto& [u, v] : I.edges) j["edges"].push_back({u, v});
    j["projections"] = I.projections;
    j["predicates"] = I.predicates;
    return j;
}

inline LabelCoverInstance lc_from_json(const njson& j) {
    require_kind(j, "label_cover");
    LabelCoverInstance I;
    I.nU = j.at("nU").get<int>();
    I.nV = j.at("nV").get<int>();
    I.sigmaU = j.at("sigmaU").get<int>();
    I.sigmaV = j.at("sigmaV").get<int>();
    for (auto& e : j.at("edges")) I.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    I.projections = j.at("projections").get<std::vector<std::vector<int>>>();
    I.predicates = j.at("predicates").get<std::vector<std::vector<uint8_t>>>();
    I.validate();
    return I;
}

inline njson csp_to_json(const TwoCspInstance& phi) {
    njson j;
    j["kind"] = "two_csp";
    j["n"] = phi.n;
    j["sigma"] = phi.sigma;
    j["constraints"] = njson::array();
    for (auto& c : phi.constraints) j["constraints"].push_back({{"a", c.a}, {"b", c.b}, {"rel", c.rel}});
    return j;
}

inline TwoCspInstance csp_from_json(const njson& j) {
    require_kind(j, "two_csp");
    TwoCspInstance phi;
    phi.n = j.at("n").get<int>();
    phi.sigma = j.at("sigma").get<int>();
    for (auto& c : j.at("constraints")) {
        TwoCspInstance::Constraint con;
        con.a = c.at("a").get<int>();
        con.b = c.at("b").get<int>();
        con.rel = c.at("rel").get<std::vector<uint8_t>>();
        phi.constraints.push_back(std::move(con));
    }
    phi.validate();
    return phi;
}

// sets are stored as sorted element-index lists
inline njson sc_to_json(const SetCoverInstance& J) {
    njson j;
    j["kind"] = "set_cover";
    j["N"] = J.universe;
    j["sets"] = njson::array();
    for (auto& s : J.sets) {
        njson row = njson::array();
        for (int e = 0; e < J.universe; e++)
            if (s[e]) row.push_back(e);
        j["sets"].push_back(std::move(row));
    }
    return j;
}

inline SetCoverInstance sc_from_json(const njson& j) {
    require_kind(j, "set_cover");
    SetCoverInstance J;
    J.universe = j.at("N").get<int>();
    for (auto& row : j.at("sets")) {
        std::vector<uint8_t> mask(J.universe, 0);
        for (auto& e : row) {
            int x = e.get<int>();
            require(x >= 0 && x < J.universe, "set_cover JSON: element out of range");
            mask[x] = 1;
        }
        J.sets.push_back(std::move(mask));
    }
    J.validate();
    return J;
}

inline std::string role_name(DomSetGraph::Role r) {
    switch (r) {
        case DomSetGraph::Role::Element: return "element";
        case DomSetGraph::Role::Set: return "set";
        case DomSetGraph::Role::Helper: return "helper";
        default: return "padding";
    }
}

inline DomSetGraph::Role role_from_name(const std::string& s) {
    if (s == "element") return DomSetGraph::Role::Element;
    if (s == "set") return DomSetGraph::Role::Set;
    if (s == "helper") return DomSetGraph::Role::Helper;
    if (s == "padding") return DomSetGraph::Role::Padding;
    fail("graph JSON: unknown role \"" + s + "\"");
}

inline njson graph_to_json(const DomSetGraph& G) {
    njson j;
    j["kind"] = "graph";
    j["n"] = G.n;
    j["gamma"] = G.gamma;
    j["n_elements"] = G.n_elements;
    j["n_sets"] = G.n_sets;
    j["n_helpers"] = G.n_helpers;
    j["edges"] = njson::array();
    for (int a = 0; a < G.n; a++)
        for (int b : G.adj[a])
            if (a < b) j["edges"].push_back({a, b});
    j["roles"] = njson::array();
    for (auto r : G.roles) j["roles"].push_back(role_name(r));
    j["sigma_table"] = G.sigma_table;
    return j;
}

inline DomSetGraph graph_from_json(const njson& j) {
    require_kind(j, "graph");
    DomSetGraph G;
    G.n = j.at("n").get<int>();
    G.gamma = j.at("gamma").get<int>();
    G.n_elements = j.at("n_elements").get<int>();
    G.n_sets = j.at("n_sets").get<int>();
    G.n_helpers = j.at("n_helpers").get<int>();
    G.adj.assign(G.n, {});
    for (auto& e : j.at("edges")) {
        int a = e.at(0).get<int>(), b = e.at(1).get<int>();
        require(a >= 0 && a < G.n && b >= 0 && b < G.n, "graph JSON: edge endpoint out of range");
        G.add_edge(a, b);
    }
    for (auto& r : j.at("roles")) G.roles.push_back(role_from_name(r.get<std::string>()));
    require(static_cast<int>(G.roles.size()) == G.n, "graph JSON: role count mismatch");
    G.sigma_table = j.at("sigma_table").get<std::vector<int>>();
    return G;
}

// ---- assignments and witnesses ----

inline njson assignment_to_json(const Assignment& pi) {
    njson j;
    j["kind"] = "assignment";
    j["left"] = pi.left;
    j["right"] = pi.right;
    return j;
}

inline Assignment assignment_from_json(const njson& j) {
    require_kind(j, "assignment");
    Assignment pi;
    pi.left = j.at("left").get<std::vector<int>>();
    pi.right = j.at("right").get<std::vector<int>>();
    return pi;
}

inline njson labels_to_json(const std::vector<int>& labels) {
    njson j;
    j["kind"] = "labels";
    j["labels"] = labels;
    return j;
}

inline std::vector<int> labels_from_json(const njson& j) {
    require_kind(j, "labels");
    return j.at("labels").get<std::vector<int>>();
}

// index subsets (set-cover selections and vertex sets) share one shape
inline njson mask_to_json(const std::string& kind, const std::vector<uint8_t>& mask) {
    njson j;
    j["kind"] = kind;
    j["size"] = static_cast<int>(mask.size());
    j["picked"] = njson::array();
    for (size_t i = 0; i < mask.size(); i++)
        if (mask[i]) j["picked"].push_back(static_cast<int>(i));
    return j;
}

inline std::vector<uint8_t> mask_from_json(const njson& j, const std::string& kind) {
    require_kind(j, kind);
    int n = j.at("size").get<int>();
    std::vector<uint8_t> mask(n, 0);
    for (auto& e : j.at("picked")) {
        int x = e.get<int>();
        require(x >= 0 && x < n, kind + " JSON: index out of range");
        mask[x] = 1;
    }
    return mask;
}

// ---- gadget certificates ----

inline njson expander_cert_json(const RegularGraph& G) {
    return njson{{"lambda", G.measured_lambda}, {"solver_residual", G.solver_residual},
                 {"n", G.n},                    {"d", G.d}};
}

inline njson code_cert_json(const Code& c) {
    return njson{{"min_distance", rat_to_string(c.certified_distance)},
                 {"q", c.q},
                 {"t", c.t},
                 {"block_length", c.k}};
}

inline njson set_system_cert_json(const SetSystem& S) {
    return njson{{"verified_l", S.certified_l}, {"universe", S.universe}, {"m", S.m()}};
}

// ---- reports ----

inline njson report_to_json(const Report& rep) {
    njson j;
    j["kind"] = "report";
    j["all_pass"] = rep.all_pass();
    j["stages"] = njson::array();
    for (const auto& s : rep.stages) {
        njson js;
        js["name"] = s.name;
        js["stats"] = njson::object();
        for (const auto& [k, v] : s.stats) js["stats"][k] = v;
        js["checks"] = njson::array();
        for (const auto& c : s.checks)
            js["checks"].push_back({{"what", c.what},
                                    {"lhs", c.lhs},
                                    {"relation", c.relation},
                                    {"rhs", c.rhs},
                                    {"pass", c.pass}});
        js["all_pass"] = s.all_pass();
        j["stages"].push_back(std::move(js));
    }
    return j;
}

inline std::string report_to_text(const Report& rep) {
    std::ostringstream out;
    for (const auto& s : rep.stages) {
        out << "== " << s.name << " ==\n";
        for (const auto& [k, v] : s.stats) out << "  " << k << ": " << v << "\n";
        for (const auto& c : s.checks)
            out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.what << ": " << c.lhs << " "
                << c.relation << " " << c.rhs << "\n";
    }
    out << (rep.all_pass() ? "ALL CHECKS PASS\n" : "CHECK FAILURES PRESENT\n");
    return out.str();
}

}  // namespace redlab
