#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mectest/adversary.hpp"
#include "mectest/bench.hpp"
#include "mectest/mec.hpp"
#include "mectest/polytope.hpp"
#include "mectest/tester.hpp"

namespace mectest {

// Edge-list text format, shared by every subcommand. One edge per line:
// `i -> j` directed, `i - j` undirected, `#` starts a comment, ids are
// 1-based, and a leading `nodes N` header fixes the node count so isolated
// nodes are representable.
inline Pdag parse_edge_list(std::istream& in) {
    std::string line;
    int n = -1;
    std::vector<Edge> directed, undirected;
    int lineno = 0;
    auto fail = [&lineno](const std::string& msg) {
        throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;  // blank line
        if (first == "nodes") {
            if (n != -1) fail("duplicate nodes header");
            if (!(ls >> n) || n < 0) fail("bad node count");
            continue;
        }
        if (n == -1) fail("missing `nodes N` header before edges");
        int u = 0, v = 0;
        std::string op;
        try {
            u = std::stoi(first);
        } catch (const std::exception&) {
            fail("expected a node id, got `" + first + "`");
        }
        if (!(ls >> op >> v)) fail("expected `i -> j` or `i - j`");
        std::string trailing;
        if (ls >> trailing) fail("trailing tokens");
        if (u < 1 || u > n || v < 1 || v > n) fail("node id outside 1.." + std::to_string(n));
        if (op == "->") {
            directed.emplace_back(u - 1, v - 1);
        } else if (op == "-") {
            undirected.emplace_back(u - 1, v - 1);
        } else {
            fail("unknown edge operator `" + op + "`");
        }
    }
    if (n == -1) throw std::invalid_argument("edge list: missing `nodes N` header");
    return Pdag(n, std::move(directed), std::move(undirected));
}

inline Pdag parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

// Narrows a parsed graph to a fully directed DAG.
inline Dag require_dag(const Pdag& p, const char* what = "graph") {
    if (!p.fully_directed()) {
        throw std::invalid_argument(std::string(what) + ": expected a DAG but found undirected edges");
    }
    return Dag(p.node_count(), p.directed_edges());
}

inline std::string format_edge_list(const Pdag& p) {
    std::ostringstream os;
    os << "nodes " << p.node_count() << "\n";
    for (const auto& [u, v] : p.directed_edges()) os << u + 1 << " -> " << v + 1 << "\n";
    for (const auto& [u, v] : p.undirected_edges()) os << u + 1 << " - " << v + 1 << "\n";
    return os.str();
}

inline std::string format_edge_list(const Dag& g) { return format_edge_list(Pdag::from_dag(g)); }

inline std::string to_dot(const Pdag& p, const std::string& name = "g") {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (NodeId v = 0; v < p.node_count(); ++v) os << "  " << v + 1 << ";\n";
    for (const auto& [u, v] : p.directed_edges()) os << "  " << u + 1 << " -> " << v + 1 << ";\n";
    for (const auto& [u, v] : p.undirected_edges())
        os << "  " << u + 1 << " -> " << v + 1 << " [dir=none];\n";
    os << "}\n";
    return os.str();
}

inline std::string to_dot(const Dag& g, const std::string& name = "g") {
    return to_dot(Pdag::from_dag(g), name);
}

// Contracted-polytope rendering: vertices labelled by their I-map edge
// counts, sparsest vertices highlighted.
inline std::string to_dot(const Associahedron& assoc) {
    std::ostringstream os;
    os << "graph associahedron {\n";
    std::vector<bool> sparse(assoc.vertices.size(), false);
    for (int idx : assoc.sparsest) sparse[idx] = true;
    for (std::size_t idx = 0; idx < assoc.vertices.size(); ++idx) {
        os << "  v" << idx << " [label=\"" << assoc.vertices[idx].edge_count << "\"";
        if (sparse[idx]) os << " style=filled fillcolor=lightblue";
        os << "];\n";
    }
    for (const auto& [a, b] : assoc.edges) os << "  v" << a << " -- v" << b << ";\n";
    os << "}\n";
    return os.str();
}

// ---- JSON views (ids 1-based, mirroring the text formats) ----

inline nlohmann::json to_json_ids(const NodeSet& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (NodeId v : s) arr.push_back(v + 1);
    return arr;
}

inline nlohmann::json to_json(const CiQuery& q) {
    return {{"a", to_json_ids(q.a)}, {"b", to_json_ids(q.b)}, {"c", to_json_ids(q.c)}};
}

inline nlohmann::json to_json(const MecStats& stats) {
    return {{"n", stats.n},
            {"s", stats.s},
            {"num_max_cliques", stats.num_max_cliques},
            {"component_sizes", stats.component_sizes},
            {"class2_budget", stats.class2_budget}};
}

inline nlohmann::json to_json(const TestFailure& f) {
    return {{"query", to_json(f.query)},
            {"expected", f.expected_independent ? "independent" : "dependent"},
            {"got", f.got_independent ? "independent" : "dependent"},
            {"class", f.cls == TestClass::ClassI ? "I" : "II"}};
}

inline nlohmann::json to_json(const TestReport& r) {
    nlohmann::json j{{"verdict", r.verdict},
                     {"queries_issued", r.queries_issued},
                     {"queries_unique", r.queries_unique},
                     {"class1_planned", r.class1_planned},
                     {"class2_planned", r.class2_planned}};
    if (r.failing_query) j["failing_query"] = to_json(*r.failing_query);
    if (r.all_failures.size() > 1 || (!r.verdict && r.all_failures.size() == 1)) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& f : r.all_failures) arr.push_back(to_json(f));
        j["failures"] = arr;
    }
    return j;
}

inline nlohmann::json to_json(const HardInstance& inst) {
    return {{"i", inst.i + 1},
            {"j", inst.j + 1},
            {"S", to_json_ids(inst.s_clique)},
            {"K", to_json_ids(inst.k_between)},
            {"worst_case_count", inst.worst_case_count}};
}

inline nlohmann::json to_json(const BenchRow& r) {
    return {{"instance_id", r.instance_id},
            {"family", family_name(r.family)},
            {"case", r.kase},
            {"n", r.n},
            {"p", r.p},
            {"seed", r.seed},
            {"s", r.s},
            {"d", r.d},
            {"tester_queries", r.tester_queries},
            {"tester_unique", r.tester_unique},
            {"tester_verdict", r.tester_verdict},
            {"class1_size", r.class1_size},
            {"class2_size", r.class2_size},
            {"class2_budget", r.class2_budget},
            {"learner_queries", r.learner_queries},
            {"learner_correct", r.learner_correct},
            {"pc_formula_reference", r.pc_formula}};
}

inline nlohmann::json to_json(const std::vector<BenchRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    return arr;
}

}  // namespace mectest
