#pragma once

// Test-only helpers: exhaustive DAG enumeration and naive reference
// implementations kept independent of the production code paths they check.

#include <vector>

#include "mectest/dsep.hpp"
#include "mectest/graph.hpp"

namespace mectest::testutil {

// Every labeled DAG on n nodes, enumerated as the acyclic assignments of
// {absent, u->v, v->u} to each unordered pair. (25 graphs for n=3, 543 for
// n=4.)
inline std::vector<Dag> all_dags(int n) {
    std::vector<Edge> pairs;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    std::vector<Dag> out;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<Edge> edges;
        std::uint64_t rest = code;
        for (const auto& [u, v] : pairs) {
            switch (rest % 3) {
                case 1: edges.emplace_back(u, v); break;
                case 2: edges.emplace_back(v, u); break;
                default: break;
            }
            rest /= 3;
        }
        try {
            out.emplace_back(n, std::move(edges));
        } catch (const std::invalid_argument&) {
            // cyclic assignment
        }
    }
    return out;
}

// O(n^3) reference for the skeleton: adjacency matrix scan.
inline UndirectedGraph naive_skeleton(const Dag& g) {
    const int n = g.node_count();
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            bool adj = false;
            for (const auto& e : g.edges()) {
                if ((e.first == u && e.second == v) || (e.first == v && e.second == u)) adj = true;
            }
            if (adj) edges.emplace_back(u, v);
        }
    }
    return UndirectedGraph(n, std::move(edges));
}

// O(n^3) reference for v-structures: check every ordered triple.
inline std::vector<std::array<NodeId, 3>> naive_v_structures(const Dag& g) {
    const int n = g.node_count();
    std::vector<std::array<NodeId, 3>> out;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            for (NodeId k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (g.has_edge(i, k) && g.has_edge(j, k) && !g.adjacent(i, j)) {
                    out.push_back({i, k, j});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// All disjoint singleton-pair queries ({a}, {b}, C) over n nodes.
inline std::vector<CiQuery> all_singleton_queries(int n) {
    std::vector<CiQuery> out;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            NodeSet rest;
            for (NodeId v = 0; v < n; ++v)
                if (v != a && v != b) rest.push_back(v);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
                NodeSet c;
                for (std::size_t i = 0; i < rest.size(); ++i)
                    if (mask & (std::uint64_t{1} << i)) c.push_back(rest[i]);
                out.push_back(singleton_query(a, b, std::move(c)));
            }
        }
    }
    return out;
}

}  // namespace mectest::testutil
