#pragma once

#include <cstdint>

#include "mectest/dsep.hpp"
#include "mectest/mec.hpp"

namespace mectest {

struct NoUndirectedEdgeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Binomial C(s, ceil(s/2) - 1): the number of CI tests the clique
// construction can force before the distinguishing conditioning set is hit.
inline std::uint64_t worst_case_count(int s) {
    if (s < 2) throw std::invalid_argument("worst_case_count: requires s >= 2");
    return binomial(s, (s + 1) / 2 - 1);
}

// A hidden graph one undirected edge short of the given MEC, built to be
// maximally hard to distinguish: S is a maximum undirected clique made most
// upstream, i its first and j its (ceil(s/2)+1)-th node in ascending-id
// internal order, and h = g minus i -> j. K holds the clique nodes strictly
// between them.
struct HardInstance {
    Dag g;
    Dag h;
    NodeId i;
    NodeId j;
    NodeSet s_clique;
    NodeSet k_between;
    std::uint64_t worst_case_count;
};

inline HardInstance hard_instance(const EssentialGraph& e) {
    const int s = e.max_undirected_clique_size();
    if (s < 2) {
        throw NoUndirectedEdgeError("hard_instance: the MEC has no undirected edge (s < 2)");
    }
    NodeSet s_clique;
    for (const auto& clique : e.max_cliques()) {
        if (static_cast<int>(clique.size()) == s) {
            s_clique = clique;
            break;
        }
    }
    Dag g = clique_upstream_extension(e, s_clique, s_clique);
    const int j_pos = (s + 1) / 2;  // 0-based position of j; i sits at position 0
    NodeId i = s_clique[0];
    NodeId j = s_clique[j_pos];
    NodeSet k_between(s_clique.begin() + 1, s_clique.begin() + j_pos);
    std::vector<Edge> h_edges;
    for (const auto& edge : g.edges()) {
        if (edge != Edge{i, j}) h_edges.push_back(edge);
    }
    return HardInstance{std::move(g), Dag(e.node_count(), std::move(h_edges)),
                        i,           j,
                        s_clique,    std::move(k_between),
                        worst_case_count(s)};
}

namespace detail {

inline void check_one_edge_short(const Dag& g1, const Dag& g2, Edge edge) {
    if (g1.node_count() != g2.node_count()) {
        throw std::invalid_argument("one-edge-short pair: node-count mismatch");
    }
    if (!g2.has_edge(edge.first, edge.second)) {
        throw std::invalid_argument("one-edge-short pair: edge not present in g2");
    }
    std::vector<Edge> expect;
    for (const auto& e : g2.edges()) {
        if (e != edge) expect.push_back(e);
    }
    if (g1.edges() != expect) {
        throw std::invalid_argument("one-edge-short pair: g1 is not g2 minus the edge");
    }
    if (!essential_graph(g2).pdag().has_undirected(edge.first, edge.second)) {
        throw std::invalid_argument("one-edge-short pair: edge is not undirected in the essential graph of g2");
    }
}

// Visits all disjoint (A, B, C) with A, B non-empty over [0, n), in
// canonical form (min(A) < min(B)), encoded base-4 per node.
inline void for_each_abc(int n, const std::function<void(const CiQuery&)>& fn) {
    std::uint64_t total = 1;
    for (int idx = 0; idx < n; ++idx) total *= 4;
    for (std::uint64_t code = 0; code < total; ++code) {
        NodeSet a, b, c;
        std::uint64_t rest = code;
        for (NodeId v = 0; v < n; ++v) {
            switch (rest % 4) {
                case 1: a.push_back(v); break;
                case 2: b.push_back(v); break;
                case 3: c.push_back(v); break;
                default: break;
            }
            rest /= 4;
        }
        if (a.empty() || b.empty()) continue;
        if (a.front() > b.front()) continue;  // the swapped assignment covers it
        fn(CiQuery(std::move(a), std::move(b), std::move(c)));
    }
}

}  // namespace detail

struct DistinguishingQuery {
    CiQuery query;
    bool independent_in_g1;
    bool independent_in_g2;
};

// Brute force over all disjoint (A, B, C) assignments: every query whose
// d-separation answer differs between g1 and g2.
inline std::vector<DistinguishingQuery> distinguishing_queries(const Dag& g1, const Dag& g2,
                                                               Edge edge) {
    detail::check_one_edge_short(g1, g2, edge);
    if (g1.node_count() > 9) {
        throw std::invalid_argument("distinguishing_queries: node-count guard (n <= 9) exceeded");
    }
    std::vector<DistinguishingQuery> out;
    detail::for_each_abc(g1.node_count(), [&](const CiQuery& q) {
        bool d1 = d_separated(g1, q);
        bool d2 = d_separated(g2, q);
        if (d1 != d2) out.push_back({q, d1, d2});
    });
    std::sort(out.begin(), out.end(),
              [](const DistinguishingQuery& x, const DistinguishingQuery& y) {
                  return x.query < y.query;
              });
    return out;
}

struct SandwichCheck {
    bool holds = false;           // the sandwich bound held for every distinguishing query
    bool upper_equality = false;  // C ∩ S always equalled the upper bound (reported, not asserted)
    NodeSet s_clique;
    NodeSet lower, upper;
    std::size_t distinguishing_count = 0;
};

// Checks that every distinguishing query (A, B, C) of a one-edge-short pair
// satisfies independent-in-g1 / dependent-in-g2 and the sandwich
//   (pa_g2(j) ∩ ch_g2(i)) ∩ S  ⊆  C ∩ S  ⊆  (pa_g2(j) \ {i}) ∩ S
// where S is the maximal undirected clique of E(g2) containing i and j.
inline SandwichCheck check_conditioning_sandwich(const Dag& g1, const Dag& g2, Edge edge) {
    auto queries = distinguishing_queries(g1, g2, edge);  // validates preconditions
    const auto [i, j] = edge;
    EssentialGraph e2 = essential_graph(g2);
    SandwichCheck result;
    for (const auto& clique : e2.max_cliques()) {
        if (set_contains(clique, i) && set_contains(clique, j)) {
            result.s_clique = clique;
            break;
        }
    }
    result.lower = set_intersection(set_intersection(g2.parents(j), g2.children(i)), result.s_clique);
    result.upper = set_intersection(set_difference(g2.parents(j), NodeSet{i}), result.s_clique);
    result.holds = true;
    result.upper_equality = true;
    result.distinguishing_count = queries.size();
    for (const auto& dq : queries) {
        if (!dq.independent_in_g1 || dq.independent_in_g2) {
            result.holds = false;
            break;
        }
        NodeSet cs = set_intersection(dq.query.c, result.s_clique);
        if (!is_subset(result.lower, cs) || !is_subset(cs, result.upper)) {
            result.holds = false;
            break;
        }
        if (cs != result.upper) result.upper_equality = false;
    }
    return result;
}

inline bool verify_conditioning_sandwich(const Dag& g1, const Dag& g2, Edge edge) {
    return check_conditioning_sandwich(g1, g2, edge).holds;
}

// A simple path shared by g1 and g2 with its collider set and its
// active/inactive status given a fixed conditioning set in each graph.
struct PathWitness {
    std::vector<NodeId> path;
    NodeSet colliders;
    bool active_in_g1;
    bool active_in_g2;
};

namespace detail {

inline bool path_active(const Dag& g, const std::vector<NodeId>& path, const NodeSet& c,
                        const std::vector<bool>& anc_c) {
    for (std::size_t idx = 1; idx + 1 < path.size(); ++idx) {
        bool collider = g.has_edge(path[idx - 1], path[idx]) && g.has_edge(path[idx + 1], path[idx]);
        if (collider) {
            if (!anc_c[path[idx]]) return false;
        } else {
            if (set_contains(c, path[idx])) return false;
        }
    }
    return true;
}

}  // namespace detail

// All simple paths between a and b that exist in both graphs; since g1 is g2
// minus one edge, these are exactly the paths of g1's skeleton.
inline std::vector<PathWitness> common_paths(const Dag& g1, const Dag& g2, NodeId a, NodeId b,
                                             const NodeSet& c) {
    UndirectedGraph skel = skeleton(g1);
    std::vector<bool> anc1 = detail::ancestors_of_set(g1, c);
    std::vector<bool> anc2 = detail::ancestors_of_set(g2, c);
    std::vector<PathWitness> out;
    std::vector<NodeId> path{a};
    std::vector<bool> used(g1.node_count(), false);
    used[a] = true;
    std::function<void()> dfs = [&]() {
        NodeId v = path.back();
        if (v == b) {
            NodeSet colliders;
            for (std::size_t idx = 1; idx + 1 < path.size(); ++idx) {
                if (g1.has_edge(path[idx - 1], path[idx]) && g1.has_edge(path[idx + 1], path[idx])) {
                    colliders.push_back(path[idx]);
                }
            }
            normalize_set(colliders);
            out.push_back({path, std::move(colliders), detail::path_active(g1, path, c, anc1),
                           detail::path_active(g2, path, c, anc2)});
            return;
        }
        for (NodeId w : skel.neighbors(v)) {
            if (used[w]) continue;
            used[w] = true;
            path.push_back(w);
            dfs();
            path.pop_back();
            used[w] = false;
        }
    };
    dfs();
    return out;
}

// Both activity clauses for the common paths of a one-edge-short pair, by
// explicit path enumeration:
// (1) every common path inactive in g2 is inactive in g1;
// (2) if some common path is active in g2, some path is active in g1.
inline bool verify_common_path_activity(const Dag& g1, const Dag& g2, Edge edge, NodeId a, NodeId b,
                          const NodeSet& c) {
    detail::check_one_edge_short(g1, g2, edge);
    if (g1.node_count() > 8) {
        throw std::invalid_argument("verify_common_path_activity: node-count guard (n <= 8) exceeded");
    }
    if (a == b || set_contains(c, a) || set_contains(c, b)) {
        throw std::invalid_argument("verify_common_path_activity: a, b must be distinct and outside C");
    }
    bool any_active_in_g2 = false;
    bool any_active_in_g1 = false;
    for (const PathWitness& w : common_paths(g1, g2, a, b, c)) {
        if (!w.active_in_g2 && w.active_in_g1) return false;  // clause (1)
        any_active_in_g2 = any_active_in_g2 || w.active_in_g2;
        any_active_in_g1 = any_active_in_g1 || w.active_in_g1;
    }
    if (any_active_in_g2 && !any_active_in_g1) return false;  // clause (2)
    return true;
}

}  // namespace mectest
