#pragma once

#include <array>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "mectest/util.hpp"

namespace mectest {

namespace detail {

inline void check_node(NodeId v, int n, const char* what) {
    if (v < 0 || v >= n) {
        throw std::invalid_argument(std::string(what) + ": node id " + std::to_string(v) +
                                    " out of range [0, " + std::to_string(n) + ")");
    }
}

inline Edge ordered(NodeId u, NodeId v) { return u < v ? Edge{u, v} : Edge{v, u}; }

}  // namespace detail

// Simple undirected graph: no self-loops, no duplicate edges. Edges are
// stored as (min, max) pairs in sorted order.
class UndirectedGraph {
public:
    explicit UndirectedGraph(int n, std::vector<Edge> edges = {}) : n_(n), adj_(n) {
        if (n < 0) throw std::invalid_argument("UndirectedGraph: negative node count");
        for (auto& e : edges) {
            detail::check_node(e.first, n, "UndirectedGraph");
            detail::check_node(e.second, n, "UndirectedGraph");
            if (e.first == e.second) throw std::invalid_argument("UndirectedGraph: self-loop");
            e = detail::ordered(e.first, e.second);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
            throw std::invalid_argument("UndirectedGraph: duplicate edge");
        }
        edges_ = std::move(edges);
        for (const auto& [u, v] : edges_) {
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        for (auto& nb : adj_) normalize_set(nb);
    }

    int node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const NodeSet& neighbors(NodeId v) const {
        detail::check_node(v, n_, "neighbors");
        return adj_[v];
    }
    bool adjacent(NodeId u, NodeId v) const {
        detail::check_node(u, n_, "adjacent");
        return set_contains(adj_[u], v);
    }
    int degree(NodeId v) const { return static_cast<int>(neighbors(v).size()); }

    bool operator==(const UndirectedGraph& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<NodeSet> adj_;
};

// Fully directed acyclic graph. Construction validates: no self-loops, no
// duplicates, no pair connected in both directions, and acyclicity.
class Dag {
public:
    Dag(int n, std::vector<Edge> edges) : n_(n), parents_(n), children_(n) {
        if (n < 0) throw std::invalid_argument("Dag: negative node count");
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (const auto& [u, v] : edges) {
            detail::check_node(u, n, "Dag");
            detail::check_node(v, n, "Dag");
            if (u == v) throw std::invalid_argument("Dag: self-loop");
        }
        edges_ = std::move(edges);
        for (const auto& [u, v] : edges_) {
            if (std::binary_search(edges_.begin(), edges_.end(), Edge{v, u})) {
                throw std::invalid_argument("Dag: edges in both directions between " +
                                            std::to_string(u) + " and " + std::to_string(v));
            }
            parents_[v].push_back(u);
            children_[u].push_back(v);
        }
        for (auto& p : parents_) normalize_set(p);
        for (auto& c : children_) normalize_set(c);
        if (!acyclic()) throw std::invalid_argument("Dag: directed cycle");
    }

    int node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    const NodeSet& parents(NodeId v) const {
        detail::check_node(v, n_, "parents");
        return parents_[v];
    }
    const NodeSet& children(NodeId v) const {
        detail::check_node(v, n_, "children");
        return children_[v];
    }
    bool has_edge(NodeId u, NodeId v) const {
        return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
    }
    bool adjacent(NodeId u, NodeId v) const { return has_edge(u, v) || has_edge(v, u); }

    bool operator==(const Dag& other) const { return n_ == other.n_ && edges_ == other.edges_; }
    bool operator<(const Dag& other) const {
        return std::tie(n_, edges_) < std::tie(other.n_, other.edges_);
    }

private:
    bool acyclic() const {
        std::vector<int> indeg(n_, 0);
        for (const auto& e : edges_) ++indeg[e.second];
        std::vector<NodeId> stack;
        for (NodeId v = 0; v < n_; ++v)
            if (indeg[v] == 0) stack.push_back(v);
        int seen = 0;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            ++seen;
            for (NodeId c : children_[v])
                if (--indeg[c] == 0) stack.push_back(c);
        }
        return seen == n_;
    }

    int n_;
    std::vector<Edge> edges_;
    std::vector<NodeSet> parents_, children_;
};

// Partially directed graph: the directed and undirected edge sets are
// disjoint as unordered pairs.
class Pdag {
public:
    Pdag(int n, std::vector<Edge> directed, std::vector<Edge> undirected)
        : n_(n), dir_parents_(n), dir_children_(n), und_adj_(n) {
        if (n < 0) throw std::invalid_argument("Pdag: negative node count");
        for (const auto& [u, v] : directed) {
            detail::check_node(u, n, "Pdag");
            detail::check_node(v, n, "Pdag");
            if (u == v) throw std::invalid_argument("Pdag: self-loop");
        }
        for (auto& e : undirected) {
            detail::check_node(e.first, n, "Pdag");
            detail::check_node(e.second, n, "Pdag");
            if (e.first == e.second) throw std::invalid_argument("Pdag: self-loop");
            e = detail::ordered(e.first, e.second);
        }
        std::sort(directed.begin(), directed.end());
        directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
        std::sort(undirected.begin(), undirected.end());
        if (std::adjacent_find(undirected.begin(), undirected.end()) != undirected.end()) {
            throw std::invalid_argument("Pdag: duplicate undirected edge");
        }
        directed_ = std::move(directed);
        undirected_ = std::move(undirected);
        for (const auto& [u, v] : directed_) {
            if (std::binary_search(directed_.begin(), directed_.end(), Edge{v, u})) {
                throw std::invalid_argument("Pdag: directed edges in both directions between " +
                                            std::to_string(u) + " and " + std::to_string(v));
            }
            if (std::binary_search(undirected_.begin(), undirected_.end(),
                                   detail::ordered(u, v))) {
                throw std::invalid_argument("Pdag: edge both directed and undirected between " +
                                            std::to_string(u) + " and " + std::to_string(v));
            }
            dir_parents_[v].push_back(u);
            dir_children_[u].push_back(v);
        }
        for (const auto& [u, v] : undirected_) {
            und_adj_[u].push_back(v);
            und_adj_[v].push_back(u);
        }
        for (auto& s : dir_parents_) normalize_set(s);
        for (auto& s : dir_children_) normalize_set(s);
        for (auto& s : und_adj_) normalize_set(s);
    }

    static Pdag from_dag(const Dag& g) { return Pdag(g.node_count(), g.edges(), {}); }

    int node_count() const { return n_; }
    const std::vector<Edge>& directed_edges() const { return directed_; }
    const std::vector<Edge>& undirected_edges() const { return undirected_; }

    const NodeSet& directed_parents(NodeId v) const {
        detail::check_node(v, n_, "directed_parents");
        return dir_parents_[v];
    }
    const NodeSet& directed_children(NodeId v) const {
        detail::check_node(v, n_, "directed_children");
        return dir_children_[v];
    }
    const NodeSet& undirected_neighbors(NodeId v) const {
        detail::check_node(v, n_, "undirected_neighbors");
        return und_adj_[v];
    }

    bool has_directed(NodeId u, NodeId v) const {
        return std::binary_search(directed_.begin(), directed_.end(), Edge{u, v});
    }
    bool has_undirected(NodeId u, NodeId v) const {
        return std::binary_search(undirected_.begin(), undirected_.end(), detail::ordered(u, v));
    }
    bool adjacent(NodeId u, NodeId v) const {
        return has_directed(u, v) || has_directed(v, u) || has_undirected(u, v);
    }
    bool fully_directed() const { return undirected_.empty(); }

    bool operator==(const Pdag& other) const {
        return n_ == other.n_ && directed_ == other.directed_ && undirected_ == other.undirected_;
    }

private:
    int n_;
    std::vector<Edge> directed_, undirected_;
    std::vector<NodeSet> dir_parents_, dir_children_, und_adj_;
};

// Deterministic topological order: Kahn's algorithm, ties broken by
// ascending node id.
inline std::vector<NodeId> topological_order(const Dag& g) {
    const int n = g.node_count();
    std::vector<int> indeg(n, 0);
    for (const auto& e : g.edges()) ++indeg[e.second];
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        NodeId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (NodeId c : g.children(v))
            if (--indeg[c] == 0) ready.push(c);
    }
    return order;
}

struct Relatives {
    NodeSet parents;
    NodeSet children;
    NodeSet descendants;         // excludes v
    NodeSet closed_descendants;  // descendants plus v itself
};

inline NodeSet descendants_of(const Dag& g, NodeId v) {
    detail::check_node(v, g.node_count(), "descendants_of");
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack{v};
    seen[v] = true;
    NodeSet out;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId c : g.children(u)) {
            if (!seen[c]) {
                seen[c] = true;
                out.push_back(c);
                stack.push_back(c);
            }
        }
    }
    normalize_set(out);
    return out;
}

inline Relatives relatives(const Dag& g, NodeId v) {
    detail::check_node(v, g.node_count(), "relatives");
    Relatives r;
    r.parents = g.parents(v);
    r.children = g.children(v);
    r.descendants = descendants_of(g, v);
    r.closed_descendants = r.descendants;
    set_insert(r.closed_descendants, v);
    return r;
}

inline UndirectedGraph skeleton(const Dag& g) {
    std::vector<Edge> edges;
    edges.reserve(g.edges().size());
    for (const auto& [u, v] : g.edges()) edges.push_back(detail::ordered(u, v));
    return UndirectedGraph(g.node_count(), std::move(edges));
}

inline UndirectedGraph skeleton(const Pdag& p) {
    std::vector<Edge> edges;
    for (const auto& [u, v] : p.directed_edges()) edges.push_back(detail::ordered(u, v));
    for (const auto& e : p.undirected_edges()) edges.push_back(e);
    return UndirectedGraph(p.node_count(), std::move(edges));
}

// V-structures i -> k <- j with i, j non-adjacent, canonicalized as (i, k, j)
// with i < j, returned in sorted order.
inline std::vector<std::array<NodeId, 3>> v_structures(const Dag& g) {
    std::vector<std::array<NodeId, 3>> out;
    for (NodeId k = 0; k < g.node_count(); ++k) {
        const NodeSet& pa = g.parents(k);
        for (std::size_t x = 0; x < pa.size(); ++x) {
            for (std::size_t y = x + 1; y < pa.size(); ++y) {
                if (!g.adjacent(pa[x], pa[y])) out.push_back({pa[x], k, pa[y]});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline int max_in_degree(const Dag& g) {
    int d = 0;
    for (NodeId v = 0; v < g.node_count(); ++v)
        d = std::max<int>(d, static_cast<int>(g.parents(v).size()));
    return d;
}

// One connected component of the undirected part of a Pdag. `graph` uses
// local ids 0..k-1; nodes[local] maps back to the original id.
struct ChainComponent {
    NodeSet nodes;
    UndirectedGraph graph;
};

inline std::vector<ChainComponent> chain_components(const Pdag& p) {
    const int n = p.node_count();
    std::vector<int> comp(n, -1);
    int num = 0;
    for (NodeId start = 0; start < n; ++start) {
        if (comp[start] != -1) continue;
        comp[start] = num;
        std::vector<NodeId> stack{start};
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : p.undirected_neighbors(v)) {
                if (comp[w] == -1) {
                    comp[w] = num;
                    stack.push_back(w);
                }
            }
        }
        ++num;
    }
    // Components are discovered in order of their smallest member.
    std::vector<NodeSet> members(num);
    for (NodeId v = 0; v < n; ++v) members[comp[v]].push_back(v);
    std::vector<ChainComponent> out;
    out.reserve(num);
    for (int c = 0; c < num; ++c) {
        std::vector<int> local(n, -1);
        for (std::size_t i = 0; i < members[c].size(); ++i) local[members[c][i]] = static_cast<int>(i);
        std::vector<Edge> edges;
        for (const auto& [u, v] : p.undirected_edges()) {
            if (comp[u] == c) edges.emplace_back(local[u], local[v]);
        }
        out.push_back(
            {members[c], UndirectedGraph(static_cast<int>(members[c].size()), std::move(edges))});
    }
    return out;
}

// True iff p has no partially directed cycle. Checked by contracting chain
// components and testing that the quotient over directed edges is acyclic.
inline bool is_chain_graph(const Pdag& p) {
    const int n = p.node_count();
    std::vector<int> comp(n, -1);
    auto comps = chain_components(p);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (NodeId v : comps[c].nodes) comp[v] = static_cast<int>(c);
    const int k = static_cast<int>(comps.size());
    std::vector<NodeSet> qchildren(k);
    for (const auto& [u, v] : p.directed_edges()) {
        if (comp[u] == comp[v]) return false;  // directed edge inside a chain component
        qchildren[comp[u]].push_back(comp[v]);
    }
    std::vector<int> indeg(k, 0);
    for (auto& ch : qchildren) {
        normalize_set(ch);
        for (int c : ch) ++indeg[c];
    }
    std::vector<int> stack;
    for (int c = 0; c < k; ++c)
        if (indeg[c] == 0) stack.push_back(c);
    int seen = 0;
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        ++seen;
        for (int w : qchildren[c])
            if (--indeg[w] == 0) stack.push_back(w);
    }
    return seen == k;
}

struct CyclicCompletionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Orients every undirected edge from the earlier to the later node of
// `order` and returns the completed Dag. Throws CyclicCompletionError when
// the result would contain a directed cycle.
inline Dag acyclic_completion(const Pdag& p, const std::vector<NodeId>& order) {
    const int n = p.node_count();
    if (static_cast<int>(order.size()) != n) {
        throw std::invalid_argument("acyclic_completion: order size mismatch");
    }
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
        detail::check_node(order[i], n, "acyclic_completion");
        if (pos[order[i]] != -1) throw std::invalid_argument("acyclic_completion: order not a permutation");
        pos[order[i]] = i;
    }
    std::vector<Edge> edges = p.directed_edges();
    for (const auto& [u, v] : p.undirected_edges()) {
        edges.push_back(pos[u] < pos[v] ? Edge{u, v} : Edge{v, u});
    }
    try {
        return Dag(n, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw CyclicCompletionError(std::string("acyclic_completion: ") + e.what());
    }
}

}  // namespace mectest
