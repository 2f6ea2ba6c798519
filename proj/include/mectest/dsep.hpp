#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>

#include "mectest/graph.hpp"
#include "mectest/util.hpp"

namespace mectest {

// A d-separation question: are A and B d-separated by C? The three sets are
// pairwise disjoint and A, B are non-empty. Queries are symmetric in A and
// B; the canonical form keeps min(A) < min(B).
struct CiQuery {
    NodeSet a, b, c;

    CiQuery(NodeSet a_in, NodeSet b_in, NodeSet c_in)
        : a(std::move(a_in)), b(std::move(b_in)), c(std::move(c_in)) {
        normalize_set(a);
        normalize_set(b);
        normalize_set(c);
        if (a.empty() || b.empty()) throw std::invalid_argument("CiQuery: A and B must be non-empty");
        if (!sets_disjoint(a, b) || !sets_disjoint(a, c) || !sets_disjoint(b, c)) {
            throw std::invalid_argument("CiQuery: A, B, C must be pairwise disjoint");
        }
        if (a.front() > b.front()) std::swap(a, b);
    }

    auto operator<=>(const CiQuery&) const = default;
};

inline CiQuery singleton_query(NodeId a, NodeId b, NodeSet c) {
    return CiQuery(NodeSet{a}, NodeSet{b}, std::move(c));
}

namespace detail {

inline void check_query(const Dag& g, const CiQuery& q) {
    const int n = g.node_count();
    if (!q.a.empty() && (q.a.front() < 0 || q.a.back() >= n)) check_node(q.a.back(), n, "CiQuery");
    if (!q.b.empty() && (q.b.front() < 0 || q.b.back() >= n)) check_node(q.b.back(), n, "CiQuery");
    if (!q.c.empty() && (q.c.front() < 0 || q.c.back() >= n)) check_node(q.c.back(), n, "CiQuery");
}

// Marks every v with cde(v) ∩ C != ∅, i.e. C itself plus all its ancestors.
inline std::vector<bool> ancestors_of_set(const Dag& g, const NodeSet& c) {
    std::vector<bool> mark(g.node_count(), false);
    std::vector<NodeId> stack;
    for (NodeId v : c) {
        mark[v] = true;
        stack.push_back(v);
    }
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : g.parents(v)) {
            if (!mark[p]) {
                mark[p] = true;
                stack.push_back(p);
            }
        }
    }
    return mark;
}

}  // namespace detail

// Trail-reachability d-separation (the production algorithm). A trail state
// is (node, how the trail entered): via an edge pointing into the node or
// via an edge pointing out of it. Collider logic follows the definition: a
// collider d keeps the trail alive iff cde(d) ∩ C != ∅.
inline bool d_separated(const Dag& g, const CiQuery& q) {
    detail::check_query(g, q);
    const int n = g.node_count();
    std::vector<bool> in_c(n, false);
    for (NodeId v : q.c) in_c[v] = true;
    std::vector<bool> anc_c = detail::ancestors_of_set(g, q.c);
    std::vector<bool> in_b(n, false);
    for (NodeId v : q.b) in_b[v] = true;

    // visited[0][v]: reached v via an incoming edge; visited[1][v]: via an
    // outgoing edge traversed backwards.
    std::vector<std::array<bool, 2>> visited(n, {false, false});
    std::vector<std::pair<NodeId, int>> stack;
    auto push = [&](NodeId v, int how) {
        if (!visited[v][how]) {
            visited[v][how] = true;
            stack.emplace_back(v, how);
        }
    };
    for (NodeId a : q.a) {
        for (NodeId w : g.children(a)) push(w, 0);
        for (NodeId w : g.parents(a)) push(w, 1);
    }
    while (!stack.empty()) {
        auto [v, how] = stack.back();
        stack.pop_back();
        if (in_b[v]) return false;
        if (how == 0) {
            // ... -> v : pass through as non-collider, or bounce as collider.
            if (!in_c[v]) {
                for (NodeId w : g.children(v)) push(w, 0);
            }
            if (anc_c[v]) {
                for (NodeId w : g.parents(v)) push(w, 1);
            }
        } else {
            // ... <- v : non-collider in both continuations.
            if (!in_c[v]) {
                for (NodeId w : g.children(v)) push(w, 0);
                for (NodeId w : g.parents(v)) push(w, 1);
            }
        }
    }
    return true;
}

// Independent cross-check: separation in the moralized ancestral graph.
// Restrict to ancestors of A ∪ B ∪ C, marry parents, drop orientations,
// delete C, and test plain graph separation of A from B.
inline bool d_separated_moral(const Dag& g, const CiQuery& q) {
    detail::check_query(g, q);
    const int n = g.node_count();
    NodeSet all = set_union(set_union(q.a, q.b), q.c);
    std::vector<bool> keep = detail::ancestors_of_set(g, all);

    std::vector<NodeSet> adj(n);
    auto connect = [&](NodeId u, NodeId v) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    };
    for (const auto& [u, v] : g.edges()) {
        if (keep[u] && keep[v]) connect(u, v);
    }
    for (NodeId v = 0; v < n; ++v) {
        if (!keep[v]) continue;
        const NodeSet& pa = g.parents(v);
        for (std::size_t x = 0; x < pa.size(); ++x) {
            for (std::size_t y = x + 1; y < pa.size(); ++y) connect(pa[x], pa[y]);
        }
    }
    std::vector<bool> blocked(n, false);
    for (NodeId v : q.c) blocked[v] = true;
    std::vector<bool> seen(n, false);
    std::vector<NodeId> stack;
    for (NodeId a : q.a) {
        seen[a] = true;
        stack.push_back(a);
    }
    std::vector<bool> in_b(n, false);
    for (NodeId v : q.b) in_b[v] = true;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (in_b[v]) return false;
        for (NodeId w : adj[v]) {
            if (!seen[w] && !blocked[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return true;
}

// Counting independence-query oracle around a hidden DAG. Answers are
// cached; total_queries counts every call, unique_queries only cache misses.
class Oracle {
public:
    using LogFn = std::function<void(const CiQuery&, bool, std::uint64_t, std::uint64_t)>;

    explicit Oracle(Dag hidden) : hidden_(std::move(hidden)) {}

    bool query(const CiQuery& q) {
        ++total_;
        auto it = cache_.find(q);
        bool answer;
        if (it != cache_.end()) {
            answer = it->second;
        } else {
            answer = d_separated(hidden_, q);
            cache_.emplace(q, answer);
            ++unique_;
        }
        if (log_) log_(q, answer, total_, unique_);
        return answer;
    }

    std::uint64_t total_queries() const { return total_; }
    std::uint64_t unique_queries() const { return unique_; }
    int node_count() const { return hidden_.node_count(); }
    const Dag& hidden() const { return hidden_; }
    void set_log(LogFn fn) { log_ = std::move(fn); }

private:
    Dag hidden_;
    std::uint64_t total_ = 0;
    std::uint64_t unique_ = 0;
    std::map<CiQuery, bool> cache_;
    LogFn log_;
};

}  // namespace mectest
