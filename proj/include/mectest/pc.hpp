#pragma once

#include "mectest/dsep.hpp"
#include "mectest/mec.hpp"

namespace mectest {

struct PcResult {
    Pdag cpdag;
    std::uint64_t queries = 0;
};

namespace detail {

// Visits the size-k subsets of `pool` in lexicographic order; fn returns
// true once a separating set is found, which stops the scan.
inline bool for_each_subset_of_size(const NodeSet& pool, int k,
                                    const std::function<bool(const NodeSet&)>& fn) {
    const int m = static_cast<int>(pool.size());
    if (k > m) return false;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        NodeSet subset;
        subset.reserve(k);
        for (int i : idx) subset.push_back(pool[i]);
        if (fn(subset)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// PC-style adjacency search against an exact independence oracle, included
// as a query-count baseline. Starts from the complete undirected graph and
// removes edges by testing conditioning sets of growing size over the
// level-start neighborhoods (stable-PC iteration order), then orients
// v-structures from the recorded separating sets and closes under Meek
// rules. With an exact oracle the output equals the essential graph of the
// hidden DAG.
inline PcResult pc_baseline(Oracle& oracle) {
    const int n = oracle.node_count();
    const std::uint64_t total0 = oracle.total_queries();
    std::vector<NodeSet> adj(n);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId w = 0; w < n; ++w)
            if (w != v) adj[v].push_back(w);
    }
    std::map<Edge, NodeSet> sepset;

    for (int level = 0;; ++level) {
        const std::vector<NodeSet> snapshot = adj;  // level-start neighborhoods
        bool any_candidate = false;
        for (NodeId a = 0; a < n; ++a) {
            for (NodeId b = a + 1; b < n; ++b) {
                if (!set_contains(adj[a], b)) continue;
                bool removed = false;
                for (const auto& [x, y] : {Edge{a, b}, Edge{b, a}}) {
                    NodeSet pool = set_difference(snapshot[x], NodeSet{y});
                    if (static_cast<int>(pool.size()) < level) continue;
                    any_candidate = true;
                    removed = detail::for_each_subset_of_size(pool, level, [&](const NodeSet& s) {
                        if (oracle.query(singleton_query(a, b, s))) {
                            sepset[{a, b}] = s;
                            return true;
                        }
                        return false;
                    });
                    if (removed) break;
                }
                if (removed) {
                    set_erase(adj[a], b);
                    set_erase(adj[b], a);
                }
            }
        }
        if (!any_candidate) break;
    }

    // Orient unshielded triples a - k - b with k outside sepset(a, b).
    std::set<Edge> directed;
    for (NodeId k = 0; k < n; ++k) {
        const NodeSet& nb = adj[k];
        for (std::size_t x = 0; x < nb.size(); ++x) {
            for (std::size_t y = x + 1; y < nb.size(); ++y) {
                NodeId a = nb[x], b = nb[y];
                if (set_contains(adj[a], b)) continue;
                auto it = sepset.find({std::min(a, b), std::max(a, b)});
                if (it != sepset.end() && !set_contains(it->second, k)) {
                    directed.insert({a, k});
                    directed.insert({b, k});
                }
            }
        }
    }
    std::vector<Edge> dir(directed.begin(), directed.end());
    std::vector<Edge> und;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b : adj[a]) {
            if (a < b && !directed.count({a, b}) && !directed.count({b, a})) und.emplace_back(a, b);
        }
    }
    detail::OrientState st(Pdag(n, std::move(dir), std::move(und)));
    detail::meek_fixpoint(st);
    return {st.to_pdag(), oracle.total_queries() - total0};
}

}  // namespace mectest
