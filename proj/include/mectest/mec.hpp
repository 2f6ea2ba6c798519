#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "mectest/graph.hpp"
#include "mectest/util.hpp"

namespace mectest {

inline bool markov_equivalent(const Dag& g, const Dag& h) {
    if (g.node_count() != h.node_count()) {
        throw std::invalid_argument("markov_equivalent: node-count mismatch");
    }
    return skeleton(g) == skeleton(h) && v_structures(g) == v_structures(h);
}

struct MecStats {
    int n = 0;
    int s = 0;  // max undirected clique size (1 when no undirected edges)
    int num_max_cliques = 0;
    std::vector<int> component_sizes;
    std::uint64_t class2_budget = 0;  // n^3 * 2^s
};

struct ChordalityResult {
    bool chordal = false;
    std::optional<std::vector<NodeId>> peo;
};

struct CpdagValidationError : std::invalid_argument {
    enum class Kind { NotChainGraph, NotChordal, NotMeekClosed, NotAnEssentialGraph };
    Kind kind;
    std::vector<NodeId> witness;

    CpdagValidationError(Kind k, std::vector<NodeId> w, const std::string& msg)
        : std::invalid_argument(msg), kind(k), witness(std::move(w)) {}
};

namespace detail {

// Maximum cardinality search. Visits all nodes; each step picks the
// unvisited node with the most visited neighbors. `forced_prefix` pins the
// first visits (used to make a clique most upstream); ties otherwise go to
// the smallest id, or to a uniformly random candidate when `tie_rng` is set.
inline std::vector<NodeId> mcs_order(const UndirectedGraph& u,
                                     const std::vector<NodeId>& forced_prefix = {},
                                     std::mt19937_64* tie_rng = nullptr) {
    const int n = u.node_count();
    std::vector<int> weight(n, 0);
    std::vector<bool> visited(n, false);
    std::vector<NodeId> order;
    order.reserve(n);
    auto visit = [&](NodeId v) {
        visited[v] = true;
        order.push_back(v);
        for (NodeId w : u.neighbors(v))
            if (!visited[w]) ++weight[w];
    };
    for (NodeId v : forced_prefix) {
        if (visited[v]) throw std::invalid_argument("mcs_order: repeated node in prefix");
        visit(v);
    }
    while (static_cast<int>(order.size()) < n) {
        int best = -1;
        std::vector<NodeId> candidates;
        for (NodeId v = 0; v < n; ++v) {
            if (visited[v]) continue;
            if (weight[v] > best) {
                best = weight[v];
                candidates.assign(1, v);
            } else if (weight[v] == best) {
                candidates.push_back(v);
            }
        }
        NodeId pick = tie_rng ? candidates[rng_below(*tie_rng, candidates.size())]
                              : candidates.front();
        visit(pick);
    }
    return order;
}

inline bool verify_peo(const UndirectedGraph& u, const std::vector<NodeId>& peo) {
    const int n = u.node_count();
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[peo[i]] = i;
    for (NodeId v = 0; v < n; ++v) {
        NodeId first = -1;
        for (NodeId w : u.neighbors(v)) {
            if (pos[w] > pos[v] && (first == -1 || pos[w] < pos[first])) first = w;
        }
        if (first == -1) continue;
        for (NodeId w : u.neighbors(v)) {
            if (pos[w] > pos[v] && w != first && !u.adjacent(first, w)) return false;
        }
    }
    return true;
}

// Finds a chordless cycle (length >= 4) in a non-chordal graph: a
// non-adjacent pair x, y in some neighborhood N(v), joined by a shortest
// path that avoids v and the rest of N(v).
inline std::optional<std::vector<NodeId>> find_chordless_cycle(const UndirectedGraph& u) {
    const int n = u.node_count();
    for (NodeId v = 0; v < n; ++v) {
        const NodeSet& nb = u.neighbors(v);
        for (std::size_t xi = 0; xi < nb.size(); ++xi) {
            for (std::size_t yi = xi + 1; yi < nb.size(); ++yi) {
                NodeId x = nb[xi], y = nb[yi];
                if (u.adjacent(x, y)) continue;
                std::vector<bool> banned(n, false);
                banned[v] = true;
                for (NodeId w : nb) banned[w] = true;
                banned[x] = banned[y] = false;
                std::vector<NodeId> prev(n, -1);
                std::deque<NodeId> queue{x};
                std::vector<bool> seen(n, false);
                seen[x] = true;
                while (!queue.empty()) {
                    NodeId cur = queue.front();
                    queue.pop_front();
                    if (cur == y) break;
                    for (NodeId w : u.neighbors(cur)) {
                        if (!seen[w] && !banned[w]) {
                            seen[w] = true;
                            prev[w] = cur;
                            queue.push_back(w);
                        }
                    }
                }
                if (!seen[y]) continue;
                std::vector<NodeId> path;
                for (NodeId cur = y; cur != -1; cur = prev[cur]) path.push_back(cur);
                std::reverse(path.begin(), path.end());  // x .. y
                std::vector<NodeId> cycle{v};
                cycle.insert(cycle.end(), path.begin(), path.end());
                return cycle;
            }
        }
    }
    return std::nullopt;
}

// Mutable adjacency view used while orienting edges.
struct OrientState {
    int n;
    std::vector<std::uint8_t> dir;  // dir[u * n + v] == 1 iff u -> v
    std::vector<std::uint8_t> und;  // symmetric
    std::vector<NodeSet> dparents, dchildren, unbrs;

    explicit OrientState(const Pdag& p)
        : n(p.node_count()),
          dir(static_cast<std::size_t>(n) * n, 0),
          und(static_cast<std::size_t>(n) * n, 0),
          dparents(n),
          dchildren(n),
          unbrs(n) {
        for (const auto& [u, v] : p.directed_edges()) {
            dir[static_cast<std::size_t>(u) * n + v] = 1;
        }
        for (const auto& [u, v] : p.undirected_edges()) {
            und[static_cast<std::size_t>(u) * n + v] = 1;
            und[static_cast<std::size_t>(v) * n + u] = 1;
        }
        for (NodeId v = 0; v < n; ++v) {
            dparents[v] = p.directed_parents(v);
            dchildren[v] = p.directed_children(v);
            unbrs[v] = p.undirected_neighbors(v);
        }
    }

    bool has_dir(NodeId u, NodeId v) const { return dir[static_cast<std::size_t>(u) * n + v]; }
    bool has_und(NodeId u, NodeId v) const { return und[static_cast<std::size_t>(u) * n + v]; }
    bool adjacent(NodeId u, NodeId v) const {
        return has_dir(u, v) || has_dir(v, u) || has_und(u, v);
    }

    void orient(NodeId u, NodeId v) {
        und[static_cast<std::size_t>(u) * n + v] = 0;
        und[static_cast<std::size_t>(v) * n + u] = 0;
        dir[static_cast<std::size_t>(u) * n + v] = 1;
        set_erase(unbrs[u], v);
        set_erase(unbrs[v], u);
        set_insert(dchildren[u], v);
        set_insert(dparents[v], u);
    }

    Pdag to_pdag() const {
        std::vector<Edge> d, e;
        for (NodeId v = 0; v < n; ++v) {
            for (NodeId c : dchildren[v]) d.emplace_back(v, c);
            for (NodeId w : unbrs[v])
                if (v < w) e.emplace_back(v, w);
        }
        return Pdag(n, std::move(d), std::move(e));
    }
};

struct MeekWitness {
    int rule;         // 1..4
    NodeId from, to;  // the orientation the rule infers
    NodeSet premise;  // the other nodes of the rule instance
};

// Returns the first rule (by number) that orients x -> y, if any.
inline std::optional<MeekWitness> meek_rule_orienting(const OrientState& st, NodeId x, NodeId y) {
    // Rule 1: i -> x - y with i and y non-adjacent infers x -> y.
    for (NodeId i : st.dparents[x]) {
        if (!st.adjacent(i, y)) return MeekWitness{1, x, y, {i}};
    }
    // Rule 2: x -> j -> y with x - y infers x -> y.
    for (NodeId j : st.dchildren[x]) {
        if (st.has_dir(j, y)) return MeekWitness{2, x, y, {j}};
    }
    // Rule 3: x - j, x - l, j -> y, l -> y, j and l non-adjacent infers x -> y.
    NodeSet into_y;
    for (NodeId m : st.unbrs[x]) {
        if (st.has_dir(m, y)) into_y.push_back(m);
    }
    for (std::size_t a = 0; a < into_y.size(); ++a) {
        for (std::size_t b = a + 1; b < into_y.size(); ++b) {
            if (!st.adjacent(into_y[a], into_y[b])) {
                return MeekWitness{3, x, y, {into_y[a], into_y[b]}};
            }
        }
    }
    // Rule 4: x - k, x - l, l -> k -> y, l and y non-adjacent infers x -> y.
    for (NodeId k : st.unbrs[x]) {
        if (!st.has_dir(k, y)) continue;
        for (NodeId l : st.unbrs[x]) {
            if (st.has_dir(l, k) && !st.adjacent(l, y)) return MeekWitness{4, x, y, {k, l}};
        }
    }
    return std::nullopt;
}

// Applies Meek rules 1-4 to a fixed point using a work-list of undirected
// edges. The fixed point is unique, so processing order does not matter.
inline void meek_fixpoint(OrientState& st) {
    std::deque<Edge> work;
    std::set<Edge> queued;
    auto enqueue = [&](NodeId u, NodeId v) {
        Edge e = ordered(u, v);
        if (queued.insert(e).second) work.push_back(e);
    };
    for (NodeId v = 0; v < st.n; ++v) {
        for (NodeId w : st.unbrs[v])
            if (v < w) enqueue(v, w);
    }
    while (!work.empty()) {
        auto [u, v] = work.front();
        work.pop_front();
        queued.erase(Edge{u, v});
        if (!st.has_und(u, v)) continue;
        std::optional<MeekWitness> hit = meek_rule_orienting(st, u, v);
        if (!hit) {
            hit = meek_rule_orienting(st, v, u);
        }
        if (!hit) continue;
        st.orient(hit->from, hit->to);
        // Rule premises reach two steps from an oriented edge; re-examine
        // undirected edges around both endpoints and their neighborhoods.
        NodeSet frontier{hit->from, hit->to};
        for (NodeId z : {hit->from, hit->to}) {
            for (NodeId w : st.unbrs[z]) set_insert(frontier, w);
            for (NodeId w : st.dparents[z]) set_insert(frontier, w);
            for (NodeId w : st.dchildren[z]) set_insert(frontier, w);
        }
        for (NodeId z : frontier) {
            for (NodeId w : st.unbrs[z]) enqueue(z, w);
        }
    }
}

inline bool directed_part_acyclic(const Pdag& p) {
    const int n = p.node_count();
    std::vector<int> indeg(n, 0);
    for (const auto& e : p.directed_edges()) ++indeg[e.second];
    std::vector<NodeId> stack;
    for (NodeId v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        ++seen;
        for (NodeId c : p.directed_children(v))
            if (--indeg[c] == 0) stack.push_back(c);
    }
    return seen == n;
}

inline std::vector<NodeId> undirected_path(const Pdag& p, NodeId from, NodeId to) {
    std::vector<NodeId> prev(p.node_count(), -1);
    std::vector<bool> seen(p.node_count(), false);
    std::deque<NodeId> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        NodeId cur = queue.front();
        queue.pop_front();
        if (cur == to) break;
        for (NodeId w : p.undirected_neighbors(cur)) {
            if (!seen[w]) {
                seen[w] = true;
                prev[w] = cur;
                queue.push_back(w);
            }
        }
    }
    std::vector<NodeId> path;
    for (NodeId cur = to; cur != -1; cur = prev[cur]) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    return path;  // from .. to
}

// Extracts a partially directed cycle from a Pdag that is not a chain graph.
inline std::vector<NodeId> find_partially_directed_cycle(const Pdag& p) {
    auto comps = chain_components(p);
    std::vector<int> comp(p.node_count(), -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (NodeId v : comps[c].nodes) comp[v] = static_cast<int>(c);

    // A directed edge within one chain component closes a cycle by itself.
    for (const auto& [u, v] : p.directed_edges()) {
        if (comp[u] == comp[v]) {
            std::vector<NodeId> path = undirected_path(p, v, u);  // v .. u
            std::vector<NodeId> cycle{u};
            cycle.insert(cycle.end(), path.begin(), path.end() - 1);
            return cycle;
        }
    }

    // Otherwise find a directed cycle in the component quotient and expand
    // each hop through an undirected path inside the component.
    const int k = static_cast<int>(comps.size());
    std::map<std::pair<int, int>, Edge> qedge;
    std::vector<std::vector<int>> qadj(k);
    for (const auto& [u, v] : p.directed_edges()) {
        auto key = std::make_pair(comp[u], comp[v]);
        if (qedge.emplace(key, Edge{u, v}).second) qadj[comp[u]].push_back(comp[v]);
    }
    std::vector<int> color(k, 0), parent(k, -1);
    std::vector<int> cyc_comps;
    std::function<bool(int)> dfs = [&](int c) -> bool {
        color[c] = 1;
        for (int w : qadj[c]) {
            if (color[w] == 1) {
                int cur = c;
                cyc_comps.push_back(w);
                while (cur != w) {
                    cyc_comps.push_back(cur);
                    cur = parent[cur];
                }
                std::reverse(cyc_comps.begin(), cyc_comps.end());
                return true;
            }
            if (color[w] == 0) {
                parent[w] = c;
                if (dfs(w)) return true;
            }
        }
        color[c] = 2;
        return false;
    };
    for (int c = 0; c < k && cyc_comps.empty(); ++c) {
        if (color[c] == 0) dfs(c);
    }
    if (cyc_comps.empty()) return {};
    const int m = static_cast<int>(cyc_comps.size());
    std::vector<NodeId> cycle;
    for (int idx = 0; idx < m; ++idx) {
        Edge in = qedge.at({cyc_comps[(idx + m - 1) % m], cyc_comps[idx]});
        Edge out = qedge.at({cyc_comps[idx], cyc_comps[(idx + 1) % m]});
        std::vector<NodeId> path = undirected_path(p, in.second, out.first);
        cycle.insert(cycle.end(), path.begin(), path.end());
    }
    // Adjacent duplicates appear when a hop enters and leaves at one node.
    cycle.erase(std::unique(cycle.begin(), cycle.end()), cycle.end());
    if (cycle.size() > 1 && cycle.front() == cycle.back()) cycle.pop_back();
    return cycle;
}

inline std::string render_nodes(const std::vector<NodeId>& nodes) {
    std::string out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(nodes[i] + 1);  // 1-based for humans
    }
    return out;
}

}  // namespace detail

inline ChordalityResult is_chordal(const UndirectedGraph& u) {
    std::vector<NodeId> visit = detail::mcs_order(u);
    std::vector<NodeId> peo(visit.rbegin(), visit.rend());
    if (detail::verify_peo(u, peo)) return {true, std::move(peo)};
    return {false, std::nullopt};
}

// Least fixed point of Meek rules 1-4. Requires the directed part to be
// acyclic; rule premises may themselves be partially directed cycles, so
// inputs are not required to be chain graphs (orientation patterns are fed
// through here on the way to an essential graph).
inline Pdag meek_closure(const Pdag& p) {
    if (!detail::directed_part_acyclic(p)) {
        throw CpdagValidationError(CpdagValidationError::Kind::NotChainGraph,
                                   detail::find_partially_directed_cycle(p),
                                   "meek_closure: directed cycle in input");
    }
    detail::OrientState st(p);
    detail::meek_fixpoint(st);
    return st.to_pdag();
}

class EssentialGraph {
public:
    const Pdag& pdag() const { return pdag_; }
    int node_count() const { return pdag_.node_count(); }
    const std::vector<ChainComponent>& chain_comps() const { return chain_comps_; }
    const std::vector<NodeSet>& max_cliques() const { return max_cliques_; }
    int max_undirected_clique_size() const { return s_; }

    // Directed parents / undirected adjacency of a node in the essential graph.
    const NodeSet& directed_parents(NodeId v) const { return pdag_.directed_parents(v); }
    const NodeSet& undirected_neighbors(NodeId v) const { return pdag_.undirected_neighbors(v); }

    MecStats stats() const {
        MecStats st;
        st.n = pdag_.node_count();
        st.s = s_;
        st.num_max_cliques = static_cast<int>(max_cliques_.size());
        for (const auto& c : chain_comps_) st.component_sizes.push_back(static_cast<int>(c.nodes.size()));
        const auto n64 = static_cast<std::uint64_t>(st.n);
        st.class2_budget = n64 * n64 * n64 * (std::uint64_t{1} << st.s);
        return st;
    }

    bool operator==(const EssentialGraph& other) const { return pdag_ == other.pdag_; }

    friend EssentialGraph essential_graph(const Dag& g);
    friend EssentialGraph validate_cpdag(const Pdag& p);

private:
    // `p` must already be a Meek-closed chain graph with chordal components;
    // both entry points guarantee it.
    explicit EssentialGraph(Pdag p) : pdag_(std::move(p)) {
        chain_comps_ = chain_components(pdag_);
        for (const auto& comp : chain_comps_) {
            ChordalityResult ch = is_chordal(comp.graph);
            if (!ch.chordal) {
                throw std::logic_error("EssentialGraph: chain component is not chordal");
            }
            component_peos_.push_back(std::move(*ch.peo));
        }
        collect_max_cliques();
    }

    void collect_max_cliques() {
        for (std::size_t ci = 0; ci < chain_comps_.size(); ++ci) {
            const auto& comp = chain_comps_[ci];
            const auto& peo = component_peos_[ci];
            const int k = comp.graph.node_count();
            std::vector<int> pos(k);
            for (int i = 0; i < k; ++i) pos[peo[i]] = i;
            std::vector<NodeSet> cliques;
            for (NodeId v = 0; v < k; ++v) {
                NodeSet c{v};
                for (NodeId w : comp.graph.neighbors(v))
                    if (pos[w] > pos[v]) c.push_back(w);
                normalize_set(c);
                cliques.push_back(std::move(c));
            }
            for (std::size_t a = 0; a < cliques.size(); ++a) {
                bool maximal = true;
                for (std::size_t b = 0; b < cliques.size() && maximal; ++b) {
                    if (a != b && cliques[a] != cliques[b] && is_subset(cliques[a], cliques[b])) {
                        maximal = false;
                    }
                }
                if (maximal) {
                    NodeSet orig;
                    for (NodeId v : cliques[a]) orig.push_back(comp.nodes[v]);
                    normalize_set(orig);
                    max_cliques_.push_back(std::move(orig));
                }
            }
        }
        std::sort(max_cliques_.begin(), max_cliques_.end());
        max_cliques_.erase(std::unique(max_cliques_.begin(), max_cliques_.end()),
                           max_cliques_.end());
        s_ = pdag_.node_count() > 0 ? 1 : 0;
        for (const auto& c : max_cliques_) s_ = std::max<int>(s_, static_cast<int>(c.size()));
    }

    Pdag pdag_;
    std::vector<ChainComponent> chain_comps_;
    std::vector<std::vector<NodeId>> component_peos_;  // per-component, local ids
    std::vector<NodeSet> max_cliques_;                 // original ids, sorted
    int s_ = 0;
};

inline EssentialGraph essential_graph(const Dag& g) {
    std::set<Edge> directed;
    for (const auto& vs : v_structures(g)) {
        directed.insert({vs[0], vs[1]});
        directed.insert({vs[2], vs[1]});
    }
    std::vector<Edge> dir(directed.begin(), directed.end());
    std::vector<Edge> und;
    for (const auto& [u, v] : g.edges()) {
        if (!directed.count({u, v})) und.push_back(detail::ordered(u, v));
    }
    detail::OrientState st(Pdag(g.node_count(), std::move(dir), std::move(und)));
    detail::meek_fixpoint(st);
    return EssentialGraph(st.to_pdag());
}

inline std::vector<NodeSet> maximal_undirected_cliques(const EssentialGraph& e) {
    return e.max_cliques();
}

// Every clique of the undirected graph induced on S, including the empty set
// and singletons, ordered by size then lexicographically. Enumerated as
// subsets of maximal cliques intersected with S, deduplicated.
inline std::vector<NodeSet> undirected_cliques_within(const EssentialGraph& e, NodeSet s) {
    normalize_set(s);
    for (NodeId v : s) detail::check_node(v, e.node_count(), "undirected_cliques_within");
    std::set<NodeSet> seen;
    seen.insert(NodeSet{});
    for (const auto& mc : e.max_cliques()) {
        NodeSet base = set_intersection(mc, s);
        if (base.empty()) continue;
        const std::size_t k = base.size();
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
            NodeSet sub;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (std::uint64_t{1} << i)) sub.push_back(base[i]);
            seen.insert(std::move(sub));
        }
    }
    std::vector<NodeSet> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](const NodeSet& a, const NodeSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

namespace detail {

// Orients each chain component along an MCS visit order and keeps the
// directed edges; for chordal components this yields a consistent extension.
inline Dag orient_components(const Pdag& p, const std::vector<ChainComponent>& comps,
                             const std::function<std::vector<NodeId>(const ChainComponent&)>& order_of) {
    std::vector<Edge> edges = p.directed_edges();
    for (const auto& comp : comps) {
        std::vector<NodeId> visit = order_of(comp);
        const int k = comp.graph.node_count();
        std::vector<int> pos(k);
        for (int i = 0; i < k; ++i) pos[visit[i]] = i;
        for (const auto& [u, v] : comp.graph.edges()) {
            NodeId a = comp.nodes[u], b = comp.nodes[v];
            edges.push_back(pos[u] < pos[v] ? Edge{a, b} : Edge{b, a});
        }
    }
    return Dag(p.node_count(), std::move(edges));
}

}  // namespace detail

// Deterministic member of the MEC: each chain component is oriented along
// its MCS visit order (ties to the smallest id).
inline Dag consistent_extension(const EssentialGraph& e) {
    return detail::orient_components(e.pdag(), e.chain_comps(), [](const ChainComponent& comp) {
        return detail::mcs_order(comp.graph);
    });
}

// Random member of the MEC: MCS ties are broken uniformly at random, which
// still yields a valid extension.
inline Dag consistent_extension_random(const EssentialGraph& e, std::mt19937_64& rng) {
    return detail::orient_components(e.pdag(), e.chain_comps(), [&rng](const ChainComponent& comp) {
        return detail::mcs_order(comp.graph, {}, &rng);
    });
}

// Member of the MEC in which the undirected clique K is most upstream of its
// chain component and internally ordered by `internal_order`.
inline Dag clique_upstream_extension(const EssentialGraph& e, const NodeSet& k,
                                     const std::vector<NodeId>& internal_order) {
    NodeSet ksorted = k;
    normalize_set(ksorted);
    if (ksorted.size() != k.size()) throw std::invalid_argument("clique_upstream_extension: K has duplicates");
    NodeSet order_sorted(internal_order.begin(), internal_order.end());
    normalize_set(order_sorted);
    if (order_sorted != ksorted) {
        throw std::invalid_argument("clique_upstream_extension: internal_order is not a permutation of K");
    }
    for (std::size_t a = 0; a < ksorted.size(); ++a) {
        for (std::size_t b = a + 1; b < ksorted.size(); ++b) {
            if (!e.pdag().has_undirected(ksorted[a], ksorted[b])) {
                throw std::invalid_argument("clique_upstream_extension: K is not an undirected clique");
            }
        }
    }
    if (ksorted.empty()) return consistent_extension(e);

    return detail::orient_components(e.pdag(), e.chain_comps(), [&](const ChainComponent& comp) {
        if (!set_contains(comp.nodes, ksorted.front())) return detail::mcs_order(comp.graph);
        std::vector<int> local(e.node_count(), -1);
        for (std::size_t i = 0; i < comp.nodes.size(); ++i) local[comp.nodes[i]] = static_cast<int>(i);
        std::vector<NodeId> prefix;
        for (NodeId v : internal_order) prefix.push_back(local[v]);
        return detail::mcs_order(comp.graph, prefix);
    });
}

// Validates a user-supplied Pdag as a CPDAG: chain graph, chordal chain
// components, Meek-closed, and equal to the essential graph of one of its
// consistent extensions. Throws CpdagValidationError naming a witness.
inline EssentialGraph validate_cpdag(const Pdag& p) {
    using Kind = CpdagValidationError::Kind;
    if (!is_chain_graph(p)) {
        auto cycle = detail::find_partially_directed_cycle(p);
        throw CpdagValidationError(Kind::NotChainGraph, cycle,
                                   "not a chain graph: partially directed cycle " +
                                       detail::render_nodes(cycle));
    }
    auto comps = chain_components(p);
    for (const auto& comp : comps) {
        ChordalityResult ch = is_chordal(comp.graph);
        if (!ch.chordal) {
            auto local = detail::find_chordless_cycle(comp.graph);
            std::vector<NodeId> cycle;
            for (NodeId v : *local) cycle.push_back(comp.nodes[v]);
            throw CpdagValidationError(Kind::NotChordal, cycle,
                                       "chain component not chordal: chordless cycle " +
                                           detail::render_nodes(cycle));
        }
    }
    {
        detail::OrientState st(p);
        for (const auto& [u, v] : p.undirected_edges()) {
            std::optional<detail::MeekWitness> hit = detail::meek_rule_orienting(st, u, v);
            if (!hit) hit = detail::meek_rule_orienting(st, v, u);
            if (hit) {
                std::vector<NodeId> witness{hit->from, hit->to};
                witness.insert(witness.end(), hit->premise.begin(), hit->premise.end());
                throw CpdagValidationError(
                    Kind::NotMeekClosed, witness,
                    "Meek rule " + std::to_string(hit->rule) + " applies: would orient " +
                        std::to_string(hit->from + 1) + " -> " + std::to_string(hit->to + 1));
            }
        }
    }
    Dag ext = detail::orient_components(
        p, comps, [](const ChainComponent& comp) { return detail::mcs_order(comp.graph); });
    EssentialGraph of_ext = essential_graph(ext);
    if (!(of_ext.pdag() == p)) {
        // Name one edge whose status differs.
        std::vector<NodeId> witness;
        for (const auto& [u, v] : p.directed_edges()) {
            if (!of_ext.pdag().has_directed(u, v)) {
                witness = {u, v};
                break;
            }
        }
        if (witness.empty()) {
            for (const auto& [u, v] : p.undirected_edges()) {
                if (!of_ext.pdag().has_undirected(u, v)) {
                    witness = {u, v};
                    break;
                }
            }
        }
        throw CpdagValidationError(Kind::NotAnEssentialGraph, witness,
                                   "not an essential graph: edge " + detail::render_nodes(witness) +
                                       " does not match the closure of a consistent extension");
    }
    return EssentialGraph(p);
}

namespace detail {

// Enumerates acyclic, v-structure-free orientations of a connected chordal
// component (local ids). fn returns false to stop early; the return value
// reports whether enumeration ran to completion.
inline bool for_each_amo(const UndirectedGraph& comp,
                         const std::function<bool(const std::vector<Edge>&)>& fn) {
    const auto& edges = comp.edges();
    std::vector<Edge> chosen;
    chosen.reserve(edges.size());
    std::vector<NodeSet> par(comp.node_count()), chi(comp.node_count());

    auto reaches = [&](NodeId from, NodeId to) {
        std::vector<NodeId> stack{from};
        std::vector<bool> seen(comp.node_count(), false);
        seen[from] = true;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            if (v == to) return true;
            for (NodeId c : chi[v]) {
                if (!seen[c]) {
                    seen[c] = true;
                    stack.push_back(c);
                }
            }
        }
        return false;
    };

    std::function<bool(std::size_t)> rec = [&](std::size_t t) -> bool {
        if (t == edges.size()) return fn(chosen);
        const auto [u, w] = edges[t];
        for (const auto& [x, y] : {Edge{u, w}, Edge{w, u}}) {
            if (reaches(y, x)) continue;  // would close a directed cycle
            bool collider_ok = true;
            for (NodeId p : par[y]) {
                if (!comp.adjacent(p, x)) {  // would create a v-structure at y
                    collider_ok = false;
                    break;
                }
            }
            if (!collider_ok) continue;
            chosen.emplace_back(x, y);
            set_insert(chi[x], y);
            set_insert(par[y], x);
            bool keep_going = rec(t + 1);
            chosen.pop_back();
            set_erase(chi[x], y);
            set_erase(par[y], x);
            if (!keep_going) return false;
        }
        return true;
    };
    return rec(0);
}

inline void check_mec_guard(const EssentialGraph& e, const char* what) {
    if (e.node_count() > 12) {
        throw std::invalid_argument(std::string(what) + ": node-count guard (n <= 12) exceeded");
    }
}

}  // namespace detail

// Number of DAGs whose essential graph equals e: acyclic v-structure-free
// orientations are enumerated per chain component and the counts multiply.
inline std::uint64_t mec_size_bruteforce(const EssentialGraph& e) {
    detail::check_mec_guard(e, "mec_size_bruteforce");
    std::uint64_t total = 1;
    for (const auto& comp : e.chain_comps()) {
        if (comp.graph.edges().empty()) continue;
        std::uint64_t count = 0;
        detail::for_each_amo(comp.graph, [&count](const std::vector<Edge>&) {
            ++count;
            return true;
        });
        total *= count;
    }
    return total;
}

// Visits every member of the MEC. fn returns false to stop early. Intended
// for small n (same guard as mec_size_bruteforce); per-component orientation
// lists are materialized, so very large MECs are the caller's problem.
inline void for_each_member(const EssentialGraph& e, const std::function<bool(const Dag&)>& fn) {
    detail::check_mec_guard(e, "for_each_member");
    std::vector<std::vector<std::vector<Edge>>> per_comp;  // component -> orientation -> edges
    for (const auto& comp : e.chain_comps()) {
        if (comp.graph.edges().empty()) continue;
        std::vector<std::vector<Edge>> list;
        detail::for_each_amo(comp.graph, [&](const std::vector<Edge>& oriented) {
            std::vector<Edge> orig;
            orig.reserve(oriented.size());
            for (const auto& [u, v] : oriented) orig.emplace_back(comp.nodes[u], comp.nodes[v]);
            list.push_back(std::move(orig));
            return true;
        });
        per_comp.push_back(std::move(list));
    }
    std::vector<std::size_t> pick(per_comp.size(), 0);
    while (true) {
        std::vector<Edge> edges = e.pdag().directed_edges();
        for (std::size_t c = 0; c < per_comp.size(); ++c) {
            const auto& oriented = per_comp[c][pick[c]];
            edges.insert(edges.end(), oriented.begin(), oriented.end());
        }
        if (!fn(Dag(e.node_count(), std::move(edges)))) return;
        std::size_t c = 0;
        for (; c < per_comp.size(); ++c) {
            if (++pick[c] < per_comp[c].size()) break;
            pick[c] = 0;
        }
        if (c == per_comp.size()) return;
    }
}

}  // namespace mectest
