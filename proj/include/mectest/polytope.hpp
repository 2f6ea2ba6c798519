#pragma once

#include <cstdint>
#include <numeric>

#include "mectest/dsep.hpp"
#include "mectest/mec.hpp"
#include "mectest/tester.hpp"

namespace mectest {

using Permutation = std::vector<NodeId>;

namespace detail {

inline void check_permutation(const Permutation& pi, int n, const char* what) {
    if (static_cast<int>(pi.size()) != n) {
        throw std::invalid_argument(std::string(what) + ": permutation size mismatch");
    }
    std::vector<bool> seen(n, false);
    for (NodeId v : pi) {
        check_node(v, n, what);
        if (seen[v]) throw std::invalid_argument(std::string(what) + ": not a permutation");
        seen[v] = true;
    }
}

inline std::uint32_t factorial(int n) {
    std::uint32_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint32_t>(i);
    return f;
}

// Lehmer-code rank of a permutation; unrank is its inverse.
inline std::uint32_t perm_rank(const Permutation& pi) {
    const int n = static_cast<int>(pi.size());
    std::uint32_t rank = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (pi[j] < pi[i]) ++smaller;
        rank = rank * static_cast<std::uint32_t>(n - i) + static_cast<std::uint32_t>(smaller);
    }
    return rank;
}

inline Permutation perm_unrank(std::uint32_t rank, int n) {
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::uint32_t> digits(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        digits[i] = rank % static_cast<std::uint32_t>(n - i);
        rank /= static_cast<std::uint32_t>(n - i);
    }
    Permutation pi;
    pi.reserve(n);
    for (int i = 0; i < n; ++i) {
        pi.push_back(pool[digits[i]]);
        pool.erase(pool.begin() + digits[i]);
    }
    return pi;
}

struct Dsu {
    std::vector<std::uint32_t> parent;
    explicit Dsu(std::uint32_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Minimal independence map of the topological order pi: the edge
// pi[p] -> pi[q] (p < q) is present iff pi[p] and pi[q] are not d-separated
// by the other predecessors of pi[q]. Exactly n(n-1)/2 queries.
inline Dag minimal_imap(const Dag& h, const Permutation& pi) {
    const int n = h.node_count();
    detail::check_permutation(pi, n, "minimal_imap");
    std::vector<Edge> edges;
    for (int q = 1; q < n; ++q) {
        for (int p = 0; p < q; ++p) {
            NodeSet cond(pi.begin(), pi.begin() + q);
            normalize_set(cond);
            set_erase(cond, pi[p]);
            if (!d_separated(h, singleton_query(pi[p], pi[q], std::move(cond)))) {
                edges.emplace_back(pi[p], pi[q]);
            }
        }
    }
    return Dag(n, std::move(edges));
}

// Oracle-backed variant used by the edgewalk demonstration; the queries are
// issued through (and counted by) the oracle.
inline Dag minimal_imap_oracle(Oracle& oracle, const Permutation& pi) {
    const int n = oracle.node_count();
    detail::check_permutation(pi, n, "minimal_imap_oracle");
    std::vector<Edge> edges;
    for (int q = 1; q < n; ++q) {
        for (int p = 0; p < q; ++p) {
            NodeSet cond(pi.begin(), pi.begin() + q);
            normalize_set(cond);
            set_erase(cond, pi[p]);
            if (!oracle.query(singleton_query(pi[p], pi[q], std::move(cond)))) {
                edges.emplace_back(pi[p], pi[q]);
            }
        }
    }
    return Dag(n, std::move(edges));
}

struct AssociahedronVertex {
    std::vector<std::uint32_t> perms;  // ranks of the member permutations, sorted
    Dag imap;
    int edge_count;
};

// The permutohedron with d-separation edges contracted. Vertices are the
// contraction components; every permutation in one component must yield the
// same minimal I-map, which the build asserts.
struct Associahedron {
    int n = 0;
    std::vector<AssociahedronVertex> vertices;
    std::vector<std::pair<int, int>> edges;  // vertex index pairs
    std::vector<int> sparsest;               // vertex indices of minimum edge count
    std::uint64_t contracted_edges = 0;      // contracted permutohedron edges
};

inline Associahedron build_associahedron(const Dag& h) {
    const int n = h.node_count();
    if (n > 8) {
        throw std::invalid_argument("build_associahedron: node-count guard (n <= 8) exceeded");
    }
    if (n == 0) throw std::invalid_argument("build_associahedron: empty graph");
    const std::uint32_t total = detail::factorial(n);
    detail::Dsu dsu(total);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> uncontracted;
    std::uint64_t contracted = 0;
    for (std::uint32_t r = 0; r < total; ++r) {
        Permutation pi = detail::perm_unrank(r, n);
        for (int q = 0; q + 1 < n; ++q) {
            Permutation swapped = pi;
            std::swap(swapped[q], swapped[q + 1]);
            std::uint32_t r2 = detail::perm_rank(swapped);
            if (r2 < r) continue;  // each permutohedron edge once
            NodeSet prefix(pi.begin(), pi.begin() + q);
            if (d_separated(h, singleton_query(pi[q], pi[q + 1], std::move(prefix)))) {
                dsu.merge(r, r2);
                ++contracted;
            } else {
                uncontracted.emplace_back(r, r2);
            }
        }
    }
    Associahedron out;
    out.n = n;
    out.contracted_edges = contracted;
    std::vector<int> vertex_of(total, -1);
    for (std::uint32_t r = 0; r < total; ++r) {
        Permutation pi = detail::perm_unrank(r, n);
        Dag imap = minimal_imap(h, pi);
        std::uint32_t root = dsu.find(r);
        if (vertex_of[root] == -1) {
            vertex_of[root] = static_cast<int>(out.vertices.size());
            out.vertices.push_back(
                {{r}, imap, static_cast<int>(imap.edge_count())});
        } else {
            AssociahedronVertex& vert = out.vertices[vertex_of[root]];
            if (!(vert.imap == imap)) {
                throw std::logic_error(
                    "build_associahedron: permutations in one contraction component "
                    "yielded different minimal I-maps");
            }
            vert.perms.push_back(r);
        }
    }
    std::set<std::pair<int, int>> edge_set;
    for (const auto& [r, r2] : uncontracted) {
        int a = vertex_of[dsu.find(r)];
        int b = vertex_of[dsu.find(r2)];
        if (a == b) {
            throw std::logic_error("build_associahedron: uncontracted edge inside one vertex");
        }
        edge_set.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    }
    out.edges.assign(edge_set.begin(), edge_set.end());
    int best = out.vertices.empty() ? 0 : out.vertices.front().edge_count;
    for (const auto& v : out.vertices) best = std::min(best, v.edge_count);
    for (std::size_t idx = 0; idx < out.vertices.size(); ++idx) {
        if (out.vertices[idx].edge_count == best) out.sparsest.push_back(static_cast<int>(idx));
    }
    return out;
}

// True iff the minimal I-maps at the sparsest vertices are exactly the
// members of [h], with the MEC enumerated by brute force as the reference.
inline bool sparsest_vertices_equal_mec(const Dag& h) {
    if (h.node_count() > 7) {
        throw std::invalid_argument(
            "sparsest_vertices_equal_mec: node-count guard (n <= 7) exceeded");
    }
    Associahedron assoc = build_associahedron(h);
    std::set<Dag> sparse_imaps;
    for (int idx : assoc.sparsest) sparse_imaps.insert(assoc.vertices[idx].imap);
    std::set<Dag> members;
    for_each_member(essential_graph(h), [&members](const Dag& m) {
        members.insert(m);
        return true;
    });
    return sparse_imaps == members;
}

// Edges i -> j with pa(j) = pa(i) ∪ {i}; flipping one keeps the graph in
// the same MEC.
inline std::vector<Edge> covered_edges(const Dag& g) {
    std::vector<Edge> out;
    for (const auto& [i, j] : g.edges()) {
        NodeSet expect = g.parents(i);
        set_insert(expect, i);
        if (g.parents(j) == expect) out.emplace_back(i, j);
    }
    return out;
}

struct EdgewalkResult {
    Dag final_dag;
    int moves = 0;           // accepted walks to a strictly sparser I-map
    int flips_explored = 0;  // covered-edge flips whose I-map was derived
    std::uint64_t queries = 0;
};

// Greedy edgewalk demonstration: repeatedly flip a covered edge, re-derive
// the minimal I-map of the flipped order through the oracle, and move when
// strictly sparser. Not a tuned learner; it exists to put a query counter
// next to the class-II plan.
inline EdgewalkResult edgewalk_sparsify(Oracle& oracle, const Dag& start, int max_moves = 1000) {
    if (oracle.node_count() != start.node_count()) {
        throw std::invalid_argument("edgewalk_sparsify: node-count mismatch");
    }
    const std::uint64_t total0 = oracle.total_queries();
    Dag current = minimal_imap_oracle(oracle, topological_order(start));
    int moves = 0, flips = 0;
    bool improved = true;
    while (improved && moves < max_moves) {
        improved = false;
        for (const Edge& edge : covered_edges(current)) {
            std::vector<Edge> flipped_edges;
            for (const auto& e : current.edges()) {
                flipped_edges.push_back(e == edge ? Edge{edge.second, edge.first} : e);
            }
            Dag flipped(current.node_count(), std::move(flipped_edges));
            Dag imap = minimal_imap_oracle(oracle, topological_order(flipped));
            ++flips;
            if (imap.edge_count() < current.edge_count()) {
                current = std::move(imap);
                ++moves;
                improved = true;
                break;
            }
        }
    }
    return {std::move(current), moves, flips, oracle.total_queries() - total0};
}

}  // namespace mectest
