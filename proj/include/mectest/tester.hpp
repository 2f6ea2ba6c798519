#pragma once

#include <cstdint>
#include <optional>

#include "mectest/dsep.hpp"
#include "mectest/mec.hpp"

namespace mectest {

enum class TestClass { ClassI, ClassII };

struct TestFailure {
    CiQuery query;
    bool expected_independent;
    bool got_independent;
    TestClass cls;
};

// The canonical CI test plan for one MEC: class-1 queries expect
// independence (non-adjacent pairs), class-2 queries expect dependence
// (adjacent pairs over undirected cliques in the adjacency).
struct TestPlan {
    std::vector<CiQuery> class1;
    std::vector<CiQuery> class2;
    MecStats budget;
};

struct TestReport {
    bool verdict = false;
    std::optional<TestFailure> failing_query;
    std::uint64_t queries_issued = 0;
    std::uint64_t queries_unique = 0;
    // Plan entries enumerated; equal to the full plan sizes unless the run
    // exited early on a failure.
    std::size_t class1_planned = 0;
    std::size_t class2_planned = 0;
    std::vector<TestFailure> all_failures;  // populated in exhaustive mode
};

inline std::uint64_t class2_budget(const EssentialGraph& e) { return e.stats().class2_budget; }

// One query per non-adjacent unordered pair: the pair member i that comes
// later in rep's topological order (so the other member j cannot be a
// descendant of i) is separated from j by pa_rep(i) \ {j}. Ordered
// lexicographically by (i, j).
inline std::vector<CiQuery> class_i_plan(const EssentialGraph& e, const Dag& rep) {
    if (rep.node_count() != e.node_count()) {
        throw std::invalid_argument("class_i_plan: node-count mismatch");
    }
    if (!(essential_graph(rep).pdag() == e.pdag())) {
        throw std::invalid_argument("class_i_plan: rep is not a consistent extension of e");
    }
    const int n = e.node_count();
    std::vector<int> pos(n);
    {
        std::vector<NodeId> topo = topological_order(rep);
        for (int idx = 0; idx < n; ++idx) pos[topo[idx]] = idx;
    }
    std::vector<std::pair<Edge, CiQuery>> keyed;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            if (e.pdag().adjacent(a, b)) continue;
            NodeId i = pos[a] > pos[b] ? a : b;
            NodeId j = i == a ? b : a;
            NodeSet cond = set_difference(rep.parents(i), NodeSet{j});
            CiQuery q = singleton_query(i, j, std::move(cond));
            if (!d_separated(rep, q)) {
                throw std::logic_error("class_i_plan: query not independent in representative");
            }
            keyed.emplace_back(Edge{i, j}, std::move(q));
        }
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<CiQuery> plan;
    plan.reserve(keyed.size());
    for (auto& [key, q] : keyed) plan.push_back(std::move(q));
    return plan;
}

// Enumerates the class-2 plan lazily in deterministic order; fn returns
// false to stop. For every adjacent pair, both endpoint roles are taken and
// every undirected clique C within adj(i) yields the conditioning set
// (pa(i) ∪ C) \ {j}; duplicate conditioning sets for a pair are emitted once.
inline bool for_each_class_ii_query(const EssentialGraph& e,
                                    const std::function<bool(const CiQuery&)>& fn) {
    const int n = e.node_count();
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            if (!e.pdag().adjacent(a, b)) continue;
            std::set<NodeSet> seen;
            for (const auto& [i, j] : {Edge{a, b}, Edge{b, a}}) {
                std::vector<NodeSet> cliques = undirected_cliques_within(e, e.undirected_neighbors(i));
                for (const NodeSet& clique : cliques) {
                    NodeSet cond = set_union(e.directed_parents(i), clique);
                    set_erase(cond, j);
                    if (!seen.insert(cond).second) continue;
                    if (!fn(singleton_query(i, j, std::move(cond)))) return false;
                }
            }
        }
    }
    return true;
}

inline std::vector<CiQuery> class_ii_plan(const EssentialGraph& e) {
    std::vector<CiQuery> plan;
    for_each_class_ii_query(e, [&plan](const CiQuery& q) {
        plan.push_back(q);
        return true;
    });
    return plan;
}

inline TestPlan make_test_plan(const EssentialGraph& e, const Dag& rep) {
    return TestPlan{class_i_plan(e, rep), class_ii_plan(e), e.stats()};
}

namespace detail {

inline bool record_failure(TestReport& report, TestFailure failure, bool exhaustive) {
    if (!report.failing_query) report.failing_query = failure;
    report.all_failures.push_back(std::move(failure));
    return exhaustive;  // keep going only when exhaustive
}

}  // namespace detail

// Algorithm: run class-1 queries in order and fail on the first dependence,
// then class-2 queries and fail on the first independence. With `exhaustive`
// the full plan runs and every failure is collected.
inline TestReport run_membership_test(const EssentialGraph& e, Oracle& oracle,
                                      bool exhaustive = false) {
    if (oracle.node_count() != e.node_count()) {
        throw std::invalid_argument("run_membership_test: node-count mismatch");
    }
    const std::uint64_t total0 = oracle.total_queries();
    const std::uint64_t unique0 = oracle.unique_queries();
    TestReport report;
    Dag rep = consistent_extension(e);
    bool stopped = false;
    for (const CiQuery& q : class_i_plan(e, rep)) {
        ++report.class1_planned;
        if (!oracle.query(q)) {
            if (!detail::record_failure(report, {q, true, false, TestClass::ClassI}, exhaustive)) {
                stopped = true;
                break;
            }
        }
    }
    if (!stopped) {
        for_each_class_ii_query(e, [&](const CiQuery& q) {
            ++report.class2_planned;
            if (oracle.query(q)) {
                return detail::record_failure(report, {q, false, true, TestClass::ClassII},
                                              exhaustive);
            }
            return true;
        });
    }
    report.verdict = report.all_failures.empty();
    report.queries_issued = oracle.total_queries() - total0;
    report.queries_unique = oracle.unique_queries() - unique0;
    return report;
}

// Runs a pre-built plan; lets callers amortize plan construction across many
// hidden graphs.
inline TestReport run_plan(const TestPlan& plan, Oracle& oracle, bool exhaustive = false) {
    const std::uint64_t total0 = oracle.total_queries();
    const std::uint64_t unique0 = oracle.unique_queries();
    TestReport report;
    bool stopped = false;
    for (const CiQuery& q : plan.class1) {
        ++report.class1_planned;
        if (!oracle.query(q)) {
            if (!detail::record_failure(report, {q, true, false, TestClass::ClassI}, exhaustive)) {
                stopped = true;
                break;
            }
        }
    }
    if (!stopped) {
        for (const CiQuery& q : plan.class2) {
            ++report.class2_planned;
            if (oracle.query(q)) {
                if (!detail::record_failure(report, {q, false, true, TestClass::ClassII},
                                            exhaustive)) {
                    break;
                }
            }
        }
    }
    report.verdict = report.all_failures.empty();
    report.queries_issued = oracle.total_queries() - total0;
    report.queries_unique = oracle.unique_queries() - unique0;
    return report;
}

// Tests whether g is a minimal independence map of the oracle's hidden
// graph: the class-1 checks establish the I-map property, then one
// removability query per edge checks minimality. Returns the verdict and the
// number of queries issued.
inline std::pair<bool, std::uint64_t> is_minimal_imap_test(const Dag& g, Oracle& oracle) {
    if (oracle.node_count() != g.node_count()) {
        throw std::invalid_argument("is_minimal_imap_test: node-count mismatch");
    }
    const std::uint64_t total0 = oracle.total_queries();
    const int n = g.node_count();
    std::vector<int> pos(n);
    {
        std::vector<NodeId> topo = topological_order(g);
        for (int idx = 0; idx < n; ++idx) pos[topo[idx]] = idx;
    }
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            if (g.adjacent(a, b)) continue;
            NodeId i = pos[a] > pos[b] ? a : b;
            NodeId j = i == a ? b : a;
            if (!oracle.query(singleton_query(i, j, g.parents(i)))) {
                return {false, oracle.total_queries() - total0};
            }
        }
    }
    for (const auto& [i, j] : g.edges()) {
        NodeSet cond = set_difference(g.parents(j), NodeSet{i});
        if (oracle.query(singleton_query(j, i, std::move(cond)))) {
            return {false, oracle.total_queries() - total0};  // edge i -> j is removable
        }
    }
    return {true, oracle.total_queries() - total0};
}

}  // namespace mectest
