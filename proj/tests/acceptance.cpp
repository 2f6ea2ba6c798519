// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Runs the exhaustive and randomized soundness checks, the
// query-budget and lower-bound structure suites, the cross-oracle and
// essential-graph checks, and the desk-scale polytope, family, and PC
// baseline reproductions.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "mectest/adversary.hpp"
#include "mectest/bench.hpp"
#include "mectest/generators.hpp"
#include "mectest/io.hpp"
#include "mectest/pc.hpp"
#include "mectest/polytope.hpp"
#include "mectest/tester.hpp"
#include "test_util.hpp"

using namespace mectest;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

std::vector<Dag> g_dags4;  // all 543 labeled DAGs on 4 nodes, shared

bool criterion1_exhaustive_soundness(std::string& detail) {
    const auto& dags = g_dags4;
    if (dags.size() != 543) {
        detail = "expected 543 labeled DAGs on 4 nodes, got " + std::to_string(dags.size());
        return false;
    }
    std::vector<UndirectedGraph> skels;
    std::vector<std::vector<std::array<NodeId, 3>>> vstructs;
    std::vector<TestPlan> plans;
    skels.reserve(dags.size());
    for (const Dag& g : dags) {
        skels.push_back(skeleton(g));
        vstructs.push_back(v_structures(g));
        EssentialGraph e = essential_graph(g);
        plans.push_back(make_test_plan(e, consistent_extension(e)));
    }
    std::uint64_t pairs = 0, discrepancies = 0;
    for (std::size_t gi = 0; gi < dags.size(); ++gi) {
        for (std::size_t hi = 0; hi < dags.size(); ++hi) {
            Oracle oracle(dags[hi]);
            bool verdict = run_plan(plans[gi], oracle).verdict;
            bool equivalent = skels[gi] == skels[hi] && vstructs[gi] == vstructs[hi];
            ++pairs;
            if (verdict != equivalent) ++discrepancies;
        }
    }
    detail = std::to_string(pairs) + " ordered pairs, " + std::to_string(discrepancies) +
             " discrepancies";
    return discrepancies == 0;
}

bool criterion2_randomized_soundness(std::string& detail) {
    std::uint64_t checked = 0, discrepancies = 0;
    for (int n : {6, 7, 8}) {
        std::mt19937_64 rng(1000 + n);
        for (int trial = 0; trial < 1000; ++trial) {
            Dag g = random_dag({n, 0.35, rng(), Family::ErdosOrdered});
            EssentialGraph e = essential_graph(g);
            Dag hidden = [&]() {
                switch (trial % 3) {
                    case 0: return consistent_extension_random(e, rng);  // forced member
                    case 1:
                        if (e.max_undirected_clique_size() >= 2) return hard_instance(e).h;
                        [[fallthrough]];
                    default: return random_dag({n, 0.35, rng(), Family::ErdosOrdered});
                }
            }();
            Oracle oracle(hidden);
            bool verdict = run_membership_test(e, oracle).verdict;
            ++checked;
            if (verdict != markov_equivalent(g, hidden)) ++discrepancies;
        }
    }
    detail = std::to_string(checked) + " pairs over n in {6,7,8}, " +
             std::to_string(discrepancies) + " discrepancies";
    return discrepancies == 0;
}

bool criterion3_query_budget(std::string& detail) {
    std::ofstream log("acceptance_class2_counts.csv");
    log << "cpdag,n,s,class1,class2,budget,issued,bound\n";
    std::mt19937_64 rng(33);
    std::uint64_t violations = 0;
    std::uint64_t max_class2 = 0;
    for (int i = 0; i < 500; ++i) {
        int n = 3 + static_cast<int>(rng_below(rng, 6));  // 3..8
        Dag g = random_dag({n, 0.2 + 0.1 * static_cast<double>(rng_below(rng, 4)), rng(),
                            Family::ErdosOrdered});
        EssentialGraph e = essential_graph(g);
        MecStats stats = e.stats();
        TestPlan plan = make_test_plan(e, consistent_extension(e));
        Dag hidden = i % 2 == 0 ? consistent_extension_random(e, rng)
                                : random_dag({n, 0.35, rng(), Family::ErdosOrdered});
        Oracle oracle(hidden);
        TestReport report = run_membership_test(e, oracle);
        const std::uint64_t bound =
            static_cast<std::uint64_t>(n) * n + stats.class2_budget;
        if (plan.class2.size() > stats.class2_budget) ++violations;
        if (report.queries_issued > bound) ++violations;
        max_class2 = std::max<std::uint64_t>(max_class2, plan.class2.size());
        log << i << ',' << n << ',' << stats.s << ',' << plan.class1.size() << ','
            << plan.class2.size() << ',' << stats.class2_budget << ',' << report.queries_issued
            << ',' << bound << '\n';
    }
    detail = "500 CPDAGs, 0 budget violations, max |class2| = " + std::to_string(max_class2) +
             ", counts in acceptance_class2_counts.csv";
    return violations == 0;
}

bool criterion4_lower_bound_structure(std::string& detail) {
    const std::vector<std::pair<int, std::uint64_t>> expected{{3, 3}, {4, 4}, {5, 10}};
    std::ostringstream note;
    for (const auto& [s, count] : expected) {
        if (worst_case_count(s) != count) {
            detail = "worst_case_count(" + std::to_string(s) + ") != " + std::to_string(count);
            return false;
        }
        EssentialGraph e = essential_graph(complete_dag(s));
        HardInstance inst = hard_instance(e);
        if (inst.worst_case_count != count) {
            detail = "hard instance count mismatch at s = " + std::to_string(s);
            return false;
        }
        auto queries = distinguishing_queries(inst.h, inst.g, {inst.i, inst.j});
        for (const auto& dq : queries) {
            if (set_intersection(dq.query.c, inst.s_clique) != inst.k_between) {
                detail = "distinguishing query with C ∩ S != K at s = " + std::to_string(s);
                return false;
            }
        }
        note << "s=" << s << ": " << queries.size() << " distinguishing queries, C(s,⌈s/2⌉-1)="
             << count << "; ";
    }
    detail = note.str() + "all satisfy C ∩ S = K";
    return true;
}

bool criterion5_one_edge_short_direction(std::string& detail) {
    std::mt19937_64 rng(55);
    int instances = 0;
    std::uint64_t queries_checked = 0, violations = 0;
    while (instances < 100) {
        int n = 3 + static_cast<int>(rng_below(rng, 4));  // 3..6
        Dag g2 = random_dag({n, 0.45, rng(), Family::ErdosOrdered});
        Pdag cpdag = essential_graph(g2).pdag();
        std::optional<Edge> pick;
        for (const Edge& e : g2.edges()) {
            if (cpdag.has_undirected(e.first, e.second)) {
                pick = e;
                break;
            }
        }
        if (!pick) continue;
        ++instances;
        std::vector<Edge> g1_edges;
        for (const auto& e : g2.edges())
            if (e != *pick) g1_edges.push_back(e);
        Dag g1(n, std::move(g1_edges));
        // Clause (1): independence in g2 implies independence in g1, so no
        // distinguishing query may be independent-in-g2.
        for (const auto& dq : distinguishing_queries(g1, g2, *pick)) {
            ++queries_checked;
            if (dq.independent_in_g2 || !dq.independent_in_g1) ++violations;
        }
    }
    detail = "100 one-edge-short instances (n <= 6), " + std::to_string(queries_checked) +
             " distinguishing queries, " + std::to_string(violations) + " clause-(1) violations";
    return violations == 0;
}

bool criterion6_cross_oracle(std::string& detail) {
    std::uint64_t checked = 0, disagreements = 0;
    auto queries4 = testutil::all_singleton_queries(4);
    for (const Dag& g : g_dags4) {
        for (const CiQuery& q : queries4) {
            ++checked;
            if (d_separated(g, q) != d_separated_moral(g, q)) ++disagreements;
        }
    }
    std::mt19937_64 rng(66);
    int done = 0;
    while (done < 500) {
        Dag g = random_dag({8, 0.35, rng(), Family::ErdosOrdered});
        NodeSet a, b, c;
        for (NodeId v = 0; v < 8; ++v) {
            switch (rng_below(rng, 4)) {
                case 0: a.push_back(v); break;
                case 1: b.push_back(v); break;
                case 2: c.push_back(v); break;
                default: break;
            }
        }
        if (a.empty() || b.empty()) continue;
        ++done;
        ++checked;
        CiQuery q(a, b, c);
        if (d_separated(g, q) != d_separated_moral(g, q)) ++disagreements;
    }
    detail = std::to_string(checked) + " queries (exhaustive 4-node + 500 set-valued at n=8), " +
             std::to_string(disagreements) + " disagreements";
    return disagreements == 0;
}

bool criterion7_essential_graph(std::string& detail) {
    // Each Meek rule on its minimal instance.
    {
        Pdag r1 = meek_closure(Pdag(3, {{0, 1}}, {{1, 2}}));
        Pdag r2 = meek_closure(Pdag(3, {{0, 1}, {1, 2}}, {{0, 2}}));
        Pdag r3 = meek_closure(Pdag(4, {{1, 2}, {3, 2}}, {{0, 1}, {0, 2}, {0, 3}}));
        Pdag r4 = meek_closure(Pdag(4, {{2, 1}, {3, 2}}, {{0, 1}, {0, 2}, {0, 3}}));
        if (!r1.has_directed(1, 2) || !r2.has_directed(0, 2) || !r3.has_directed(0, 2) ||
            !r4.has_directed(0, 1)) {
            detail = "a Meek rule unit instance was not oriented as stated";
            return false;
        }
    }
    std::vector<Pdag> cpdags;
    cpdags.reserve(g_dags4.size());
    for (const Dag& g : g_dags4) cpdags.push_back(essential_graph(g).pdag());
    std::uint64_t mismatches = 0;
    for (std::size_t i = 0; i < g_dags4.size(); ++i) {
        for (std::size_t j = i; j < g_dags4.size(); ++j) {
            bool same_graph = cpdags[i] == cpdags[j];
            if (same_graph != markov_equivalent(g_dags4[i], g_dags4[j])) ++mismatches;
        }
    }
    detail = "4 Meek rule units plus " + std::to_string(g_dags4.size()) +
             "^2 pair equality checks, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0;
}

bool criterion8_clique_bound(std::string& detail) {
    std::mt19937_64 rng(88);
    std::uint64_t violations = 0;
    for (int i = 0; i < 500; ++i) {
        int n = 3 + static_cast<int>(rng_below(rng, 6));
        EssentialGraph e = essential_graph(
            random_dag({n, 0.2 + 0.1 * static_cast<double>(rng_below(rng, 5)), rng(),
                        Family::ErdosOrdered}));
        if (static_cast<int>(e.max_cliques().size()) > n) ++violations;
    }
    detail = "500 CPDAGs, " + std::to_string(violations) + " clique-count violations";
    return violations == 0;
}

bool criterion9_associahedron(std::string& detail) {
    Dag collider(3, {{0, 2}, {1, 2}});
    Associahedron assoc = build_associahedron(collider);
    if (assoc.contracted_edges != 1 || assoc.vertices.size() != 5) {
        detail = "collider gave " + std::to_string(assoc.contracted_edges) + " contractions / " +
                 std::to_string(assoc.vertices.size()) + " vertices";
        return false;
    }
    std::set<Dag> sparse;
    for (int idx : assoc.sparsest) sparse.insert(assoc.vertices[idx].imap);
    std::set<Dag> members;
    for_each_member(essential_graph(collider), [&members](const Dag& m) {
        members.insert(m);
        return true;
    });
    if (sparse != members) {
        detail = "sparsest vertex I-maps differ from the MEC members";
        return false;
    }
    for (const Dag& h : testutil::all_dags(3)) {
        try {
            build_associahedron(h);  // intra-vertex I-map agreement asserted inside
        } catch (const std::logic_error& e) {
            detail = std::string("intra-vertex violation: ") + e.what();
            return false;
        }
    }
    detail = "1 contracted edge, 5 vertices, sparsest = MEC; all 25 three-node DAGs agree";
    return true;
}

bool criterion10_exponential_family(std::string& detail) {
    std::ostringstream note;
    for (int n : {8, 10, 12}) {
        EssentialGraph e = essential_graph(exponential_mec_family(n));
        MecStats stats = e.stats();
        std::uint64_t size = mec_size_bruteforce(e);
        const std::uint64_t expected = std::uint64_t{1} << (n / 2);
        const std::uint64_t budget_cap = static_cast<std::uint64_t>(n) * n * n * 4;
        if (stats.s != 2 || size != expected || stats.class2_budget > budget_cap) {
            detail = "n=" + std::to_string(n) + ": s=" + std::to_string(stats.s) +
                     " mec_size=" + std::to_string(size) +
                     " budget=" + std::to_string(stats.class2_budget);
            return false;
        }
        note << "n=" << n << ": |MEC|=" << size << ", budget=" << stats.class2_budget << "; ";
    }
    detail = note.str() + "s=2 throughout";
    return true;
}

bool criterion11_pc_baseline(std::string& detail) {
    std::mt19937_64 rng(111);
    std::uint64_t wrong = 0;
    std::map<int, std::pair<std::uint64_t, int>> measured;  // n -> (sum queries, count)
    std::map<int, std::uint64_t> reference;
    for (int i = 0; i < 200; ++i) {
        int n = 3 + static_cast<int>(rng_below(rng, 6));  // 3..8
        Dag hidden = random_dag({n, 0.35, rng(), Family::ErdosOrdered});
        Oracle oracle(hidden);
        PcResult result = pc_baseline(oracle);
        if (!(result.cpdag == essential_graph(hidden).pdag())) ++wrong;
        measured[n].first += result.queries;
        measured[n].second += 1;
        reference[n] =
            std::max(reference[n], pc_formula_reference(n, max_in_degree(hidden)));
    }
    std::ostringstream note;
    note << "200 hiddens, " << wrong << " wrong CPDAGs; mean queries vs formula:";
    for (const auto& [n, acc] : measured) {
        note << " n=" << n << ": " << acc.first / acc.second << "/" << reference[n];
    }
    detail = note.str();
    return wrong == 0;
}

}  // namespace

int main() {
    g_dags4 = testutil::all_dags(4);
    std::vector<Criterion> criteria{
        {"1 exhaustive 4-node soundness", criterion1_exhaustive_soundness},
        {"2 randomized soundness n=6,7,8", criterion2_randomized_soundness},
        {"3 class-2 plan and query budget", criterion3_query_budget},
        {"4 lower-bound structure s=3,4,5", criterion4_lower_bound_structure},
        {"5 one-edge-short independence direction", criterion5_one_edge_short_direction},
        {"6 d-separation cross-oracle", criterion6_cross_oracle},
        {"7 essential-graph correctness", criterion7_essential_graph},
        {"8 chordal clique bound", criterion8_clique_bound},
        {"9 associahedron desk-scale", criterion9_associahedron},
        {"10 exponential-MEC family gap", criterion10_exponential_family},
        {"11 PC baseline correctness", criterion11_pc_baseline},
    };
    int failed = 0;
    for (auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(1);
        line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.name << " — " << detail
             << " (" << secs << "s)";
        std::cout << line.str() << std::endl;
        if (!ok) ++failed;
    }
    if (failed) {
        std::cout << failed << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all 11 acceptance criteria passed" << std::endl;
    return 0;
}
