#include "mectest/mec.hpp"

#include <gtest/gtest.h>

#include "mectest/generators.hpp"
#include "test_util.hpp"

using namespace mectest;

namespace {

Dag collider3() { return Dag(3, {{0, 2}, {1, 2}}); }
Dag path3() { return Dag(3, {{0, 1}, {1, 2}}); }

EssentialGraph random_cpdag(int n, double p, std::uint64_t seed) {
    return essential_graph(random_dag({n, p, seed, Family::ErdosOrdered}));
}

TEST(MarkovEquivalent, SkeletonAndVStructures) {
    EXPECT_TRUE(markov_equivalent(path3(), Dag(3, {{1, 0}, {1, 2}})));
    EXPECT_FALSE(markov_equivalent(collider3(), Dag(3, {{0, 2}, {2, 1}})));
    EXPECT_TRUE(markov_equivalent(collider3(), collider3()));
    EXPECT_THROW(markov_equivalent(path3(), Dag(4, {})), std::invalid_argument);
}

TEST(EssentialGraphOp, ColliderStaysDirectedPathGoesUndirected) {
    EssentialGraph e = essential_graph(collider3());
    EXPECT_EQ(e.pdag().directed_edges(), (std::vector<Edge>{{0, 2}, {1, 2}}));
    EXPECT_TRUE(e.pdag().undirected_edges().empty());

    EssentialGraph p = essential_graph(path3());
    EXPECT_TRUE(p.pdag().directed_edges().empty());
    EXPECT_EQ(p.pdag().undirected_edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(EssentialGraphOp, EqualAcrossEquivalentInputs) {
    EXPECT_EQ(essential_graph(path3()).pdag(), essential_graph(Dag(3, {{1, 0}, {1, 2}})).pdag());
}

// One minimal instance per Meek rule, asserting the rule's stated conclusion.
TEST(MeekRules, Rule1) {
    // 1->2 - 3 with 1 and 3 non-adjacent orients 2->3.
    Pdag p(3, {{0, 1}}, {{1, 2}});
    Pdag closed = meek_closure(p);
    EXPECT_TRUE(closed.has_directed(1, 2));
    EXPECT_TRUE(closed.undirected_edges().empty());
}

TEST(MeekRules, Rule2) {
    // 1->2->3 with 1 - 3 orients 1->3.
    Pdag p(3, {{0, 1}, {1, 2}}, {{0, 2}});
    Pdag closed = meek_closure(p);
    EXPECT_TRUE(closed.has_directed(0, 2));
}

TEST(MeekRules, Rule3) {
    // 1-2, 1-3, 1-4 undirected; 2->3, 4->3; 2 and 4 non-adjacent: orients 1->3.
    Pdag p(4, {{1, 2}, {3, 2}}, {{0, 1}, {0, 2}, {0, 3}});
    Pdag closed = meek_closure(p);
    EXPECT_TRUE(closed.has_directed(0, 2));
    EXPECT_TRUE(closed.has_undirected(0, 1));
    EXPECT_TRUE(closed.has_undirected(0, 3));
}

TEST(MeekRules, Rule4) {
    // 1-2, 1-3, 1-4 undirected; 3->2, 4->3; 2 and 4 non-adjacent: orients 1->2.
    Pdag p(4, {{2, 1}, {3, 2}}, {{0, 1}, {0, 2}, {0, 3}});
    Pdag closed = meek_closure(p);
    EXPECT_TRUE(closed.has_directed(0, 1));
}

TEST(MeekClosure, IdempotentOnClosedInput) {
    Pdag closed = essential_graph(random_dag({6, 0.4, 3, Family::ErdosOrdered})).pdag();
    EXPECT_EQ(meek_closure(closed), closed);
}

TEST(MeekClosure, CommutesWithRelabeling) {
    // The fixed point does not depend on work-list processing order; check
    // it commutes with node relabeling on random inputs.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Dag g = random_dag({6, 0.4, seed, Family::ErdosOrdered});
        std::vector<NodeId> perm{4, 2, 5, 0, 3, 1};
        std::vector<Edge> mapped;
        for (const auto& [u, v] : g.edges()) mapped.emplace_back(perm[u], perm[v]);
        Pdag closed = essential_graph(g).pdag();
        Pdag closed_mapped = essential_graph(Dag(6, std::move(mapped))).pdag();
        std::vector<Edge> dir, und;
        for (const auto& [u, v] : closed.directed_edges()) dir.emplace_back(perm[u], perm[v]);
        for (const auto& [u, v] : closed.undirected_edges())
            und.push_back(detail::ordered(perm[u], perm[v]));
        EXPECT_EQ(Pdag(6, dir, und), closed_mapped);
    }
}

TEST(IsChordal, SmallCases) {
    EXPECT_FALSE(is_chordal(UndirectedGraph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})).chordal);
    auto tree = is_chordal(UndirectedGraph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}));
    EXPECT_TRUE(tree.chordal);
    ASSERT_TRUE(tree.peo.has_value());
    EXPECT_TRUE(is_chordal(UndirectedGraph(3, {{0, 1}, {1, 2}, {0, 2}})).chordal);
}

TEST(MaximalCliques, SingletonsTriangleAndStats) {
    EssentialGraph directed = essential_graph(collider3());
    EXPECT_EQ(directed.max_cliques(),
              (std::vector<NodeSet>{{0}, {1}, {2}}));
    EXPECT_EQ(directed.max_undirected_clique_size(), 1);

    EssentialGraph triangle = essential_graph(Dag(3, {{0, 1}, {0, 2}, {1, 2}}));
    EXPECT_EQ(triangle.max_cliques(), (std::vector<NodeSet>{{0, 1, 2}}));
    EXPECT_EQ(triangle.max_undirected_clique_size(), 3);
    MecStats stats = triangle.stats();
    EXPECT_EQ(stats.class2_budget, 216u);  // 3^3 * 2^3
    EXPECT_EQ(stats.num_max_cliques, 1);
}

TEST(MaximalCliques, StarPlusTriangleDocExample) {
    // Six nodes: 1,2,3 form an oriented triangle and every other node feeds
    // node 4, giving in-degree 5 at node 4 and an undirected triangle in the
    // essential graph.
    Dag g(6, {{0, 3}, {1, 3}, {2, 3}, {4, 3}, {5, 3}, {0, 1}, {0, 2}, {1, 2}});
    EXPECT_EQ(max_in_degree(g), 5);
    EssentialGraph e = essential_graph(g);
    EXPECT_EQ(e.max_undirected_clique_size(), 3);
    EXPECT_TRUE(e.pdag().has_directed(4, 3));
    EXPECT_TRUE(e.pdag().has_undirected(0, 1));
}

TEST(MaximalCliques, CountAtMostNOnRandomCpdags) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        int n = 3 + static_cast<int>(seed % 6);
        EssentialGraph e = random_cpdag(n, 0.4, seed);
        EXPECT_LE(static_cast<int>(e.max_cliques().size()), n);
    }
}

TEST(UndirectedCliquesWithin, TriangleEnumeratesAllSubsets) {
    EssentialGraph triangle = essential_graph(Dag(3, {{0, 1}, {0, 2}, {1, 2}}));
    auto cliques = undirected_cliques_within(triangle, {0, 1, 2});
    std::vector<NodeSet> expect{{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    EXPECT_EQ(cliques, expect);
}

TEST(UndirectedCliquesWithin, DegenerateInputs) {
    EssentialGraph directed = essential_graph(collider3());
    EXPECT_EQ(undirected_cliques_within(directed, {0, 1, 2}),
              (std::vector<NodeSet>{{}, {0}, {1}, {2}}));
    EXPECT_EQ(undirected_cliques_within(directed, {}), (std::vector<NodeSet>{{}}));
}

TEST(ConsistentExtension, DeterministicCases) {
    EXPECT_EQ(consistent_extension(essential_graph(collider3())), collider3());
    EssentialGraph single = validate_cpdag(Pdag(2, {}, {{0, 1}}));
    EXPECT_EQ(consistent_extension(single), Dag(2, {{0, 1}}));
}

TEST(ConsistentExtension, RoundTripOnRandomCpdags) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        int n = 3 + static_cast<int>(seed % 6);  // up to 8
        EssentialGraph e = random_cpdag(n, 0.45, seed);
        EXPECT_EQ(essential_graph(consistent_extension(e)).pdag(), e.pdag());
    }
}

TEST(ConsistentExtensionRandom, AlwaysAMember) {
    std::mt19937_64 rng(42);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        int n = 3 + static_cast<int>(seed % 5);
        EssentialGraph e = random_cpdag(n, 0.5, seed);
        Dag member = consistent_extension_random(e, rng);
        EXPECT_EQ(essential_graph(member).pdag(), e.pdag());
    }
}

TEST(CliqueUpstreamExtension, TriangleWithInternalOrder) {
    EssentialGraph triangle = essential_graph(Dag(3, {{0, 1}, {0, 2}, {1, 2}}));
    Dag member = clique_upstream_extension(triangle, {0, 1}, {1, 0});
    EXPECT_TRUE(member.has_edge(1, 0));
    EXPECT_TRUE(member.has_edge(0, 2));
    EXPECT_TRUE(member.has_edge(1, 2));
    EXPECT_TRUE(markov_equivalent(member, consistent_extension(triangle)));
}

TEST(CliqueUpstreamExtension, WholeComponentAndEmptyK) {
    EssentialGraph triangle = essential_graph(Dag(3, {{0, 1}, {0, 2}, {1, 2}}));
    Dag by_order = clique_upstream_extension(triangle, {0, 1, 2}, {2, 0, 1});
    EXPECT_EQ(by_order, acyclic_completion(triangle.pdag(), {2, 0, 1}));
    EXPECT_EQ(clique_upstream_extension(triangle, {}, {}), consistent_extension(triangle));
    EXPECT_THROW(clique_upstream_extension(essential_graph(collider3()), {0, 1}, {0, 1}),
                 std::invalid_argument);
}

TEST(CliqueUpstreamExtension, MemberForEveryMaxCliqueAndOrder) {
    std::mt19937_64 rng(7);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        int n = 3 + static_cast<int>(seed % 5);  // up to 7
        EssentialGraph e = random_cpdag(n, 0.5, seed);
        for (const NodeSet& clique : e.max_cliques()) {
            std::vector<NodeId> order(clique.begin(), clique.end());
            rng_shuffle(rng, order);
            Dag member = clique_upstream_extension(e, clique, order);
            ASSERT_EQ(essential_graph(member).pdag(), e.pdag());
            // K is most upstream: its internal edges follow `order`, and no
            // edge points from outside the clique into it within its chain
            // component.
            for (std::size_t x = 0; x < order.size(); ++x) {
                for (std::size_t y = x + 1; y < order.size(); ++y) {
                    ASSERT_TRUE(member.has_edge(order[x], order[y]));
                }
            }
            for (NodeId v : clique) {
                for (NodeId w : e.undirected_neighbors(v)) {
                    if (!set_contains(clique, w)) ASSERT_TRUE(member.has_edge(v, w));
                }
            }
        }
    }
}

TEST(ValidateCpdag, WitnessesNamedPerFailure) {
    try {
        validate_cpdag(Pdag(4, {}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
        FAIL() << "expected NotChordal";
    } catch (const CpdagValidationError& e) {
        EXPECT_EQ(e.kind, CpdagValidationError::Kind::NotChordal);
        EXPECT_EQ(e.witness.size(), 4u);
    }

    try {
        validate_cpdag(Pdag(3, {{0, 1}}, {{1, 2}}));
        FAIL() << "expected NotMeekClosed";
    } catch (const CpdagValidationError& e) {
        EXPECT_EQ(e.kind, CpdagValidationError::Kind::NotMeekClosed);
        EXPECT_NE(std::string(e.what()).find("Meek rule 1"), std::string::npos);
    }

    try {
        validate_cpdag(Pdag(3, {{0, 1}, {2, 0}}, {{1, 2}}));
        FAIL() << "expected NotChainGraph";
    } catch (const CpdagValidationError& e) {
        EXPECT_EQ(e.kind, CpdagValidationError::Kind::NotChainGraph);
        EXPECT_GE(e.witness.size(), 3u);
    }

    try {
        validate_cpdag(Pdag(2, {{0, 1}}, {}));
        FAIL() << "expected NotAnEssentialGraph";
    } catch (const CpdagValidationError& e) {
        EXPECT_EQ(e.kind, CpdagValidationError::Kind::NotAnEssentialGraph);
        EXPECT_EQ(e.witness, (std::vector<NodeId>{0, 1}));
    }
}

TEST(ValidateCpdag, AcceptsEssentialGraphs) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        int n = 3 + static_cast<int>(seed % 6);
        Pdag closed = random_cpdag(n, 0.4, seed).pdag();
        EXPECT_NO_THROW(validate_cpdag(closed));
    }
}

TEST(MecSizeBruteforce, SmallCounts) {
    EXPECT_EQ(mec_size_bruteforce(essential_graph(collider3())), 1u);
    EXPECT_EQ(mec_size_bruteforce(validate_cpdag(Pdag(2, {}, {{0, 1}}))), 2u);
    EssentialGraph triangle = essential_graph(Dag(3, {{0, 1}, {0, 2}, {1, 2}}));
    EXPECT_EQ(mec_size_bruteforce(triangle), 6u);
    EXPECT_THROW(mec_size_bruteforce(essential_graph(Dag(13, {}))), std::invalid_argument);
}

TEST(MecSizeBruteforce, MatchesEnumerationOn3Nodes) {
    auto dags = testutil::all_dags(3);
    for (const Dag& g : dags) {
        std::uint64_t expect = 0;
        for (const Dag& h : dags)
            if (markov_equivalent(g, h)) ++expect;
        EXPECT_EQ(mec_size_bruteforce(essential_graph(g)), expect);
    }
}

TEST(MecSizeBruteforce, MatchingFamilyIsExponentialWithS2) {
    for (int n : {4, 6, 8, 10, 12}) {
        EssentialGraph e = essential_graph(exponential_mec_family(n));
        EXPECT_EQ(e.max_undirected_clique_size(), 2);
        EXPECT_EQ(mec_size_bruteforce(e), std::uint64_t{1} << (n / 2));
    }
}

TEST(ForEachMember, EnumeratesExactlyTheClass) {
    auto dags = testutil::all_dags(3);
    for (const Dag& g : dags) {
        std::set<Dag> expect;
        for (const Dag& h : dags)
            if (markov_equivalent(g, h)) expect.insert(h);
        std::set<Dag> got;
        for_each_member(essential_graph(g), [&](const Dag& m) {
            got.insert(m);
            return true;
        });
        EXPECT_EQ(got, expect);
    }
}

TEST(EssentialGraphEquality, MatchesMarkovEquivalenceOn3Nodes) {
    auto dags = testutil::all_dags(3);
    std::vector<Pdag> cpdags;
    cpdags.reserve(dags.size());
    for (const Dag& g : dags) cpdags.push_back(essential_graph(g).pdag());
    for (std::size_t i = 0; i < dags.size(); ++i) {
        for (std::size_t j = 0; j < dags.size(); ++j) {
            EXPECT_EQ(cpdags[i] == cpdags[j], markov_equivalent(dags[i], dags[j]));
        }
    }
}

TEST(EssentialGraph, MeekClosureIsMonotone) {
    // The closure never un-orients: every directed edge of the input pattern
    // stays directed in the fixed point.
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Dag g = random_dag({6, 0.45, seed, Family::ErdosOrdered});
        Pdag closed = essential_graph(g).pdag();
        for (const auto& vs : v_structures(g)) {
            EXPECT_TRUE(closed.has_directed(vs[0], vs[1]));
            EXPECT_TRUE(closed.has_directed(vs[2], vs[1]));
        }
    }
}

}  // namespace
