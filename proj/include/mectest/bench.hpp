#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "mectest/adversary.hpp"
#include "mectest/generators.hpp"
#include "mectest/pc.hpp"
#include "mectest/polytope.hpp"
#include "mectest/tester.hpp"

namespace mectest {

// Reference query count for PC-style learners: n^2 (n-1)^(d-1) / (d-1)!,
// an order-of-magnitude figure, reported but never asserted against.
inline std::uint64_t pc_formula_reference(int n, int d) {
    const double n2 = static_cast<double>(n) * n;
    if (d <= 1) return static_cast<std::uint64_t>(std::llround(n2));
    double value = n2;
    for (int i = 1; i < d; ++i) value *= static_cast<double>(n - 1) / static_cast<double>(i);
    return static_cast<std::uint64_t>(std::llround(value));
}

struct BenchConfig {
    std::vector<Family> families{Family::ErdosOrdered};
    std::vector<int> ns{6};
    int trials = 3;
    double p = 0.3;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct BenchRow {
    std::string instance_id;
    Family family = Family::ErdosOrdered;
    std::string kase;  // member / adversarial / perturbed
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    int s = 0;
    int d = 0;  // max in-degree of the hidden graph
    std::uint64_t tester_queries = 0;
    std::uint64_t tester_unique = 0;
    bool tester_verdict = false;
    std::uint64_t class1_size = 0;
    std::uint64_t class2_size = 0;
    std::uint64_t class2_budget = 0;
    std::uint64_t learner_queries = 0;
    bool learner_correct = false;
    std::uint64_t pc_formula = 0;
};

namespace detail {

// Flips one covered edge (staying in the MEC), then adds or removes one
// random edge, which changes the skeleton and so leaves the MEC.
inline Dag perturb_dag(const Dag& g, std::mt19937_64& rng) {
    Dag current = g;
    std::vector<Edge> covered = covered_edges(current);
    if (!covered.empty()) {
        Edge pick = covered[rng_below(rng, covered.size())];
        std::vector<Edge> flipped;
        for (const auto& e : current.edges()) {
            flipped.push_back(e == pick ? Edge{pick.second, pick.first} : e);
        }
        current = Dag(current.node_count(), std::move(flipped));
    }
    const int n = current.node_count();
    for (int attempt = 0; attempt < 4 * n * n + 8; ++attempt) {
        NodeId u = static_cast<NodeId>(rng_below(rng, n));
        NodeId v = static_cast<NodeId>(rng_below(rng, n));
        if (u == v) continue;
        std::vector<Edge> edges = current.edges();
        if (current.adjacent(u, v)) {
            Edge target = current.has_edge(u, v) ? Edge{u, v} : Edge{v, u};
            edges.erase(std::find(edges.begin(), edges.end(), target));
            return Dag(n, std::move(edges));
        }
        edges.emplace_back(u, v);
        try {
            return Dag(n, std::move(edges));
        } catch (const std::invalid_argument&) {
            // adding u -> v closed a cycle; try another pair
        }
    }
    // Dense pathological case: drop the first edge.
    std::vector<Edge> edges = current.edges();
    if (!edges.empty()) edges.erase(edges.begin());
    return Dag(n, std::move(edges));
}

inline BenchRow bench_instance(Family family, int n, double p, int trial, std::uint64_t seed) {
    std::uint64_t sub =
        mix_seed(seed, mix_seed(static_cast<std::uint64_t>(family) * 1000003 + n,
                                static_cast<std::uint64_t>(trial)));
    std::mt19937_64 rng(sub);
    GenConfig cfg{n, p, sub, family};
    Dag g = generate(cfg);
    EssentialGraph e = essential_graph(g);

    BenchRow row;
    row.family = family;
    row.n = n;
    row.p = family == Family::ErdosOrdered ? p : 0.0;
    row.seed = sub;
    row.instance_id = family_name(family) + "-n" + std::to_string(n) + "-t" + std::to_string(trial);

    std::optional<Dag> hidden;
    switch (trial % 3) {
        case 0:
            row.kase = "member";
            hidden = consistent_extension_random(e, rng);
            break;
        case 1:
            if (e.max_undirected_clique_size() >= 2) {
                row.kase = "adversarial";
                hidden = hard_instance(e).h;
                break;
            }
            [[fallthrough]];
        default:
            row.kase = "perturbed";
            hidden = perturb_dag(g, rng);
            break;
    }

    MecStats stats = e.stats();
    row.s = stats.s;
    row.d = max_in_degree(*hidden);
    row.class2_budget = stats.class2_budget;
    row.class1_size = class_i_plan(e, consistent_extension(e)).size();
    row.class2_size = class_ii_plan(e).size();

    Oracle tester_oracle(*hidden);
    TestReport report = run_membership_test(e, tester_oracle);
    row.tester_queries = report.queries_issued;
    row.tester_unique = report.queries_unique;
    row.tester_verdict = report.verdict;

    Oracle learner_oracle(*hidden);
    PcResult pc = pc_baseline(learner_oracle);
    row.learner_queries = pc.queries;
    row.learner_correct = pc.cpdag == essential_graph(*hidden).pdag();
    row.pc_formula = pc_formula_reference(n, row.d);
    return row;
}

}  // namespace detail

// One row per (family, n, trial), deterministic under the config seed.
// Trials run in parallel with one oracle per trial; rows come back in
// instance order regardless of thread count.
inline std::vector<BenchRow> run_benchmark(const BenchConfig& cfg) {
    struct Job {
        Family family;
        int n;
        int trial;
    };
    std::vector<Job> jobs;
    for (Family family : cfg.families) {
        for (int n : cfg.ns) {
            for (int t = 0; t < cfg.trials; ++t) jobs.push_back({family, n, t});
        }
    }
    std::vector<BenchRow> rows(jobs.size());
    const int threads = std::max(1, cfg.threads);
    auto worker = [&](int offset) {
        for (std::size_t idx = offset; idx < jobs.size(); idx += threads) {
            const Job& job = jobs[idx];
            rows[idx] = detail::bench_instance(job.family, job.n, cfg.p, job.trial, cfg.seed);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    return rows;
}

inline const char* bench_csv_columns() {
    return "instance_id,family,case,n,p,seed,s,d,tester_queries,tester_unique,tester_verdict,"
           "class1_size,class2_size,class2_budget,learner_queries,learner_correct,"
           "pc_formula_reference";
}

inline void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << "# mectest bench csv v1\n";
    os << bench_csv_columns() << "\n";
    char pbuf[32];
    for (const auto& r : rows) {
        std::snprintf(pbuf, sizeof(pbuf), "%.4f", r.p);
        os << r.instance_id << ',' << family_name(r.family) << ',' << r.kase << ',' << r.n << ','
           << pbuf << ',' << r.seed << ',' << r.s << ',' << r.d << ',' << r.tester_queries << ','
           << r.tester_unique << ',' << (r.tester_verdict ? 1 : 0) << ',' << r.class1_size << ','
           << r.class2_size << ',' << r.class2_budget << ',' << r.learner_queries << ','
           << (r.learner_correct ? 1 : 0) << ',' << r.pc_formula << '\n';
    }
}

}  // namespace mectest
