// mectest: MEC membership testing against a d-separation oracle, plus the
// adversarial instance generator, DAG-associahedron explorer, generators,
// and query-count benchmarks. Exit codes: 0 success/member, 3 non-member,
// 2 invalid input, 1 internal error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mectest/io.hpp"

namespace {

using namespace mectest;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNonMember = 3;

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string format = "text";
    bool quiet = false;

    bool json() const { return format == "json"; }
};

Pdag read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::invalid_argument("cannot open " + path);
    return parse_edge_list(in);
}

Dag read_dag(const std::string& path) { return require_dag(read_graph(path), path.c_str()); }

// A MEC may be given as a DAG representative or as a CPDAG; both are
// normalized to a validated essential graph.
EssentialGraph read_mec(const std::string& path) {
    Pdag p = read_graph(path);
    if (p.fully_directed()) return essential_graph(Dag(p.node_count(), p.directed_edges()));
    return validate_cpdag(p);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out.good()) throw std::invalid_argument("cannot write " + path);
    out << content;
}

void emit(const GlobalOpts& g, const std::string& text) {
    if (!g.quiet) std::cout << text;
}

int cmd_essential(const GlobalOpts& g, const std::string& dag_path, const std::string& out_path,
                  const std::string& dot_path) {
    EssentialGraph e = essential_graph(read_dag(dag_path));
    std::string edge_list = format_edge_list(e.pdag());
    if (!out_path.empty()) write_file(out_path, edge_list);
    if (!dot_path.empty()) write_file(dot_path, to_dot(e.pdag(), "cpdag"));
    if (g.json()) {
        nlohmann::json j{{"stats", to_json(e.stats())}, {"edge_list", edge_list}};
        std::cout << j.dump(2) << "\n";
    } else if (out_path.empty()) {
        std::cout << edge_list;
    } else {
        emit(g, "wrote " + out_path + "\n");
    }
    return kExitOk;
}

int cmd_validate(const GlobalOpts& g, const std::string& cpdag_path) {
    try {
        EssentialGraph e = validate_cpdag(read_graph(cpdag_path));
        if (g.json()) {
            std::cout << nlohmann::json{{"valid", true}, {"stats", to_json(e.stats())}}.dump(2)
                      << "\n";
        } else {
            emit(g, "valid CPDAG (s = " + std::to_string(e.max_undirected_clique_size()) + ")\n");
        }
        return kExitOk;
    } catch (const CpdagValidationError& err) {
        if (g.json()) {
            std::cout << nlohmann::json{{"valid", false},
                                        {"reason", err.what()},
                                        {"witness", to_json_ids(err.witness)}}
                             .dump(2)
                      << "\n";
        } else {
            std::cerr << "invalid CPDAG: " << err.what() << "\n";
        }
        return kExitInvalid;
    }
}

int cmd_test(const GlobalOpts& g, const std::string& mec_path, const std::string& hidden_path,
             bool exhaustive, const std::string& query_log_path) {
    EssentialGraph e = read_mec(mec_path);
    Dag hidden = read_dag(hidden_path);
    Oracle oracle(hidden);
    std::ofstream log_stream;
    if (!query_log_path.empty()) {
        log_stream.open(query_log_path);
        if (!log_stream.good()) throw std::invalid_argument("cannot write " + query_log_path);
        oracle.set_log([&log_stream](const CiQuery& q, bool answer, std::uint64_t total,
                                     std::uint64_t unique) {
            nlohmann::json j = to_json(q);
            j["independent"] = answer;
            j["total"] = total;
            j["unique"] = unique;
            log_stream << j.dump() << "\n";
        });
    }
    TestReport report = run_membership_test(e, oracle, exhaustive);
    if (g.json()) {
        std::cout << to_json(report).dump(2) << "\n";
    } else {
        emit(g, std::string("verdict: ") + (report.verdict ? "member" : "non-member") + "\n");
        emit(g, "queries issued: " + std::to_string(report.queries_issued) +
                    " (unique: " + std::to_string(report.queries_unique) + ")\n");
        if (!report.verdict) {
            for (const TestFailure& f : report.all_failures) {
                emit(g, "failing class-" + std::string(f.cls == TestClass::ClassI ? "I" : "II") +
                            " query: " + to_json(f.query).dump() + " expected " +
                            (f.expected_independent ? "independent" : "dependent") + ", got " +
                            (f.got_independent ? "independent" : "dependent") + "\n");
            }
        }
    }
    return report.verdict ? kExitOk : kExitNonMember;
}

int cmd_adversary(const GlobalOpts& g, const std::string& mec_path, const std::string& emit_hidden,
                  bool verify) {
    EssentialGraph e = read_mec(mec_path);
    HardInstance inst = hard_instance(e);
    if (!emit_hidden.empty()) write_file(emit_hidden, format_edge_list(inst.h));
    nlohmann::json j = to_json(inst);
    if (verify) {
        if (e.node_count() <= 9) {
            SandwichCheck sandwich = check_conditioning_sandwich(inst.h, inst.g, {inst.i, inst.j});
            j["sandwich_holds"] = sandwich.holds;
            j["sandwich_upper_equality"] = sandwich.upper_equality;
            j["distinguishing_queries"] = sandwich.distinguishing_count;
        } else {
            j["sandwich_holds"] = nullptr;  // outside the brute-force guard
        }
    }
    if (g.json()) {
        std::cout << j.dump(2) << "\n";
    } else {
        emit(g, "hard instance summary: " + j.dump() + "\n");
        if (!emit_hidden.empty()) emit(g, "wrote hidden graph to " + emit_hidden + "\n");
    }
    return kExitOk;
}

int cmd_polytope(const GlobalOpts& g, const std::string& hidden_path, const std::string& dot_path,
                 const std::string& walk_from) {
    Dag hidden = read_dag(hidden_path);
    Associahedron assoc = build_associahedron(hidden);
    if (!dot_path.empty()) write_file(dot_path, to_dot(assoc));
    nlohmann::json j{{"n", assoc.n},
                     {"vertices", assoc.vertices.size()},
                     {"edges", assoc.edges.size()},
                     {"contracted_permutohedron_edges", assoc.contracted_edges}};
    nlohmann::json sparse = nlohmann::json::array();
    for (int idx : assoc.sparsest) {
        sparse.push_back({{"vertex", idx},
                          {"edge_count", assoc.vertices[idx].edge_count},
                          {"edge_list", format_edge_list(assoc.vertices[idx].imap)}});
    }
    j["sparsest"] = sparse;
    if (!walk_from.empty()) {
        Dag start = read_dag(walk_from);
        Oracle oracle(hidden);
        EdgewalkResult walk = edgewalk_sparsify(oracle, start);
        EssentialGraph start_mec = essential_graph(start);
        j["edgewalk"] = {{"start_edges", start.edge_count()},
                         {"final_edges", walk.final_dag.edge_count()},
                         {"moves", walk.moves},
                         {"flips_explored", walk.flips_explored},
                         {"queries", walk.queries},
                         {"class2_plan_size", class_ii_plan(start_mec).size()}};
    }
    if (g.json()) {
        std::cout << j.dump(2) << "\n";
    } else {
        emit(g, "associahedron: " + std::to_string(assoc.vertices.size()) + " vertices, " +
                    std::to_string(assoc.edges.size()) + " edges (" +
                    std::to_string(assoc.contracted_edges) + " contracted)\n");
        for (int idx : assoc.sparsest) {
            emit(g, "sparsest vertex " + std::to_string(idx) + " (" +
                        std::to_string(assoc.vertices[idx].edge_count) + " edges)\n");
        }
        if (j.contains("edgewalk")) emit(g, "edgewalk: " + j["edgewalk"].dump() + "\n");
    }
    return kExitOk;
}

int cmd_gen(const GlobalOpts& g, const std::string& family, int n, double p,
            const std::string& out_path) {
    GenConfig cfg{n, p, g.seed, parse_family(family)};
    Dag dag = generate(cfg);
    std::string edge_list = format_edge_list(dag);
    if (!out_path.empty()) {
        write_file(out_path, edge_list);
        emit(g, "wrote " + out_path + "\n");
    } else {
        std::cout << edge_list;
    }
    return kExitOk;
}

int cmd_bench(const GlobalOpts& g, const std::vector<std::string>& families,
              const std::vector<int>& ns, int trials, double p, int threads,
              const std::string& out_path) {
    BenchConfig cfg;
    cfg.families.clear();
    for (const std::string& f : families) cfg.families.push_back(parse_family(f));
    if (!ns.empty()) cfg.ns = ns;
    cfg.trials = trials;
    cfg.p = p;
    cfg.seed = g.seed;
    cfg.threads = threads;
    std::vector<BenchRow> rows = run_benchmark(cfg);
    std::ostringstream os;
    if (g.json()) {
        os << to_json(rows).dump(2) << "\n";
    } else {
        write_csv(os, rows);
    }
    if (!out_path.empty()) {
        write_file(out_path, os.str());
        emit(g, "wrote " + out_path + "\n");
    } else {
        std::cout << os.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov equivalence class membership testing with a counting CI oracle"};
    app.require_subcommand(1);

    GlobalOpts global;
    app.add_option("--seed", global.seed, "Seed for generators and benchmarks");
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--quiet", global.quiet, "Suppress informational output");

    std::string dag_path, mec_path, hidden_path, cpdag_path, out_path, dot_path;
    std::string emit_hidden, walk_from, query_log, family = "erdos-ordered";
    bool exhaustive = false, verify = false, json_flag = false;
    int n = 6, trials = 3, threads = 1;
    double p = 0.3;
    std::vector<std::string> bench_families{"erdos-ordered"};
    std::vector<int> bench_ns;

    CLI::App* essential = app.add_subcommand("essential", "Essential graph (CPDAG) of a DAG");
    essential->add_option("--dag", dag_path, "DAG edge-list file")->required();
    essential->add_option("--out", out_path, "Write the CPDAG edge list here");
    essential->add_option("--dot", dot_path, "Write a DOT rendering here");
    essential->add_flag("--json", json_flag, "Shorthand for --format json");

    CLI::App* test = app.add_subcommand("test", "Test whether the hidden DAG belongs to the MEC");
    test->add_option("--mec", mec_path, "MEC file (DAG representative or CPDAG)")->required();
    test->add_option("--hidden", hidden_path, "Hidden DAG edge-list file")->required();
    test->add_flag("--exhaustive", exhaustive, "Run the full plan and report every failure");
    test->add_option("--query-log", query_log, "Write oracle queries as JSON lines");
    test->add_flag("--json", json_flag, "Shorthand for --format json");

    CLI::App* adversary =
        app.add_subcommand("adversary", "One-edge-short hard instance for the MEC");
    adversary->add_option("--mec", mec_path, "MEC file (DAG representative or CPDAG)")->required();
    adversary->add_option("--emit-hidden", emit_hidden, "Write the hidden graph here");
    adversary->add_flag("--verify", verify, "Brute-force the distinguishing-query sandwich");
    adversary->add_flag("--json", json_flag, "Shorthand for --format json");

    CLI::App* polytope = app.add_subcommand("polytope", "DAG associahedron of a hidden DAG");
    polytope->add_option("--hidden", hidden_path, "Hidden DAG edge-list file")->required();
    polytope->add_option("--dot", dot_path, "Write the contracted polytope graph here");
    polytope->add_option("--walk-from", walk_from, "Run the edgewalk demo from this DAG");
    polytope->add_flag("--json", json_flag, "Shorthand for --format json");

    CLI::App* gen = app.add_subcommand("gen", "Write a generator instance");
    gen->add_option("--family", family,
                    "erdos-ordered | clique | matching-family | appendix4-variant");
    gen->add_option("--n", n, "Node count")->required();
    gen->add_option("--p", p, "Edge probability (erdos-ordered)");
    gen->add_option("--out", out_path, "Write the edge list here");

    CLI::App* bench = app.add_subcommand("bench", "Query-count benchmark (CSV or JSON)");
    bench->add_option("--family", bench_families, "Families to run");
    bench->add_option("--n", bench_ns, "Node counts to run");
    bench->add_option("--trials", trials, "Trials per (family, n)");
    bench->add_option("--p", p, "Edge probability for erdos-ordered");
    bench->add_option("--threads", threads, "Worker threads");
    bench->add_option("--out", out_path, "Write output here instead of stdout");
    bench->add_flag("--json", json_flag, "Shorthand for --format json");

    CLI::App* validate = app.add_subcommand("validate", "Validate a CPDAG file");
    validate->add_option("--cpdag", cpdag_path, "CPDAG edge-list file")->required();
    validate->add_flag("--json", json_flag, "Shorthand for --format json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }
    if (json_flag) global.format = "json";

    try {
        if (essential->parsed()) return cmd_essential(global, dag_path, out_path, dot_path);
        if (test->parsed()) return cmd_test(global, mec_path, hidden_path, exhaustive, query_log);
        if (adversary->parsed()) return cmd_adversary(global, mec_path, emit_hidden, verify);
        if (polytope->parsed()) return cmd_polytope(global, hidden_path, dot_path, walk_from);
        if (gen->parsed()) return cmd_gen(global, family, n, p, out_path);
        if (bench->parsed())
            return cmd_bench(global, bench_families, bench_ns, trials, p, threads, out_path);
        if (validate->parsed()) return cmd_validate(global, cpdag_path);
        std::cerr << "no subcommand\n";
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
