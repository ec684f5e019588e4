// sgmine: sampling-based top-k frequent subgraph miner with an exhaustive
// enumeration oracle and rank-quality metrics for validating sampled output.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgm/sgm.hpp"

namespace {

sgm::GraphDatabase load_database(const std::string& path, bool print_report = true) {
    std::ifstream in(path);
    if (!in) throw sgm::Error("cannot open input file: " + path);
    sgm::ParseReport report;
    sgm::GraphDatabase db = sgm::parse_database(in, &report);
    if (print_report && report.rejected() > 0) {
        std::cerr << "warning: skipped " << report.rejected() << " of "
                  << report.transactions_seen << " transactions";
        if (report.rejected_nonsimple)
            std::cerr << " (" << report.rejected_nonsimple << " non-simple)";
        if (report.rejected_disconnected)
            std::cerr << " (" << report.rejected_disconnected << " disconnected)";
        if (report.rejected_empty) std::cerr << " (" << report.rejected_empty << " empty)";
        std::cerr << '\n';
        for (const auto& w : report.warnings) std::cerr << "  " << w << '\n';
    }
    return db;
}

sgm::ScoreKind parse_score(const std::string& s) {
    if (s == "s1") return sgm::ScoreKind::MeanEdgeSupport;
    if (s == "s2") return sgm::ScoreKind::SupportIntersection;
    if (s == "uniform") return sgm::ScoreKind::Uniform;
    throw sgm::Error("unknown score '" + s + "' (expected s1, s2 or uniform)");
}

sgm::MhMode parse_mode(const std::string& s) {
    if (s == "paper") return sgm::MhMode::LoopUntilAccept;
    if (s == "strict") return sgm::MhMode::SingleProposal;
    throw sgm::Error("unknown mh-mode '" + s + "' (expected paper or strict)");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw sgm::Error("cannot open output file: " + path);
    out << content;
    if (!out) throw sgm::Error("failed writing " + path);
}

int cmd_mine(const std::string& input, const std::string& output, sgm::MineConfig cfg) {
    const sgm::GraphDatabase db = load_database(input);
    const sgm::EdgeSupportIndex index = sgm::build_edge_support_index(db);
    const sgm::MineResult result = cfg.num_chains > 1 ? sgm::run_chains(db, index, cfg)
                                                      : sgm::mine(db, index, cfg);

    std::ostringstream buf;
    sgm::write_result_file(result, buf);
    write_file(output, buf.str());

    std::cout << "mined " << result.top_k.size() << " patterns in " << result.iterations_run
              << " iterations (seed " << cfg.seed << ")\n";
    std::cout << "top " << std::min<std::size_t>(10, result.top_k.size()) << ":\n";
    for (std::size_t i = 0; i < result.top_k.size() && i < 10; ++i) {
        const auto& e = result.top_k[i];
        std::cout << "  " << (i + 1) << ". support_a=" << e.support_a() << " score=" << e.score
                  << "  " << e.code << '\n';
    }
    std::cout << std::fixed << std::setprecision(3) << "timings: sampling "
              << result.timings.sampling_sec << " s, canonical " << result.timings.canonical_sec
              << " s, queue " << result.timings.queue_sec << " s, total "
              << result.timings.total_sec << " s\n";
    std::cout.unsetf(std::ios::fixed);
    if (!result.trace.empty())
        std::cout << "final mean pairwise jaccard distance: " << result.trace.back().mean_jaccard
                  << '\n';
    std::cout << "wrote " << output << '\n';
    return 0;
}

int cmd_enumerate(const std::string& input, const std::string& output,
                  const std::string& counts_output, std::uint32_t p, double cap) {
    const sgm::GraphDatabase db = load_database(input);
    const sgm::GroundTruth truth = sgm::build_ground_truth(db, p, cap);

    std::ostringstream tbuf;
    sgm::write_truth_tsv(truth, tbuf);
    write_file(output, tbuf.str());
    std::ostringstream cbuf;
    sgm::write_counts_tsv(truth, cbuf);
    write_file(counts_output, cbuf.str());

    std::uint64_t total = 0;
    for (auto x : truth.per_graph_counts) total += x;
    std::cout << "enumerated " << total << " vertex sets, " << truth.by_code.size()
              << " distinct patterns of size " << p << '\n';
    std::cout << "wrote " << output << " and " << counts_output << '\n';
    return 0;
}

int cmd_evaluate(const std::string& mined_path, const std::string& truth_path,
                 const std::string& output, std::size_t k) {
    std::ifstream mined_in(mined_path);
    if (!mined_in) throw sgm::Error("cannot open mined file: " + mined_path);
    const sgm::ResultFile mined = sgm::read_result_file(mined_in);

    std::ifstream truth_in(truth_path);
    if (!truth_in) throw sgm::Error("cannot open truth file: " + truth_path);
    const sgm::GroundTruth truth = sgm::read_truth_tsv(truth_in);

    std::vector<std::string> mined_codes;
    mined_codes.reserve(mined.patterns.size());
    for (const auto& e : mined.patterns) mined_codes.push_back(e.code);

    const double pr = sgm::precision_at_k(mined_codes, truth, k);

    // rank correlation over the union of both top-k lists: actual support
    // from the truth file, expected support from the run (0 when a true
    // pattern was never sampled)
    std::map<std::string, double> support_a;
    for (const auto& e : mined.patterns) support_a[e.code] = static_cast<double>(e.support_a());
    std::set<std::string> objects;
    for (const auto& c : sgm::truth_top_codes(truth, k)) objects.insert(c);
    for (std::size_t i = 0; i < mined_codes.size() && i < k; ++i) objects.insert(mined_codes[i]);

    std::vector<std::pair<double, double>> pairs;
    for (const auto& code : objects) {
        auto it = truth.by_code.find(code);
        if (it == truth.by_code.end())
            throw sgm::Error("mined pattern missing from truth file (mismatched inputs?): " +
                             code);
        auto sa = support_a.find(code);
        pairs.emplace_back(static_cast<double>(it->second.support),
                           sa == support_a.end() ? 0.0 : sa->second);
    }

    nlohmann::json metrics{{"k", k}, {"pr_at_k", pr}, {"n_mined", mined.patterns.size()},
                           {"n_truth", truth.by_code.size()}};
    try {
        metrics["kendall_tau_b"] = sgm::kendall_tau_b(pairs);
    } catch (const sgm::Error& e) {
        metrics["kendall_tau_b"] = nullptr;
        metrics["kendall_tau_b_error"] = e.what();
    }

    const std::string text = metrics.dump(2) + "\n";
    std::cout << text;
    write_file(output, text);
    return 0;
}

int cmd_gen(const std::string& output, const sgm::GenParams& params) {
    const sgm::GraphDatabase db = sgm::generate_database(params);
    write_file(output, sgm::write_database(db));
    const sgm::DbStats s = sgm::db_stats(db);
    std::cout << "generated " << s.graph_count << " graphs (avg " << s.avg_vertices
              << " vertices, avg " << s.avg_edges << " edges) into " << output << '\n';
    return 0;
}

int cmd_stats(const std::string& input) {
    const sgm::GraphDatabase db = load_database(input);
    const sgm::DbStats s = sgm::db_stats(db);
    std::cout << "graphs: " << s.graph_count << '\n'
              << "avg_vertices: " << s.avg_vertices << '\n'
              << "avg_edges: " << s.avg_edges << '\n'
              << "vertex_labels: " << s.vertex_label_count << '\n'
              << "edge_labels: " << s.edge_label_count << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling-based top-k frequent subgraph mining"};
    app.require_subcommand(1);

    // mine
    auto* mine = app.add_subcommand("mine", "mine top-k frequent p-subgraphs by sampling");
    std::string mine_input, mine_output = "mined.jsonl";
    std::string score_name = "s2", mode_name = "paper";
    sgm::MineConfig cfg;
    mine->add_option("--input", mine_input, "transaction database file")->required();
    mine->add_option("--output", mine_output, "result file (JSON lines)");
    mine->add_option("--size", cfg.p, "pattern size in vertices")->required();
    mine->add_option("--topk", cfg.k, "number of patterns to report");
    mine->add_option("--iters", cfg.max_iter, "sampling iterations");
    mine->add_option("--score", score_name, "target distribution: s1, s2 or uniform");
    mine->add_option("--mh-mode", mode_name, "sampler kernel: paper or strict");
    mine->add_option("--queue-cap", cfg.queue_capacity, "pattern queue capacity");
    mine->add_option("--seed", cfg.seed, "random seed");
    mine->add_option("--chains", cfg.num_chains, "independent chains");
    mine->add_option("--jaccard-eps", cfg.jaccard_eps, "multi-chain convergence threshold");
    mine->add_option("--checkpoint-every", cfg.checkpoint_every,
                     "iterations between convergence checkpoints (0 = iters/100)");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "exhaustive ground truth for size p");
    std::string enum_input, enum_output = "truth.tsv", enum_counts = "counts.tsv";
    std::uint32_t enum_p = 4;
    double enum_cap = 1e8;
    enumerate->add_option("--input", enum_input, "transaction database file")->required();
    enumerate->add_option("--size", enum_p, "pattern size in vertices")->required();
    enumerate->add_option("--output", enum_output, "truth TSV (code, support, id set)");
    enumerate->add_option("--counts-output", enum_counts, "per-graph subgraph counts TSV");
    enumerate->add_option("--cap", enum_cap, "refuse when the estimated set count exceeds this");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "pr@k and Kendall tau-b against the truth");
    std::string eval_mined, eval_truth, eval_output = "metrics.json";
    std::size_t eval_k = 50;
    evaluate->add_option("--mined", eval_mined, "mined result file")->required();
    evaluate->add_option("--truth", eval_truth, "truth TSV from `enumerate`")->required();
    evaluate->add_option("--k", eval_k, "list length for the metrics");
    evaluate->add_option("--output", eval_output, "metrics JSON file");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic transaction database");
    std::string gen_output = "generated.g";
    sgm::GenParams params;
    gen->add_option("--output", gen_output, "database file to write");
    gen->add_option("--graphs", params.n_graphs, "number of graphs");
    gen->add_option("--vertices", params.n_vertices_mean, "mean vertices per graph");
    gen->add_option("--edge-factor", params.edge_factor, "edges per vertex");
    gen->add_option("--vertex-labels", params.n_vertex_labels, "vertex label alphabet size");
    gen->add_option("--edge-labels", params.n_edge_labels, "edge label alphabet size");
    gen->add_option("--seed", params.seed, "random seed");

    // stats
    auto* stats = app.add_subcommand("stats", "print database statistics");
    std::string stats_input;
    stats->add_option("--input", stats_input, "transaction database file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(mine)) {
            cfg.score = parse_score(score_name);
            cfg.mode = parse_mode(mode_name);
            cfg.validate();
            return cmd_mine(mine_input, mine_output, cfg);
        }
        if (app.got_subcommand(enumerate))
            return cmd_enumerate(enum_input, enum_output, enum_counts, enum_p, enum_cap);
        if (app.got_subcommand(evaluate))
            return cmd_evaluate(eval_mined, eval_truth, eval_output, eval_k);
        if (app.got_subcommand(gen)) return cmd_gen(gen_output, params);
        if (app.got_subcommand(stats)) return cmd_stats(stats_input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
