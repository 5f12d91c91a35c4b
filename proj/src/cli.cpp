#include "lapsparse/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lapsparse/error.hpp"
#include "lapsparse/graph_io.hpp"
#include "lapsparse/kernels.hpp"
#include "lapsparse/metrics.hpp"
#include "lapsparse/report.hpp"
#include "lapsparse/sparsifiers.hpp"

namespace lapsparse::cli {

namespace {

struct RunConfig {
    std::string input;
    std::string output;
    std::string trace;
    std::string method;
    std::vector<std::string> methods;
    SparsifyParams params;
    std::string length_mode = "reciprocal";
    std::uint64_t seed = 2020;
    bool json = false;
    bool timing = false;

    // compare
    std::vector<std::size_t> levels;
    std::size_t nodes = 11;
    std::size_t graphs = 20;
    double bandwidth = 0.5;

    // bench
    std::vector<std::size_t> sizes{20, 40, 80};
    double k_fraction = 0.25;
    std::size_t reps = 5;
    std::size_t warmup = 1;
};

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void add_solver_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--tol", cfg.params.solver.tol, "Eigensolver relative residual tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", cfg.seed, "Seed for ensemble generation and solver start vectors");
}

void add_method_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--k", cfg.params.k, "kNN: edges kept per node");
    cmd->add_option("--eps", cfg.params.eps, "epsilon / hybrid: weight threshold");
    cmd->add_option("--dmin", cfg.params.d_min, "hybrid: minimum degree");
    cmd->add_option("--dmax", cfg.params.d_max, "hybrid: maximum degree");
    cmd->add_option("-K,--budget", cfg.params.budget, "greedy methods: number of edges to remove");
    cmd->add_option("--length-mode", cfg.length_mode, "APSP edge length")
        ->check(CLI::IsMember({"reciprocal", "raw", "unit"}));
    cmd->add_flag("--allow-disconnect", cfg.params.allow_disconnect,
                  "greedy methods: allow removals that disconnect the graph");
    cmd->add_option("--refresh", cfg.params.refresh_interval, "fiedler-fast: removals between v2 refreshes")
        ->check(CLI::PositiveNumber);
}

void finalize_params(RunConfig& cfg) {
    cfg.params.length_mode = parse_length_mode(cfg.length_mode);
    cfg.params.solver.seed = cfg.seed;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    f << j.dump(2) << '\n';
}

double graph_lambda2(const WeightedGraph& g, const SparsifyParams& params) {
    if (g.node_count() < 2) return 0.0;
    const auto lap = laplacian_of(g);
    return g.node_count() <= Laplacian::kDefaultDenseCap ? dense_fiedler_pair(lap).lambda2
                                                          : fiedler_pair_or_dense(lap, {}, params.solver).lambda2;
}

int cmd_sparsify(RunConfig& cfg, std::ostream& out, std::ostream& err) {
    finalize_params(cfg);
    const auto g = load_graph(cfg.input);
    SparsifyRequest req{parse_method(cfg.method), cfg.params};
    const auto result = sparsify(g, req);

    save_graph(result.graph, cfg.output);
    const std::string trace_path = cfg.trace.empty() ? cfg.output + ".trace.json" : cfg.trace;
    write_json_file(trace_path, trace_to_json(result.trace, cfg.timing));

    for (const auto& w : result.trace.warnings)
        if (!result.trace.residual_budget || w.rfind("ResidualBudget", 0) != 0) err << "warning: " << w << '\n';

    const double l2 = graph_lambda2(result.graph, cfg.params);
    if (cfg.json) {
        out << nlohmann::json{{"edges_before", g.edge_count()},
                              {"edges_after", result.graph.edge_count()},
                              {"lambda2", json_number(l2)},
                              {"trace", trace_path}}
                   .dump(2)
            << '\n';
    } else {
        out << method_name(req.method) << ": edges " << g.edge_count() << " -> " << result.graph.edge_count()
            << ", lambda2 = " << fmt(l2) << '\n';
    }
    if (result.trace.residual_budget) {
        err << "error: " << result.trace.warnings.back() << '\n';
        return 1;
    }
    return 0;
}

int cmd_analyze(RunConfig& cfg, std::ostream& out) {
    finalize_params(cfg);
    const auto g = load_graph(cfg.input);
    const bool connected = is_connected(g);
    double l2 = 0.0, vmin = 0.0, vmax = 0.0;
    if (g.node_count() >= 2) {
        const auto lap = laplacian_of(g);
        const auto pair = g.node_count() <= Laplacian::kDefaultDenseCap ? dense_fiedler_pair(lap)
                                                                        : fiedler_pair_or_dense(lap, {}, cfg.params.solver);
        l2 = pair.lambda2;
        vmin = pair.v2.minCoeff();
        vmax = pair.v2.maxCoeff();
    }
    const auto deg = degree_sequence(g);
    const auto dsum = summarize(std::vector<double>(deg.degree.begin(), deg.degree.end()));
    const auto wsum = summarize(deg.weighted);

    nlohmann::json apsp;
    for (LengthMode m : {LengthMode::Reciprocal, LengthMode::Raw, LengthMode::Unit})
        apsp[std::string(length_mode_name(m))] = json_number(apsp_total(g, m));

    if (cfg.json) {
        out << nlohmann::json{{"nodes", g.node_count()},
                              {"edges", g.edge_count()},
                              {"connected", connected},
                              {"lambda2", json_number(l2)},
                              {"fiedler_min", json_number(vmin)},
                              {"fiedler_max", json_number(vmax)},
                              {"apsp_total", apsp},
                              {"degree", {{"min", dsum.min}, {"max", dsum.max}, {"mean", dsum.mean}}},
                              {"weighted_degree", {{"min", wsum.min}, {"max", wsum.max}, {"mean", wsum.mean}}}}
                   .dump(2)
            << '\n';
        return 0;
    }
    out << "nodes:            " << g.node_count() << '\n'
        << "edges:            " << g.edge_count() << '\n'
        << "connected:        " << (connected ? "true" : "false") << '\n'
        << "lambda2:          " << fmt(l2) << '\n'
        << "fiedler range:    [" << fmt(vmin) << ", " << fmt(vmax) << "]\n";
    for (LengthMode m : {LengthMode::Reciprocal, LengthMode::Raw, LengthMode::Unit})
        out << "apsp (" << length_mode_name(m) << "):" << std::string(10 - length_mode_name(m).size(), ' ')
            << fmt(apsp_total(g, m)) << '\n';
    out << "degree:           min " << fmt(dsum.min) << ", max " << fmt(dsum.max) << ", mean " << fmt(dsum.mean) << '\n'
        << "weighted degree:  min " << fmt(wsum.min) << ", max " << fmt(wsum.max) << ", mean " << fmt(wsum.mean)
        << '\n';
    return 0;
}

int cmd_compare(RunConfig& cfg, std::ostream& out, std::ostream& err) {
    finalize_params(cfg);
    std::vector<Method> methods;
    for (const auto& item : cfg.methods) {
        std::stringstream ss(item);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty()) methods.push_back(parse_method(name));
    }
    if (methods.size() < 2) {
        err << "error: compare needs at least two methods (--methods a,b)\n";
        return 2;
    }

    std::vector<WeightedGraph> ensemble;
    if (!cfg.input.empty())
        ensemble.push_back(load_graph(cfg.input));
    else
        ensemble = make_ensemble({cfg.nodes, cfg.graphs, cfg.seed, cfg.bandwidth});

    auto levels = cfg.levels;
    if (levels.empty()) levels = default_levels(ensemble.front().node_count(), ensemble.front().edge_count());

    ComparisonConfig cc;
    cc.params = cfg.params;
    cc.apsp_mode = cfg.params.length_mode;
    cc.seed = cfg.seed;
    const auto report = run_comparison(ensemble, methods, levels, cc);
    const auto summary = comparison_to_json(report, cfg.timing);

    if (!cfg.output.empty()) {
        std::ofstream csv(cfg.output + ".csv");
        if (!csv) throw Error(ErrorCode::IoError, "cannot write '" + cfg.output + ".csv'");
        write_comparison_csv(csv, report, cfg.timing);
        write_json_file(cfg.output + ".json", summary);
    }
    if (cfg.json) {
        out << summary.dump(2) << '\n';
        return 0;
    }
    for (std::size_t li = 0; li < report.levels.size(); ++li) {
        out << "level " << report.levels[li] << " edges\n";
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const auto& s = report.stat(li, mi);
            out << "  " << method_name(s.method) << ": median lambda2 " << fmt(s.lambda2.median)
                << ", median filtering error " << fmt(s.filtering_error.median) << ", connected "
                << fmt(s.connected_fraction) << '\n';
        }
        out << "  overlap (median Jaccard):\n";
        for (std::size_t a = 0; a < methods.size(); ++a) {
            out << "   ";
            for (std::size_t b = 0; b < methods.size(); ++b) out << ' ' << fmt(report.overlap[li].median[a][b]);
            out << '\n';
        }
    }
    return 0;
}

int cmd_bench(RunConfig& cfg, std::ostream& out) {
    finalize_params(cfg);
    std::sort(cfg.sizes.begin(), cfg.sizes.end());
    TimingConfig tc;
    tc.repetitions = cfg.reps;
    tc.warmup = cfg.warmup;
    tc.seed = cfg.seed;
    tc.bandwidth = cfg.bandwidth;
    tc.params = cfg.params;
    const auto rows = timing_scaling(cfg.sizes, cfg.k_fraction, tc);
    if (!cfg.output.empty()) {
        std::ofstream csv(cfg.output);
        if (!csv) throw Error(ErrorCode::IoError, "cannot write '" + cfg.output + "'");
        write_timing_csv(csv, rows);
    }
    if (cfg.json)
        out << timing_to_json(rows).dump(2) << '\n';
    else
        write_timing_csv(out, rows);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    kernels::configure_threads_from_env();

    CLI::App app{"lapsparse: Laplacian-preserving graph sparsification"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* sp = app.add_subcommand("sparsify", "Remove edges with one method and write graph + trace");
    sp->add_option("--input", cfg.input, "Input graph (edge list, or .mtx)")->required()->check(CLI::ExistingFile);
    sp->add_option("--output", cfg.output, "Output graph path")->required();
    sp->add_option("--trace", cfg.trace, "Trace JSON path (default <output>.trace.json)");
    sp->add_option("--method", cfg.method, "knn|epsilon|hybrid|apsp-greedy|fiedler-exact|fiedler-fast")->required();
    sp->add_flag("--json", cfg.json, "Print the summary as JSON");
    sp->add_flag("--timing", cfg.timing, "Include wall times in the trace");
    add_method_flags(sp, cfg);
    add_solver_flags(sp, cfg);

    auto* an = app.add_subcommand("analyze", "Print connectivity, lambda2, APSP and degree statistics");
    an->add_option("--input", cfg.input, "Input graph")->required()->check(CLI::ExistingFile);
    an->add_flag("--json", cfg.json, "Emit JSON");
    add_solver_flags(an, cfg);

    auto* cp = app.add_subcommand("compare", "Run several methods over sparsity levels and report agreement");
    cp->add_option("--input", cfg.input, "Single input graph (default: synthetic ensemble)")
        ->check(CLI::ExistingFile);
    cp->add_option("--methods", cfg.methods, "Comma-separated method list")->required()->delimiter(',');
    cp->add_option("--levels", cfg.levels, "Surviving-edge counts")->delimiter(',');
    cp->add_option("--output", cfg.output, "Report prefix: writes <prefix>.csv and <prefix>.json");
    cp->add_option("--nodes", cfg.nodes, "Ensemble: nodes per graph")->check(CLI::Range(2, 2048));
    cp->add_option("--graphs", cfg.graphs, "Ensemble: number of graphs")->check(CLI::PositiveNumber);
    cp->add_option("--bandwidth", cfg.bandwidth, "Ensemble: Gaussian kernel bandwidth")->check(CLI::PositiveNumber);
    cp->add_flag("--json", cfg.json, "Print the JSON summary");
    cp->add_flag("--timing", cfg.timing, "Include wall times in the report");
    add_method_flags(cp, cfg);
    add_solver_flags(cp, cfg);

    auto* bn = app.add_subcommand("bench", "Time fiedler-exact against fiedler-fast on complete graphs");
    bn->add_option("--sizes", cfg.sizes, "Node counts")->delimiter(',');
    bn->add_option("--k-fraction", cfg.k_fraction, "Fraction of edges removed")->check(CLI::Range(0.0, 1.0));
    bn->add_option("--reps", cfg.reps, "Timed repetitions (median reported)")->check(CLI::PositiveNumber);
    bn->add_option("--warmup", cfg.warmup, "Untimed warmup runs");
    bn->add_option("--bandwidth", cfg.bandwidth, "Gaussian kernel bandwidth")->check(CLI::PositiveNumber);
    bn->add_option("--output", cfg.output, "CSV output path");
    bn->add_flag("--json", cfg.json, "Emit JSON");
    add_solver_flags(bn, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*sp) return cmd_sparsify(cfg, out, err);
        if (*an) return cmd_analyze(cfg, out);
        if (*cp) return cmd_compare(cfg, out, err);
        if (*bn) return cmd_bench(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace lapsparse::cli
