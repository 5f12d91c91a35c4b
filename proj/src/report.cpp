#include "lapsparse/report.hpp"

#include <cmath>
#include <ostream>

#include "lapsparse/graph_io.hpp"

namespace lapsparse {

namespace {

nlohmann::json optional_number(const std::optional<double>& v) { return v ? json_number(*v) : nlohmann::json(); }

nlohmann::json summary_json(const Summary& s) {
    return {{"count", s.count},          {"mean", json_number(s.mean)}, {"median", json_number(s.median)},
            {"std", json_number(s.stddev)}, {"min", json_number(s.min)},   {"max", json_number(s.max)}};
}

std::string csv_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return format_double(v);
}

}  // namespace

nlohmann::json json_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

nlohmann::json trace_to_json(const SparsificationTrace& trace, bool include_timing) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : trace.removed) {
        nlohmann::json step{{"step", s.step},
                            {"i", s.edge.i},
                            {"j", s.edge.j},
                            {"w", s.edge.w},
                            {"lambda2_after", optional_number(s.lambda2_after)},
                            {"apsp_after", optional_number(s.apsp_after)},
                            {"score", optional_number(s.score)}};
        if (include_timing) step["seconds"] = s.seconds;
        steps.push_back(std::move(step));
    }
    nlohmann::json j{{"method", std::string(method_name(trace.method))},
                     {"requested", trace.requested},
                     {"removed_count", trace.removed.size()},
                     {"residual_budget", trace.residual_budget},
                     {"initial_lambda2", optional_number(trace.initial_lambda2)},
                     {"initial_apsp", optional_number(trace.initial_apsp)},
                     {"warnings", trace.warnings},
                     {"steps", std::move(steps)}};
    if (include_timing) j["seconds"] = trace.seconds;
    return j;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report, bool include_timing) {
    out << "graph,method,level,edges_kept,removed,lambda2,apsp_total,connected,filtering_error,wall_seconds\n";
    for (const auto& c : report.cells) {
        out << c.graph << ',' << method_name(c.method) << ',' << c.level << ',' << c.edges_kept << ',' << c.removed
            << ',' << csv_number(c.lambda2) << ',' << csv_number(c.apsp) << ',' << (c.connected ? 1 : 0) << ','
            << csv_number(c.filtering_error) << ',' << (include_timing ? csv_number(c.seconds) : "") << '\n';
    }
}

nlohmann::json comparison_to_json(const ComparisonReport& report, bool include_timing) {
    nlohmann::json methods = nlohmann::json::array();
    for (Method m : report.methods) methods.push_back(std::string(method_name(m)));

    nlohmann::json stats = nlohmann::json::array();
    for (const auto& s : report.stats) {
        nlohmann::json entry{{"method", std::string(method_name(s.method))},
                         {"method_index", s.method_index},
                         {"level", s.level},
                         {"lambda2", summary_json(s.lambda2)},
                         {"filtering_error", summary_json(s.filtering_error)},
                         {"apsp_total", summary_json(s.apsp)},
                         {"edges_kept", summary_json(s.edges_kept)},
                         {"connected_fraction", s.connected_fraction}};
        if (include_timing) entry["wall_seconds"] = summary_json(s.seconds);
        stats.push_back(std::move(entry));
    }

    nlohmann::json overlap = nlohmann::json::array();
    for (const auto& o : report.overlap)
        overlap.push_back({{"level", o.level}, {"median", o.median}, {"mean", o.mean}});

    return {{"graphs", report.graphs},
            {"methods", methods},
            {"levels", report.levels},
            {"stats", stats},
            {"overlap", overlap},
            {"bound_brackets_lambda2", summary_json(report.bound_brackets_lambda2)},
            {"bound_brackets_any_eigenvalue", summary_json(report.bound_brackets_any)},
            {"notes", report.notes}};
}

void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows) {
    out << "n,m,budget,exact_seconds,fast_seconds,ratio\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.m << ',' << r.budget << ',' << csv_number(r.exact_seconds) << ','
            << csv_number(r.fast_seconds) << ',' << csv_number(r.ratio) << '\n';
}

nlohmann::json timing_to_json(std::span<const TimingRow> rows) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows)
        j.push_back({{"n", r.n},
                     {"m", r.m},
                     {"budget", r.budget},
                     {"exact_seconds", r.exact_seconds},
                     {"fast_seconds", r.fast_seconds},
                     {"ratio", json_number(r.ratio)}});
    return j;
}

}  // namespace lapsparse
