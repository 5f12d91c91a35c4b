#include "lapsparse/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "lapsparse/error.hpp"

namespace lapsparse {

namespace {

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

double final_lambda2(const WeightedGraph& g) {
    const auto lap = laplacian_of(g);
    return g.node_count() <= Laplacian::kDefaultDenseCap ? dense_fiedler_pair(lap).lambda2
                                                          : fiedler_pair_or_dense(lap).lambda2;
}

std::size_t kept_by_knn(const WeightedGraph& g, std::size_t k) { return knn_sparsify(g, k).graph.edge_count(); }

}  // namespace

double edge_overlap(std::span<const EdgeKey> removed_a, std::span<const EdgeKey> removed_b) {
    std::set<EdgeKey> a(removed_a.begin(), removed_a.end());
    std::set<EdgeKey> b(removed_b.begin(), removed_b.end());
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& e : a) common += b.count(e);
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double filtering_error(const WeightedGraph& full, const WeightedGraph& sparse, const FilterSpec& spec,
                       std::span<const Eigen::VectorXd> signals) {
    if (full.node_count() != sparse.node_count())
        throw Error(ErrorCode::DimensionMismatch, "full and sparse graphs differ in node count");
    const auto l_full = laplacian_of(full);
    const auto l_sparse = laplacian_of(sparse);
    double total = 0.0;
    std::size_t used = 0;
    for (const auto& x : signals) {
        const Eigen::VectorXd ref = apply_filter(l_full, spec, x);
        const double denom = ref.norm();
        if (denom == 0.0) continue;
        total += (apply_filter(l_sparse, spec, x) - ref).norm() / denom;
        ++used;
    }
    return used ? total / static_cast<double>(used) : 0.0;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    if (sorted.size() > 1 && std::isfinite(s.mean)) {
        double ss = 0.0;
        for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(sorted.size() - 1));
    }
    return s;
}

FilterSpec random_lowpass_filter(std::mt19937_64& rng, double spectral_bound) {
    std::uniform_int_distribution<int> taps(1, 3);
    std::uniform_real_distribution<double> stretch(1.0, 1.5);
    const int p = taps(rng);
    const double c = std::max(spectral_bound, 1e-12) * stretch(rng);
    // (1 - lambda/c)^p = sum_q binom(p, q) (-1/c)^q lambda^q
    std::vector<double> coeffs(static_cast<std::size_t>(p) + 1);
    double binom = 1.0;
    for (int q = 0; q <= p; ++q) {
        coeffs[static_cast<std::size_t>(q)] = binom * std::pow(-1.0 / c, q);
        binom = binom * (p - q) / (q + 1);
    }
    return FilterSpec(std::move(coeffs));
}

WeightedGraph random_kernel_graph(std::size_t n, double bandwidth, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd points(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        points(i, 0) = unit(rng);
        points(i, 1) = unit(rng);
    }
    return complete_graph_from_kernel(points, bandwidth);
}

std::vector<WeightedGraph> make_ensemble(const EnsembleConfig& config) {
    std::vector<WeightedGraph> graphs;
    graphs.reserve(config.graphs);
    for (std::size_t r = 0; r < config.graphs; ++r) {
        auto rng = stream_for(config.seed, r);
        graphs.push_back(random_kernel_graph(config.nodes, config.bandwidth, rng));
    }
    return graphs;
}

std::vector<std::size_t> default_levels(std::size_t n, std::size_t m) {
    const std::size_t lo = std::min(n - 1, m);
    std::vector<std::size_t> levels;
    for (int q = 0; q < 4; ++q) {
        const double t = static_cast<double>(q) / 3.0;
        levels.push_back(lo + static_cast<std::size_t>(std::llround(t * static_cast<double>(m - lo))));
    }
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

SparsifyRequest request_for_level(Method method, const WeightedGraph& g, std::size_t target_edges,
                                  const SparsifyParams& base) {
    const std::size_t m = g.edge_count();
    const std::size_t target = std::min(target_edges, m);
    SparsifyRequest req{method, base};
    auto& p = req.params;

    std::vector<double> weights;
    for (const auto& e : g.edges()) weights.push_back(e.w);
    std::sort(weights.begin(), weights.end());
    const double above_all = weights.empty() ? 1.0 : std::nextafter(weights.back(), kernels::kInfinity);

    switch (method) {
        case Method::ApspGreedy:
        case Method::FiedlerExact:
        case Method::FiedlerFast:
            p.budget = m - target;
            break;
        case Method::Epsilon: {
            const std::size_t drop = m - target;
            p.eps = drop < m ? weights[drop] : above_all;
            if (drop == 0) p.eps = 0.0;
            break;
        }
        case Method::Knn: {
            p.k = 1;
            for (std::size_t k = std::max<std::size_t>(g.node_count(), 2) - 1; k >= 1; --k) {
                if (kept_by_knn(g, k) <= target) {
                    p.k = k;
                    break;
                }
            }
            break;
        }
        case Method::Hybrid: {
            const std::size_t n = g.node_count();
            p.d_min = 1;
            p.d_max = std::clamp<std::size_t>((2 * target + n - 1) / n, 1, std::max<std::size_t>(n, 2) - 1);
            std::vector<double> candidates{0.0};
            candidates.insert(candidates.end(), weights.begin(), weights.end());
            candidates.push_back(above_all);
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
            p.eps = candidates.back();
            for (double eps : candidates) {
                if (hybrid_sparsify(g, p.d_min, p.d_max, eps).graph.edge_count() <= target) {
                    p.eps = eps;
                    break;
                }
            }
            break;
        }
    }
    return req;
}

const CellResult& ComparisonReport::cell(std::size_t graph, std::size_t level_index, std::size_t method_index) const {
    return cells.at((graph * levels.size() + level_index) * methods.size() + method_index);
}

const MethodLevelStats& ComparisonReport::stat(std::size_t level_index, std::size_t method_index) const {
    return stats.at(level_index * methods.size() + method_index);
}

BoundCheck check_eigenvalue_bound(const WeightedGraph& g, double tol) {
    BoundCheck check;
    const auto lap = laplacian_of(g);
    const auto pair = dense_fiedler_pair(lap);
    const Eigen::MatrixXd dense = lap.dense();
    for (const auto& e : g.edges()) {
        const Eigen::MatrixXd perturbed = dense + Eigen::MatrixXd(perturbation_matrix(g.node_count(), e.i, e.j, e.w));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(perturbed, Eigen::EigenvaluesOnly);
        const auto& ev = solver.eigenvalues();
        const auto bound = eigenvalue_bound(pair.lambda2, perturbation_score(e.i, e.j, e.w, pair.v2));
        ++check.edges;
        if (bound.contains(ev[1], tol)) ++check.brackets_lambda2;
        if (std::any_of(ev.begin(), ev.end(), [&](double x) { return bound.contains(x, tol); })) ++check.brackets_any;
    }
    return check;
}

ComparisonReport run_comparison(std::span<const WeightedGraph> ensemble, std::span<const Method> methods,
                                std::span<const std::size_t> levels, const ComparisonConfig& config) {
    if (ensemble.empty()) throw Error(ErrorCode::InvalidArgument, "comparison needs at least one graph");
    if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "comparison needs at least one method");
    if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "comparison needs at least one sparsity level");

    ComparisonReport report;
    report.methods.assign(methods.begin(), methods.end());
    report.levels.assign(levels.begin(), levels.end());
    report.graphs = ensemble.size();
    report.notes.push_back(
        "filtering_error is the relative change of random low-pass polynomial graph filter outputs; a GCN layer "
        "applies such a filter, so it stands in for downstream prediction error.");

    std::vector<double> bracket_l2, bracket_any;
    for (std::size_t r = 0; r < ensemble.size(); ++r) {
        const auto& g = ensemble[r];
        auto rng = stream_for(config.seed, r);
        const double bound = laplacian_of(g).norm_bound();
        std::vector<FilterSpec> filters;
        for (std::size_t f = 0; f < config.filters_per_graph; ++f) filters.push_back(random_lowpass_filter(rng, bound));
        std::normal_distribution<double> normal;
        std::vector<Eigen::VectorXd> signals;
        for (std::size_t s = 0; s < config.signals_per_graph; ++s) {
            Eigen::VectorXd x(static_cast<Eigen::Index>(g.node_count()));
            for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
            signals.push_back(std::move(x));
        }

        if (g.edge_count() > 0 && g.node_count() >= 2) {
            const auto check = check_eigenvalue_bound(g);
            bracket_l2.push_back(static_cast<double>(check.brackets_lambda2) / static_cast<double>(check.edges));
            bracket_any.push_back(static_cast<double>(check.brackets_any) / static_cast<double>(check.edges));
        }

        for (std::size_t li = 0; li < levels.size(); ++li) {
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                const auto req = request_for_level(methods[mi], g, levels[li], config.params);
                const auto out = sparsify(g, req);
                CellResult cell;
                cell.graph = r;
                cell.method_index = mi;
                cell.method = methods[mi];
                cell.level = levels[li];
                cell.edges_kept = out.graph.edge_count();
                cell.removed = out.trace.removed.size();
                cell.lambda2 = g.node_count() >= 2 ? final_lambda2(out.graph) : 0.0;
                cell.apsp = apsp_total(out.graph, config.apsp_mode);
                cell.connected = is_connected(out.graph);
                double err = 0.0;
                for (const auto& f : filters) err += filtering_error(g, out.graph, f, signals);
                cell.filtering_error = filters.empty() ? 0.0 : err / static_cast<double>(filters.size());
                cell.seconds = out.trace.seconds;
                cell.removed_keys = out.trace.removed_keys();
                std::sort(cell.removed_keys.begin(), cell.removed_keys.end());
                report.cells.push_back(std::move(cell));
            }
        }
    }

    for (std::size_t li = 0; li < levels.size(); ++li) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            std::vector<double> l2, fe, ap, sec, kept;
            std::size_t connected = 0;
            for (std::size_t r = 0; r < ensemble.size(); ++r) {
                const auto& c = report.cell(r, li, mi);
                l2.push_back(c.lambda2);
                fe.push_back(c.filtering_error);
                ap.push_back(c.apsp);
                sec.push_back(c.seconds);
                kept.push_back(static_cast<double>(c.edges_kept));
                connected += c.connected;
            }
            report.stats.push_back({mi, methods[mi], levels[li], summarize(l2), summarize(fe), summarize(ap),
                                    summarize(sec), summarize(kept),
                                    static_cast<double>(connected) / static_cast<double>(ensemble.size())});
        }

        OverlapMatrix om;
        om.level = levels[li];
        om.median.assign(methods.size(), std::vector<double>(methods.size(), 1.0));
        om.mean = om.median;
        for (std::size_t a = 0; a < methods.size(); ++a) {
            for (std::size_t b = a + 1; b < methods.size(); ++b) {
                std::vector<double> values;
                for (std::size_t r = 0; r < ensemble.size(); ++r)
                    values.push_back(edge_overlap(report.cell(r, li, a).removed_keys, report.cell(r, li, b).removed_keys));
                const auto s = summarize(values);
                om.median[a][b] = om.median[b][a] = s.median;
                om.mean[a][b] = om.mean[b][a] = s.mean;
            }
        }
        report.overlap.push_back(std::move(om));
    }

    report.bound_brackets_lambda2 = summarize(bracket_l2);
    report.bound_brackets_any = summarize(bracket_any);
    return report;
}

std::vector<TimingRow> timing_scaling(std::span<const std::size_t> sizes, double k_fraction,
                                      const TimingConfig& config) {
    if (!(k_fraction >= 0.0 && k_fraction <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "K fraction must lie in [0, 1]");
    if (!std::is_sorted(sizes.begin(), sizes.end()))
        throw Error(ErrorCode::InvalidArgument, "sizes must be ascending");
    using Clock = std::chrono::steady_clock;

    std::vector<TimingRow> rows;
    for (std::size_t n : sizes) {
        auto rng = stream_for(config.seed, n);
        const auto g = random_kernel_graph(n, config.bandwidth, rng);
        SparsifyParams params = config.params;
        params.budget = static_cast<std::size_t>(std::floor(k_fraction * static_cast<double>(g.edge_count())));

        auto median_time = [&](auto&& run) {
            for (std::size_t w = 0; w < config.warmup; ++w) run();
            std::vector<double> times;
            for (std::size_t r = 0; r < std::max<std::size_t>(config.repetitions, 1); ++r) {
                const auto t0 = Clock::now();
                run();
                times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
            }
            return summarize(times).median;
        };

        TimingRow row;
        row.n = n;
        row.m = g.edge_count();
        row.budget = params.budget;
        row.exact_seconds = median_time([&] { return fiedler_exact_sparsify(g, params); });
        row.fast_seconds = median_time([&] { return fiedler_fast_sparsify(g, params); });
        row.ratio = row.fast_seconds > 0.0 ? row.exact_seconds / row.fast_seconds : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace lapsparse
