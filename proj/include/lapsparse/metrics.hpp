#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lapsparse/graph.hpp"
#include "lapsparse/sparsifiers.hpp"
#include "lapsparse/spectral.hpp"

namespace lapsparse {

/// Jaccard index |A n B| / |A u B|; 1.0 when both sets are empty.
double edge_overlap(std::span<const EdgeKey> removed_a, std::span<const EdgeKey> removed_b);

/// Mean over signals of |P(L_sparse) x - P(L_full) x| / |P(L_full) x|.
/// Signals whose full-graph response is zero are skipped.
double filtering_error(const WeightedGraph& full, const WeightedGraph& sparse, const FilterSpec& spec,
                       std::span<const Eigen::VectorXd> signals);

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Sample statistics; infinities propagate into mean/median/max.
Summary summarize(std::span<const double> values);

/// Low-pass filter (1 - lambda / c)^P with P in {1, 2, 3} and c drawn from
/// [1, 1.5] times `spectral_bound`, expanded into polynomial coefficients.
FilterSpec random_lowpass_filter(std::mt19937_64& rng, double spectral_bound);

struct EnsembleConfig {
    std::size_t nodes = 11;
    std::size_t graphs = 20;
    std::uint64_t seed = 2020;
    /// Gaussian kernel bandwidth over points drawn uniformly in the unit square.
    double bandwidth = 0.5;
};

WeightedGraph random_kernel_graph(std::size_t n, double bandwidth, std::mt19937_64& rng);
std::vector<WeightedGraph> make_ensemble(const EnsembleConfig& config);

/// Four surviving-edge counts evenly spaced between N-1 and M.
std::vector<std::size_t> default_levels(std::size_t n, std::size_t m);

/// Request whose output keeps (about) `target_edges` edges. Greedy methods
/// remove exactly M - target. kNN takes the largest k, and hybrid the
/// smallest eps (with d_min = 1, d_max = ceil(2 target / N)), that keeps at
/// most `target_edges`. Epsilon thresholds at the (M - target)-th smallest
/// weight.
SparsifyRequest request_for_level(Method method, const WeightedGraph& g, std::size_t target_edges,
                                  const SparsifyParams& base = {});

struct ComparisonConfig {
    SparsifyParams params{};
    std::size_t filters_per_graph = 4;
    std::size_t signals_per_graph = 8;
    std::uint64_t seed = 7;
    /// Length mode for the reported APSP totals.
    LengthMode apsp_mode = LengthMode::Reciprocal;
};

struct CellResult {
    std::size_t graph = 0;
    std::size_t method_index = 0;
    Method method = Method::Knn;
    std::size_t level = 0;
    std::size_t edges_kept = 0;
    std::size_t removed = 0;
    double lambda2 = 0.0;
    double apsp = 0.0;
    bool connected = false;
    double filtering_error = 0.0;
    double seconds = 0.0;
    std::vector<EdgeKey> removed_keys;
};

struct MethodLevelStats {
    std::size_t method_index = 0;
    Method method = Method::Knn;
    std::size_t level = 0;
    Summary lambda2, filtering_error, apsp, seconds, edges_kept;
    double connected_fraction = 0.0;
};

struct OverlapMatrix {
    std::size_t level = 0;
    /// median[a][b] over ensemble graphs, indexed by method position.
    std::vector<std::vector<double>> median;
    std::vector<std::vector<double>> mean;
};

struct ComparisonReport {
    std::vector<Method> methods;
    std::vector<std::size_t> levels;
    std::size_t graphs = 0;
    std::vector<CellResult> cells;  // ordered by (graph, level, method position)
    std::vector<MethodLevelStats> stats;
    std::vector<OverlapMatrix> overlap;
    /// Per graph: fraction of edges whose bound interval contains the
    /// perturbed lambda2 itself, and contains any perturbed eigenvalue.
    Summary bound_brackets_lambda2;
    Summary bound_brackets_any;
    std::vector<std::string> notes;

    const CellResult& cell(std::size_t graph, std::size_t level_index, std::size_t method_index) const;
    const MethodLevelStats& stat(std::size_t level_index, std::size_t method_index) const;
};

/// Runs every (graph, level, method) cell. Each ensemble graph is one run;
/// results are deterministic for a fixed config.
ComparisonReport run_comparison(std::span<const WeightedGraph> ensemble, std::span<const Method> methods,
                                std::span<const std::size_t> levels, const ComparisonConfig& config = {});

struct BoundCheck {
    std::size_t edges = 0;
    std::size_t brackets_lambda2 = 0;
    std::size_t brackets_any = 0;
};

/// For every edge, whether [lambda2 +- |E v2|] holds the perturbed lambda2
/// and any perturbed eigenvalue (dense decomposition).
BoundCheck check_eigenvalue_bound(const WeightedGraph& g, double tol = 1e-9);

struct TimingRow {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t budget = 0;
    double exact_seconds = 0.0;
    double fast_seconds = 0.0;
    double ratio = 0.0;
};

struct TimingConfig {
    std::size_t repetitions = 5;
    std::size_t warmup = 1;
    std::uint64_t seed = 11;
    double bandwidth = 0.5;
    SparsifyParams params{};
};

/// Median wall time of fiedler-exact and fiedler-fast on complete kernel
/// graphs of each size, removing floor(k_fraction * M) edges.
std::vector<TimingRow> timing_scaling(std::span<const std::size_t> sizes, double k_fraction,
                                      const TimingConfig& config = {});

}  // namespace lapsparse
