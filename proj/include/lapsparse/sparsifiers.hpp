#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lapsparse/graph.hpp"
#include "lapsparse/kernels.hpp"
#include "lapsparse/spectral.hpp"

namespace lapsparse {

enum class Method { Knn, Epsilon, Hybrid, ApspGreedy, FiedlerExact, FiedlerFast };

/// Canonical CLI spelling, e.g. "fiedler-fast".
std::string_view method_name(Method m);
/// Accepts the CLI spelling or the underscore form ("fiedler_fast").
Method parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::Knn,        Method::Epsilon,      Method::Hybrid,
                                         Method::ApspGreedy, Method::FiedlerExact, Method::FiedlerFast};
bool is_greedy(Method m);

/// Edge length used by shortest paths: 1/w (similarity), w, or hop count.
enum class LengthMode { Reciprocal, Raw, Unit };
std::string_view length_mode_name(LengthMode m);
LengthMode parse_length_mode(std::string_view name);

/// How fiedler-exact evaluates lambda2 of each candidate Laplacian.
enum class CandidateSolver {
    Auto,       // rank-one secular update up to the dense cap, iterative beyond
    RankOne,    // one dense decomposition per step, then removal_lambda2 per candidate
    Dense,
    Iterative,  // warm-started from the parent v2, dense fallback
};

struct SparsifyParams {
    std::size_t k = 1;
    double eps = 0.0;
    std::size_t d_min = 1;
    std::size_t d_max = 1;
    /// Number of edges to remove (greedy methods).
    std::size_t budget = 0;
    LengthMode length_mode = LengthMode::Reciprocal;
    bool allow_disconnect = false;
    EigensolverOptions solver{};
    /// fiedler-fast recomputes v2 every `refresh_interval` removals.
    std::size_t refresh_interval = 1;
    CandidateSolver candidate_solver = CandidateSolver::Auto;
    Execution execution = Execution::Parallel;
};

struct SparsifyRequest {
    Method method = Method::FiedlerFast;
    SparsifyParams params{};

    /// Throws InvalidArgument on k < 1, eps < 0 or d_min outside [1, d_max].
    void validate() const;
};

struct RemovalStep {
    Edge edge;
    std::size_t step = 0;
    std::optional<double> lambda2_after;
    std::optional<double> apsp_after;
    std::optional<double> score;
    double seconds = 0.0;
};

struct SparsificationTrace {
    Method method = Method::FiedlerFast;
    std::size_t requested = 0;
    std::vector<RemovalStep> removed;
    std::optional<double> initial_lambda2;
    std::optional<double> initial_apsp;
    /// Greedy run stopped short because every remaining candidate would
    /// disconnect the graph.
    bool residual_budget = false;
    std::vector<std::string> warnings;
    double seconds = 0.0;

    std::vector<EdgeKey> removed_keys() const;
};

struct SparsifyResult {
    WeightedGraph graph;
    SparsificationTrace trace;
};

/// Keeps edge (i, j) iff it is among the k heaviest edges at i or at j.
/// Ties rank the lower neighbour index first.
SparsifyResult knn_sparsify(const WeightedGraph& g, std::size_t k);

/// Removes every edge with w < eps. Warns when the result is disconnected.
SparsifyResult epsilon_sparsify(const WeightedGraph& g, double eps);

/// Phase 1 walks edges by ascending weight and drops an edge when either
/// endpoint has more than d_max edges and neither would fall below d_min.
/// Phase 2 repeats, to a fixpoint, dropping edges with w < eps whose
/// endpoints both have more than d_min edges.
SparsifyResult hybrid_sparsify(const WeightedGraph& g, std::size_t d_min, std::size_t d_max, double eps);

/// Sum of shortest-path distances over unordered node pairs (infinity if
/// disconnected). Throws ZeroWeightEdge in reciprocal mode on a zero weight.
double apsp_total(const WeightedGraph& g, LengthMode mode, Execution exec = Execution::Serial);

/// Removes `params.budget` edges one at a time, each minimizing the APSP
/// increase. Floyd-Warshall is rerun for every candidate.
SparsifyResult apsp_greedy_sparsify(const WeightedGraph& g, const SparsifyParams& params);

/// Removes `params.budget` edges one at a time, each minimizing
/// |lambda2(L + E) - lambda2(L)| over all candidates.
SparsifyResult fiedler_exact_sparsify(const WeightedGraph& g, const SparsifyParams& params);

/// Removes `params.budget` edges one at a time, each minimizing
/// sqrt(2) w |v2[m] - v2[n]| for the current Fiedler vector.
SparsifyResult fiedler_fast_sparsify(const WeightedGraph& g, const SparsifyParams& params);

SparsifyResult sparsify(const WeightedGraph& g, const SparsifyRequest& request);

/// Relative tolerance under which two candidate values count as tied.
inline constexpr double kTieRelTol = 1e-12;

}  // namespace lapsparse
