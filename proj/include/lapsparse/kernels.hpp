#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path
// selected by Execution::Serial; the OpenMP path must produce identical
// results and is checked against it in kernels_test.cpp.

#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lapsparse/graph.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lapsparse {

enum class Execution { Serial, Parallel };

namespace kernels {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Applies LAPSPARSE_THREADS (if set and positive) to the OpenMP runtime and
/// returns the resulting thread cap.
int configure_threads_from_env();
int max_threads();

/// Calls f(i) for every i in [0, count). f must only write to slot i of
/// its outputs. If any call throws, the exception from the lowest index is
/// rethrown after the loop.
template <typename F>
void for_each_index(std::size_t count, Execution exec, F&& f) {
#ifdef _OPENMP
    if (exec == Execution::Parallel && count > 1 && omp_get_max_threads() > 1) {
        std::vector<std::exception_ptr> errors(count);
        const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                f(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
        return;
    }
#endif
    for (std::size_t i = 0; i < count; ++i) f(i);
}

/// In-place Floyd-Warshall on a dense distance matrix (kInfinity = no path).
void floyd_warshall(Eigen::MatrixXd& dist, Execution exec);

/// Sum of dist(i, j) over i < j; kInfinity if any pair is unreachable.
double upper_pair_sum(const Eigen::MatrixXd& dist);

/// out[e] = sqrt(2) * w_e * |v2[i_e] - v2[j_e]| for every edge.
void perturbation_scores(std::span<const Edge> edges, std::span<const double> v2, std::span<double> out,
                         Execution exec);

/// Index of the selected candidate: among eligible entries whose value is
/// within `tie_tol` of the minimum, the lowest index. Candidates are indexed
/// in lexicographic edge order, so the lowest index is the lexicographically
/// smallest edge. The result does not depend on evaluation order.
std::optional<std::size_t> argmin_lexicographic(std::span<const double> values, const std::vector<bool>& eligible,
                                                double tie_tol);

}  // namespace kernels
}  // namespace lapsparse
