#include "lapsparse/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "lapsparse/error.hpp"

namespace lapsparse::kernels {

int configure_threads_from_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("LAPSPARSE_THREADS")) {
        try {
            const int threads = std::stoi(env);
            if (threads > 0) omp_set_num_threads(threads);
        } catch (const std::exception&) {
            // ignored: malformed value leaves the runtime default
        }
    }
#endif
    return max_threads();
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void floyd_warshall(Eigen::MatrixXd& dist, Execution exec) {
    const Eigen::Index n = dist.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        // Row k and column k do not change during pass k.
        auto relax_row = [&](std::size_t row) {
            const auto i = static_cast<Eigen::Index>(row);
            const double dik = dist(i, k);
            if (dik == kInfinity) return;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double through = dik + dist(k, j);
                if (through < dist(i, j)) dist(i, j) = through;
            }
        };
        for_each_index(static_cast<std::size_t>(n), exec, relax_row);
    }
}

double upper_pair_sum(const Eigen::MatrixXd& dist) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < dist.rows(); ++i)
        for (Eigen::Index j = i + 1; j < dist.cols(); ++j) {
            if (dist(i, j) == kInfinity) return kInfinity;
            total += dist(i, j);
        }
    return total;
}

void perturbation_scores(std::span<const Edge> edges, std::span<const double> v2, std::span<double> out,
                         Execution exec) {
    if (out.size() != edges.size()) throw Error(ErrorCode::DimensionMismatch, "score buffer size");
    const double root2 = std::sqrt(2.0);
    auto score = [&](std::size_t e) {
        const auto& edge = edges[e];
        out[e] = root2 * edge.w * std::abs(v2[edge.i] - v2[edge.j]);
    };
    for_each_index(edges.size(), exec, score);
}

std::optional<std::size_t> argmin_lexicographic(std::span<const double> values, const std::vector<bool>& eligible,
                                                double tie_tol) {
    if (values.size() != eligible.size()) throw Error(ErrorCode::DimensionMismatch, "eligibility mask size");
    std::optional<double> best;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (eligible[i] && (!best || values[i] < *best)) best = values[i];
    if (!best) return std::nullopt;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!eligible[i]) continue;
        if (values[i] == *best || (std::isfinite(*best) && values[i] <= *best + tie_tol)) return i;
    }
    return std::nullopt;
}

}  // namespace lapsparse::kernels
