// Serial vs OpenMP timings for the parallel kernels. Prints CSV:
// kernel,n,threads,serial_seconds,parallel_seconds,speedup

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "lapsparse/graph.hpp"
#include "lapsparse/kernels.hpp"
#include "lapsparse/metrics.hpp"
#include "lapsparse/sparsifiers.hpp"
#include "lapsparse/spectral.hpp"

using namespace lapsparse;

namespace {

template <typename F>
double median_seconds(int reps, F&& f) {
    f();
    std::vector<double> t;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        f();
        t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
}

void row(const char* kernel, std::size_t n, double serial, double parallel) {
    std::printf("%s,%zu,%d,%.6g,%.6g,%.3f\n", kernel, n, kernels::max_threads(), serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    kernels::configure_threads_from_env();
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
    std::mt19937_64 rng(5);

    std::printf("kernel,n,threads,serial_seconds,parallel_seconds,speedup\n");
    for (std::size_t n : {64, 128, 256}) {
        const auto g = random_kernel_graph(n, 0.5, rng);
        Eigen::MatrixXd lengths = Eigen::MatrixXd::Constant(n, n, kernels::kInfinity);
        lengths.diagonal().setZero();
        for (const auto& e : g.edges()) lengths(e.i, e.j) = lengths(e.j, e.i) = 1.0 / e.w;

        auto fw = [&](Execution exec) {
            return median_seconds(reps, [&] {
                Eigen::MatrixXd d = lengths;
                kernels::floyd_warshall(d, exec);
            });
        };
        row("floyd_warshall", n, fw(Execution::Serial), fw(Execution::Parallel));

        const auto v2 = dense_fiedler_pair(laplacian_of(g)).v2;
        std::vector<double> scores(g.edge_count());
        auto sc = [&](Execution exec) {
            return median_seconds(reps, [&] {
                for (int i = 0; i < 100; ++i)
                    kernels::perturbation_scores(g.edges(), std::span<const double>(v2.data(), n), scores, exec);
            });
        };
        row("perturbation_scores_x100", n, sc(Execution::Serial), sc(Execution::Parallel));
    }

    for (std::size_t n : {20, 40}) {
        const auto g = random_kernel_graph(n, 0.5, rng);
        auto greedy = [&](Method m, Execution exec) {
            SparsifyRequest req{m, {}};
            req.params.budget = g.edge_count() / 4;
            req.params.execution = exec;
            return median_seconds(std::max(1, reps / 2), [&] { (void)sparsify(g, req); });
        };
        row("fiedler_exact", n, greedy(Method::FiedlerExact, Execution::Serial),
            greedy(Method::FiedlerExact, Execution::Parallel));
        row("apsp_greedy", n, greedy(Method::ApspGreedy, Execution::Serial),
            greedy(Method::ApspGreedy, Execution::Parallel));
    }
    return 0;
}
