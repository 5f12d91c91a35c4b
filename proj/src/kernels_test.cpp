#include <doctest.h>

#include <random>
#include <stdexcept>

#include "lapsparse/kernels.hpp"
#include "lapsparse/sparsifiers.hpp"
#include "oracles.hpp"

using namespace lapsparse;

namespace {

struct ThreadScope {
#ifdef _OPENMP
    int saved = omp_get_max_threads();
    explicit ThreadScope(int n) { omp_set_num_threads(n); }
    ~ThreadScope() { omp_set_num_threads(saved); }
#else
    explicit ThreadScope(int) {}
#endif
};

}  // namespace

TEST_CASE("parallel Floyd-Warshall matches the serial reference") {
    ThreadScope threads(4);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        auto g = oracle::random_connected(20 + 15 * t, 0.1, rng);
        const auto n = static_cast<Eigen::Index>(g.node_count());
        Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, kernels::kInfinity);
        d.diagonal().setZero();
        for (const auto& e : g.edges())
            d(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) =
                d(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = 1.0 / e.w;
        Eigen::MatrixXd serial = d, parallel = d;
        kernels::floyd_warshall(serial, Execution::Serial);
        kernels::floyd_warshall(parallel, Execution::Parallel);
        CHECK(serial == parallel);
        CHECK(kernels::upper_pair_sum(serial) == apsp_total(g, LengthMode::Reciprocal));
    }
}

TEST_CASE("parallel perturbation scores match the serial reference") {
    ThreadScope threads(4);
    std::mt19937_64 rng(2);
    auto g = oracle::random_connected(120, 0.5, rng);
    Eigen::VectorXd v2 = Eigen::VectorXd::Random(120);
    std::span<const double> v(v2.data(), 120);
    std::vector<double> serial(g.edge_count()), parallel(g.edge_count());
    kernels::perturbation_scores(g.edges(), v, serial, Execution::Serial);
    kernels::perturbation_scores(g.edges(), v, parallel, Execution::Parallel);
    CHECK(serial == parallel);
    for (std::size_t e = 0; e < g.edge_count(); e += 97)
        CHECK(serial[e] == perturbation_score(g.edges()[e].i, g.edges()[e].j, g.edges()[e].w, v));
}

TEST_CASE("argmin_lexicographic") {
    std::vector<double> values{3.0, 1.0, 1.0 + 1e-15, 0.5};
    std::vector<bool> all(4, true);
    CHECK(*kernels::argmin_lexicographic(values, all, 0.0) == 3);
    std::vector<bool> mask{true, true, true, false};
    CHECK(*kernels::argmin_lexicographic(values, mask, 0.0) == 1);
    values[1] = 1.0 + 2e-15;
    CHECK(*kernels::argmin_lexicographic(values, mask, 1e-14) == 1);
    CHECK(*kernels::argmin_lexicographic(values, mask, 0.0) == 2);
    CHECK_FALSE(kernels::argmin_lexicographic(values, std::vector<bool>(4, false), 0.0));

    std::vector<double> inf(3, kernels::kInfinity);
    CHECK(*kernels::argmin_lexicographic(inf, std::vector<bool>(3, true), 0.0) == 0);
}

TEST_CASE("for_each_index visits every index and rethrows the lowest failure") {
    ThreadScope threads(4);
    for (Execution exec : {Execution::Serial, Execution::Parallel}) {
        std::vector<int> hits(1000, 0);
        kernels::for_each_index(hits.size(), exec, [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

        try {
            kernels::for_each_index(100, exec, [](std::size_t i) {
                if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
            });
            FAIL("expected exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "17");
        }
    }
}
