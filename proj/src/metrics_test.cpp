#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lapsparse/error.hpp"
#include "lapsparse/metrics.hpp"
#include "lapsparse/report.hpp"
#include "oracles.hpp"

using namespace lapsparse;

TEST_CASE("edge_overlap") {
    std::vector<EdgeKey> a{{0, 1}, {0, 2}, {1, 2}};
    std::vector<EdgeKey> b{{0, 2}, {1, 2}, {2, 3}};
    std::vector<EdgeKey> c{{3, 4}};
    CHECK(edge_overlap(a, a) == 1.0);
    CHECK(edge_overlap(a, c) == 0.0);
    CHECK(edge_overlap(a, b) == 0.5);
    CHECK(edge_overlap(b, a) == edge_overlap(a, b));
    CHECK(edge_overlap({}, {}) == 1.0);
}

TEST_CASE("filtering_error") {
    std::vector<Edge> tri{{0, 1, 1}, {0, 2, 1}, {1, 2, 1}};
    const auto full = build_graph(3, tri);
    const auto cut = remove_edge(full, 0, 1);
    std::vector<Eigen::VectorXd> x{Eigen::Vector3d(1, 2, 4)};

    CHECK(filtering_error(full, full, FilterSpec({0.3, 1.0, -0.2}), x) == 0.0);
    CHECK(filtering_error(full, cut, FilterSpec({1.0}), x) == 0.0);
    // L x = (-4, -1, 5) and E x = (1, -1, 0), so the error is sqrt(2 / 42).
    CHECK(filtering_error(full, cut, FilterSpec({0.0, 1.0}), x) == doctest::Approx(std::sqrt(2.0 / 42.0)));

    std::vector<Eigen::VectorXd> constant{Eigen::Vector3d(1, 1, 1)};
    CHECK(filtering_error(full, cut, FilterSpec({0.0, 1.0}), constant) == 0.0);
    CHECK_THROWS_AS(filtering_error(full, build_graph(2, std::vector<Edge>{}), FilterSpec({1.0}), x), Error);
}

TEST_CASE("summarize") {
    std::vector<double> constant(7, 2.5);
    auto s = summarize(constant);
    CHECK(s.median == 2.5);
    CHECK(s.mean == 2.5);
    CHECK(s.stddev == 0.0);
    std::vector<double> v{4, 1, 3, 2};
    auto t = summarize(v);
    CHECK(t.median == 2.5);
    CHECK(t.min == 1);
    CHECK(t.max == 4);
    CHECK(t.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("random_lowpass_filter is a decreasing response in [0, 1]") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto f = random_lowpass_filter(rng, 8.0);
        CHECK(f.response(0.0) == doctest::Approx(1.0));
        double prev = 1.0 + 1e-12;
        for (double lam = 0.0; lam <= 8.0; lam += 0.25) {
            const double r = f.response(lam);
            CHECK(r >= -1e-12);
            CHECK(r <= prev);
            prev = r;
        }
    }
}

TEST_CASE("ensemble and levels") {
    auto ens = make_ensemble({11, 3, 5, 0.5});
    REQUIRE(ens.size() == 3);
    CHECK(ens[0].edge_count() == 55);
    CHECK_FALSE(ens[0] == ens[1]);
    CHECK(make_ensemble({11, 3, 5, 0.5})[2] == ens[2]);
    CHECK(default_levels(11, 55) == std::vector<std::size_t>{10, 25, 40, 55});
}

TEST_CASE("request_for_level matches budgets") {
    auto ens = make_ensemble({11, 5, 9, 0.5});
    for (const auto& g : ens) {
        for (std::size_t target : {10, 20, 33, 55}) {
            for (Method m : kAllMethods) {
                auto req = request_for_level(m, g, target);
                auto out = sparsify(g, req);
                if (is_greedy(m) || m == Method::Epsilon)
                    CHECK(out.graph.edge_count() == target);
                else
                    CHECK(out.graph.edge_count() <= std::max<std::size_t>(target, 10));
            }
        }
    }
}

TEST_CASE("check_eigenvalue_bound always finds some eigenvalue") {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 10; ++t) {
        auto g = oracle::random_connected(6 + t % 4, 0.6, rng);
        auto c = check_eigenvalue_bound(g);
        CHECK(c.edges == g.edge_count());
        CHECK(c.brackets_any == c.edges);
        CHECK(c.brackets_lambda2 <= c.brackets_any);
    }
}

TEST_CASE("run_comparison basics") {
    auto ens = make_ensemble({8, 2, 13, 0.5});
    const std::size_t m = ens[0].edge_count();

    std::vector<Method> one{Method::FiedlerFast};
    std::vector<std::size_t> full{m};
    auto r = run_comparison(std::span(ens).first(1), one, full);
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells[0].removed == 0);
    CHECK(r.cells[0].filtering_error == 0.0);

    std::vector<Method> twice{Method::FiedlerExact, Method::FiedlerExact, Method::Epsilon};
    std::vector<std::size_t> levels{10, 20};
    auto rep = run_comparison(ens, twice, levels);
    CHECK(rep.cells.size() == 2 * 2 * 3);
    for (std::size_t li = 0; li < 2; ++li) {
        CHECK(rep.overlap[li].median[0][1] == 1.0);
        for (std::size_t a = 0; a < 3; ++a) {
            CHECK(rep.overlap[li].median[a][a] == 1.0);
            for (std::size_t b = 0; b < 3; ++b) {
                CHECK(rep.overlap[li].median[a][b] == rep.overlap[li].median[b][a]);
                CHECK(rep.overlap[li].median[a][b] >= 0.0);
                CHECK(rep.overlap[li].median[a][b] <= 1.0);
            }
        }
        for (std::size_t g = 0; g < 2; ++g) {
            CHECK(rep.cell(g, li, 0).lambda2 == rep.cell(g, li, 1).lambda2);
            CHECK(rep.cell(g, li, 0).filtering_error == rep.cell(g, li, 1).filtering_error);
        }
    }

    std::ostringstream csv;
    write_comparison_csv(csv, rep);
    std::string header;
    std::istringstream lines(csv.str());
    std::getline(lines, header);
    CHECK(header == "graph,method,level,edges_kept,removed,lambda2,apsp_total,connected,filtering_error,wall_seconds");
    std::size_t rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == rep.cells.size());

    auto j = comparison_to_json(rep);
    CHECK(j["methods"].size() == 3);
    CHECK(j["overlap"].size() == 2);
    CHECK(j["stats"].size() == 6);

    auto again = run_comparison(ens, twice, levels);
    CHECK(comparison_to_json(again)["overlap"] == j["overlap"]);
    CHECK_THROWS_AS(run_comparison({}, twice, levels), Error);
}

TEST_CASE("timing_scaling table") {
    std::vector<std::size_t> sizes{8, 12};
    TimingConfig cfg;
    cfg.repetitions = 1;
    cfg.warmup = 0;
    auto zero = timing_scaling(sizes, 0.0, cfg);
    REQUIRE(zero.size() == 2);
    CHECK(zero[0].budget == 0);
    CHECK(zero[1].m == 66);
    auto rows = timing_scaling(sizes, 0.25, cfg);
    CHECK(rows[1].budget == 16);
    CHECK(rows[1].exact_seconds > 0.0);
    std::vector<std::size_t> unsorted{12, 8};
    CHECK_THROWS_AS(timing_scaling(unsorted, 0.25, cfg), Error);
}

TEST_CASE("greedy methods mostly remove lighter edges") {
    const auto ens = make_ensemble({});
    for (Method m : {Method::FiedlerExact, Method::FiedlerFast, Method::ApspGreedy}) {
        std::vector<double> gap;
        for (const auto& g : ens) {
            const auto r = sparsify(g, request_for_level(m, g, 33));
            double removed = 0.0, kept = 0.0;
            for (const auto& s : r.trace.removed) removed += s.edge.w;
            for (const auto& e : r.graph.edges()) kept += e.w;
            gap.push_back(removed / static_cast<double>(r.trace.removed.size()) -
                          kept / static_cast<double>(r.graph.edge_count()));
        }
        CHECK(summarize(gap).median < 0.0);
    }
}
