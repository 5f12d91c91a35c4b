#pragma once

// Brute-force references for the tests. Nothing here calls the solver or
// sparsifier code it is used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lapsparse/graph.hpp"

namespace oracle {

using lapsparse::Edge;
using lapsparse::WeightedGraph;

/// Cyclic Jacobi rotations on a symmetric matrix; eigenvalues ascending.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Eigen::VectorXd ev = a.diagonal();
    std::sort(ev.data(), ev.data() + ev.size());
    return ev;
}

/// L = D - W straight from the definition.
inline Eigen::MatrixXd laplacian(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        w(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.w;
        w(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = e.w;
    }
    Eigen::MatrixXd l = -w;
    for (Eigen::Index i = 0; i < n; ++i) l(i, i) = w.row(i).sum();
    return l;
}

inline double lambda2(const WeightedGraph& g) { return std::max(0.0, jacobi_eigenvalues(laplacian(g))[1]); }

/// Connectivity by repeated relaxation of a reachability set.
inline bool connected(const WeightedGraph& g) {
    std::vector<bool> reach(g.node_count(), false);
    reach[0] = true;
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& e : g.edges()) {
            if (reach[e.i] != reach[e.j]) {
                reach[e.i] = reach[e.j] = true;
                grew = true;
            }
        }
    }
    return std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
}

inline WeightedGraph without(const WeightedGraph& g, std::size_t edge_index) {
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(edge_index));
    return lapsparse::build_graph(g.node_count(), edges);
}

/// Random connected graph: a random spanning tree plus each remaining pair
/// with probability `density`, weights uniform in [0.05, 1].
inline WeightedGraph random_connected(std::size_t n, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> weight(0.05, 1.0), coin(0.0, 1.0);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
    std::vector<Edge> edges;
    for (std::size_t k = 1; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        const auto a = order[k], b = order[pick(rng)];
        present[a][b] = present[b][a] = true;
        edges.push_back({a, b, weight(rng)});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!present[i][j] && coin(rng) < density) edges.push_back({i, j, weight(rng)});
    return lapsparse::build_graph(n, edges);
}

/// Lowest index among values within tol of the minimum (eligible only).
inline std::optional<std::size_t> lexicographic_argmin(const std::vector<double>& values,
                                                       const std::vector<bool>& eligible, double tol) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (eligible[i]) {
            any = true;
            best = std::min(best, values[i]);
        }
    if (!any) return std::nullopt;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (eligible[i] && (values[i] == best || values[i] <= best + tol)) return i;
    return std::nullopt;
}

/// One exhaustive exact-Fiedler step: every non-disconnecting candidate is
/// removed, its Laplacian decomposed by Jacobi, and the smallest lambda2
/// change wins. Returns the chosen edge index.
inline std::optional<std::size_t> exact_fiedler_step(const WeightedGraph& g) {
    const double base = lambda2(g);
    double scale = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) scale = std::max(scale, laplacian(g)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    std::vector<double> change(g.edge_count(), std::numeric_limits<double>::infinity());
    std::vector<bool> eligible(g.edge_count(), false);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto h = without(g, e);
        if (!connected(h)) continue;
        eligible[e] = true;
        change[e] = std::abs(lambda2(h) - base);
    }
    return lexicographic_argmin(change, eligible, 1e-12 * 2.0 * scale);
}

/// Shortest-path sum over pairs by Dijkstra-free Bellman-Ford relaxation.
inline double apsp_unit(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    const double inf = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<double> d(n, inf);
        d[s] = 0.0;
        for (std::size_t round = 0; round < n; ++round)
            for (const auto& e : g.edges()) {
                d[e.j] = std::min(d[e.j], d[e.i] + 1.0);
                d[e.i] = std::min(d[e.i], d[e.j] + 1.0);
            }
        for (std::size_t t = s + 1; t < n; ++t) total += d[t];
    }
    return total;
}

}  // namespace oracle
