#include <algorithm>
#include <chrono>
#include <cmath>

#include "lapsparse/error.hpp"
#include "lapsparse/sparsifiers.hpp"

namespace lapsparse {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_budget(const WeightedGraph& g, std::size_t budget) {
    if (budget > g.edge_count())
        throw Error(ErrorCode::BudgetExceedsEdges, "budget " + std::to_string(budget) + " exceeds edge count " +
                                                       std::to_string(g.edge_count()));
}

std::vector<bool> eligibility(const WeightedGraph& g, bool allow_disconnect) {
    if (allow_disconnect) return std::vector<bool>(g.edge_count(), true);
    auto bridge = bridges(g);
    bridge.flip();
    return bridge;
}

void stop_short(SparsificationTrace& trace, std::size_t step) {
    trace.residual_budget = true;
    trace.warnings.push_back("ResidualBudget: removed " + std::to_string(step) + " of " +
                             std::to_string(trace.requested) +
                             " edges; every remaining candidate would disconnect the graph");
}

Eigen::MatrixXd length_matrix(const WeightedGraph& g, LengthMode mode) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, kernels::kInfinity);
    d.diagonal().setZero();
    for (const auto& e : g.edges()) {
        double len = 1.0;
        if (mode == LengthMode::Reciprocal) {
            if (e.w == 0.0) throw Error(ErrorCode::ZeroWeightEdge, "reciprocal length of a zero-weight edge");
            len = 1.0 / e.w;
        } else if (mode == LengthMode::Raw) {
            len = e.w;
        }
        const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
        d(i, j) = d(j, i) = len;
    }
    return d;
}

/// Eigenvalue index 1 of a dense symmetric matrix.
double dense_second_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
    return std::max(0.0, solver.eigenvalues()[1]);
}

}  // namespace

double apsp_total(const WeightedGraph& g, LengthMode mode, Execution exec) {
    auto d = length_matrix(g, mode);
    kernels::floyd_warshall(d, exec);
    return kernels::upper_pair_sum(d);
}

SparsifyResult apsp_greedy_sparsify(const WeightedGraph& g, const SparsifyParams& params) {
    check_budget(g, params.budget);
    const auto start = Clock::now();
    SparsifyResult result{g, {}};
    auto& trace = result.trace;
    trace.method = Method::ApspGreedy;
    trace.requested = params.budget;
    trace.initial_apsp = apsp_total(g, params.length_mode);

    for (std::size_t step = 0; step < params.budget; ++step) {
        const auto step_start = Clock::now();
        const auto& current = result.graph;
        const auto edges = current.edges();
        const Eigen::MatrixXd lengths = length_matrix(current, params.length_mode);
        Eigen::MatrixXd base = lengths;
        kernels::floyd_warshall(base, params.execution);
        const double base_total = kernels::upper_pair_sum(base);

        const auto eligible = eligibility(current, params.allow_disconnect);
        std::vector<double> after(edges.size(), kernels::kInfinity);
        std::vector<double> delta(edges.size(), kernels::kInfinity);
        kernels::for_each_index(edges.size(), params.execution, [&](std::size_t e) {
            if (!eligible[e]) return;
            Eigen::MatrixXd d = lengths;
            const auto i = static_cast<Eigen::Index>(edges[e].i), j = static_cast<Eigen::Index>(edges[e].j);
            d(i, j) = d(j, i) = kernels::kInfinity;
            kernels::floyd_warshall(d, Execution::Serial);
            after[e] = kernels::upper_pair_sum(d);
            // Removing an edge from a disconnected graph leaves APSP at infinity.
            delta[e] = (std::isinf(base_total) && std::isinf(after[e])) ? 0.0 : after[e] - base_total;
        });

        const double tie_tol = std::isfinite(base_total) ? kTieRelTol * base_total : 0.0;
        const auto pick = kernels::argmin_lexicographic(delta, eligible, tie_tol);
        if (!pick) {
            stop_short(trace, step);
            break;
        }
        RemovalStep rec{edges[*pick], step, {}, after[*pick], {}, 0.0};
        result.graph = remove_edge(current, rec.edge.i, rec.edge.j);
        rec.seconds = seconds_since(step_start);
        trace.removed.push_back(rec);
    }
    trace.seconds = seconds_since(start);
    return result;
}

SparsifyResult fiedler_exact_sparsify(const WeightedGraph& g, const SparsifyParams& params) {
    check_budget(g, params.budget);
    if (g.node_count() < 2) throw Error(ErrorCode::InvalidArgument, "Fiedler methods need N >= 2");
    const auto start = Clock::now();
    SparsifyResult result{g, {}};
    auto& trace = result.trace;
    trace.method = Method::FiedlerExact;
    trace.requested = params.budget;

    CandidateSolver solver = params.candidate_solver;
    if (solver == CandidateSolver::Auto)
        solver = g.node_count() <= Laplacian::kDefaultDenseCap ? CandidateSolver::RankOne : CandidateSolver::Iterative;
    const bool full_spectrum = solver != CandidateSolver::Iterative;

    Laplacian lap = laplacian_of(g);
    Spectrum spectrum;
    FiedlerPair base;
    auto solve_base = [&](std::span<const double> warm) {
        if (full_spectrum) {
            spectrum = dense_spectrum(lap);
            base.lambda2 = std::max(0.0, spectrum.eigenvalues[1]);
            base.v2 = spectrum.eigenvectors.col(1);
        } else {
            base = fiedler_pair_or_dense(lap, warm, params.solver);
        }
    };
    solve_base({});
    trace.initial_lambda2 = base.lambda2;

    for (std::size_t step = 0; step < params.budget; ++step) {
        const auto step_start = Clock::now();
        const auto& current = result.graph;
        const auto edges = current.edges();
        const auto eligible = eligibility(current, params.allow_disconnect);
        std::vector<double> lambda(edges.size(), 0.0);
        std::vector<double> change(edges.size(), kernels::kInfinity);
        const Eigen::VectorXd warm_v2 = base.v2;
        const std::span<const double> warm(warm_v2.data(), static_cast<std::size_t>(warm_v2.size()));

        Eigen::MatrixXd dense_lap;
        if (solver == CandidateSolver::Dense) dense_lap = lap.dense();
        kernels::for_each_index(edges.size(), params.execution, [&](std::size_t e) {
            if (!eligible[e]) return;
            const auto& edge = edges[e];
            if (solver == CandidateSolver::RankOne) {
                lambda[e] = removal_lambda2(spectrum, edge.i, edge.j, edge.w);
            } else if (solver == CandidateSolver::Dense) {
                Eigen::MatrixXd m = dense_lap;
                const auto i = static_cast<Eigen::Index>(edge.i), j = static_cast<Eigen::Index>(edge.j);
                m(i, i) -= edge.w;
                m(j, j) -= edge.w;
                m(i, j) += edge.w;
                m(j, i) += edge.w;
                lambda[e] = dense_second_eigenvalue(m);
            } else {
                const auto op = LaplacianOperator::with_edge_removed(lap, edge.i, edge.j, edge.w);
                try {
                    lambda[e] = fiedler_pair(op, warm, params.solver).lambda2;
                } catch (const Error& err) {
                    if (err.code() != ErrorCode::NoConvergence) throw;
                    Eigen::MatrixXd m = lap.dense() + Eigen::MatrixXd(perturbation_matrix(lap.size(), edge.i, edge.j, edge.w));
                    lambda[e] = dense_second_eigenvalue(m);
                }
            }
            change[e] = std::abs(lambda[e] - base.lambda2);
        });

        const auto pick = kernels::argmin_lexicographic(change, eligible, kTieRelTol * lap.norm_bound());
        if (!pick) {
            stop_short(trace, step);
            break;
        }
        RemovalStep rec{edges[*pick], step, lambda[*pick], {}, {}, 0.0};
        result.graph = remove_edge(current, rec.edge.i, rec.edge.j);
        lap = laplacian_of(result.graph);
        if (step + 1 < params.budget) solve_base(warm);
        rec.seconds = seconds_since(step_start);
        trace.removed.push_back(rec);
    }
    trace.seconds = seconds_since(start);
    return result;
}

SparsifyResult fiedler_fast_sparsify(const WeightedGraph& g, const SparsifyParams& params) {
    check_budget(g, params.budget);
    if (g.node_count() < 2) throw Error(ErrorCode::InvalidArgument, "Fiedler methods need N >= 2");
    if (params.refresh_interval < 1) throw Error(ErrorCode::InvalidArgument, "refresh interval must be >= 1");
    const auto start = Clock::now();
    SparsifyResult result{g, {}};
    auto& trace = result.trace;
    trace.method = Method::FiedlerFast;
    trace.requested = params.budget;

    FiedlerPair pair = fiedler_pair_or_dense(laplacian_of(g), {}, params.solver);
    trace.initial_lambda2 = pair.lambda2;
    std::vector<double> scores;

    for (std::size_t step = 0; step < params.budget; ++step) {
        const auto step_start = Clock::now();
        const auto& current = result.graph;
        const auto edges = current.edges();
        const auto eligible = eligibility(current, params.allow_disconnect);
        scores.assign(edges.size(), 0.0);
        kernels::perturbation_scores(edges, {pair.v2.data(), static_cast<std::size_t>(pair.v2.size())}, scores,
                                     params.execution);

        double top = 0.0;
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (eligible[e]) top = std::max(top, scores[e]);
        const auto pick = kernels::argmin_lexicographic(scores, eligible, kTieRelTol * top);
        if (!pick) {
            stop_short(trace, step);
            break;
        }
        RemovalStep rec{edges[*pick], step, {}, {}, scores[*pick], 0.0};
        result.graph = remove_edge(current, rec.edge.i, rec.edge.j);
        if ((step + 1) % params.refresh_interval == 0 || step + 1 == params.budget) {
            pair = fiedler_pair_or_dense(laplacian_of(result.graph),
                                         {pair.v2.data(), static_cast<std::size_t>(pair.v2.size())}, params.solver);
            rec.lambda2_after = pair.lambda2;
        }
        rec.seconds = seconds_since(step_start);
        trace.removed.push_back(rec);
    }
    trace.seconds = seconds_since(start);
    return result;
}

SparsifyResult sparsify(const WeightedGraph& g, const SparsifyRequest& request) {
    request.validate();
    const auto& p = request.params;
    switch (request.method) {
        case Method::Knn: return knn_sparsify(g, p.k);
        case Method::Epsilon: return epsilon_sparsify(g, p.eps);
        case Method::Hybrid: return hybrid_sparsify(g, p.d_min, p.d_max, p.eps);
        case Method::ApspGreedy: return apsp_greedy_sparsify(g, p);
        case Method::FiedlerExact: return fiedler_exact_sparsify(g, p);
        case Method::FiedlerFast: return fiedler_fast_sparsify(g, p);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown method");
}

}  // namespace lapsparse
