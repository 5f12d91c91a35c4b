#include <algorithm>
#include <chrono>
#include <numeric>

#include "lapsparse/error.hpp"
#include "lapsparse/sparsifiers.hpp"

namespace lapsparse {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Graph keeping edges()[e] for every e with keep[e].
WeightedGraph keep_edges(const WeightedGraph& g, const std::vector<bool>& keep) {
    std::vector<Edge> kept;
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        if (keep[e]) kept.push_back(g.edges()[e]);
    return build_graph(g.node_count(), kept);
}

SparsificationTrace trace_for(Method m, const WeightedGraph& g, const std::vector<std::size_t>& order) {
    SparsificationTrace trace;
    trace.method = m;
    trace.requested = order.size();
    for (std::size_t s = 0; s < order.size(); ++s) trace.removed.push_back({g.edges()[order[s]], s, {}, {}, {}, 0.0});
    return trace;
}

std::vector<std::size_t> ascending_weight_order(const WeightedGraph& g) {
    std::vector<std::size_t> order(g.edge_count());
    std::iota(order.begin(), order.end(), 0);
    // Edges are already lexicographic, so a stable sort keeps that as the tie-break.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g.edges()[a].w < g.edges()[b].w; });
    return order;
}

void warn_if_disconnected(const WeightedGraph& out, const WeightedGraph& in, SparsificationTrace& trace) {
    if (!is_connected(out) && is_connected(in))
        trace.warnings.push_back("sparsified graph is disconnected");
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Knn: return "knn";
        case Method::Epsilon: return "epsilon";
        case Method::Hybrid: return "hybrid";
        case Method::ApspGreedy: return "apsp-greedy";
        case Method::FiedlerExact: return "fiedler-exact";
        case Method::FiedlerFast: return "fiedler-fast";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    std::string normalized(name);
    std::replace(normalized.begin(), normalized.end(), '_', '-');
    for (Method m : kAllMethods)
        if (method_name(m) == normalized) return m;
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

bool is_greedy(Method m) {
    return m == Method::ApspGreedy || m == Method::FiedlerExact || m == Method::FiedlerFast;
}

std::string_view length_mode_name(LengthMode m) {
    switch (m) {
        case LengthMode::Reciprocal: return "reciprocal";
        case LengthMode::Raw: return "raw";
        case LengthMode::Unit: return "unit";
    }
    return "unknown";
}

LengthMode parse_length_mode(std::string_view name) {
    for (LengthMode m : {LengthMode::Reciprocal, LengthMode::Raw, LengthMode::Unit})
        if (length_mode_name(m) == name) return m;
    throw Error(ErrorCode::InvalidArgument, "unknown length mode '" + std::string(name) + "'");
}

void SparsifyRequest::validate() const {
    switch (method) {
        case Method::Knn:
            if (params.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
            break;
        case Method::Epsilon:
            if (!(params.eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be nonnegative");
            break;
        case Method::Hybrid:
            if (!(params.eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be nonnegative");
            if (params.d_min < 1 || params.d_min > params.d_max)
                throw Error(ErrorCode::InvalidArgument, "need 1 <= d_min <= d_max");
            break;
        default:
            if (params.refresh_interval < 1) throw Error(ErrorCode::InvalidArgument, "refresh interval must be >= 1");
            if (!(params.solver.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
            break;
    }
}

std::vector<EdgeKey> SparsificationTrace::removed_keys() const {
    std::vector<EdgeKey> keys;
    keys.reserve(removed.size());
    for (const auto& r : removed) keys.push_back(r.edge.key());
    return keys;
}

SparsifyResult knn_sparsify(const WeightedGraph& g, std::size_t k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
    const auto start = Clock::now();
    const auto edges = g.edges();

    std::vector<std::vector<std::size_t>> incident(g.node_count());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        incident[edges[e].i].push_back(e);
        incident[edges[e].j].push_back(e);
    }

    std::vector<bool> keep(edges.size(), false);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto& inc = incident[u];
        auto other = [&](std::size_t e) { return edges[e].i == u ? edges[e].j : edges[e].i; };
        const std::size_t top = std::min(k, inc.size());
        std::partial_sort(inc.begin(), inc.begin() + static_cast<std::ptrdiff_t>(top), inc.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (edges[a].w != edges[b].w) return edges[a].w > edges[b].w;
                              return other(a) < other(b);
                          });
        for (std::size_t t = 0; t < top; ++t) keep[inc[t]] = true;
    }

    std::vector<std::size_t> removed;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (!keep[e]) removed.push_back(e);

    SparsifyResult result{keep_edges(g, keep), trace_for(Method::Knn, g, removed)};
    result.trace.seconds = seconds_since(start);
    return result;
}

SparsifyResult epsilon_sparsify(const WeightedGraph& g, double eps) {
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be nonnegative");
    const auto start = Clock::now();
    std::vector<bool> keep(g.edge_count());
    std::vector<std::size_t> removed;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        keep[e] = !(g.edges()[e].w < eps);
        if (!keep[e]) removed.push_back(e);
    }
    SparsifyResult result{keep_edges(g, keep), trace_for(Method::Epsilon, g, removed)};
    warn_if_disconnected(result.graph, g, result.trace);
    result.trace.seconds = seconds_since(start);
    return result;
}

SparsifyResult hybrid_sparsify(const WeightedGraph& g, std::size_t d_min, std::size_t d_max, double eps) {
    if (d_min < 1 || d_min > d_max) throw Error(ErrorCode::InvalidArgument, "need 1 <= d_min <= d_max");
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be nonnegative");
    if (d_min > g.node_count() - 1)
        throw Error(ErrorCode::InfeasibleBounds,
                    "d_min=" + std::to_string(d_min) + " exceeds n-1=" + std::to_string(g.node_count() - 1));
    const auto start = Clock::now();
    const auto edges = g.edges();
    auto degree = degree_sequence(g).degree;
    std::vector<bool> keep(edges.size(), true);
    std::vector<std::size_t> removed;
    const auto order = ascending_weight_order(g);

    auto drop = [&](std::size_t e) {
        keep[e] = false;
        --degree[edges[e].i];
        --degree[edges[e].j];
        removed.push_back(e);
    };

    for (std::size_t e : order) {
        const auto di = degree[edges[e].i], dj = degree[edges[e].j];
        if ((di > d_max || dj > d_max) && di > d_min && dj > d_min) drop(e);
    }

    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t e : order) {
            if (!keep[e] || !(edges[e].w < eps)) continue;
            if (degree[edges[e].i] > d_min && degree[edges[e].j] > d_min) {
                drop(e);
                changed = true;
            }
        }
    }

    SparsifyResult result{keep_edges(g, keep), trace_for(Method::Hybrid, g, removed)};
    warn_if_disconnected(result.graph, g, result.trace);
    result.trace.seconds = seconds_since(start);
    return result;
}

}  // namespace lapsparse
