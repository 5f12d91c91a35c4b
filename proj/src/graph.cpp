#include "lapsparse/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "lapsparse/error.hpp"

namespace lapsparse {

namespace {

std::string edge_name(NodeId i, NodeId j) {
    std::ostringstream os;
    os << "(" << i << ", " << j << ")";
    return os.str();
}

std::optional<std::size_t> find_edge(const std::vector<Edge>& edges, EdgeKey key) {
    auto it = std::lower_bound(edges.begin(), edges.end(), key,
                               [](const Edge& e, const EdgeKey& k) { return e.key() < k; });
    if (it == edges.end() || it->key() != key) return std::nullopt;
    return static_cast<std::size_t>(it - edges.begin());
}

EdgeKey canonical(NodeId i, NodeId j) { return i < j ? EdgeKey{i, j} : EdgeKey{j, i}; }

}  // namespace

std::optional<double> WeightedGraph::weight(NodeId i, NodeId j) const {
    if (i == j || i >= n_ || j >= n_) return std::nullopt;
    auto idx = find_edge(edges_, canonical(i, j));
    if (!idx) return std::nullopt;
    return edges_[*idx].w;
}

Eigen::MatrixXd WeightedGraph::adjacency() const {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (const auto& e : edges_) {
        w(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.w;
        w(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = e.w;
    }
    return w;
}

std::vector<std::vector<NodeId>> WeightedGraph::adjacency_lists() const {
    std::vector<std::vector<NodeId>> adj(n_);
    for (const auto& e : edges_) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    return adj;
}

WeightedGraph build_graph(std::size_t n, std::span<const Edge> edge_list) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "node count must be positive");
    std::vector<Edge> edges;
    edges.reserve(edge_list.size());
    for (const auto& e : edge_list) {
        if (e.i >= n || e.j >= n)
            throw Error(ErrorCode::IndexOutOfRange, "edge " + edge_name(e.i, e.j) + " with n=" + std::to_string(n));
        if (e.i == e.j) throw Error(ErrorCode::SelfLoop, "edge " + edge_name(e.i, e.j));
        if (!(e.w >= 0.0) || !std::isfinite(e.w))
            throw Error(ErrorCode::NegativeWeight, "edge " + edge_name(e.i, e.j) + " has weight " + std::to_string(e.w));
        auto key = canonical(e.i, e.j);
        edges.push_back({key.i, key.j, e.w});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.key() < b.key(); });
    auto dup = std::adjacent_find(edges.begin(), edges.end(),
                                  [](const Edge& a, const Edge& b) { return a.key() == b.key(); });
    if (dup != edges.end()) throw Error(ErrorCode::DuplicateEdge, "edge " + edge_name(dup->i, dup->j));
    std::erase_if(edges, [](const Edge& e) { return e.w == 0.0; });

    WeightedGraph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    return g;
}

WeightedGraph complete_graph_from_kernel(const Eigen::MatrixXd& features, double bandwidth,
                                         std::vector<std::string>* warnings) {
    const auto n = static_cast<std::size_t>(features.rows());
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "kernel graph needs at least 2 feature rows");
    if (!(bandwidth > 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");

    const double h2 = bandwidth * bandwidth;
    bool degenerate = true;
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = (features.row(static_cast<Eigen::Index>(i)) - features.row(static_cast<Eigen::Index>(j)))
                                  .squaredNorm();
            if (d2 != 0.0) degenerate = false;
            // Far-apart rows can underflow to 0; keep the graph complete.
            double w = std::exp(-d2 / h2);
            if (w == 0.0) w = std::numeric_limits<double>::min();
            edges.push_back({i, j, w});
        }
    }
    if (degenerate && warnings)
        warnings->push_back("DegenerateFeatures: all feature rows identical, every weight is 1");
    return build_graph(n, edges);
}

WeightedGraph remove_edge(const WeightedGraph& g, NodeId i, NodeId j) {
    auto idx = (i == j) ? std::nullopt : find_edge(g.edges_, canonical(i, j));
    if (!idx) throw Error(ErrorCode::EdgeNotFound, "edge " + edge_name(i, j));
    WeightedGraph out;
    out.n_ = g.n_;
    out.edges_ = g.edges_;
    out.edges_.erase(out.edges_.begin() + static_cast<std::ptrdiff_t>(*idx));
    return out;
}

WeightedGraph add_edge(const WeightedGraph& g, NodeId i, NodeId j, double w) {
    if (i >= g.n_ || j >= g.n_) throw Error(ErrorCode::IndexOutOfRange, "edge " + edge_name(i, j));
    if (i == j) throw Error(ErrorCode::SelfLoop, "edge " + edge_name(i, j));
    if (!(w >= 0.0)) throw Error(ErrorCode::NegativeWeight, "edge " + edge_name(i, j));
    if (g.has_edge(i, j)) throw Error(ErrorCode::DuplicateEdge, "edge " + edge_name(i, j));
    WeightedGraph out = g;
    if (w == 0.0) return out;
    auto key = canonical(i, j);
    auto pos = std::lower_bound(out.edges_.begin(), out.edges_.end(), key,
                                [](const Edge& e, const EdgeKey& k) { return e.key() < k; });
    out.edges_.insert(pos, Edge{key.i, key.j, w});
    return out;
}

DegreeSequence degree_sequence(const WeightedGraph& g) {
    DegreeSequence d{std::vector<std::size_t>(g.node_count(), 0), std::vector<double>(g.node_count(), 0.0)};
    for (const auto& e : g.edges()) {
        ++d.degree[e.i];
        ++d.degree[e.j];
        d.weighted[e.i] += e.w;
        d.weighted[e.j] += e.w;
    }
    return d;
}

bool is_connected(const WeightedGraph& g) {
    const auto n = g.node_count();
    if (n <= 1) return true;
    const auto adj = g.adjacency_lists();
    std::vector<bool> seen(n, false);
    std::queue<NodeId> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == n;
}

std::vector<bool> bridges(const WeightedGraph& g) {
    // Iterative Tarjan low-link over edge indices.
    const auto n = g.node_count();
    const auto edges = g.edges();
    std::vector<std::vector<std::pair<NodeId, std::size_t>>> adj(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        adj[edges[e].i].push_back({edges[e].j, e});
        adj[edges[e].j].push_back({edges[e].i, e});
    }

    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> disc(n, kUnvisited), low(n, 0), parent_edge(n, kUnvisited), cursor(n, 0);
    std::vector<bool> is_bridge(edges.size(), false);
    std::size_t timer = 0;
    std::vector<NodeId> stack;

    for (NodeId root = 0; root < n; ++root) {
        if (disc[root] != kUnvisited) continue;
        disc[root] = low[root] = timer++;
        stack.push_back(root);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            if (cursor[u] < adj[u].size()) {
                auto [v, e] = adj[u][cursor[u]++];
                if (e == parent_edge[u]) continue;
                if (disc[v] == kUnvisited) {
                    parent_edge[v] = e;
                    disc[v] = low[v] = timer++;
                    stack.push_back(v);
                } else {
                    low[u] = std::min(low[u], disc[v]);
                }
            } else {
                stack.pop_back();
                if (parent_edge[u] != kUnvisited) {
                    const auto& pe = edges[parent_edge[u]];
                    const NodeId p = pe.i == u ? pe.j : pe.i;
                    low[p] = std::min(low[p], low[u]);
                    if (low[u] > disc[p]) is_bridge[parent_edge[u]] = true;
                }
            }
        }
    }
    return is_bridge;
}

Laplacian::Laplacian(Sparse matrix) : matrix_(std::move(matrix)), diagonal_(matrix_.diagonal()) {}

Eigen::MatrixXd Laplacian::dense(std::size_t cap) const {
    if (size() > cap)
        throw Error(ErrorCode::SizeCapExceeded,
                    "dense Laplacian of size " + std::to_string(size()) + " exceeds cap " + std::to_string(cap));
    return Eigen::MatrixXd(matrix_);
}

Laplacian laplacian_of(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    const auto deg = degree_sequence(g);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * g.edge_count() + g.node_count());
    for (const auto& e : g.edges()) {
        triplets.emplace_back(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j), -e.w);
        triplets.emplace_back(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i), -e.w);
    }
    for (Eigen::Index i = 0; i < n; ++i) triplets.emplace_back(i, i, deg.weighted[static_cast<std::size_t>(i)]);
    Laplacian::Sparse m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return Laplacian(std::move(m));
}

}  // namespace lapsparse
