#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lapsparse {

using NodeId = std::size_t;

/// Undirected edge key in canonical (i < j) order.
struct EdgeKey {
    NodeId i = 0;
    NodeId j = 0;

    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct Edge {
    NodeId i = 0;
    NodeId j = 0;
    double w = 0.0;

    EdgeKey key() const { return {i, j}; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Symmetric, nonnegative, loop-free weighted graph.
///
/// Edges are kept sorted by (i, j) with i < j; an absent edge and a zero
/// weight are the same thing. Values are immutable: every mutation returns
/// a new graph.
class WeightedGraph {
public:
    WeightedGraph() = default;

    std::size_t node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::span<const Edge> edges() const { return edges_; }

    /// Weight of (i, j) in either orientation, or nullopt when absent.
    std::optional<double> weight(NodeId i, NodeId j) const;
    bool has_edge(NodeId i, NodeId j) const { return weight(i, j).has_value(); }

    /// Dense adjacency matrix W.
    Eigen::MatrixXd adjacency() const;
    std::vector<std::vector<NodeId>> adjacency_lists() const;

    friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

private:
    friend WeightedGraph build_graph(std::size_t, std::span<const Edge>);
    friend WeightedGraph remove_edge(const WeightedGraph&, NodeId, NodeId);
    friend WeightedGraph add_edge(const WeightedGraph&, NodeId, NodeId, double);

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
};

/// Validates and canonicalizes an edge list. Throws SelfLoop,
/// NegativeWeight, DuplicateEdge or IndexOutOfRange. Zero-weight edges are
/// dropped (after the duplicate check).
WeightedGraph build_graph(std::size_t n, std::span<const Edge> edge_list);

/// Complete graph with Gaussian kernel weights
/// w_ij = exp(-|f_i - f_j|^2 / bandwidth^2), one feature row per node.
/// Identical rows are allowed (weight 1) and reported through `warnings`.
WeightedGraph complete_graph_from_kernel(const Eigen::MatrixXd& features, double bandwidth,
                                         std::vector<std::string>* warnings = nullptr);

WeightedGraph remove_edge(const WeightedGraph& g, NodeId i, NodeId j);
/// Inverse of remove_edge. Throws DuplicateEdge if (i, j) already exists.
WeightedGraph add_edge(const WeightedGraph& g, NodeId i, NodeId j, double w);

struct DegreeSequence {
    std::vector<std::size_t> degree;
    std::vector<double> weighted;  // D_ii
};

DegreeSequence degree_sequence(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

/// bridge[e] is true iff removing edges()[e] disconnects its endpoints.
std::vector<bool> bridges(const WeightedGraph& g);

/// Combinatorial Laplacian L = D - W, stored sparse.
class Laplacian {
public:
    using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    static constexpr std::size_t kDefaultDenseCap = 2048;

    explicit Laplacian(Sparse matrix);

    std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
    const Sparse& sparse() const { return matrix_; }
    const Eigen::VectorXd& diagonal() const { return diagonal_; }

    /// Dense copy; throws SizeCapExceeded above `cap`.
    Eigen::MatrixXd dense(std::size_t cap = kDefaultDenseCap) const;

    /// Upper bound on the spectral radius (Gershgorin: 2 * max D_ii).
    double norm_bound() const { return 2.0 * (diagonal_.size() ? diagonal_.maxCoeff() : 0.0); }

private:
    Sparse matrix_;
    Eigen::VectorXd diagonal_;
};

Laplacian laplacian_of(const WeightedGraph& g);

}  // namespace lapsparse
