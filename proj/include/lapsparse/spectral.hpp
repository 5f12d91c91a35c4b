#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lapsparse/graph.hpp"

namespace lapsparse {

/// Full eigendecomposition: eigenvalues ascending, eigenvectors as
/// orthonormal columns in matching order.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

/// Second-smallest Laplacian eigenpair. v2 has unit norm and its first
/// nonzero component is positive.
struct FiedlerPair {
    double lambda2 = 0.0;
    Eigen::VectorXd v2;
    std::size_t iterations = 0;
};

struct EigensolverOptions {
    /// Converged when |L x - lambda x| <= tol * |L| (Gershgorin estimate).
    double tol = 1e-8;
    /// 0 means 10 * N.
    std::size_t max_iterations = 0;
    std::size_t block_size = 2;
    std::uint64_t seed = 0x5eed;
};

/// Real symmetric operator whose null space contains the constant vector.
struct LaplacianOperator {
    std::size_t n = 0;
    std::function<void(const Eigen::MatrixXd& x, Eigen::MatrixXd& y)> apply;
    Eigen::VectorXd diagonal;
    double norm_bound = 0.0;

    static LaplacianOperator from(const Laplacian& lap);
    /// Operator for L + E^{m,n}, i.e. `lap` with edge (m, n) of weight w removed.
    static LaplacianOperator with_edge_removed(const Laplacian& lap, NodeId m, NodeId n, double w);
};

Spectrum dense_spectrum(const Laplacian& lap, std::size_t cap = Laplacian::kDefaultDenseCap);

/// Fiedler pair from a dense eigendecomposition.
FiedlerPair dense_fiedler_pair(const Laplacian& lap, std::size_t cap = Laplacian::kDefaultDenseCap);

/// Block LOBPCG with Jacobi preconditioning, run in the orthogonal
/// complement of the constant vector. `warm_start` (may be empty) seeds the
/// first block column. Throws NoConvergence when the iteration cap is hit.
FiedlerPair fiedler_pair(const LaplacianOperator& op, std::span<const double> warm_start = {},
                         const EigensolverOptions& options = {});
FiedlerPair fiedler_pair(const Laplacian& lap, std::span<const double> warm_start = {},
                         const EigensolverOptions& options = {});

/// fiedler_pair, falling back to the dense solver on NoConvergence.
FiedlerPair fiedler_pair_or_dense(const Laplacian& lap, std::span<const double> warm_start = {},
                                  const EigensolverOptions& options = {});

/// Graph Fourier transform alpha = V^T x, and its inverse V alpha.
Eigen::VectorXd gft(const Spectrum& spectrum, const Eigen::VectorXd& x);
Eigen::VectorXd inverse_gft(const Spectrum& spectrum, const Eigen::VectorXd& alpha);

/// Polynomial graph filter sum_p a_p L^p.
class FilterSpec {
public:
    explicit FilterSpec(std::vector<double> coeffs);

    std::span<const double> coeffs() const { return coeffs_; }
    std::size_t taps() const { return coeffs_.size() - 1; }

    /// Scalar response sum_p a_p lambda^p.
    double response(double lambda) const;

private:
    std::vector<double> coeffs_;
};

/// P(L) x via Horner's rule; L^p is never formed.
Eigen::VectorXd apply_filter(const Laplacian& lap, const FilterSpec& spec, const Eigen::VectorXd& x);

/// E^{m,n}: the four-entry matrix with L + E equal to the Laplacian after
/// removing edge (m, n) of weight w.
Eigen::SparseMatrix<double> perturbation_matrix(std::size_t n, NodeId m, NodeId k, double w);

/// lambda2 of L - w (e_m - e_n)(e_m - e_n)^T, i.e. the Laplacian after
/// removing edge (m, n), from the full spectrum of L. Solves the rank-one
/// secular equation 1 = w sum_i z_i^2 / (d_i - mu) with z = V^T (e_m - e_n),
/// O(N) per call once the spectrum is known.
double removal_lambda2(const Spectrum& spectrum, NodeId m, NodeId n, double w);

/// |E^{m,n} v2|_2 in closed form: sqrt(2) * w * |v2[m] - v2[n]|.
double perturbation_score(NodeId m, NodeId n, double w, std::span<const double> v2);
inline double perturbation_score(NodeId m, NodeId n, double w, const Eigen::VectorXd& v2) {
    return perturbation_score(m, n, w, std::span<const double>(v2.data(), static_cast<std::size_t>(v2.size())));
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

/// Interval [lambda2 - score, lambda2 + score] that holds some eigenvalue of
/// the perturbed Laplacian.
Interval eigenvalue_bound(double lambda2, double score);

/// Flip sign so the first component with magnitude above 1e-10 is positive.
void normalize_sign(Eigen::VectorXd& v);

}  // namespace lapsparse
