#include "lapsparse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lapsparse/error.hpp"

namespace lapsparse {

namespace {

constexpr double kSignThreshold = 1e-10;

/// Modified Gram-Schmidt (two passes) against the constant vector and
/// previously kept columns. Numerically dependent columns are dropped.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& s, const Eigen::VectorXd& u) {
    Eigen::MatrixXd q(s.rows(), s.cols());
    Eigen::Index kept = 0;
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
        Eigen::VectorXd v = s.col(c);
        const double original = v.norm();
        if (original == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) {
            v -= u * u.dot(v);
            for (Eigen::Index k = 0; k < kept; ++k) v -= q.col(k) * q.col(k).dot(v);
        }
        const double norm = v.norm();
        if (norm <= 1e-10 * original) continue;
        q.col(kept++) = v / norm;
    }
    return q.leftCols(kept);
}

void check_finite_size(const LaplacianOperator& op) {
    if (op.n < 2) throw Error(ErrorCode::InvalidArgument, "Fiedler pair needs N >= 2");
    if (!op.apply) throw Error(ErrorCode::InvalidArgument, "operator has no apply function");
}

}  // namespace

void normalize_sign(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > kSignThreshold) {
            if (v[i] < 0) v = -v;
            return;
        }
    }
}

LaplacianOperator LaplacianOperator::from(const Laplacian& lap) {
    LaplacianOperator op;
    op.n = lap.size();
    op.apply = [&m = lap.sparse()](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) { y.noalias() = m * x; };
    op.diagonal = lap.diagonal();
    op.norm_bound = lap.norm_bound();
    return op;
}

LaplacianOperator LaplacianOperator::with_edge_removed(const Laplacian& lap, NodeId m, NodeId n, double w) {
    if (m == n) throw Error(ErrorCode::SelfLoop, "perturbation on a single node");
    if (m >= lap.size() || n >= lap.size()) throw Error(ErrorCode::IndexOutOfRange, "perturbation index");
    LaplacianOperator op;
    op.n = lap.size();
    const auto mi = static_cast<Eigen::Index>(m);
    const auto ni = static_cast<Eigen::Index>(n);
    op.apply = [&mat = lap.sparse(), mi, ni, w](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
        y.noalias() = mat * x;
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const double d = w * (x(mi, c) - x(ni, c));
            y(mi, c) -= d;
            y(ni, c) += d;
        }
    };
    op.diagonal = lap.diagonal();
    op.diagonal[mi] -= w;
    op.diagonal[ni] -= w;
    op.norm_bound = 2.0 * op.diagonal.maxCoeff();
    return op;
}

Spectrum dense_spectrum(const Laplacian& lap, std::size_t cap) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.dense(cap));
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

FiedlerPair dense_fiedler_pair(const Laplacian& lap, std::size_t cap) {
    if (lap.size() < 2) throw Error(ErrorCode::InvalidArgument, "Fiedler pair needs N >= 2");
    auto spectrum = dense_spectrum(lap, cap);
    FiedlerPair pair;
    pair.lambda2 = std::max(0.0, spectrum.eigenvalues[1]);
    pair.v2 = spectrum.eigenvectors.col(1).normalized();
    normalize_sign(pair.v2);
    return pair;
}

FiedlerPair fiedler_pair(const LaplacianOperator& op, std::span<const double> warm_start,
                         const EigensolverOptions& options) {
    check_finite_size(op);
    if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
    if (!warm_start.empty() && warm_start.size() != op.n)
        throw Error(ErrorCode::DimensionMismatch, "warm start length differs from N");

    const auto n = static_cast<Eigen::Index>(op.n);
    const auto block = static_cast<Eigen::Index>(std::clamp<std::size_t>(options.block_size, 1, op.n - 1));
    const std::size_t max_iterations = options.max_iterations ? options.max_iterations : 10 * op.n;
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::MatrixXd x(n, block);
    for (Eigen::Index c = 0; c < block; ++c)
        for (Eigen::Index i = 0; i < n; ++i) x(i, c) = uniform(rng);
    if (!warm_start.empty()) {
        Eigen::Map<const Eigen::VectorXd> warm(warm_start.data(), n);
        if (warm.norm() > 0.0) x.col(0) = warm;
    }
    x = orthonormalize(x, u);
    if (x.cols() < block) throw Error(ErrorCode::NoConvergence, "degenerate initial block");

    Eigen::VectorXd precond(n);
    for (Eigen::Index i = 0; i < n; ++i) precond[i] = op.diagonal[i] > 0.0 ? 1.0 / op.diagonal[i] : 1.0;

    Eigen::MatrixXd ax(n, block);
    op.apply(x, ax);
    Eigen::VectorXd theta;
    {
        Eigen::MatrixXd gram = x.transpose() * ax;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (gram + gram.transpose()));
        x = x * rr.eigenvectors();
        ax = ax * rr.eigenvectors();
        theta = rr.eigenvalues();
    }

    const double threshold = options.tol * op.norm_bound;
    Eigen::MatrixXd p;
    std::size_t it = 0;
    for (;; ++it) {
        Eigen::MatrixXd r = ax - x * theta.asDiagonal();
        if (r.col(0).norm() <= threshold) break;
        if (it >= max_iterations)
            throw Error(ErrorCode::NoConvergence, "LOBPCG hit the iteration cap of " + std::to_string(max_iterations) +
                                                      " (residual " + std::to_string(r.col(0).norm()) + ")");

        Eigen::MatrixXd w = precond.asDiagonal() * r;
        Eigen::MatrixXd s(n, x.cols() + w.cols() + p.cols());
        s << x, w, p;
        s = orthonormalize(s, u);

        Eigen::MatrixXd as(n, s.cols());
        op.apply(s, as);
        Eigen::MatrixXd gram = s.transpose() * as;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (gram + gram.transpose()));
        const Eigen::MatrixXd c = rr.eigenvectors().leftCols(block);

        const Eigen::Index rest = s.cols() - block;
        p = s.rightCols(rest) * c.bottomRows(rest);
        x = s * c;
        ax = as * c;
        theta = rr.eigenvalues().head(block);
    }

    FiedlerPair pair;
    pair.v2 = x.col(0).normalized();
    normalize_sign(pair.v2);
    pair.lambda2 = std::max(0.0, theta[0]);
    pair.iterations = it;
    return pair;
}

FiedlerPair fiedler_pair(const Laplacian& lap, std::span<const double> warm_start, const EigensolverOptions& options) {
    return fiedler_pair(LaplacianOperator::from(lap), warm_start, options);
}

FiedlerPair fiedler_pair_or_dense(const Laplacian& lap, std::span<const double> warm_start,
                                  const EigensolverOptions& options) {
    try {
        return fiedler_pair(lap, warm_start, options);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence) throw;
        return dense_fiedler_pair(lap);
    }
}

Eigen::VectorXd gft(const Spectrum& spectrum, const Eigen::VectorXd& x) {
    if (x.size() != spectrum.eigenvectors.rows())
        throw Error(ErrorCode::DimensionMismatch, "signal length differs from N");
    return spectrum.eigenvectors.transpose() * x;
}

Eigen::VectorXd inverse_gft(const Spectrum& spectrum, const Eigen::VectorXd& alpha) {
    if (alpha.size() != spectrum.eigenvectors.cols())
        throw Error(ErrorCode::DimensionMismatch, "coefficient length differs from N");
    return spectrum.eigenvectors * alpha;
}

FilterSpec::FilterSpec(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "filter needs at least one coefficient");
    for (double a : coeffs_)
        if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "filter coefficients must be finite");
}

double FilterSpec::response(double lambda) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lambda + *it;
    return acc;
}

Eigen::VectorXd apply_filter(const Laplacian& lap, const FilterSpec& spec, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != lap.size())
        throw Error(ErrorCode::DimensionMismatch, "signal length differs from N");
    const auto coeffs = spec.coeffs();
    Eigen::VectorXd y = coeffs.back() * x;
    for (std::size_t p = coeffs.size() - 1; p-- > 0;) {
        Eigen::VectorXd ly = lap.sparse() * y;
        y = ly + coeffs[p] * x;
    }
    return y;
}

Eigen::SparseMatrix<double> perturbation_matrix(std::size_t n, NodeId m, NodeId k, double w) {
    if (m == k) throw Error(ErrorCode::SelfLoop, "perturbation on a single node");
    if (m >= n || k >= n) throw Error(ErrorCode::IndexOutOfRange, "perturbation index");
    if (!(w >= 0.0)) throw Error(ErrorCode::NegativeWeight, "perturbation weight");
    const auto mi = static_cast<int>(m);
    const auto ki = static_cast<int>(k);
    Eigen::SparseMatrix<double> e(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (w == 0.0) return e;
    std::vector<Eigen::Triplet<double>> t{{mi, ki, w}, {ki, mi, w}, {mi, mi, -w}, {ki, ki, -w}};
    e.setFromTriplets(t.begin(), t.end());
    return e;
}

namespace {

struct Pole {
    double d;
    double c;
};

// Root of 1/w - sum c / (d - x), which decreases on (lo, hi).
double secular_root(const std::vector<Pole>& poles, double w, double lo, double hi) {
    const double eps = std::numeric_limits<double>::epsilon();
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double f = 1.0 / w, fp = 0.0;
        for (const auto& p : poles) {
            const double delta = p.d - x;
            f -= p.c / delta;
            fp -= p.c / (delta * delta);
        }
        if (f == 0.0) return x;
        (f > 0.0 ? lo : hi) = x;
        double next = x - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * eps * std::max(std::abs(x), eps) || hi - lo <= 4.0 * eps * std::abs(hi))
            return next;
        x = next;
    }
    return x;
}

}  // namespace

double removal_lambda2(const Spectrum& spectrum, NodeId m, NodeId n, double w) {
    const auto& d = spectrum.eigenvalues;
    const auto& v = spectrum.eigenvectors;
    const auto size = d.size();
    if (size < 2) throw Error(ErrorCode::InvalidArgument, "removal_lambda2 needs N >= 2");
    if (m >= static_cast<std::size_t>(size) || n >= static_cast<std::size_t>(size))
        throw Error(ErrorCode::IndexOutOfRange, "edge endpoint outside the spectrum");
    if (w == 0.0) return std::max(0.0, d[1]);

    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(d.cwiseAbs().maxCoeff(), w);
    const double merge_tol = 64.0 * eps * scale;
    const double deflate_tol = std::pow(64.0 * eps, 2);
    const Eigen::VectorXd z = (v.row(static_cast<Eigen::Index>(m)) - v.row(static_cast<Eigen::Index>(n))).transpose();

    // Eigenvalues that the update leaves in place, and merged poles.
    std::vector<double> fixed;
    std::vector<Pole> poles;
    for (Eigen::Index i = 0; i < size; ++i) {
        const double c = z[i] * z[i];
        if (c <= deflate_tol) {
            fixed.push_back(d[i]);
        } else if (!poles.empty() && d[i] - poles.back().d <= merge_tol) {
            fixed.push_back(d[i]);
            poles.back().c += c;
        } else {
            poles.push_back({d[i], c});
        }
    }
    if (poles.empty()) return std::max(0.0, d[1]);

    double total = 0.0;
    for (const auto& p : poles) total += p.c;
    std::vector<double> candidates = fixed;
    const double r0 = secular_root(poles, w, poles[0].d - w * total - merge_tol, poles[0].d);
    candidates.push_back(r0);
    std::partial_sort(candidates.begin(), candidates.begin() + std::min<std::ptrdiff_t>(2, candidates.size()),
                      candidates.end());
    double second = candidates.size() > 1 ? candidates[1] : std::numeric_limits<double>::infinity();
    if (poles.size() > 1 && second > poles[0].d) second = std::min(second, secular_root(poles, w, poles[0].d, poles[1].d));
    return std::max(0.0, second);
}

double perturbation_score(NodeId m, NodeId n, double w, std::span<const double> v2) {
    if (m >= v2.size() || n >= v2.size()) throw Error(ErrorCode::IndexOutOfRange, "score index");
    return std::sqrt(2.0) * w * std::abs(v2[m] - v2[n]);
}

Interval eigenvalue_bound(double lambda2, double score) {
    if (!(score >= 0.0)) throw Error(ErrorCode::InvalidArgument, "score must be nonnegative");
    return {lambda2 - score, lambda2 + score};
}

}  // namespace lapsparse
