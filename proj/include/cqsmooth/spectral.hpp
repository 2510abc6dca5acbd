#pragma once

// Chebyshev-Gauss-Lobatto collocation on (-1,1): nodes, first-derivative
// matrix (negative-sum-trick diagonal), the Dirichlet Laplacian as the square
// of the derivative matrix restricted to interior nodes, and Clenshaw-Curtis
// weights for the discrete L2 norm. Node ordering is the classical descending
// one, x_0 = 1, x_M = -1; interior indices are 1..M-1.

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cqsmooth/linalg.hpp"
#include "cqsmooth/real.hpp"

#if defined(CQSMOOTH_HAVE_EIGEN)
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#endif

namespace cqsmooth::spectral {

template <class Real>
std::vector<Real> cgl_nodes(int M) {
    if (M < 2) throw std::domain_error("cgl_nodes: spatial resolution M must be >= 2");
    const Real pi = pi_v<Real>();
    std::vector<Real> x(M + 1);
    for (int j = 0; j <= M; ++j) x[j] = cos(pi * j / M);
    x[0] = Real(1);
    x[M] = Real(-1);
    if (M % 2 == 0) x[M / 2] = Real(0);
    return x;
}

template <class Real>
Matrix<Real> differentiation_matrix(int M) {
    const auto x = cgl_nodes<Real>(M);
    Matrix<Real> d(M + 1, M + 1);
    auto c = [&](int i) { return (i == 0 || i == M) ? Real(2) : Real(1); };
    for (int i = 0; i <= M; ++i) {
        Real row_sum(0);
        for (int j = 0; j <= M; ++j) {
            if (i == j) continue;
            const Real sign = ((i + j) % 2 == 0) ? Real(1) : Real(-1);
            d(i, j) = (c(i) / c(j)) * sign / (x[i] - x[j]);
            row_sum += d(i, j);
        }
        d(i, i) = -row_sum;  // negative-sum trick
    }
    return d;
}

template <class Real>
struct SpatialOperator {
    int M = 0;
    std::vector<Real> nodes;      // all M+1 CGL nodes, descending
    Matrix<Real> matrix;          // (M-1)x(M-1) interior Dirichlet Laplacian
    std::vector<Real> interior;   // nodes 1..M-1
};

#if defined(CQSMOOTH_HAVE_EIGEN)
namespace detail {
template <class Real>
inline double max_real_eigenvalue(const Matrix<Real>& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = to_double(a(i, j));
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) worst = std::max(worst, es.eigenvalues()[i].real());
    return worst;
}
}  // namespace detail
#endif

template <class Real>
SpatialOperator<Real> laplacian_dirichlet(int M) {
    const auto d = differentiation_matrix<Real>(M);
    const auto d2 = d.multiply(d);
    SpatialOperator<Real> op;
    op.M = M;
    op.nodes = cgl_nodes<Real>(M);
    op.interior.assign(op.nodes.begin() + 1, op.nodes.end() - 1);
    op.matrix = Matrix<Real>(M - 1, M - 1);
    for (int i = 1; i < M; ++i)
        for (int j = 1; j < M; ++j) op.matrix(i - 1, j - 1) = d2(i, j);
#if defined(CQSMOOTH_HAVE_EIGEN)
    if (M <= 64 && detail::max_real_eigenvalue(op.matrix) >= 0.0)
        throw std::runtime_error("laplacian_dirichlet: spectrum reached the right half-plane");
#endif
    return op;
}

// Pointwise samples at the interior nodes; Dirichlet boundary values are
// implicit zeros.
template <class Real>
std::vector<Real> sample(const std::function<Real(const Real&)>& profile,
                         const std::vector<Real>& interior_nodes) {
    std::vector<Real> v(interior_nodes.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = profile(interior_nodes[j]);
    return v;
}

// Clenshaw-Curtis weights for the full CGL grid (integrate over (-1,1)).
template <class Real>
std::vector<Real> clenshaw_curtis_weights(int M) {
    if (M < 2) throw std::domain_error("clenshaw_curtis_weights: M must be >= 2");
    const Real pi = pi_v<Real>();
    std::vector<Real> w(M + 1, Real(0));
    const bool even = (M % 2 == 0);
    w[0] = w[M] = even ? Real(1) / (Real(M) * M - 1) : Real(1) / (Real(M) * M);
    for (int j = 1; j < M; ++j) {
        const Real theta = pi * j / M;
        Real v(1);
        const int kmax = even ? M / 2 - 1 : (M - 1) / 2;
        for (int k = 1; k <= kmax; ++k) v -= Real(2) * cos(2 * k * theta) / (Real(4) * k * k - 1);
        if (even) v -= cos(Real(M) * theta) / (Real(M) * M - 1);
        w[j] = Real(2) * v / M;
    }
    return w;
}

// Discrete L2 norm of an interior-node vector, weighted by the interior
// Clenshaw-Curtis weights.
template <class Real>
class InteriorNorm {
public:
    explicit InteriorNorm(int M) {
        auto w = clenshaw_curtis_weights<Real>(M);
        weights_.assign(w.begin() + 1, w.end() - 1);
    }

    Real operator()(const std::vector<Real>& v) const {
        if (v.size() != weights_.size())
            throw std::invalid_argument("InteriorNorm: dimension mismatch");
        Real s(0);
        for (std::size_t j = 0; j < v.size(); ++j) s += weights_[j] * v[j] * v[j];
        return sqrt(s);
    }

private:
    std::vector<Real> weights_;
};

}  // namespace cqsmooth::spectral
