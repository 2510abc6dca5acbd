#pragma once

// Convolution quadrature generated by BDF-k: coefficients of the generating
// polynomial delta_k(xi) = sum_{j=1..k} (1/j)(1-xi)^j and power-series
// coefficients of delta_k(xi)^order for arbitrary real order. Integer orders
// reuse the same machinery for the discrete m-th derivative on the scheme's
// right-hand side.

#include <stdexcept>
#include <string>
#include <vector>

#include "cqsmooth/real.hpp"

namespace cqsmooth::cq {

template <class Real>
struct BdfPolynomial {
    int k = 0;
    std::vector<Real> coeffs;  // coefficient of xi^i in tau*delta_{tau,k}(xi)
};

template <class Real>
struct WeightSequence {
    Real order{};
    int k = 0;
    int n_max = 0;
    std::vector<Real> weights;  // omega_0 .. omega_{n_max}
};

namespace detail {

// Kahan accumulator. The Miller recursion feeds the table runs, where weight
// noise is amplified by tau^{-order}; compensated accumulation keeps the
// recursion error at a small multiple of the scalar epsilon.
template <class Real>
struct CompensatedSum {
    Real sum{0}, c{0};
    void add(const Real& value) {
        const Real y = value - c;
        const Real t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

inline long long binomial_ll(int n, int r) {
    long long out = 1;
    for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

}  // namespace detail

inline void check_step_number(int k) {
    if (k < 1 || k > 6)
        throw std::domain_error("BDF step number k must lie in 1..6, got " + std::to_string(k));
}

template <class Real>
BdfPolynomial<Real> bdf_polynomial(int k) {
    check_step_number(k);
    BdfPolynomial<Real> p;
    p.k = k;
    p.coeffs.assign(k + 1, Real(0));
    for (int j = 1; j <= k; ++j) {
        const Real inv_j = Real(1) / j;
        for (int i = 0; i <= j; ++i) {
            const Real term = inv_j * Real(detail::binomial_ll(j, i));
            p.coeffs[i] += (i % 2 == 0) ? term : -term;
        }
    }
    return p;
}

// Power-series coefficients of (sum_i c_i xi^i)^order by the Miller power
// recursion: omega_n = (1/(n c_0)) sum_{j=1..min(n,k)} (order*j-(n-j)) c_j omega_{n-j}.
template <class Real>
WeightSequence<Real> cq_weights(const Real& order, int k, int n_max) {
    check_step_number(k);
    if (n_max < 0) throw std::domain_error("cq_weights: n_max must be >= 0");
    const auto p = bdf_polynomial<Real>(k);
    WeightSequence<Real> w;
    w.order = order;
    w.k = k;
    w.n_max = n_max;
    w.weights.assign(n_max + 1, Real(0));
    w.weights[0] = pow(p.coeffs[0], order);
    for (int n = 1; n <= n_max; ++n) {
        detail::CompensatedSum<Real> acc;
        const int jmax = n < k ? n : k;
        for (int j = 1; j <= jmax; ++j)
            acc.add((order * j - Real(n - j)) * p.coeffs[j] * w.weights[n - j]);
        w.weights[n] = acc.sum / (Real(n) * p.coeffs[0]);
    }
    return w;
}

// tau^{-order} * sum_{j=0..n} omega_j * values[n-j], i.e. the CQ approximation
// of the fractional derivative at the last grid point.
template <class Real>
std::vector<Real> discrete_conv_derivative(const WeightSequence<Real>& w,
                                           const std::vector<std::vector<Real>>& values,
                                           const Real& tau) {
    if (values.empty()) throw std::invalid_argument("discrete_conv_derivative: empty history");
    const int n = static_cast<int>(values.size()) - 1;
    if (w.n_max < n)
        throw std::invalid_argument("discrete_conv_derivative: weight sequence shorter than history");
    const std::size_t dim = values[0].size();
    std::vector<detail::CompensatedSum<Real>> acc(dim);
    for (int j = 0; j <= n; ++j) {
        const auto& v = values[n - j];
        if (v.size() != dim)
            throw std::invalid_argument("discrete_conv_derivative: state dimension mismatch");
        for (std::size_t i = 0; i < dim; ++i) acc[i].add(w.weights[j] * v[i]);
    }
    const Real scale = pow(tau, -w.order);
    std::vector<Real> out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = scale * acc[i].sum;
    return out;
}

template <class Real>
Real discrete_conv_derivative_scalar(const WeightSequence<Real>& w, const std::vector<Real>& values,
                                     const Real& tau) {
    std::vector<std::vector<Real>> states;
    states.reserve(values.size());
    for (const auto& v : values) states.push_back({v});
    return discrete_conv_derivative(w, states, tau)[0];
}

// Entrywise convolution of two weight sequences (test support for the group
// property and for integer-order consistency).
template <class Real>
std::vector<Real> convolve(const std::vector<Real>& a, const std::vector<Real>& b, int n_max) {
    std::vector<Real> out(n_max + 1, Real(0));
    for (int i = 0; i <= n_max && i < static_cast<int>(a.size()); ++i)
        for (int j = 0; i + j <= n_max && j < static_cast<int>(b.size()); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

}  // namespace cqsmooth::cq
