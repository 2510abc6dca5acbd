#pragma once

// Hadamard finite-part primitives for hyper-singular exponents mu in (-2,-1).
// A single integration by parts trades the non-integrable factor s^mu for the
// weakly singular s^{mu+1}, which Gauss-Jacobi quadrature then absorbs as a
// weight. Every divergent boundary contribution is discarded, which is the
// finite-part prescription.

#include <functional>
#include <stdexcept>

#include "cqsmooth/quadrature.hpp"
#include "cqsmooth/real.hpp"

namespace cqsmooth::hadamard {

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pairwise node-count check threshold; integrands here are entire, so a
// healthy rule pair agrees far below this.
template <class Real>
Real check_tolerance() {
    if constexpr (std::is_same_v<Real, double>) return 1e-12;
    else return Real("1e-40");
}

// finite part of int_0^t s^{-beta} ds = t^{1-beta}/(1-beta), beta > 1
template <class Real>
Real hadamard_power_integral(const Real& beta, const Real& t) {
    if (!(beta > Real(1)))
        throw std::domain_error("hadamard_power_integral: beta must exceed 1 (else integrate normally)");
    if (!(t > Real(0))) throw std::domain_error("hadamard_power_integral: t must be positive");
    return pow(t, Real(1) - beta) / (Real(1) - beta);
}

// (J^m t^mu)(t) = Gamma(mu+1) t^{mu+m} / Gamma(mu+m+1)
template <class Real>
Real smooth_power_source(const Real& mu, int m, const Real& t) {
    if (!(mu > Real(-2) && mu < Real(-1)))
        throw std::domain_error("smooth_power_source: mu must lie in (-2,-1)");
    if (m < 2) throw std::domain_error("smooth_power_source: need m >= 2");
    if (!(mu + Real(m) > Real(0)))
        throw std::domain_error("smooth_power_source: smoothing insufficient, mu+m must be positive");
    if (t == Real(0)) return Real(0);
    return tgamma(mu + 1) * pow(t, mu + Real(m)) / tgamma(mu + Real(m) + 1);
}

namespace detail {

template <class Real, class F>
Real checked_singular(const Real& alpha, F&& g, const Real& a, const Real& b, int nodes,
                      quad::SingularSide side, bool verify, int panels) {
    using quad::singular_quadrature;
    const Real fine = singular_quadrature(alpha, g, a, b, nodes, side, panels);
    const int coarse_nodes = nodes > 9 ? nodes - 8 : nodes;
    if (!verify || coarse_nodes == nodes) return fine;
    const Real coarse = singular_quadrature(alpha, g, a, b, coarse_nodes, side, panels);
    const Real scale = abs(fine) > Real(1) ? abs(fine) : Real(1);
    if (abs(fine - coarse) > check_tolerance<Real>() * scale)
        throw QuadratureFailure("singular quadrature did not converge at the requested node count");
    return fine;
}

}  // namespace detail

// FP int_0^t s^mu f(s) ds = (1/(mu+1)) [ t^{mu+1} f(t) - int_0^t s^{mu+1} f'(s) ds ]
template <class Real, class F, class DF>
Real finite_part_primitive(const Real& mu, F&& f, DF&& fprime, const Real& t, int nodes = 32,
                           bool verify = true, int panels = 1) {
    if (!(mu > Real(-2) && mu < Real(-1)))
        throw std::domain_error("finite_part_primitive: mu must lie in (-2,-1)");
    if (t == Real(0)) return Real(0);
    const Real inner = detail::checked_singular(mu + 1, fprime, Real(0), t, nodes,
                                                quad::SingularSide::left, verify, panels);
    return (pow(t, mu + 1) * f(t) - inner) / (mu + 1);
}

// FP int_0^t (t-s)^mu f(s) ds
//   = t^{mu+1} f(0)/(mu+1) + (1/(mu+1)) int_0^t (t-s)^{mu+1} f'(s) ds
template <class Real, class F, class DF>
Real finite_part_convolution(const Real& mu, F&& f, DF&& fprime, const Real& t, int nodes = 32,
                             bool verify = true, int panels = 1) {
    if (!(mu > Real(-2) && mu < Real(-1)))
        throw std::domain_error("finite_part_convolution: mu must lie in (-2,-1)");
    if (t == Real(0)) return Real(0);
    const Real inner = detail::checked_singular(mu + 1, fprime, Real(0), t, nodes,
                                                quad::SingularSide::right, verify, panels);
    return (pow(t, mu + 1) * f(Real(0)) + inner) / (mu + 1);
}

}  // namespace cqsmooth::hadamard
