#pragma once

// Independent ground truth for validating the stepper: Mittag-Leffler series
// on a restricted domain, the closed-form scalar-mode solution obtained from
// the Laplace pair  L{ t^{b-1} E_{a,b}(lambda t^a) } = z^{a-b} / (z^a - lambda),
// and the self-convergence order estimator.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cqsmooth::oracle {

struct OracleDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// E_{a,b}(z) = sum_n z^n / Gamma(a n + b), truncated when the term drops below
// 1e-16 of the partial sum. The plain series is trustworthy only for moderate
// |z|, hence the enforced domain.
inline double mittag_leffler(double a, double b_par, double z) {
    if (!(a > 0)) throw OracleDomainError("mittag_leffler: need a > 0");
    if (std::abs(z) > 8.0)
        throw OracleDomainError("mittag_leffler: |z| <= 8 enforced for series accuracy");
    auto inv_gamma = [](double arg) {
        if (arg <= 0 && arg == std::floor(arg)) return 0.0;  // Gamma pole
        if (arg > 0) {
            const double lg = std::lgamma(arg);
            return std::exp(-lg);
        }
        return 1.0 / std::tgamma(arg);
    };
    if (z == 0.0) return inv_gamma(b_par);
    const double lz = std::log(std::abs(z));
    double sum = 0.0;
    for (int n = 0; n < 200; ++n) {
        const double arg = a * n + b_par;
        double term;
        if (arg > 0) {
            term = std::exp(n * lz - std::lgamma(arg));
        } else {
            term = std::pow(std::abs(z), n) * inv_gamma(arg);
        }
        if (z < 0 && n % 2 == 1) term = -term;
        sum += term;
        if (n > 0 && std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    }
    throw OracleDomainError("mittag_leffler: series did not converge within 200 terms");
}

struct ScalarModeProblem {
    double gamma = 0.5;
    double lambda = -1.0;   // negative, |lambda| <= 4 for series-friendly range
    double ups0 = 0.0;
    double b0 = 0.0;        // used only for gamma > 1
    double q0 = 0.0;        // power-source amplitude
    double mu = -1.5;       // source exponent, in (-2,-1)
    double T = 1.0;

    void validate() const {
        if (!(lambda < 0) || std::abs(lambda) > 4)
            throw OracleDomainError("ScalarModeProblem: lambda must be negative with |lambda| <= 4");
        if (std::abs(lambda) * std::pow(T, gamma) > 8)
            throw OracleDomainError("ScalarModeProblem: |lambda| T^gamma <= 8 required");
    }
};

// V(t) for the one-mode problem  d^gamma (u - ups - t b) = lambda u + q0 t^mu:
//   V(t) = lambda ups0 t^gamma      E_{g,g+1}(lambda t^g)
//        + lambda b0   t^{gamma+1}  E_{g,g+2}(lambda t^g)     (gamma > 1 only)
//        + q0 Gamma(mu+1) t^{gamma+mu} E_{g,g+mu+1}(lambda t^g)
inline double scalar_exact_V(const ScalarModeProblem& p, double t) {
    p.validate();
    if (t == 0.0) return 0.0;
    const double z = p.lambda * std::pow(t, p.gamma);
    double v = p.lambda * p.ups0 * std::pow(t, p.gamma) * mittag_leffler(p.gamma, p.gamma + 1, z);
    if (p.gamma > 1)
        v += p.lambda * p.b0 * std::pow(t, p.gamma + 1) * mittag_leffler(p.gamma, p.gamma + 2, z);
    if (p.q0 != 0.0)
        v += p.q0 * std::tgamma(p.mu + 1) * std::pow(t, p.gamma + p.mu) *
             mittag_leffler(p.gamma, p.gamma + p.mu + 1, z);
    return v;
}

inline double scalar_exact_solution(const ScalarModeProblem& p, double t) {
    double u = scalar_exact_V(p, t) + p.ups0;
    if (p.gamma > 1) u += t * p.b0;
    return u;
}

// order_i = log2(errs[i] / errs[i+1]) for runs at N, 2N, 4N, ...
inline std::vector<double> convergence_order(const std::vector<double>& errs) {
    if (errs.size() < 2)
        throw std::domain_error("convergence_order: need at least two error values");
    for (double e : errs)
        if (!(e > 0)) throw std::domain_error("convergence_order: errors must be positive");
    std::vector<double> orders;
    orders.reserve(errs.size() - 1);
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
        orders.push_back(std::log(errs[i] / errs[i + 1]) / std::log(2.0));
    return orders;
}

}  // namespace cqsmooth::oracle
