#pragma once

// Gauss-Jacobi quadrature on [-1,1] for the weight (1-x)^alpha (1+x)^beta,
// built from the monic three-term recurrence via Golub-Welsch. The
// symmetric tridiagonal eigensolve is a templated QL sweep so rules are
// available at any scalar precision; rule sizes here stay <= 64.

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "cqsmooth/real.hpp"

namespace cqsmooth::quad {

template <class Real>
struct Rule {
    std::vector<Real> nodes;    // ascending in (-1,1)
    std::vector<Real> weights;  // positive, sum = weight-function mass
};

namespace detail {

template <class Real>
Real hypot2(const Real& a, const Real& b) {
    return sqrt(a * a + b * b);
}

// Implicitly shifted QL for a symmetric tridiagonal matrix, rotating a single
// row vector z along (enough to recover Gauss weights from eigenvector first
// components).
template <class Real>
void tridiag_ql(std::vector<Real>& d, std::vector<Real>& e, std::vector<Real>& z) {
    const int n = static_cast<int>(d.size());
    const Real eps = eps_v<Real>();
    e.push_back(Real(0));
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const Real dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 80) throw std::runtime_error("gauss_jacobi: QL iteration stalled");
                Real g = (d[l + 1] - d[l]) / (Real(2) * e[l]);
                Real r = hypot2(g, Real(1));
                g = d[m] - d[l] + e[l] / (g + (g >= Real(0) ? abs(r) : -abs(r)));
                Real s(1), c(1), p(0);
                int i = m - 1;
                for (; i >= l; --i) {
                    Real f = s * e[i];
                    const Real b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == Real(0)) {
                        d[i + 1] -= p;
                        e[m] = Real(0);
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + Real(2) * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == Real(0) && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = Real(0);
            }
        } while (m != l);
    }
    e.pop_back();
}

}  // namespace detail

template <class Real>
Rule<Real> gauss_jacobi(int n, const Real& alpha, const Real& beta) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: need at least one node");
    if (alpha <= Real(-1) || beta <= Real(-1))
        throw std::domain_error("gauss_jacobi: weight exponents must exceed -1");

    // Monic Jacobi recurrence p_{j+1} = (x - a_j) p_j - b_j p_{j-1}.
    std::vector<Real> a(n), b(n);
    const Real apb = alpha + beta;
    a[0] = (beta - alpha) / (apb + 2);
    for (int j = 1; j < n; ++j) {
        const Real two_j = Real(2 * j);
        a[j] = (beta * beta - alpha * alpha) / ((two_j + apb) * (two_j + apb + 2));
        if (j == 1)
            b[j] = Real(4) * (alpha + 1) * (beta + 1) / ((apb + 2) * (apb + 2) * (apb + 3));
        else
            b[j] = Real(4) * Real(j) * (Real(j) + alpha) * (Real(j) + beta) * (Real(j) + apb) /
                   ((two_j + apb) * (two_j + apb) * (two_j + apb + 1) * (two_j + apb - 1));
    }

    // mass of the weight: 2^{a+b+1} B(a+1, b+1)
    const Real mu0 = pow(Real(2), apb + 1) * tgamma(alpha + 1) * tgamma(beta + 1) / tgamma(apb + 2);

    std::vector<Real> d = a, e(n, Real(0)), z(n, Real(0));
    for (int j = 1; j < n; ++j) e[j - 1] = sqrt(b[j]);
    z[0] = Real(1);
    detail::tridiag_ql(d, e, z);

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });

    Rule<Real> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = d[idx[i]];
        rule.weights[i] = mu0 * z[idx[i]] * z[idx[i]];
    }
    return rule;
}

// Rules are requested per integrand evaluation deep inside grid assembly;
// regenerating one costs a full tridiagonal eigensolve, so share them.
template <class Real>
const Rule<Real>& cached_gauss_jacobi(int n, const Real& alpha, const Real& beta) {
    struct Entry {
        int n;
        Real alpha, beta;
        Rule<Real> rule;
    };
    static std::deque<Entry> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    for (const auto& e : cache)
        if (e.n == n && e.alpha == alpha && e.beta == beta) return e.rule;
    cache.push_back(Entry{n, alpha, beta, gauss_jacobi(n, alpha, beta)});
    return cache.back().rule;
}

enum class SingularSide { left, right };

// Integral over (a,b) of (s-a)^alpha * g(s) (or (b-s)^alpha * g(s)) with the
// algebraic factor absorbed into the quadrature weight on the panel touching
// the singular endpoint; remaining panels use plain Gauss-Legendre. With one
// panel (the default) the result is exact for polynomial g up to degree
// 2*nodes-1.
template <class Real, class F>
Real singular_quadrature(const Real& alpha, F&& integrand, const Real& a, const Real& b, int nodes,
                         SingularSide side = SingularSide::left, int panels = 1) {
    if (nodes < 1) throw std::invalid_argument("singular_quadrature: nodes must be >= 1");
    if (panels < 1) throw std::invalid_argument("singular_quadrature: panels must be >= 1");
    if (!(alpha > Real(-1) && alpha < Real(0)))
        throw std::domain_error("singular_quadrature: weight exponent must lie in (-1,0)");
    const Real width = (b - a) / panels;
    const Real half = width / 2;
    Real total(0);
    {
        // panel touching the singular endpoint
        const Rule<Real>& rule = (side == SingularSide::left)
                                     ? cached_gauss_jacobi(nodes, Real(0), alpha)
                                     : cached_gauss_jacobi(nodes, alpha, Real(0));
        const Real start = (side == SingularSide::left) ? a : b - width;
        Real sum(0);
        for (int i = 0; i < nodes; ++i) {
            const Real s = start + half * (rule.nodes[i] + 1);
            sum += rule.weights[i] * integrand(s);
        }
        total += pow(half, alpha + 1) * sum;
    }
    const Rule<Real>& leg = cached_gauss_jacobi(nodes, Real(0), Real(0));
    for (int p = 1; p < panels; ++p) {
        const Real start = (side == SingularSide::left) ? a + width * p : b - width * (p + 1);
        Real sum(0);
        for (int i = 0; i < nodes; ++i) {
            const Real s = start + half * (leg.nodes[i] + 1);
            const Real dist = (side == SingularSide::left) ? s - a : b - s;
            sum += leg.weights[i] * pow(dist, alpha) * integrand(s);
        }
        total += half * sum;
    }
    return total;
}

// Plain Gauss-Legendre convenience on (a,b).
template <class Real, class F>
Real integrate(F&& integrand, const Real& a, const Real& b, int nodes) {
    const Rule<Real>& rule = cached_gauss_jacobi(nodes, Real(0), Real(0));
    const Real half = (b - a) / 2;
    Real total(0);
    for (int i = 0; i < nodes; ++i) {
        const Real s = a + half * (rule.nodes[i] + 1);
        total += rule.weights[i] * integrand(s);
    }
    return half * total;
}

}  // namespace cqsmooth::quad
