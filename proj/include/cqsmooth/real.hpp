#pragma once

// Numeric scalar support. The whole library is templated on the scalar type
// so that every run can execute either in plain double or in extended
// precision. The discrete m-th derivative on the right-hand side of the
// scheme amplifies pointwise noise in the source grid by roughly
// (c_k * N)^(m - gamma), which exceeds 1e28 for k = 6, m = 7, N = 3200; the
// fine-grid table entries are therefore unreachable in double and the table
// driver runs on `extended` (~78 significant digits) instead.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#if defined(CQSMOOTH_HAVE_MPFR)
#include <boost/multiprecision/mpfr.hpp>
#else
#include <boost/multiprecision/cpp_bin_float.hpp>
#endif
#include <boost/math/constants/constants.hpp>

namespace cqsmooth {

#if defined(CQSMOOTH_HAVE_MPFR)
using extended = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<78>, boost::multiprecision::et_off>;
#else
using extended = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<78>, boost::multiprecision::et_off>;
#endif

// ADL-friendly math shims: `using std::exp; exp(x)` resolves for double,
// boost::multiprecision types resolve via their own namespace.
using std::abs;
using std::cos;
using std::exp;
using std::lgamma;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tgamma;

template <class Real>
Real pi_v() {
    if constexpr (std::is_same_v<Real, double>) {
        return std::numbers::pi_v<double>;
    } else {
        return boost::math::constants::pi<Real>();
    }
}

template <class Real>
double to_double(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
        return x;
    } else {
        return static_cast<double>(x);
    }
}

template <class Real>
Real eps_v() {
    return std::numeric_limits<Real>::epsilon();
}

}  // namespace cqsmooth
