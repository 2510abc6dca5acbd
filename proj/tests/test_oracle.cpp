#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "cqsmooth/oracle.hpp"

using namespace cqsmooth;

namespace {

// Fixed-Talbot numerical inverse Laplace transform (Abate-Valko). Used as an
// independent oracle for the Laplace pair behind the scalar-mode solution.
// M = 32 is the double-precision sweet spot: larger M inflates e^{rt} until
// cancellation noise dominates.
template <class F>
double talbot_inverse(F&& laplace, double t, int M = 32) {
    const double r = 2.0 * M / (5.0 * t);
    std::complex<double> sum = 0.5 * std::exp(r * t) * laplace(std::complex<double>(r, 0.0));
    for (int j = 1; j < M; ++j) {
        const double theta = j * std::numbers::pi / M;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> z = r * theta * std::complex<double>(cot, 1.0);
        const double nu = theta + (theta * cot - 1.0) * cot;
        sum += (std::exp(z * t) * laplace(z) * std::complex<double>(1.0, nu)).real();
    }
    return (r / M) * sum.real();
}

std::complex<double> scalar_mode_laplace(const oracle::ScalarModeProblem& p,
                                         std::complex<double> z) {
    const std::complex<double> zg = std::pow(z, p.gamma);
    std::complex<double> data = p.lambda * p.ups0 / z;
    if (p.gamma > 1) data += p.lambda * p.b0 / (z * z);
    if (p.q0 != 0.0) data += p.q0 * std::tgamma(p.mu + 1) / std::pow(z, p.mu + 1);
    return data / (zg - p.lambda);
}

}  // namespace

TEST_CASE("mittag-leffler basic values") {
    CHECK(oracle::mittag_leffler(1.0, 1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(oracle::mittag_leffler(1.0, 2.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    // E_{1/2,1}(-z) = exp(z^2) erfc(z), an independent closed-form route
    CHECK(oracle::mittag_leffler(0.5, 1.0, -1.0) ==
          doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-12));

    for (double z = -4.0; z <= 4.0; z += 0.5) {
        CHECK(oracle::mittag_leffler(1.0, 1.0, z) ==
              doctest::Approx(std::exp(z)).epsilon(1e-13));
    }

    CHECK_THROWS_AS(oracle::mittag_leffler(1.0, 1.0, 9.0), oracle::OracleDomainError);
    CHECK_THROWS_AS(oracle::mittag_leffler(-0.5, 1.0, 1.0), oracle::OracleDomainError);
}

TEST_CASE("mittag-leffler against talbot inversion of its laplace pair") {
    // L{ t^{b-1} E_{a,b}(lambda t^a) } = z^{a-b} / (z^a - lambda)
    const double a = 0.7, lambda = -1.0;
    for (double b : {1.0, a + 1.0}) {
        for (double t : {0.4, 1.0}) {
            const double direct =
                std::pow(t, b - 1.0) * oracle::mittag_leffler(a, b, lambda * std::pow(t, a));
            const double inverted = talbot_inverse(
                [&](std::complex<double> z) {
                    return std::pow(z, a - b) / (std::pow(z, a) - lambda);
                },
                t);
            CHECK(direct == doctest::Approx(inverted).epsilon(1e-8));
        }
    }
}

TEST_CASE("scalar-mode exact solution matches laplace inversion") {
    oracle::ScalarModeProblem sub;
    sub.gamma = 0.7;
    sub.lambda = -1.0;
    sub.ups0 = 1.0;
    sub.q0 = 0.5;
    sub.mu = -1.2;
    for (double t : {0.3, 0.7, 1.0}) {
        const double direct = oracle::scalar_exact_V(sub, t);
        const double inverted =
            talbot_inverse([&](std::complex<double> z) { return scalar_mode_laplace(sub, z); }, t);
        CHECK(direct == doctest::Approx(inverted).epsilon(1e-8));
    }

    oracle::ScalarModeProblem wave;
    wave.gamma = 1.3;
    wave.lambda = -0.8;
    wave.ups0 = 0.7;
    wave.b0 = 0.4;
    wave.q0 = 0.3;
    wave.mu = -1.5;
    for (double t : {0.3, 0.7, 1.0}) {
        const double direct = oracle::scalar_exact_V(wave, t);
        const double inverted =
            talbot_inverse([&](std::complex<double> z) { return scalar_mode_laplace(wave, z); }, t);
        CHECK(direct == doctest::Approx(inverted).epsilon(1e-8));
    }

    oracle::ScalarModeProblem trivial;
    trivial.gamma = 0.7;
    trivial.ups0 = trivial.b0 = trivial.q0 = 0.0;
    for (double t : {0.0, 0.5, 1.0}) CHECK(oracle::scalar_exact_V(trivial, t) == 0.0);
}

TEST_CASE("convergence order estimator") {
    auto o1 = oracle::convergence_order({1e-2, 2.5e-3});
    REQUIRE(o1.size() == 1);
    CHECK(o1[0] == doctest::Approx(2.0).epsilon(1e-12));

    // Table 2 rate entry: gamma=1.7, mu=-1.2, m=2 pair
    auto o2 = oracle::convergence_order({1.0904e-8, 1.5662e-9});
    CHECK(o2[0] == doctest::Approx(2.799).epsilon(1e-3));

    auto o3 = oracle::convergence_order({6.4e-2, 1e-3});
    CHECK(o3[0] == doctest::Approx(6.0).epsilon(1e-12));

    // synthetic geometric sequence: exact order p recovered
    for (double p : {1.0, 3.5, 6.0}) {
        std::vector<double> errs;
        for (int i = 0; i < 5; ++i) errs.push_back(std::pow(2.0, -p * i));
        for (double o : oracle::convergence_order(errs))
            CHECK(o == doctest::Approx(p).epsilon(1e-12));
    }

    CHECK_THROWS_AS(oracle::convergence_order({1e-3}), std::domain_error);
    CHECK_THROWS_AS(oracle::convergence_order({1e-3, 0.0}), std::domain_error);
    CHECK_THROWS_AS(oracle::convergence_order({1e-3, -1e-4}), std::domain_error);
}
