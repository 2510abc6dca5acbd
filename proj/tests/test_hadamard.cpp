#include <doctest.h>

#include <cmath>

#include "cqsmooth/hadamard.hpp"

using namespace cqsmooth;

TEST_CASE("hadamard power integral") {
    CHECK(hadamard::hadamard_power_integral(2.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(hadamard::hadamard_power_integral(1.5, 4.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(hadamard::hadamard_power_integral(3.0, 1.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK_THROWS_AS(hadamard::hadamard_power_integral(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(hadamard::hadamard_power_integral(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(hadamard::hadamard_power_integral(2.0, 0.0), std::domain_error);
}

TEST_CASE("smoothed power source closed form") {
    // Gamma(-0.5)/Gamma(1.5) = (-2 sqrt(pi)) / (sqrt(pi)/2) = -4
    CHECK(hadamard::smooth_power_source(-1.5, 2, 1.0) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(hadamard::smooth_power_source(-1.5, 2, 0.0) == 0.0);
    CHECK(hadamard::smooth_power_source(-1.8, 3, 0.0) == 0.0);

    // oracle: FP int_0^t (t-s) s^mu ds evaluated with elementary antiderivatives,
    // dropping the divergent s->0 boundary contribution
    const double mu = -1.8, t = 0.5;
    const double oracle = t * std::pow(t, mu + 1) / (mu + 1) - std::pow(t, mu + 2) / (mu + 2);
    CHECK(hadamard::smooth_power_source(mu, 2, t) == doctest::Approx(oracle).epsilon(1e-14));

    CHECK_THROWS_AS(hadamard::smooth_power_source(-0.5, 2, 1.0), std::domain_error);
    CHECK_THROWS_AS(hadamard::smooth_power_source(-1.5, 1, 1.0), std::domain_error);
}

TEST_CASE("finite-part primitive") {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto ident = [](double s) { return s; };
    auto exp_f = [](double s) { return std::exp(s); };

    // f == 1: matches the Hadamard power integral of s^mu
    CHECK(hadamard::finite_part_primitive(-1.5, one, zero, 1.0) ==
          doctest::Approx(-2.0).epsilon(1e-14));
    for (double mu : {-1.1, -1.5, -1.9}) {
        for (double t : {0.3, 1.0, 2.0}) {
            CHECK(hadamard::finite_part_primitive(mu, one, zero, t) ==
                  doctest::Approx(hadamard::hadamard_power_integral(-mu, t)).epsilon(1e-14));
        }
    }

    // f(s) = s: the integrand is weakly singular, closed form t^{mu+2}/(mu+2)
    CHECK(hadamard::finite_part_primitive(-1.5, ident, one, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-13));

    // f = e^s against the term-by-term series sum_j t^{mu+j+1}/((mu+j+1) j!)
    for (double mu : {-1.5, -1.2, -1.8}) {
        for (double t : {0.4, 0.8, 1.0}) {
            double series = 0, fact = 1;
            for (int j = 0; j < 40; ++j) {
                if (j > 0) fact *= j;
                series += std::pow(t, mu + j + 1) / ((mu + j + 1) * fact);
            }
            CHECK(hadamard::finite_part_primitive(mu, exp_f, exp_f, t) ==
                  doctest::Approx(series).epsilon(1e-12));
        }
    }

    CHECK(hadamard::finite_part_primitive(-1.5, exp_f, exp_f, 0.0) == 0.0);
    CHECK_THROWS_AS(hadamard::finite_part_primitive(-0.5, one, zero, 1.0), std::domain_error);
}

TEST_CASE("finite-part convolution") {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto ident = [](double s) { return s; };
    auto exp_f = [](double s) { return std::exp(s); };

    // f == 1 reduces to the power integral of (t-s)^mu
    for (double mu : {-1.2, -1.5, -1.8}) {
        for (double t : {0.25, 1.0}) {
            CHECK(hadamard::finite_part_convolution(mu, one, zero, t) ==
                  doctest::Approx(std::pow(t, mu + 1) / (mu + 1)).epsilon(1e-14));
        }
    }

    // f(s) = s: Beta-function identity Gamma(mu+1)Gamma(2)/Gamma(mu+3) t^{mu+2}
    {
        const double mu = -1.5;
        for (double t : {0.25, 1.0}) {
            const double exact =
                std::tgamma(mu + 1) / std::tgamma(mu + 3) * std::pow(t, mu + 2);
            CHECK(hadamard::finite_part_convolution(mu, ident, one, t) ==
                  doctest::Approx(exact).epsilon(1e-13));
            CHECK(exact == doctest::Approx(-4.0 * std::sqrt(t)).epsilon(1e-13));
        }
    }

    // f = e^s against the series sum_j Gamma(mu+1)/Gamma(mu+j+2) t^{mu+j+1}
    {
        const double mu = -1.2, t = 1.0;
        double series = 0;
        for (int j = 0; j < 40; ++j)
            series += std::tgamma(mu + 1) / std::tgamma(mu + j + 2) * std::pow(t, mu + j + 1);
        CHECK(hadamard::finite_part_convolution(mu, exp_f, exp_f, t) ==
              doctest::Approx(series).epsilon(1e-12));
    }
}
