#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qcms/analytic.hpp"

using namespace qcms;

TEST_CASE("bachelier vanilla") {
    const BachelierInputs atm{0.03, 0.03, 0.0083, 5.0, 1.0};
    CHECK(std::abs(bachelier_vanilla(atm, OptionType::call) - 0.0083 * std::sqrt(5.0) * 0.3989422804014327) < 1e-15);
    CHECK(std::abs(bachelier_vanilla(atm, OptionType::call) - 7.4041150820340002e-3) < 1e-7);

    const BachelierInputs frozen{0.02, 0.01, 0.0, 5.0, 0.9};
    CHECK(bachelier_vanilla(frozen, OptionType::call) == doctest::Approx(0.01 * 0.9).epsilon(1e-15));
    CHECK(bachelier_vanilla(frozen, OptionType::put) == 0.0);

    const BachelierInputs itm{0.02, 0.01, 0.0083, 5.0, 1.0};
    const double s = 0.0083 * std::sqrt(5.0);
    const double quad = oracle::normal_expectation([&](double z) { return std::max(0.02 + s * z - 0.01, 0.0); },
                                                   {(0.01 - 0.02) / s});
    CHECK(oracle::rel_diff(bachelier_vanilla(itm, OptionType::call), quad) < 1e-12);
    CHECK(std::abs(bachelier_vanilla(itm, OptionType::call) - bachelier_vanilla(itm, OptionType::put) - 0.01) < 1e-16);
}

TEST_CASE("bachelier quadratic") {
    const BachelierInputs atm{0.03, 0.03, 0.0083, 5.0, 0.8};
    CHECK(oracle::rel_diff(bachelier_quadratic(atm, QuadraticType::call), 0.8 * 0.0083 * 0.0083 * 5.0 / 2.0) < 1e-15);

    const BachelierInputs in{0.02, 0.01, 0.0083, 5.0, 1.0};
    CHECK(oracle::rel_diff(bachelier_quadratic(in, QuadraticType::swap), 0.01 * 0.01 + 0.0083 * 0.0083 * 5.0) < 1e-15);

    const double s = 0.0083 * std::sqrt(5.0);
    const double quad = oracle::normal_expectation(
        [&](double z) { const double h = std::max(0.02 + s * z - 0.01, 0.0); return h * h; }, {(0.01 - 0.02) / s});
    CHECK(oracle::rel_diff(bachelier_quadratic(in, QuadraticType::call), quad) < 1e-10);
}

TEST_CASE("bachelier quadratic parity on random inputs") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BachelierInputs in{-0.01 + 0.06 * u(gen), -0.01 + 0.06 * u(gen), 1e-3 + 0.02 * u(gen),
                                 0.1 + 20.0 * u(gen), 0.2 + 0.8 * u(gen)};
        const double c = bachelier_quadratic(in, QuadraticType::call);
        const double p = bachelier_quadratic(in, QuadraticType::put);
        const double w = bachelier_quadratic(in, QuadraticType::swap);
        worst = std::max(worst, std::abs(w - (c + p)) / w);
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("bachelier quadratic limits") {
    const double s = 0.01;
    const BachelierInputs deep_itm{0.03 + 12.0 * s, 0.03, s, 1.0, 1.0};
    const double mu = 12.0 * s;
    CHECK(oracle::rel_diff(bachelier_quadratic(deep_itm, QuadraticType::call), mu * mu + s * s) < 1e-15);
    const BachelierInputs deep_otm{0.03 - 12.0 * s, 0.03, s, 1.0, 1.0};
    CHECK(bachelier_quadratic(deep_otm, QuadraticType::call) < 1e-32);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)bachelier_vanilla(BachelierInputs{0.03, 0.03, 0.01, 0.0, 1.0}, OptionType::call),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)bachelier_vanilla(BachelierInputs{0.03, 0.03, 0.01, 1.0, 0.0}, OptionType::call),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)bachelier_quadratic(BachelierInputs{0.03, 0.03, 0.01, -1.0, 1.0}, QuadraticType::call),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)exact_quadratic_swap_normal_sabr(0.03, 0.03, -0.01, 0.3, 5.0), std::invalid_argument);
}

TEST_CASE("exact normal SABR second moment") {
    CHECK(oracle::rel_diff(exact_quadratic_swap_normal_sabr(0.03, 0.02, 0.0083, 0.0, 5.0),
                           0.01 * 0.01 + 0.0083 * 0.0083 * 5.0) < 1e-15);
    const double at0 = exact_quadratic_swap_normal_sabr(0.03, 0.02, 0.0083, 0.0, 5.0);
    const double near0 = exact_quadratic_swap_normal_sabr(0.03, 0.02, 0.0083, 1e-8, 5.0);
    CHECK(oracle::rel_diff(at0, near0) < 1e-6);
    for (double nu : {0.0, 0.1, 0.5, 1.0}) CHECK(exact_quadratic_swap_normal_sabr(0.03, 0.01, 0.0083, nu, 5.0) >= 4e-4);
}

TEST_CASE("exact second moment against simulated variance integral") {
    // E[int_0^T sigma_t^2 dt] with sigma sampled exactly on a grid and trapezoid in time
    const double alpha = 0.0083, nu = 0.335, T = 5.0;
    const int steps = 200;
    const int paths = 200000;
    const double dt = T / steps;
    std::mt19937_64 gen(99);
    std::normal_distribution<double> z;
    double sum = 0.0, sum_sq = 0.0;
    for (int p = 0; p < paths; ++p) {
        double sigma = alpha;
        double integral = 0.0;
        for (int i = 0; i < steps; ++i) {
            const double next = sigma * std::exp(nu * std::sqrt(dt) * z(gen) - 0.5 * nu * nu * dt);
            integral += 0.5 * (sigma * sigma + next * next) * dt;
            sigma = next;
        }
        sum += integral;
        sum_sq += integral * integral;
    }
    const double mean = sum / paths;
    const double se = std::sqrt((sum_sq / paths - mean * mean) / (paths - 1));
    const double exact = exact_quadratic_swap_normal_sabr(0.03, 0.03, alpha, nu, T);
    CHECK(std::abs(mean - exact) < 3.0 * se);
}
