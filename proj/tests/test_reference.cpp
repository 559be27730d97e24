#include <doctest.h>

#include "oracles.hpp"
#include "qcms/analytic.hpp"
#include "qcms/mathcore.hpp"
#include "qcms/reference.hpp"

using namespace qcms;

namespace {

const SabrParams kFiveY{0.0083, 0.335, 0.23};

double bachelier_call(double F0, double K, double sigma, double T) {
    return bachelier_vanilla(BachelierInputs{F0, K, sigma, T, 1.0}, OptionType::call);
}

}  // namespace

TEST_CASE("hagan normal vol at the money") {
    const double T = 5.0;
    const double atm = kFiveY.alpha * (1.0 + (2.0 - 3.0 * kFiveY.rho * kFiveY.rho) * kFiveY.nu * kFiveY.nu * T / 24.0);
    CHECK(oracle::rel_diff(hagan_normal_vol(kFiveY, 0.03, 0.03, T), atm) < 1e-15);
    // the log formula itself just outside the series window
    const double zeta = 1e-5;
    const double K = 0.03 - zeta * kFiveY.alpha / kFiveY.nu;
    const double x = std::log((std::sqrt(1.0 - 2.0 * kFiveY.rho * zeta + zeta * zeta) + zeta - kFiveY.rho) / (1.0 - kFiveY.rho));
    CHECK(oracle::rel_diff(hagan_normal_vol(kFiveY, 0.03, K, T), kFiveY.alpha * zeta / x * atm / kFiveY.alpha) < 1e-10);
}

TEST_CASE("hagan normal vol is smooth through zeta = 0") {
    const double T = 5.0;
    for (double zeta : {-1e-7, 1e-7}) {
        const double K = 0.03 - zeta * kFiveY.alpha / kFiveY.nu;
        const double series = kFiveY.alpha * (1.0 - 0.5 * kFiveY.rho * zeta) *
                              (1.0 + (2.0 - 3.0 * kFiveY.rho * kFiveY.rho) * kFiveY.nu * kFiveY.nu * T / 24.0);
        CHECK(oracle::rel_diff(hagan_normal_vol(kFiveY, 0.03, K, T), series) < 1e-10);
    }
    for (double zeta : {1e-6, -1e-6}) {
        const double K1 = 0.03 - zeta * (1.0 - 1e-9) * kFiveY.alpha / kFiveY.nu;
        const double K2 = 0.03 - zeta * (1.0 + 1e-9) * kFiveY.alpha / kFiveY.nu;
        CHECK(oracle::rel_diff(hagan_normal_vol(kFiveY, 0.03, K1, T), hagan_normal_vol(kFiveY, 0.03, K2, T)) < 1e-10);
    }
}

TEST_CASE("hagan normal vol edge cases") {
    const SabrParams frozen{0.0083, 0.0, 0.4};
    for (double K : {-0.01, 0.03, 0.1}) CHECK(hagan_normal_vol(frozen, 0.03, K, 5.0) == 0.0083);
    for (double K : {-0.05, 0.0, 0.05, 0.2}) CHECK(hagan_normal_vol(kFiveY, 0.03, K, 5.0) > 0.0);
    CHECK_THROWS_AS((void)hagan_normal_vol(SabrParams{0.01, 0.3, 1.0}, 0.03, 0.03, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)hagan_normal_vol(kFiveY, 0.03, 0.03, 0.0), std::invalid_argument);
}

TEST_CASE("balland equivalent local vol") {
    CHECK(balland_equivalent_local_vol(kFiveY, 0.03, 0.03) == kFiveY.alpha);
    const SabrParams frozen{0.0083, 0.0, 0.4};
    for (double K : {-0.02, 0.03, 0.08}) CHECK(balland_equivalent_local_vol(frozen, 0.03, K) == doctest::Approx(0.0083).epsilon(1e-15));
    const SabrParams flat_rho{0.0083, 0.335, 0.0};
    CHECK(oracle::rel_diff(balland_equivalent_local_vol(flat_rho, 0.03, 0.03 + 0.0083 / 0.335), 0.0083 * std::sqrt(2.0)) < 1e-15);
    CHECK_THROWS_AS((void)balland_equivalent_local_vol(SabrParams{0.0, 0.3, 0.1}, 0.03, 0.03), std::invalid_argument);
}

TEST_CASE("balland vol is positive, convex, and matches its Taylor point") {
    const double h = 1e-4;
    for (int i = 0; i <= 200; ++i) {
        const double K = -0.1 + 0.3 * i / 200.0;
        const double v = balland_equivalent_local_vol(kFiveY, 0.03, K);
        CHECK(v >= kFiveY.alpha * kFiveY.rho_hat() * (1.0 - 1e-12));
        const double second = balland_equivalent_local_vol(kFiveY, 0.03, K + h) - 2.0 * v + balland_equivalent_local_vol(kFiveY, 0.03, K - h);
        CHECK(second > 0.0);
    }
    const auto point = balland_local_vol_point(kFiveY);
    const double F0 = 0.03;
    const double h1 = 1e-5;
    const double d1 = (balland_equivalent_local_vol(kFiveY, F0, F0 + h1) - balland_equivalent_local_vol(kFiveY, F0, F0 - h1)) / (2 * h1);
    const double d2 = (balland_equivalent_local_vol(kFiveY, F0, F0 + h) - 2 * kFiveY.alpha + balland_equivalent_local_vol(kFiveY, F0, F0 - h)) / (h * h);
    CHECK(point.sigma0 == kFiveY.alpha);
    CHECK(oracle::rel_diff(point.dsigma, d1) < 1e-6);
    CHECK(oracle::rel_diff(point.d2sigma, d2) < 1e-5);
}

TEST_CASE("quadratic replication converges at trapezoid order") {
    const double F0 = 0.03, sigma = 0.0083, T = 5.0;
    const double sd = sigma * std::sqrt(T);
    const auto call = [&](double k) { return bachelier_call(F0, k, sigma, T); };
    for (double K : {0.03, 0.02, 0.045}) {
        const double exact = bachelier_quadratic(BachelierInputs{F0, K, sigma, T, 1.0}, QuadraticType::call);
        const auto coarse = replicate_quadratic_call(call, K, StrikeGrid{K, K + 12.0 * sd, 1001});
        const auto fine = replicate_quadratic_call(call, K, StrikeGrid{K, K + 12.0 * sd, 2001});
        const double ratio = std::abs(coarse.value - exact) / std::abs(fine.value - exact);
        CHECK(ratio > 3.8);
        CHECK(ratio < 4.2);
        // leading Euler-Maclaurin term: 2 * h^2 / 12 * (C'(hi) - C'(K)), C'(k) = -P(F_T > k)
        const double h = 12.0 * sd / 2000.0;
        const double slope_lo = -qcms::norm_sf((K - F0) / sd);
        const double predicted = 2.0 * h * h / 12.0 * (0.0 - slope_lo);
        CHECK(oracle::rel_diff(fine.value - exact, predicted) < 1e-3);
        CHECK(fine.truncation_estimate >= 0.0);
        CHECK(fine.truncation_estimate < 1e-25);
    }
}

TEST_CASE("replication edge cases") {
    const auto zero_vol = [](double k) { return std::max(0.03 - k, 0.0); };
    CHECK(replicate_quadratic_call(zero_vol, 0.04, StrikeGrid{0.04, 0.1, 100}).value == 0.0);
    const auto call = [](double k) { return bachelier_call(0.03, k, 0.0083, 5.0); };
    double prev = 0.0;
    for (double w : {1.0, 2.0, 4.0, 8.0}) {
        const auto r = replicate_quadratic_call(call, 0.03, StrikeGrid{0.03, 0.03 + w * 0.0186, 500});
        CHECK(r.value >= prev);
        prev = r.value;
    }
    CHECK_THROWS_AS((void)replicate_quadratic_call(call, 0.03, StrikeGrid{0.02, 0.1, 100}), std::invalid_argument);
    CHECK_THROWS_AS((void)replicate_quadratic_call(call, 0.03, StrikeGrid{0.03, 0.1, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)replicate_quadratic_call(call, 0.03, StrikeGrid{0.03, 0.03, 10}), std::invalid_argument);
}

TEST_CASE("put replication") {
    const double F0 = 0.03, sigma = 0.0083, T = 5.0, K = 0.035;
    const double sd = sigma * std::sqrt(T);
    const auto put = [&](double k) { return bachelier_vanilla(BachelierInputs{F0, k, sigma, T, 1.0}, OptionType::put); };
    const auto r = replicate_quadratic_put(put, K, StrikeGrid{K - 12.0 * sd, K, 4001});
    CHECK(oracle::rel_diff(r.value, bachelier_quadratic(BachelierInputs{F0, K, sigma, T, 1.0}, QuadraticType::put)) < 2e-6);
}
