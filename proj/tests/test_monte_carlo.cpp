#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcms/analytic.hpp"
#include "qcms/monte_carlo.hpp"

using namespace qcms;

namespace {

const SabrParams kFiveY{0.0083, 0.335, 0.23};

McConfig config(std::size_t paths, int steps, std::uint64_t seed, bool antithetic = true) {
    McConfig cfg;
    cfg.n_paths = paths;
    cfg.n_steps = steps;
    cfg.seed = seed;
    cfg.antithetic = antithetic;
    return cfg;
}

}  // namespace

TEST_CASE("frozen vol reproduces Bachelier moments") {
    const SabrParams frozen{0.0083, 0.0, 0.0};
    const double T = 5.0, F0 = 0.03;
    const auto s = simulate_terminal(ModelSpec::normal_sabr(frozen, F0), T, config(200000, 20, 1, false));
    const auto mean = price_function(s, [](double x) { return x; }, 1.0);
    CHECK(std::abs(mean.mean - F0) < 3.0 * mean.std_error);
    const auto second = price_function(s, [&](double x) { return (x - F0) * (x - F0); }, 1.0);
    CHECK(std::abs(second.mean - frozen.alpha * frozen.alpha * T) < 3.0 * second.std_error);
    const auto qc = price_payoff(s, Payoff::quadratic_call, F0, 1.0);
    CHECK(std::abs(qc.mean - frozen.alpha * frozen.alpha * T / 2.0) < 3.0 * qc.std_error);
}

TEST_CASE("normal SABR second moment and martingale") {
    const double T = 5.0, F0 = 0.03;
    const auto s = simulate_terminal(ModelSpec::normal_sabr(kFiveY, F0), T, config(400000, 160, 3));
    const auto second = price_payoff(s, Payoff::quadratic_swap, F0, 1.0);
    CHECK(std::abs(second.mean - exact_quadratic_swap_normal_sabr(F0, F0, kFiveY.alpha, kFiveY.nu, T)) < 3.0 * second.std_error);
    const auto s2 = simulate_terminal(ModelSpec::normal_sabr(kFiveY, F0), T, config(400000, 160, 4, false));
    const auto mean = price_function(s2, [](double x) { return x; }, 1.0);
    CHECK(std::abs(mean.mean - F0) < 3.0 * mean.std_error);
}

TEST_CASE("euler vol scheme also matches the second moment") {
    McConfig cfg = config(200000, 500, 5);
    cfg.scheme = McScheme::euler;
    const auto s = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, cfg);
    const auto second = price_payoff(s, Payoff::quadratic_swap, 0.03, 1.0);
    CHECK(std::abs(second.mean - exact_quadratic_swap_normal_sabr(0.03, 0.03, kFiveY.alpha, kFiveY.nu, 5.0)) < 3.0 * second.std_error);
}

TEST_CASE("payoff pricing on constant samples") {
    TerminalSamples s;
    s.values.assign(10, 0.03);
    const auto e = price_payoff(s, Payoff::quadratic_swap, 0.02, 0.9);
    CHECK(e.mean == doctest::Approx(0.9 * 1e-4).epsilon(1e-14));
    CHECK(e.std_error == 0.0);
    CHECK(e.n_paths == 10);
    TerminalSamples empty;
    CHECK_THROWS_AS((void)price_payoff(empty, Payoff::call, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("seed determinism and worker independence") {
    McConfig cfg = config(20000, 30, 77);
    cfg.chunk_size = 1024;
    cfg.n_threads = 1;
    const auto a = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, cfg);
    const auto b = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, cfg);
    cfg.n_threads = 3;
    const auto c = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, cfg);
    CHECK(a.values == b.values);
    CHECK(a.values == c.values);
    cfg.seed = 78;
    const auto d = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, cfg);
    CHECK(a.values != d.values);
}

TEST_CASE("antithetic pairs do not inflate the error of a monotone payoff") {
    const auto anti = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, config(200000, 40, 8, true));
    const auto plain = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, config(200000, 40, 8, false));
    const auto ea = price_payoff(anti, Payoff::call, 0.03, 1.0);
    const auto ep = price_payoff(plain, Payoff::call, 0.03, 1.0);
    CHECK(ea.std_error <= 1.05 * ep.std_error);
}

TEST_CASE("standard error scales with the square root of paths") {
    const auto small = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, config(50000, 40, 9));
    const auto big = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, config(200000, 40, 10));
    const double ratio = price_payoff(small, Payoff::call, 0.035, 1.0).std_error / price_payoff(big, Payoff::call, 0.035, 1.0).std_error;
    CHECK(ratio > 2.0 * 0.8);
    CHECK(ratio < 2.0 * 1.2);
}

TEST_CASE("local vol and SLV dynamics stay martingales") {
    const auto lv = ModelSpec::lv([](double F) { return 0.008 + 0.2 * (F - 0.03) * (F - 0.03) + 1e-4; }, 0.03);
    const auto s = simulate_terminal(lv, 5.0, config(100000, 100, 11));
    const auto m = price_function(s, [](double x) { return x; }, 1.0);
    CHECK(std::abs(m.mean - 0.03) < 3.0 * m.std_error);
    const auto slv = ModelSpec::slv([](double F) { return 1.0 + 5.0 * (F - 0.03) * (F - 0.03); }, kFiveY, 0.03);
    const auto s2 = simulate_terminal(slv, 5.0, config(100000, 100, 12));
    const auto m2 = price_function(s2, [](double x) { return x; }, 1.0);
    CHECK(std::abs(m2.mean - 0.03) < 3.0 * m2.std_error);
}

TEST_CASE("constant SLV factor rescales normal SABR") {
    McConfig cfg = config(20000, 50, 13);
    const SabrParams half{kFiveY.alpha / 2.0, kFiveY.nu, kFiveY.rho};
    const auto slv = simulate_terminal(ModelSpec::slv([](double) { return 2.0; }, half, 0.03), 5.0, cfg);
    const auto ns = simulate_terminal(ModelSpec::normal_sabr(kFiveY, 0.03), 5.0, cfg);
    for (std::size_t i = 0; i < 100; ++i) CHECK(slv.values[i] == doctest::Approx(ns.values[i]).epsilon(1e-13));
}

TEST_CASE("path failures carry diagnostics") {
    const auto bad = ModelSpec::lv([](double F) { return F > 0.035 ? std::nan("") : 0.01; }, 0.03);
    try {
        (void)simulate_terminal(bad, 5.0, config(1000, 50, 14));
        FAIL("expected McError");
    } catch (const McError& e) {
        CHECK(e.step() >= 0);
        CHECK(e.step() < 50);
        CHECK(std::string(e.what()).find("path") != std::string::npos);
    }
    const auto negative = ModelSpec::lv([](double) { return -0.01; }, 0.03);
    CHECK_THROWS_AS((void)simulate_terminal(negative, 1.0, config(10, 2, 1)), McError);
}

TEST_CASE("configuration validation") {
    const auto m = ModelSpec::normal_sabr(kFiveY, 0.03);
    CHECK_THROWS_AS((void)simulate_terminal(m, 1.0, config(1, 10, 1, false)), std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_terminal(m, 1.0, config(11, 10, 1, true)), std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_terminal(m, 1.0, config(10, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_terminal(m, 0.0, config(10, 10, 1)), std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_terminal(ModelSpec::normal_sabr(SabrParams{0.01, 0.3, 1.0}, 0.03), 1.0, config(10, 10, 1)), std::invalid_argument);
    CHECK(parse_scheme("euler") == McScheme::euler);
    CHECK_THROWS_AS((void)parse_scheme("milstein"), std::invalid_argument);
}

TEST_CASE("fixed-seed regression snapshot") {
    const SabrParams tenY{0.0075, 0.243, 0.235};
    const double T = 10.0;
    const auto s = simulate_terminal(ModelSpec::normal_sabr(tenY, 0.03), T, config(100000, 640, 42));
    const auto e = price_payoff(s, Payoff::call, 0.03 + tenY.alpha * std::sqrt(T), 1.0);
    CHECK(e.seed == 42);
    CHECK(e.n_paths == 100000);
    CHECK(e.mean == doctest::Approx(0.0031647492836088874).epsilon(1e-12));
}

TEST_CASE("functional estimates at simple points") {
    const SlvPoint unit{1.0, 0.0, 0.0, 0.0083, 0.335, 0.23};
    const auto est = estimate_g_functionals(unit, 5.0, {0.0, 1.0}, config(100000, 500, 15, false));
    CHECK(std::abs(est[0].hinge_sq.mean - 0.5) < 3.0 * est[0].hinge_sq.std_error);
    const double y = 1.0;
    const double ind_g2 = 0.5 * 0.23 * 0.335 * std::sqrt(5.0) * y * oracle::gaussian_density(y);
    CHECK(std::abs(est[1].ind_g2.mean - ind_g2) < 3.0 * est[1].ind_g2.std_error);
}

TEST_CASE("SLV functional of the squared second-order term") {
    // E[1{g1 > y} g2^2] from E[g2^2 | z] = T (k^2 (z^2 - 1)^2 / 4 + nu^2 rho_hat^2 (2 z^2 + 1) / 6), k = alpha C' + nu rho
    const SlvPoint point{1.0, 0.5, -2.0, 0.0083, 0.335, 0.23};
    const double T = 5.0;
    const double k = point.alpha * point.dc + point.nu * point.rho;
    const double perp = point.nu * point.nu * (1.0 - point.rho * point.rho);
    const auto est = estimate_g_functionals(point, T, {-1.0, 0.5}, config(100000, 500, 16));
    for (const auto& e : est) {
        const double y = e.y;
        const double expect = oracle::normal_expectation(
            [&](double z) { return z > y ? T * (k * k * (z * z - 1) * (z * z - 1) / 4.0 + perp * (2 * z * z + 1) / 6.0) : 0.0; }, {y});
        CHECK(std::abs(e.ind_g2sq.mean - expect) < 3.0 * e.ind_g2sq.std_error);
    }
}

TEST_CASE("bridge-conditioned second-order term") {
    const SlvPoint point{1.0, 0.5, -2.0, 0.0083, 0.335, 0.23};
    const double T = 5.0, y = 0.8;
    const double k = point.alpha * point.dc + point.nu * point.rho;
    const double perp = point.nu * point.nu * (1.0 - point.rho * point.rho);
    const auto e = estimate_conditional_g2sq(point, T, y, config(100000, 500, 17));
    const double expect = T * (k * k * (y * y - 1) * (y * y - 1) / 4.0 + perp * (2 * y * y + 1) / 6.0);
    CHECK(std::abs(e.mean - expect) < 3.0 * e.std_error);
}
