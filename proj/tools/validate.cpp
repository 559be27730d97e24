#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "commands.hpp"
#include "qcms/analytic.hpp"
#include "qcms/mathcore.hpp"
#include "qcms/reference.hpp"

namespace qcms::app {

namespace {

class Report {
public:
    explicit Report(std::ostream& out) : out_(out) { out_ << "check_name,measured,bound,verdict\n"; }

    // passes iff measured <= bound
    void at_most(const std::string& name, double measured, double bound) {
        const bool ok = std::isfinite(measured) && measured <= bound;
        all_ok_ = all_ok_ && ok;
        out_ << name << ',' << format_number(measured) << ',' << format_number(bound) << ','
             << (ok ? "PASS" : "FAIL") << '\n';
    }
    [[nodiscard]] bool ok() const noexcept { return all_ok_; }

private:
    std::ostream& out_;
    bool all_ok_ = true;
};

double rel(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

struct Draw {
    double alpha, nu, rho, T, y, F0;
    double dsigma, d2sigma, c0, dc, d2c;
};

std::vector<Draw> random_draws(std::uint64_t seed, int n) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Draw> out;
    for (int i = 0; i < n; ++i) {
        Draw d{};
        d.alpha = 1e-3 + u(gen) * (2e-2 - 1e-3);
        d.nu = 0.6 * u(gen);
        d.rho = -0.9 + 1.8 * u(gen);
        d.T = 1.0 + 19.0 * u(gen);
        d.y = -4.0 + 8.0 * u(gen);
        d.F0 = -0.01 + 0.06 * u(gen);
        d.dsigma = -0.5 + u(gen);
        d.d2sigma = (-1.0 + 2.0 * u(gen)) * d.nu * d.nu / d.alpha;
        d.c0 = 0.5 + 1.5 * u(gen);
        d.dc = -1.0 + 2.0 * u(gen);
        d.d2c = (-20.0 + 40.0 * u(gen));
        out.push_back(d);
    }
    return out;
}

void suite_parity(Report& r, std::uint64_t seed) {
    const auto draws = random_draws(seed, 1000);
    double lv = 0.0, slv = 0.0, sabr = 0.0, bach = 0.0, kernel = 0.0;
    for (const auto& d : draws) {
        const SabrParams p{d.alpha, d.nu, d.rho};
        const double K = d.F0 + d.y * d.alpha * std::sqrt(d.T);
        auto parity = [&](auto price) {
            const double c = price(QuadraticType::call);
            const double q = price(QuadraticType::put);
            const double s = price(QuadraticType::swap);
            return std::abs(s - (c + q)) / std::abs(s);
        };
        const LocalVolPoint lp{d.alpha, d.dsigma, d.d2sigma};
        const SlvPoint sp{d.c0, d.dc, d.d2c, d.alpha, d.nu, d.rho};
        lv = std::max(lv, parity([&](QuadraticType t) { return quadratic_lv(lp, d.F0, K, d.T, 1.0, t).value; }));
        slv = std::max(slv, parity([&](QuadraticType t) { return quadratic_slv(sp, d.F0, K, d.T, 1.0, t).value; }));
        sabr = std::max(sabr, parity([&](QuadraticType t) { return quadratic_normal_sabr(p, d.F0, K, d.T, 1.0, t).value; }));
        const BachelierInputs in{d.F0, K, d.alpha, d.T, 1.0};
        bach = std::max(bach, parity([&](QuadraticType t) { return bachelier_quadratic(in, t); }));
        kernel = std::max(kernel, rel(g_quad_call(d.y) + g_quad_put(d.y), 1.0 + d.y * d.y));
        kernel = std::max(kernel, std::abs(g_call(d.y) - g_call(-d.y) + d.y));
    }
    r.at_most("parity_quadratic_lv", lv, 1e-13);
    r.at_most("parity_quadratic_slv", slv, 1e-13);
    r.at_most("parity_quadratic_normal_sabr", sabr, 1e-13);
    r.at_most("parity_bachelier_quadratic", bach, 1e-13);
    r.at_most("parity_kernels", kernel, 1e-13);
}

void suite_reductions(Report& r, std::uint64_t seed) {
    const auto draws = random_draws(seed, 1000);
    double slv_lv = 0.0, slv_sabr = 0.0, lv_sabr = 0.0, call_bach = 0.0, lv_bach = 0.0;
    const QuadraticType types[] = {QuadraticType::call, QuadraticType::put, QuadraticType::swap};
    for (const auto& d : draws) {
        const SabrParams p{d.alpha, d.nu, d.rho};
        const double K = d.F0 + d.y * d.alpha * std::sqrt(d.T);
        for (auto t : types) {
            const SlvPoint as_lv{d.alpha, d.dsigma, d.d2sigma, 1.0, 0.0, 0.0};
            const LocalVolPoint lp{d.alpha, d.dsigma, d.d2sigma};
            slv_lv = std::max(slv_lv, rel(quadratic_slv(as_lv, d.F0, K, d.T, 1.0, t).value,
                                          quadratic_lv(lp, d.F0, K, d.T, 1.0, t).value));
            const SlvPoint unit_c{1.0, 0.0, 0.0, d.alpha, d.nu, d.rho};
            const double qs = quadratic_normal_sabr(p, d.F0, K, d.T, 1.0, t).value;
            slv_sabr = std::max(slv_sabr, rel(quadratic_slv(unit_c, d.F0, K, d.T, 1.0, t).value, qs));
            lv_sabr = std::max(lv_sabr, rel(quadratic_lv(balland_local_vol_point(p), d.F0, K, d.T, 1.0, t).value, qs));
            const BachelierInputs in{d.F0, K, d.alpha, d.T, 1.0};
            lv_bach = std::max(lv_bach, rel(quadratic_lv(LocalVolPoint{d.alpha, 0.0, 0.0}, d.F0, K, d.T, 1.0, t).value,
                                            bachelier_quadratic(in, t)));
        }
        const SabrParams frozen{d.alpha, 0.0, d.rho};
        const BachelierInputs in{d.F0, K, d.alpha, d.T, 1.0};
        call_bach = std::max(call_bach, rel(call_normal_sabr(frozen, d.F0, K, d.T, 1.0).value,
                                            bachelier_vanilla(in, OptionType::call)));
    }
    r.at_most("reduction_slv_to_lv", slv_lv, 1e-14);
    r.at_most("reduction_slv_to_normal_sabr", slv_sabr, 1e-14);
    r.at_most("reduction_balland_lv_to_normal_sabr", lv_sabr, 1e-14);
    r.at_most("reduction_call_to_bachelier", call_bach, 1e-14);
    r.at_most("reduction_lv_to_bachelier_quadratic", lv_bach, 1e-14);
}

void suite_appendix(Report& r, const ValidateOptions& o) {
    const double T = 5.0;
    const std::vector<double> ys{-1.0, 0.0, 1.0};
    McConfig cfg;
    cfg.n_paths = o.paths.value_or(1'000'000);
    cfg.n_steps = static_cast<int>(o.steps_per_year.value_or(512) * T);
    cfg.seed = o.seed;
    cfg.antithetic = false;
    const SlvPoint points[] = {{1.0, 0.0, 0.0, 0.0083, 0.335, 0.23}, {1.0, 0.5, -2.0, 0.0083, 0.335, 0.23}};
    const char* names[] = {"normal_sabr", "slv"};
    for (int i = 0; i < 2; ++i) {
        const auto est = estimate_g_functionals(points[i], T, ys, cfg);
        for (const auto& e : est) {
            const auto exact = g_functionals(points[i], T, e.y);
            const std::string tag = std::string(names[i]) + "_y" + format_number(e.y) + "_";
            auto z = [](const McEstimate& m, double v) { return std::abs(m.mean - v) / m.std_error; };
            r.at_most(tag + "hinge_g2_se", z(e.hinge_g2, exact.hinge_g2), 3.0);
            r.at_most(tag + "ind_g2_se", z(e.ind_g2, exact.ind_g2), 3.0);
            r.at_most(tag + "hinge_g3_se", z(e.hinge_g3, exact.hinge_g3), 3.0);
            r.at_most(tag + "ind_g3_se", z(e.ind_g3, exact.ind_g3), 3.0);
            r.at_most(tag + "ind_g2sq_se", z(e.ind_g2sq, exact.ind_g2sq), 3.0);
            r.at_most(tag + "hinge_sq_se", z(e.hinge_sq, exact.hinge_sq), 3.0);
        }
    }
}

void suite_oracles(Report& r, const ValidateOptions& o) {
    const SabrParams p{0.0083, 0.335, 0.23};
    const double F0 = 0.03;
    const double T = 5.0;
    McConfig cfg;
    cfg.n_paths = o.paths.value_or(400'000);
    cfg.n_steps = static_cast<int>(o.steps_per_year.value_or(64) * T);
    cfg.seed = o.seed;

    const auto sabr = simulate_terminal(ModelSpec::normal_sabr(p, F0), T, cfg);
    const auto second = price_payoff(sabr, Payoff::quadratic_swap, F0, 1.0);
    r.at_most("mc_second_moment_vs_exact_se",
              std::abs(second.mean - exact_quadratic_swap_normal_sabr(F0, F0, p.alpha, p.nu, T)) / second.std_error, 3.0);
    const auto mean = price_function(sabr, [](double x) { return x; }, 1.0);
    r.at_most("mc_martingale_se", std::abs(mean.mean - F0) / mean.std_error, 3.0);

    const auto flat = simulate_terminal(ModelSpec::normal_sabr(SabrParams{p.alpha, 0.0, 0.0}, F0), T, cfg);
    const auto qc = price_payoff(flat, Payoff::quadratic_call, F0, 1.0);
    r.at_most("mc_bachelier_qcall_se",
              std::abs(qc.mean - bachelier_quadratic(BachelierInputs{F0, F0, p.alpha, T, 1.0}, QuadraticType::call)) /
                  qc.std_error,
              3.0);

    const double sd = p.alpha * std::sqrt(T);
    const BachelierInputs atm{F0, F0, p.alpha, T, 1.0};
    const auto rep = replicate_quadratic_call(
        [&](double k) { return bachelier_vanilla(BachelierInputs{F0, k, p.alpha, T, 1.0}, OptionType::call); }, F0,
        default_call_grid(F0, sd));
    r.at_most("replication_vs_closed_form_rel", rel(rep.value, bachelier_quadratic(atm, QuadraticType::call)), 1e-6);

    const double series = p.alpha * (1.0 + (2.0 - 3.0 * p.rho * p.rho) * p.nu * p.nu * T / 24.0);
    r.at_most("hagan_atm_series_rel", rel(hagan_normal_vol(p, F0, F0, T), series), 1e-14);
    double jump = 0.0;
    for (double side : {-1.0, 1.0}) {
        auto vol_at = [&](double zeta) { return hagan_normal_vol(p, F0, F0 - side * zeta * p.alpha / p.nu, T); };
        jump = std::max(jump, rel(vol_at(1e-6 * (1.0 - 1e-9)), vol_at(1e-6 * (1.0 + 1e-9))));
    }
    r.at_most("hagan_branch_continuity_rel", jump, 1e-10);
}

}  // namespace

bool cmd_validate(const ValidateOptions& o, std::ostream& out) {
    Report r(out);
    if (o.suite == "parity") {
        suite_parity(r, o.seed);
    } else if (o.suite == "reductions") {
        suite_reductions(r, o.seed);
    } else if (o.suite == "appendix") {
        suite_appendix(r, o);
    } else if (o.suite == "oracles") {
        suite_oracles(r, o);
    } else {
        throw ScenarioError("--suite", "unknown suite '" + o.suite + "' (parity, reductions, appendix, oracles)");
    }
    return r.ok();
}

}  // namespace qcms::app
