#include "qcms/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace qcms {

namespace {

constexpr double kZetaSeries = 1e-6;

// zeta / x(zeta), x(zeta) = log((sqrt(1 - 2 rho zeta + zeta^2) + zeta - rho) / (1 - rho)).
double zeta_over_x(double zeta, double rho) {
    if (std::abs(zeta) < kZetaSeries) {
        return 1.0 - 0.5 * rho * zeta + (2.0 - 3.0 * rho * rho) * zeta * zeta / 12.0;
    }
    const double u = zeta * zeta - 2.0 * rho * zeta;
    // sqrt(1 + u) - 1 written without cancellation
    const double root_m1 = u / (std::sqrt(1.0 + u) + 1.0);
    const double x = std::log1p((root_m1 + zeta) / (1.0 - rho));
    return zeta / x;
}

}  // namespace

double hagan_normal_vol(const SabrParams& params, double F0, double K, double T) {
    params.validate();
    if (!(params.alpha > 0.0)) {
        throw std::invalid_argument("hagan_normal_vol: alpha must be > 0");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw std::invalid_argument("hagan_normal_vol: T must be > 0");
    }
    const double zeta = params.nu * (F0 - K) / params.alpha;
    const double time_term = 1.0 + (2.0 - 3.0 * params.rho * params.rho) * params.nu * params.nu * T / 24.0;
    return params.alpha * zeta_over_x(zeta, params.rho) * time_term;
}

double balland_equivalent_local_vol(const SabrParams& params, double F0, double K) {
    params.validate();
    if (!(params.alpha > 0.0)) {
        throw std::invalid_argument("balland_equivalent_local_vol: alpha must be > 0");
    }
    const double x = (K - F0) / params.alpha;
    const double nx = params.nu * x;
    return params.alpha * std::sqrt(1.0 + 2.0 * params.rho * nx + nx * nx);
}

LocalVolPoint balland_local_vol_point(const SabrParams& params) {
    params.validate();
    if (!(params.alpha > 0.0)) {
        throw std::invalid_argument("balland_local_vol_point: alpha must be > 0");
    }
    const double rho_hat2 = 1.0 - params.rho * params.rho;
    return LocalVolPoint{params.alpha, params.rho * params.nu,
                         params.nu * params.nu * rho_hat2 / params.alpha};
}

void StrikeGrid::validate() const {
    if (n < 2) {
        throw std::invalid_argument("StrikeGrid: n must be >= 2");
    }
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("StrikeGrid: require finite lo < hi");
    }
}

ReplicationResult replicate_quadratic_call(const VanillaPricer& call_pricer, double K,
                                           const StrikeGrid& grid) {
    grid.validate();
    if (grid.lo != K) {
        throw std::invalid_argument("replicate_quadratic_call: grid.lo must equal K");
    }
    const double h = grid.step();
    double sum = 0.0;
    double tail = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double k = i == grid.n - 1 ? grid.hi : grid.lo + i * h;
        const double c = call_pricer(k);
        sum += (i == 0 || i == grid.n - 1) ? 0.5 * c : c;
        if (i == grid.n - 1) tail = c;
    }
    return ReplicationResult{2.0 * h * sum, 2.0 * tail * (grid.hi - grid.lo)};
}

ReplicationResult replicate_quadratic_put(const VanillaPricer& put_pricer, double K,
                                          const StrikeGrid& grid) {
    grid.validate();
    if (grid.hi != K) {
        throw std::invalid_argument("replicate_quadratic_put: grid.hi must equal K");
    }
    const double h = grid.step();
    double sum = 0.0;
    double tail = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double k = i == grid.n - 1 ? grid.hi : grid.lo + i * h;
        const double p = put_pricer(k);
        sum += (i == 0 || i == grid.n - 1) ? 0.5 * p : p;
        if (i == 0) tail = p;
    }
    return ReplicationResult{2.0 * h * sum, 2.0 * tail * (grid.hi - grid.lo)};
}

StrikeGrid default_call_grid(double K, double atm_stdev, int n, double width) {
    if (!(atm_stdev > 0.0)) {
        throw std::invalid_argument("default_call_grid: atm_stdev must be > 0");
    }
    return StrikeGrid{K, K + width * atm_stdev, n};
}

}  // namespace qcms
