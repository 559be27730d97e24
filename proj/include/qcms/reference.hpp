#pragma once

#include <functional>

#include "qcms/watanabe.hpp"

namespace qcms {

// beta = 0 normal implied vol approximation of Hagan et al.
[[nodiscard]] double hagan_normal_vol(const SabrParams& params, double F0, double K, double T);

// Closed-form equivalent local vol of normal SABR evaluated at strike level K.
[[nodiscard]] double balland_equivalent_local_vol(const SabrParams& params, double F0, double K);

// sigma(F0) = alpha, sigma'(F0) = rho nu, sigma''(F0) = nu^2 rho_hat^2 / alpha.
[[nodiscard]] LocalVolPoint balland_local_vol_point(const SabrParams& params);

struct StrikeGrid {
    double lo = 0.0;
    double hi = 0.0;
    int n = 2;

    void validate() const;
    [[nodiscard]] double step() const noexcept { return (hi - lo) / (n - 1); }
};

struct ReplicationResult {
    double value = 0.0;
    double truncation_estimate = 0.0;
};

using VanillaPricer = std::function<double(double strike)>;

// (F - K)+^2 = 2 int_K^inf (F - k)+ dk, trapezoid over grid.lo = K .. grid.hi.
[[nodiscard]] ReplicationResult replicate_quadratic_call(const VanillaPricer& call_pricer, double K,
                                                         const StrikeGrid& grid);

// (K - F)+^2 = 2 int_-inf^K (k - F)+ dk, trapezoid over grid.lo .. grid.hi = K.
[[nodiscard]] ReplicationResult replicate_quadratic_put(const VanillaPricer& put_pricer, double K,
                                                        const StrikeGrid& grid);

// [K, K + width * atm_stdev] with n points.
[[nodiscard]] StrikeGrid default_call_grid(double K, double atm_stdev, int n = 2000,
                                           double width = 12.0);

}  // namespace qcms
