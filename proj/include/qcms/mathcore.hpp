#pragma once

// Scalar kernels shared by every expansion: the standard normal pair and the
// Bachelier G-functions in standardized moneyness y = (K - F0) / (sigma0 sqrt T).

namespace qcms {

// Standardized moneyness. Evaluated with the bookkeeping parameter set to one.
struct Moneyness {
    double y = 0.0;

    [[nodiscard]] static Moneyness from_strike(double forward, double strike, double stdev);
};

[[nodiscard]] double norm_pdf(double x) noexcept;
[[nodiscard]] double norm_cdf(double x) noexcept;
// Upper tail 1 - Phi(x), computed without cancellation for large x.
[[nodiscard]] double norm_sf(double x) noexcept;

// G(y) = phi(y) - y * (1 - Phi(y)) = E[(Z - y)^+].
[[nodiscard]] double g_call(double y) noexcept;
// G_q^c(y) = (1 + y^2) (1 - Phi(y)) - y phi(y) = E[((Z - y)^+)^2].
[[nodiscard]] double g_quad_call(double y) noexcept;
// G_q^p(y) = (1 + y^2) Phi(y) + y phi(y) = E[((y - Z)^+)^2].
[[nodiscard]] double g_quad_put(double y) noexcept;

}  // namespace qcms
