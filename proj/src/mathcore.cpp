#include "qcms/mathcore.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcms {

namespace {

constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
constexpr double kInvSqrt2 = 0.5 * std::numbers::sqrt2;

// Both kernels are evaluated on y >= 0 where the tail pair (phi, 1 - Phi) is
// free of cancellation; negative arguments go through the parity identities.
double g_call_upper(double y) noexcept { return norm_pdf(y) - y * norm_sf(y); }

double g_quad_call_upper(double y) noexcept {
    return (1.0 + y * y) * norm_sf(y) - y * norm_pdf(y);
}

}  // namespace

Moneyness Moneyness::from_strike(double forward, double strike, double stdev) {
    if (!(stdev > 0.0) || !std::isfinite(stdev)) {
        throw std::invalid_argument("Moneyness: standard deviation must be positive and finite");
    }
    return Moneyness{(strike - forward) / stdev};
}

double norm_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double norm_sf(double x) noexcept { return 0.5 * std::erfc(x * kInvSqrt2); }

double g_call(double y) noexcept {
    if (y >= 0.0) {
        return g_call_upper(y);
    }
    return g_call_upper(-y) - y;
}

double g_quad_call(double y) noexcept {
    if (y >= 0.0) {
        return g_quad_call_upper(y);
    }
    return (1.0 + y * y) - g_quad_call_upper(-y);
}

double g_quad_put(double y) noexcept { return g_quad_call(-y); }

}  // namespace qcms
