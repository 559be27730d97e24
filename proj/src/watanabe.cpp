#include "qcms/watanabe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcms/mathcore.hpp"

namespace qcms {

namespace {

void require_expansion_inputs(double F0, double K, double T, double numeraire, const char* who) {
    if (!std::isfinite(F0) || !std::isfinite(K)) {
        throw std::invalid_argument(std::string(who) + ": forward and strike must be finite");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw std::invalid_argument(std::string(who) + ": T must be > 0");
    }
    if (!(numeraire > 0.0) || !std::isfinite(numeraire)) {
        throw std::invalid_argument(std::string(who) + ": numeraire must be > 0");
    }
}

PriceResult intrinsic_quadratic(double F0, double K, double numeraire, QuadraticType type) {
    const double mu = F0 - K;
    double v = 0.0;
    switch (type) {
        case QuadraticType::call: v = std::max(mu, 0.0); v *= v; break;
        case QuadraticType::put: v = std::max(-mu, 0.0); v *= v; break;
        case QuadraticType::swap: v = mu * mu; break;
    }
    return PriceResult::from_orders(numeraire * v, 0.0, 0.0, 0.0);
}

// Coefficients of the generic quadratic expansion written in terms of
//   E[g2 | g1 = z]   = sqrt(T)/2 * lin * (z^2 - 1)
//   E[g3 | g1 = z]   = T * (cubic * He3(z) + drift * z)
//   E[g2^2 | g1 = z] = T * (lin^2 (z^2 - 1)^2 / 4 + perp * (2 z^2 + 1) / 6)
// LV, SLV and normal SABR all reduce to this shape.
struct QuadraticCoefficients {
    double lin = 0.0;
    double cubic = 0.0;
    double drift = 0.0;
    double perp = 0.0;
};

QuadraticCoefficients slv_coefficients(const SlvPoint& point) {
    const double slope = point.alpha * point.dc;                                // alpha C'
    const double curvature = point.alpha * point.alpha * point.c0 * point.d2c;  // alpha^2 C C''
    const double nu_rho = point.nu * point.rho;
    QuadraticCoefficients c;
    c.lin = slope + nu_rho;
    c.cubic = (slope * slope + 3.0 * slope * nu_rho + curvature + nu_rho * nu_rho) / 6.0;
    c.drift = (curvature + 2.0 * slope * nu_rho) / 4.0;
    c.perp = point.nu * point.nu * (1.0 - point.rho * point.rho);
    return c;
}

PriceResult assemble_quadratic(const QuadraticCoefficients& c, double y, double sqrtT, double T,
                               double scale, QuadraticType type) {
    const double pdf = norm_pdf(y);
    const double ypdf = y * pdf;
    const double y3pdf = (y * y * y + y) * pdf;
    const double lin2 = c.lin * c.lin;

    double o0 = 0.0;
    double o1 = 0.0;
    double o2 = 0.0;
    switch (type) {
        case QuadraticType::call: {
            const double upper = norm_sf(y);
            o0 = g_quad_call(y);
            o1 = c.lin * pdf * sqrtT;
            o2 = T * (2.0 * c.cubic * ypdf + 2.0 * c.drift * upper + 0.25 * lin2 * (y3pdf + 2.0 * upper) +
                      c.perp * (2.0 * ypdf + 3.0 * upper) / 6.0);
            break;
        }
        case QuadraticType::put: {
            const double lower = norm_cdf(y);
            o0 = g_quad_put(y);
            o1 = -c.lin * pdf * sqrtT;
            o2 = T * (-2.0 * c.cubic * ypdf + 2.0 * c.drift * lower + 0.25 * lin2 * (2.0 * lower - y3pdf) +
                      c.perp * (3.0 * lower - 2.0 * ypdf) / 6.0);
            break;
        }
        case QuadraticType::swap:
            o0 = 1.0 + y * y;
            o1 = 0.0;
            o2 = T * (2.0 * c.drift + 0.5 * lin2 + 0.5 * c.perp);
            break;
    }
    return PriceResult::from_orders(scale * o0, scale * o1, scale * o2, y);
}

}  // namespace

double SabrParams::rho_hat() const noexcept { return std::sqrt(1.0 - rho * rho); }

void SabrParams::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("SabrParams: alpha must be >= 0");
    }
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        throw std::invalid_argument("SabrParams: nu must be >= 0");
    }
    if (!(std::abs(rho) < 1.0)) {
        throw std::invalid_argument("SabrParams: |rho| must be < 1");
    }
}

void LocalVolPoint::validate() const {
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
        throw std::invalid_argument("LocalVolPoint: sigma0 must be > 0");
    }
    if (!std::isfinite(dsigma) || !std::isfinite(d2sigma)) {
        throw std::invalid_argument("LocalVolPoint: derivatives must be finite");
    }
}

double SlvPoint::rho_hat() const noexcept { return std::sqrt(1.0 - rho * rho); }

void SlvPoint::validate() const {
    if (!(c0 > 0.0) || !std::isfinite(c0)) {
        throw std::invalid_argument("SlvPoint: c0 must be > 0");
    }
    if (!std::isfinite(dc) || !std::isfinite(d2c)) {
        throw std::invalid_argument("SlvPoint: derivatives must be finite");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("SlvPoint: alpha must be >= 0");
    }
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        throw std::invalid_argument("SlvPoint: nu must be >= 0");
    }
    if (!(std::abs(rho) < 1.0)) {
        throw std::invalid_argument("SlvPoint: |rho| must be < 1");
    }
}

PriceResult PriceResult::from_orders(double o0, double o1, double o2, double y) {
    return PriceResult{o0 + o1 + o2, o0, o1, o2, y};
}

PriceResult call_normal_sabr(const SabrParams& params, double F0, double K, double T,
                             double numeraire) {
    params.validate();
    require_expansion_inputs(F0, K, T, numeraire, "call_normal_sabr");
    const double sqrtT = std::sqrt(T);
    const double s = params.alpha * sqrtT;
    if (T < kMinExpansionTime || s == 0.0) {
        return PriceResult::from_orders(numeraire * std::max(F0 - K, 0.0), 0.0, 0.0, 0.0);
    }
    const double y = (K - F0) / s;
    const double pdf = norm_pdf(y);
    const double rho2 = params.rho * params.rho;
    const double rho_hat2 = 1.0 - rho2;
    const double nu2T = params.nu * params.nu * T;
    const double y2m1 = y * y - 1.0;

    const double scale = numeraire * s;
    const double o0 = g_call(y);
    const double o1 = 0.5 * params.rho * params.nu * sqrtT * y * pdf;
    const double indicator_g3 = rho2 * y2m1 / 6.0;
    const double half_delta_g2sq = (3.0 * rho2 * y2m1 * y2m1 + 4.0 * rho_hat2 * y * y + 2.0 * rho_hat2) / 24.0;
    const double o2 = nu2T * pdf * (indicator_g3 + half_delta_g2sq);
    return PriceResult::from_orders(scale * o0, scale * o1, scale * o2, y);
}

PriceResult quadratic_lv(const LocalVolPoint& point, double F0, double K, double T,
                         double numeraire, QuadraticType type) {
    point.validate();
    require_expansion_inputs(F0, K, T, numeraire, "quadratic_lv");
    if (T < kMinExpansionTime) {
        return intrinsic_quadratic(F0, K, numeraire, type);
    }
    const double sqrtT = std::sqrt(T);
    const double s = point.sigma0 * sqrtT;
    const double y = (K - F0) / s;
    const double curvature = point.d2sigma * point.sigma0;  // sigma'' sigma
    const double slope2 = point.dsigma * point.dsigma;

    QuadraticCoefficients c;
    c.lin = point.dsigma;
    c.cubic = (curvature + slope2) / 6.0;
    c.drift = curvature / 4.0;
    c.perp = 0.0;
    return assemble_quadratic(c, y, sqrtT, T, numeraire * s * s, type);
}

PriceResult quadratic_slv(const SlvPoint& point, double F0, double K, double T, double numeraire,
                          QuadraticType type) {
    point.validate();
    require_expansion_inputs(F0, K, T, numeraire, "quadratic_slv");
    const double sqrtT = std::sqrt(T);
    const double s = point.alpha * point.c0 * sqrtT;
    if (T < kMinExpansionTime || s == 0.0) {
        return intrinsic_quadratic(F0, K, numeraire, type);
    }
    const double y = (K - F0) / s;
    return assemble_quadratic(slv_coefficients(point), y, sqrtT, T, numeraire * s * s, type);
}

PriceResult quadratic_normal_sabr(const SabrParams& params, double F0, double K, double T,
                                  double numeraire, QuadraticType type) {
    params.validate();
    require_expansion_inputs(F0, K, T, numeraire, "quadratic_normal_sabr");
    const double sqrtT = std::sqrt(T);
    const double s = params.alpha * sqrtT;
    if (T < kMinExpansionTime || s == 0.0) {
        return intrinsic_quadratic(F0, K, numeraire, type);
    }
    const double y = (K - F0) / s;
    const double nu2 = params.nu * params.nu;
    const double nu_rho = params.nu * params.rho;
    const double rho_hat2 = 1.0 - params.rho * params.rho;

    // Balland local vol derivatives: sigma' = rho nu, sigma'' sigma = nu^2 rho_hat^2.
    QuadraticCoefficients c;
    c.lin = nu_rho;
    c.cubic = nu_rho * nu_rho / 6.0;
    c.drift = 0.0;
    c.perp = nu2 * rho_hat2;
    return assemble_quadratic(c, y, sqrtT, T, numeraire * s * s, type);
}

GFunctionalValues g_functionals(const SlvPoint& point, double T, double y) {
    point.validate();
    if (!(T > 0.0)) throw std::invalid_argument("g_functionals: T must be > 0");
    const QuadraticCoefficients c = slv_coefficients(point);
    const double sqrtT = std::sqrt(T);
    const double pdf = norm_pdf(y);
    const double upper = norm_sf(y);
    const double y2m1 = y * y - 1.0;
    const double lin2 = c.lin * c.lin;

    GFunctionalValues v;
    v.hinge_g2 = 0.5 * sqrtT * c.lin * pdf;
    v.ind_g2 = 0.5 * sqrtT * c.lin * y * pdf;
    v.hinge_g3 = T * (c.cubic * y * pdf + c.drift * upper);
    v.ind_g3 = T * (c.cubic * y2m1 * pdf + c.drift * pdf);
    v.ind_g2sq = T * (0.25 * lin2 * ((y * y * y + y) * pdf + 2.0 * upper) +
                      c.perp * (2.0 * y * pdf + 3.0 * upper) / 6.0);
    v.hinge_sq = g_quad_call(y);
    v.cond_g2sq = T * (0.25 * lin2 * y2m1 * y2m1 + c.perp * (2.0 * y * y + 1.0) / 6.0);
    return v;
}

}  // namespace qcms
