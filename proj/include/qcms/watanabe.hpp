#pragma once

#include "qcms/types.hpp"

namespace qcms {

// Normal (beta = 0) SABR: dF = sigma_t dW, d sigma = nu sigma dB, <dW, dB> = rho dt.
struct SabrParams {
    double alpha = 0.0;  // sigma_0, rate / sqrt(year)
    double nu = 0.0;     // vol of vol, 1 / sqrt(year)
    double rho = 0.0;

    [[nodiscard]] double rho_hat() const noexcept;
    void validate() const;
};

// Local volatility sigma(F) and its first two derivatives at the expansion point F0.
struct LocalVolPoint {
    double sigma0 = 0.0;
    double dsigma = 0.0;
    double d2sigma = 0.0;

    void validate() const;
};

// dF = C(F) sigma_t dW, d sigma = nu sigma dB: C and its derivatives at F0 plus the SABR triple.
struct SlvPoint {
    double c0 = 1.0;
    double dc = 0.0;
    double d2c = 0.0;
    double alpha = 0.0;
    double nu = 0.0;
    double rho = 0.0;

    [[nodiscard]] double rho_hat() const noexcept;
    void validate() const;
};

// Expansion price split by power of the small-noise parameter (evaluated at one).
// value is always the plain sum of the three buckets.
struct PriceResult {
    double value = 0.0;
    double order0 = 0.0;
    double order1 = 0.0;
    double order2 = 0.0;
    double y = 0.0;

    [[nodiscard]] static PriceResult from_orders(double o0, double o1, double o2, double y);
};

// Expansion points below this maturity collapse to the intrinsic value.
inline constexpr double kMinExpansionTime = 1e-10;

// Second-order call price under normal SABR:
//   N alpha sqrt T [ G(y) + (rho nu sqrt T / 2) y phi(y)
//                    + nu^2 T phi(y) ( rho^2 (y^2 - 1) / 6
//                                      + (3 rho^2 (y^2 - 1)^2 + 4 rho_hat^2 y^2 + 2 rho_hat^2) / 24 ) ]
// The two order-2 summands are E[1{g1 > y} g3] and 1/2 phi(y) E[g2^2 | g1 = y].
[[nodiscard]] PriceResult call_normal_sabr(const SabrParams& params, double F0, double K, double T,
                                           double numeraire);

// Quadratic payoffs under dF = sigma(F) dW, third order (terms through eps^2 inside the bracket).
[[nodiscard]] PriceResult quadratic_lv(const LocalVolPoint& point, double F0, double K, double T,
                                       double numeraire, QuadraticType type);

// Quadratic payoffs under dF = C(F) sigma_t dW with lognormal sigma_t.
[[nodiscard]] PriceResult quadratic_slv(const SlvPoint& point, double F0, double K, double T,
                                        double numeraire, QuadraticType type);

// Normal SABR specialization (C = 1, equivalently the Balland local vol point).
[[nodiscard]] PriceResult quadratic_normal_sabr(const SabrParams& params, double F0, double K,
                                                double T, double numeraire, QuadraticType type);

// Closed forms of the normalized functionals the expansions are assembled from, for the
// SLV point (normal SABR: c0 = 1, dc = d2c = 0).
struct GFunctionalValues {
    double hinge_g2 = 0.0;   // E[(g1 - y)+ g2]
    double ind_g2 = 0.0;     // E[1{g1 > y} g2]
    double hinge_g3 = 0.0;   // E[(g1 - y)+ g3]
    double ind_g3 = 0.0;     // E[1{g1 > y} g3]
    double ind_g2sq = 0.0;   // E[1{g1 > y} g2^2]
    double hinge_sq = 0.0;   // E[((g1 - y)+)^2]
    double cond_g2sq = 0.0;  // E[g2^2 | g1 = y]
};

[[nodiscard]] GFunctionalValues g_functionals(const SlvPoint& point, double T, double y);

}  // namespace qcms
