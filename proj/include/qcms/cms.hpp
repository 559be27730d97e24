#pragma once

#include <functional>

namespace qcms {

struct CmsSetup {
    double S0 = 0.0;        // spot swap rate S_ab(0)
    double annuity0 = 0.0;  // annuity factor at 0
    double dfp = 0.0;       // discount factor to the payment date
    double T_fix = 0.0;     // fixing time T_a

    void validate() const;
};

// M(S) ~ m0 + dm (S - S0).
struct LinearMapping {
    double m0 = 1.0;
    double dm = 1.0;

    void validate() const;
    [[nodiscard]] double slope() const noexcept { return dm; }
    [[nodiscard]] double intercept(double S0) const noexcept { return m0 - dm * S0; }
    [[nodiscard]] double operator()(double S, double S0) const noexcept { return m0 + dm * (S - S0); }
    [[nodiscard]] static LinearMapping identity() noexcept { return LinearMapping{1.0, 1.0}; }
};

// One-factor flat-yield annuity: every curve point moves with the swap rate S.
struct FlatYieldAnnuity {
    int n_periods = 10;
    double accrual = 1.0;    // fixed-leg year fraction
    double pay_delay = 0.0;  // T_p - T_a in years

    void validate() const;
    [[nodiscard]] double annuity(double S) const;
    [[nodiscard]] double payment_discount(double S) const;
    // P(S, T_p) / 01(S)
    [[nodiscard]] double shape(double S) const;
    [[nodiscard]] double shape_derivative(double S) const;
};

enum class Differentiation { analytic, central_difference };

// m0 = dfp / annuity0; dm = m0 * shape'(S0) / shape(S0).
[[nodiscard]] LinearMapping mapping_from_annuity_model(const CmsSetup& setup, const FlatYieldAnnuity& model,
                                                       Differentiation method = Differentiation::analytic);

// Generic shape functional; throws if it shows a kink at S0.
[[nodiscard]] LinearMapping mapping_from_shape(const CmsSetup& setup, const std::function<double(double)>& shape,
                                               double step = 1e-4);

// (m0 - 1) V^C + (dm - 1) V^QC
[[nodiscard]] double ca_caplet(const CmsSetup& setup, const LinearMapping& map, double K, double vanilla_price,
                               double quadratic_price);

// (m0 - 1) V^P - (dm - 1) V^QP
[[nodiscard]] double ca_floorlet(const CmsSetup& setup, const LinearMapping& map, double K,
                                 double vanilla_put_price, double quadratic_put_price);

// (m0 - 1) annuity0 (S0 - K) + (dm - 1) V^QS; every price argument carries the annuity factor.
[[nodiscard]] double ca_swaplet(const CmsSetup& setup, const LinearMapping& map, double K,
                                double quadratic_swap_price);

// S0 + annuity0 (dm - 1) S0^2 + (dm - 1) V^QC(S0)
[[nodiscard]] double cms_rate_expectation(const CmsSetup& setup, const LinearMapping& map,
                                          double quadratic_atm_price);

}  // namespace qcms
