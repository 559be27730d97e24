#include "qcms/cms.hpp"

#include <cmath>
#include <stdexcept>

namespace qcms {

void CmsSetup::validate() const {
    if (!std::isfinite(S0)) throw std::invalid_argument("CmsSetup: S0 must be finite");
    if (!(annuity0 > 0.0) || !std::isfinite(annuity0)) {
        throw std::invalid_argument("CmsSetup: annuity0 must be > 0");
    }
    if (!(dfp > 0.0) || !std::isfinite(dfp)) throw std::invalid_argument("CmsSetup: dfp must be > 0");
    if (!(T_fix > 0.0) || !std::isfinite(T_fix)) throw std::invalid_argument("CmsSetup: T_fix must be > 0");
}

void LinearMapping::validate() const {
    if (!(m0 > 0.0) || !std::isfinite(m0)) throw std::invalid_argument("LinearMapping: m0 must be > 0");
    if (!std::isfinite(dm)) throw std::invalid_argument("LinearMapping: dm must be finite");
}

void FlatYieldAnnuity::validate() const {
    if (n_periods < 1) throw std::invalid_argument("FlatYieldAnnuity: n_periods must be >= 1");
    if (!(accrual > 0.0)) throw std::invalid_argument("FlatYieldAnnuity: accrual must be > 0");
    if (!(pay_delay >= 0.0)) throw std::invalid_argument("FlatYieldAnnuity: pay_delay must be >= 0");
}

double FlatYieldAnnuity::annuity(double S) const {
    const double base = 1.0 + accrual * S;
    if (!(base > 0.0)) throw std::invalid_argument("FlatYieldAnnuity: 1 + accrual * S must be > 0");
    double sum = 0.0;
    double df = 1.0;
    for (int i = 1; i <= n_periods; ++i) {
        df /= base;
        sum += accrual * df;
    }
    return sum;
}

double FlatYieldAnnuity::payment_discount(double S) const {
    const double base = 1.0 + accrual * S;
    if (!(base > 0.0)) throw std::invalid_argument("FlatYieldAnnuity: 1 + accrual * S must be > 0");
    return std::pow(base, -pay_delay / accrual);
}

double FlatYieldAnnuity::shape(double S) const { return payment_discount(S) / annuity(S); }

double FlatYieldAnnuity::shape_derivative(double S) const {
    // d/dS log shape = -pay_delay / base - annuity'(S) / annuity(S)
    const double base = 1.0 + accrual * S;
    double sum = 0.0;
    double dsum = 0.0;
    double df = 1.0;
    for (int i = 1; i <= n_periods; ++i) {
        df /= base;
        sum += accrual * df;
        dsum -= accrual * i * accrual * df / base;
    }
    const double dlog = -pay_delay / base - dsum / sum;
    return shape(S) * dlog;
}

LinearMapping mapping_from_annuity_model(const CmsSetup& setup, const FlatYieldAnnuity& model,
                                         Differentiation method) {
    setup.validate();
    model.validate();
    if (method == Differentiation::central_difference) {
        return mapping_from_shape(setup, [&model](double s) { return model.shape(s); });
    }
    const double m0 = setup.dfp / setup.annuity0;
    return LinearMapping{m0, m0 * model.shape_derivative(setup.S0) / model.shape(setup.S0)};
}

LinearMapping mapping_from_shape(const CmsSetup& setup, const std::function<double(double)>& shape, double step) {
    setup.validate();
    if (!(step > 0.0)) throw std::invalid_argument("mapping_from_shape: step must be > 0");
    const double S0 = setup.S0;
    const double f0 = shape(S0);
    if (!(std::abs(f0) > 0.0) || !std::isfinite(f0)) {
        throw std::invalid_argument("mapping_from_shape: shape(S0) must be finite and nonzero");
    }
    // A kink leaves forward - backward slopes of fixed size as the step shrinks.
    auto one_sided_gap = [&](double h) {
        const double fwd = (shape(S0 + h) - f0) / h;
        const double bwd = (f0 - shape(S0 - h)) / h;
        return fwd - bwd;
    };
    const double gap_coarse = one_sided_gap(step);
    const double gap_fine = one_sided_gap(0.1 * step);
    const double central = (shape(S0 + step) - shape(S0 - step)) / (2.0 * step);
    const double noise = 1e-9 * (std::abs(central) + std::abs(f0));
    if (std::abs(gap_fine) > noise && std::abs(gap_fine) > 0.5 * std::abs(gap_coarse)) {
        throw std::invalid_argument("mapping_from_shape: shape is not differentiable at S0");
    }
    const double m0 = setup.dfp / setup.annuity0;
    return LinearMapping{m0, m0 * central / f0};
}

double ca_caplet(const CmsSetup& setup, const LinearMapping& map, double /*K*/, double vanilla_price,
                 double quadratic_price) {
    setup.validate();
    return (map.m0 - 1.0) * vanilla_price + (map.dm - 1.0) * quadratic_price;
}

double ca_floorlet(const CmsSetup& setup, const LinearMapping& map, double /*K*/, double vanilla_put_price,
                   double quadratic_put_price) {
    setup.validate();
    return (map.m0 - 1.0) * vanilla_put_price - (map.dm - 1.0) * quadratic_put_price;
}

double ca_swaplet(const CmsSetup& setup, const LinearMapping& map, double K, double quadratic_swap_price) {
    setup.validate();
    return (map.m0 - 1.0) * setup.annuity0 * (setup.S0 - K) + (map.dm - 1.0) * quadratic_swap_price;
}

double cms_rate_expectation(const CmsSetup& setup, const LinearMapping& map, double quadratic_atm_price) {
    setup.validate();
    const double slope = map.dm - 1.0;
    return setup.S0 + setup.annuity0 * slope * setup.S0 * setup.S0 + slope * quadratic_atm_price;
}

}  // namespace qcms
