#include "qcms/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcms/mathcore.hpp"

namespace qcms {

void BachelierInputs::validate() const {
    if (!std::isfinite(F0) || !std::isfinite(K)) {
        throw std::invalid_argument("BachelierInputs: forward and strike must be finite");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw std::invalid_argument("BachelierInputs: T must be > 0");
    }
    if (!(numeraire > 0.0) || !std::isfinite(numeraire)) {
        throw std::invalid_argument("BachelierInputs: numeraire must be > 0");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("BachelierInputs: sigma must be >= 0");
    }
}

double bachelier_vanilla(const BachelierInputs& in, OptionType type) {
    in.validate();
    const double s = in.sigma * std::sqrt(in.T);
    const double sign = type == OptionType::call ? 1.0 : -1.0;
    if (s == 0.0) {
        return in.numeraire * std::max(sign * (in.F0 - in.K), 0.0);
    }
    const double y = (in.K - in.F0) / s;
    return in.numeraire * s * g_call(sign * y);
}

double bachelier_quadratic(const BachelierInputs& in, QuadraticType type) {
    in.validate();
    const double s = in.sigma * std::sqrt(in.T);
    const double mu = in.F0 - in.K;
    if (type == QuadraticType::swap) {
        return in.numeraire * (mu * mu + s * s);
    }
    if (s == 0.0) {
        const double intrinsic = type == QuadraticType::call ? std::max(mu, 0.0) : std::max(-mu, 0.0);
        return in.numeraire * intrinsic * intrinsic;
    }
    const double y = -mu / s;
    const double kernel = type == QuadraticType::call ? g_quad_call(y) : g_quad_put(y);
    return in.numeraire * s * s * kernel;
}

double exact_quadratic_swap_normal_sabr(double F0, double K, double alpha, double nu, double T) {
    if (!(T > 0.0)) {
        throw std::invalid_argument("exact_quadratic_swap_normal_sabr: T must be > 0");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha) || !std::isfinite(nu)) {
        throw std::invalid_argument("exact_quadratic_swap_normal_sabr: alpha must be >= 0");
    }
    const double x = nu * nu * T;
    // expm1(x) / x -> 1 continuously as nu -> 0.
    const double growth = x == 0.0 ? 1.0 : std::expm1(x) / x;
    const double mu = F0 - K;
    return mu * mu + alpha * alpha * T * growth;
}

}  // namespace qcms
