#pragma once

#include "qcms/types.hpp"

namespace qcms {

// Constant normal volatility (Bachelier) inputs.
struct BachelierInputs {
    double F0 = 0.0;         // forward, rate units
    double K = 0.0;          // strike, rate units
    double sigma = 0.0;      // normal vol, rate / sqrt(year)
    double T = 0.0;          // year fraction
    double numeraire = 1.0;  // N_T

    void validate() const;
};

// N_T * E[(F_T - K)^+] or N_T * E[(K - F_T)^+] with F_T ~ Normal(F0, sigma^2 T).
[[nodiscard]] double bachelier_vanilla(const BachelierInputs& in, OptionType type);

// Quadratic call, put and swap under the same Gaussian law:
//   qcall = N [(mu^2 + s^2) Phi(d) + mu s phi(d)],  mu = F0 - K, s = sigma sqrt T, d = mu / s
//   qswap = N (mu^2 + s^2) = qcall + qput.
[[nodiscard]] double bachelier_quadratic(const BachelierInputs& in, QuadraticType type);

// Exact E[(F_T - K)^2] for dF = sigma_t dW, d sigma = nu sigma dB:
//   (F0 - K)^2 + alpha^2 (exp(nu^2 T) - 1) / nu^2, with the alpha^2 T limit at nu = 0.
// Undiscounted; independent of rho.
[[nodiscard]] double exact_quadratic_swap_normal_sabr(double F0, double K, double alpha, double nu,
                                                      double T);

}  // namespace qcms
