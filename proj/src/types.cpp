#include "qcms/types.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qcms {

bool is_quadratic(Payoff p) noexcept {
    return p == Payoff::quadratic_call || p == Payoff::quadratic_put || p == Payoff::quadratic_swap;
}

OptionType to_option_type(Payoff p) {
    switch (p) {
        case Payoff::call: return OptionType::call;
        case Payoff::put: return OptionType::put;
        default: throw std::invalid_argument("payoff is not a vanilla option");
    }
}

QuadraticType to_quadratic_type(Payoff p) {
    switch (p) {
        case Payoff::quadratic_call: return QuadraticType::call;
        case Payoff::quadratic_put: return QuadraticType::put;
        case Payoff::quadratic_swap: return QuadraticType::swap;
        default: throw std::invalid_argument("payoff is not quadratic");
    }
}

std::string_view to_string(Payoff p) noexcept {
    switch (p) {
        case Payoff::call: return "call";
        case Payoff::put: return "put";
        case Payoff::quadratic_call: return "qcall";
        case Payoff::quadratic_put: return "qput";
        case Payoff::quadratic_swap: return "qswap";
    }
    return "unknown";
}

Payoff parse_payoff(std::string_view name) {
    for (Payoff p : {Payoff::call, Payoff::put, Payoff::quadratic_call, Payoff::quadratic_put,
                     Payoff::quadratic_swap}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw std::invalid_argument("unknown payoff '" + std::string(name) +
                                "' (expected call|put|qcall|qput|qswap)");
}

double payoff_value(Payoff p, double terminal, double strike) noexcept {
    const double diff = terminal - strike;
    switch (p) {
        case Payoff::call: return std::max(diff, 0.0);
        case Payoff::put: return std::max(-diff, 0.0);
        case Payoff::quadratic_call: {
            const double c = std::max(diff, 0.0);
            return c * c;
        }
        case Payoff::quadratic_put: {
            const double c = std::max(-diff, 0.0);
            return c * c;
        }
        case Payoff::quadratic_swap: return diff * diff;
    }
    return 0.0;
}

}  // namespace qcms
