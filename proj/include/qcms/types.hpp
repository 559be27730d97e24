#pragma once

#include <string_view>

namespace qcms {

enum class OptionType { call, put };

enum class QuadraticType { call, put, swap };

// Every payoff the library prices; the union of the two families above.
enum class Payoff { call, put, quadratic_call, quadratic_put, quadratic_swap };

[[nodiscard]] bool is_quadratic(Payoff p) noexcept;
[[nodiscard]] OptionType to_option_type(Payoff p);
[[nodiscard]] QuadraticType to_quadratic_type(Payoff p);

[[nodiscard]] std::string_view to_string(Payoff p) noexcept;
// Accepts call, put, qcall, qput, qswap.
[[nodiscard]] Payoff parse_payoff(std::string_view name);

// Undiscounted payoff of one terminal value.
[[nodiscard]] double payoff_value(Payoff p, double terminal, double strike) noexcept;

}  // namespace qcms
