#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "scenario.hpp"

namespace qcms::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

// Thrown when a pricer produces a non-finite value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 17 significant digits, round-trip exact.
[[nodiscard]] std::string format_number(double x);

void cmd_price(const Scenario& scenario, std::ostream& out);
void cmd_smile(const Scenario& scenario, std::ostream& out);
void cmd_cms(const Scenario& scenario, std::ostream& out);

struct ValidateOptions {
    std::string suite;
    std::uint64_t seed = 20240917;
    std::optional<std::size_t> paths;
    std::optional<int> steps_per_year;
};

// Writes check_name,measured,bound,verdict lines; returns true iff every check passes.
[[nodiscard]] bool cmd_validate(const ValidateOptions& options, std::ostream& out);

}  // namespace qcms::app
