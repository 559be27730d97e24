#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcms/cms.hpp"
#include "qcms/monte_carlo.hpp"
#include "qcms/types.hpp"
#include "qcms/watanabe.hpp"

namespace qcms::app {

// Invalid scenario content; field is a JSON-pointer style path such as /model/alpha.
class ScenarioError : public std::invalid_argument {
public:
    ScenarioError(const std::string& field, const std::string& message);
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class Comparator { watanabe, hagan, mc, replication, exact };

[[nodiscard]] std::string to_string(Comparator c);

struct ModelBlock {
    std::string kind;  // bachelier | normal_sabr | lv | slv
    double F0 = 0.0;
    SabrParams sabr;       // bachelier maps to nu = rho = 0
    LocalVolPoint lv;
    SlvPoint slv;

    [[nodiscard]] bool is_sabr_family() const { return kind == "bachelier" || kind == "normal_sabr"; }
    [[nodiscard]] double atm_stdev(double T) const;
    [[nodiscard]] ModelSpec mc_model() const;
};

struct ProductBlock {
    Payoff payoff = Payoff::call;
    std::vector<double> strikes;
    double T = 0.0;
    double numeraire = 1.0;
};

struct McBlock {
    std::size_t paths = 2'000'000;
    int steps_per_year = 64;
    bool antithetic = true;
    std::optional<std::uint64_t> seed;
    McScheme scheme = McScheme::log_euler_vol;
};

struct CmsBlock {
    CmsSetup setup;
    LinearMapping mapping;
    std::string mapping_source = "direct";  // direct | flat_yield
    std::vector<std::string> backends;      // watanabe | mc
};

struct Scenario {
    ModelBlock model;
    ProductBlock product;
    std::vector<Comparator> comparators;
    McBlock mc;
    std::string output;
    std::optional<CmsBlock> cms;

    [[nodiscard]] bool wants(Comparator c) const;
    [[nodiscard]] McConfig mc_config() const;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<int> steps_per_year;
    std::optional<std::string> out;
};

[[nodiscard]] Scenario parse_scenario(const nlohmann::json& doc, const Overrides& overrides);
[[nodiscard]] Scenario load_scenario(const std::string& path, const Overrides& overrides);

// sqrt(v0^2 + 2 v0 v1 x + (v1^2 + v0 v2) x^2), x = F - F0, floored away from zero.
// Reproduces the normal SABR equivalent local vol exactly for its Taylor point.
[[nodiscard]] VolFunction sqrt_quadratic_vol(double F0, double v0, double v1, double v2);

}  // namespace qcms::app
