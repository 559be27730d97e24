#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace qcms::app;

namespace {

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ScenarioError("--out", "cannot write '" + path + "'");
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expansion prices for vanilla and quadratic payoffs, CMS convexity adjustments"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<int> steps;
    std::string suite;

    auto add_common = [&](CLI::App* sub, bool needs_scenario) {
        auto* opt = sub->add_option("--scenario", scenario_path, "scenario JSON file");
        if (needs_scenario) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Monte Carlo seed (overrides the scenario)");
        sub->add_option("--out", out_path, "output CSV path (default: scenario output, else stdout)");
        sub->add_option("--paths", paths, "Monte Carlo path count");
        sub->add_option("--steps-per-year", steps, "Monte Carlo time steps per year");
    };
    auto* price = app.add_subcommand("price", "price one payoff per strike with the requested comparators");
    add_common(price, true);
    auto* smile = app.add_subcommand("smile", "price a strike grid and write figure data");
    add_common(smile, true);
    auto* cms = app.add_subcommand("cms", "CMS caplet/floorlet/swaplet convexity adjustments");
    add_common(cms, true);
    auto* validate = app.add_subcommand("validate", "run a validation suite");
    add_common(validate, false);
    validate->add_option("--suite", suite, "parity | reductions | appendix | oracles")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        std::ostringstream buffer;
        if (validate->parsed()) {
            ValidateOptions o;
            o.suite = suite;
            if (seed) o.seed = *seed;
            o.paths = paths;
            o.steps_per_year = steps;
            const bool ok = cmd_validate(o, buffer);
            emit(buffer.str(), out_path);
            return ok ? kExitOk : kExitCheckFailed;
        }
        const Scenario s = load_scenario(scenario_path, Overrides{seed, paths, steps, out_path.empty() ? std::nullopt : std::optional<std::string>(out_path)});
        if (price->parsed()) cmd_price(s, buffer);
        if (smile->parsed()) cmd_smile(s, buffer);
        if (cms->parsed()) cmd_cms(s, buffer);
        emit(buffer.str(), s.output);
        return kExitOk;
    } catch (const ScenarioError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const qcms::McError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
