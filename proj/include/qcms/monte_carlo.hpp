#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcms/types.hpp"
#include "qcms/watanabe.hpp"

namespace qcms {

enum class McScheme { euler, log_euler_vol };

[[nodiscard]] McScheme parse_scheme(const std::string& name);
[[nodiscard]] std::string to_string(McScheme scheme);

struct McConfig {
    std::size_t n_paths = 2'000'000;
    int n_steps = 64;
    std::uint64_t seed = 0;
    McScheme scheme = McScheme::log_euler_vol;
    bool antithetic = true;
    std::size_t chunk_size = 8192;  // paths per random stream
    unsigned n_threads = 0;         // 0: hardware concurrency

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

enum class ModelKind { normal_sabr, lv, slv };

using VolFunction = std::function<double(double)>;

struct ModelSpec {
    ModelKind kind = ModelKind::normal_sabr;
    double F0 = 0.0;
    SabrParams sabr;         // normal_sabr and slv
    VolFunction local_vol;  // sigma(F) for lv, C(F) for slv

    [[nodiscard]] static ModelSpec normal_sabr(const SabrParams& params, double F0);
    [[nodiscard]] static ModelSpec lv(VolFunction sigma, double F0);
    [[nodiscard]] static ModelSpec slv(VolFunction c, const SabrParams& params, double F0);
    void validate() const;
};

// Raised when a path produces a non-finite state or a non-positive local vol.
class McError : public std::runtime_error {
public:
    McError(const std::string& what, std::size_t path, int step);
    [[nodiscard]] std::size_t path() const noexcept { return path_; }
    [[nodiscard]] int step() const noexcept { return step_; }

private:
    std::size_t path_;
    int step_;
};

// Antithetic samples are stored pairwise: values[2i] and values[2i + 1] share |normals|.
struct TerminalSamples {
    std::vector<double> values;
    bool paired = false;
    std::uint64_t seed = 0;
};

[[nodiscard]] TerminalSamples simulate_terminal(const ModelSpec& model, double T, const McConfig& cfg);

[[nodiscard]] McEstimate price_payoff(const TerminalSamples& samples, Payoff payoff, double K,
                                      double numeraire);

// numeraire * E[f(F_T)] with antithetic pairs averaged before the SE is taken.
[[nodiscard]] McEstimate price_function(const TerminalSamples& samples, const std::function<double(double)>& f,
                                        double numeraire);

// Estimates of the normalized expansion functionals at one moneyness y.
struct GFunctionalEstimates {
    double y = 0.0;
    McEstimate hinge_g2;   // E[(g1 - y)+ g2]
    McEstimate ind_g2;     // E[1{g1 > y} g2]
    McEstimate hinge_g3;   // E[(g1 - y)+ g3]
    McEstimate ind_g3;     // E[1{g1 > y} g3]
    McEstimate ind_g2sq;   // E[1{g1 > y} g2^2]
    McEstimate hinge_sq;   // E[((g1 - y)+)^2]
};

// Pathwise left-point simulation of the iterated integrals behind g2 and g3 for the
// SLV point (normal SABR: c0 = 1, dc = d2c = 0; LV: nu = 0, alpha = 1).
[[nodiscard]] std::vector<GFunctionalEstimates> estimate_g_functionals(const SlvPoint& point, double T,
                                                                       const std::vector<double>& ys,
                                                                       const McConfig& cfg);

// E[g2^2 | g1 = y] by simulating W as a Brownian bridge pinned at W_T = y sqrt(T).
[[nodiscard]] McEstimate estimate_conditional_g2sq(const SlvPoint& point, double T, double y,
                                                   const McConfig& cfg);

}  // namespace qcms
