#include "qcms/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace qcms {

namespace {

using Engine = boost::random::mt19937_64;
using Normal = boost::random::normal_distribution<double>;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::size_t chunk) {
    return splitmix64(splitmix64(seed) ^ splitmix64(0xC0FFEEULL + chunk));
}

unsigned worker_count(unsigned requested, std::size_t n_chunks) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(n_chunks, 1)));
}

// Calls fn(chunk, begin, end) for every chunk of [0, n_units). Chunks are claimed dynamically,
// so fn must write only to chunk-owned storage. The lowest-index failure is rethrown.
template <class Fn>
void run_chunks(std::size_t n_units, std::size_t units_per_chunk, unsigned n_threads, Fn&& fn) {
    const std::size_t n_chunks = (n_units + units_per_chunk - 1) / units_per_chunk;
    std::vector<std::exception_ptr> errors(n_chunks);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const std::size_t begin = c * units_per_chunk;
            const std::size_t end = std::min(n_units, begin + units_per_chunk);
            try {
                fn(c, begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    const unsigned workers = worker_count(n_threads, n_chunks);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    void merge(const Moments& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
};

// n_units independent observations; each unit averages `per_unit` paths.
McEstimate finish(const Moments& m, std::size_t per_unit, std::uint64_t seed) {
    McEstimate e;
    e.n_paths = m.count * per_unit;
    e.seed = seed;
    if (m.count == 0) return e;
    const double n = static_cast<double>(m.count);
    e.mean = m.sum / n;
    if (m.count > 1) {
        const double var = std::max(0.0, (m.sum_sq - n * e.mean * e.mean) / (n - 1.0));
        e.std_error = std::sqrt(var / n);
    }
    return e;
}

std::size_t units_per_chunk(const McConfig& cfg) {
    const std::size_t per = cfg.antithetic ? cfg.chunk_size / 2 : cfg.chunk_size;
    return std::max<std::size_t>(per, 1);
}

double checked_vol(const VolFunction& f, double x, std::size_t path, int step) {
    const double v = f(x);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw McError("local vol not positive and finite at F = " + std::to_string(x), path, step);
    }
    return v;
}

}  // namespace

McScheme parse_scheme(const std::string& name) {
    if (name == "euler") return McScheme::euler;
    if (name == "log_euler_vol") return McScheme::log_euler_vol;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string to_string(McScheme scheme) {
    return scheme == McScheme::euler ? "euler" : "log_euler_vol";
}

void McConfig::validate() const {
    if (n_paths < 2) throw std::invalid_argument("McConfig: n_paths must be >= 2");
    if (n_steps < 1) throw std::invalid_argument("McConfig: n_steps must be >= 1");
    if (antithetic && n_paths % 2 != 0) {
        throw std::invalid_argument("McConfig: n_paths must be even with antithetic sampling");
    }
    if (chunk_size < 2) throw std::invalid_argument("McConfig: chunk_size must be >= 2");
}

ModelSpec ModelSpec::normal_sabr(const SabrParams& params, double F0) {
    ModelSpec m;
    m.kind = ModelKind::normal_sabr;
    m.F0 = F0;
    m.sabr = params;
    return m;
}

ModelSpec ModelSpec::lv(VolFunction sigma, double F0) {
    ModelSpec m;
    m.kind = ModelKind::lv;
    m.F0 = F0;
    m.local_vol = std::move(sigma);
    return m;
}

ModelSpec ModelSpec::slv(VolFunction c, const SabrParams& params, double F0) {
    ModelSpec m;
    m.kind = ModelKind::slv;
    m.F0 = F0;
    m.sabr = params;
    m.local_vol = std::move(c);
    return m;
}

void ModelSpec::validate() const {
    if (!std::isfinite(F0)) throw std::invalid_argument("ModelSpec: F0 must be finite");
    if (kind != ModelKind::lv) sabr.validate();
    if (kind != ModelKind::normal_sabr && !local_vol) {
        throw std::invalid_argument("ModelSpec: local vol function required");
    }
}

McError::McError(const std::string& what, std::size_t path, int step)
    : std::runtime_error(what + " (path " + std::to_string(path) + ", step " + std::to_string(step) + ")"),
      path_(path),
      step_(step) {}

TerminalSamples simulate_terminal(const ModelSpec& model, double T, const McConfig& cfg) {
    model.validate();
    cfg.validate();
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("simulate_terminal: T must be > 0");

    const int n_sides = cfg.antithetic ? 2 : 1;
    const std::size_t n_units = cfg.n_paths / n_sides;
    const double dt = T / cfg.n_steps;
    const double sq = std::sqrt(dt);
    const double nu = model.sabr.nu;
    const double rho = model.sabr.rho;
    const double rho_hat = model.sabr.rho_hat();
    const double drift_factor = std::exp(-0.5 * nu * nu * dt);
    const bool log_vol = cfg.scheme == McScheme::log_euler_vol;

    TerminalSamples out;
    out.values.assign(n_units * n_sides, 0.0);
    out.paired = cfg.antithetic;
    out.seed = cfg.seed;

    run_chunks(n_units, units_per_chunk(cfg), cfg.n_threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Engine engine(chunk_seed(cfg.seed, chunk));
        Normal normal;
        for (std::size_t u = begin; u < end; ++u) {
            double F[2] = {model.F0, model.F0};
            double sigma[2] = {model.sabr.alpha, model.sabr.alpha};
            const std::size_t path = u * n_sides;
            for (int step = 0; step < cfg.n_steps; ++step) {
                const double z1 = normal(engine);
                if (model.kind == ModelKind::lv) {
                    for (int s = 0; s < n_sides; ++s) {
                        const double dw = s == 0 ? sq * z1 : -sq * z1;
                        F[s] += checked_vol(model.local_vol, F[s], path + s, step) * dw;
                    }
                } else {
                    const double z2 = normal(engine);
                    const double db = sq * z1;
                    const double dw = rho * db + rho_hat * sq * z2;
                    const double up = log_vol ? std::exp(nu * db) : 0.0;
                    for (int s = 0; s < n_sides; ++s) {
                        const double sign = s == 0 ? 1.0 : -1.0;
                        const double c = model.kind == ModelKind::slv
                                             ? checked_vol(model.local_vol, F[s], path + s, step)
                                             : 1.0;
                        F[s] += c * sigma[s] * sign * dw;
                        if (log_vol) {
                            sigma[s] *= drift_factor * (s == 0 ? up : 1.0 / up);
                        } else {
                            sigma[s] *= 1.0 + nu * sign * db;
                        }
                    }
                }
                for (int s = 0; s < n_sides; ++s) {
                    if (!std::isfinite(F[s]) || !std::isfinite(sigma[s])) {
                        throw McError("non-finite state", path + s, step);
                    }
                }
            }
            for (int s = 0; s < n_sides; ++s) out.values[path + s] = F[s];
        }
    });
    return out;
}

McEstimate price_function(const TerminalSamples& samples, const std::function<double(double)>& f,
                          double numeraire) {
    if (samples.values.empty()) throw std::invalid_argument("price_function: no samples");
    if (!(numeraire > 0.0)) throw std::invalid_argument("price_function: numeraire must be > 0");
    const std::size_t per_unit = samples.paired ? 2 : 1;
    if (samples.values.size() % per_unit != 0) {
        throw std::invalid_argument("price_function: paired samples must have even size");
    }
    Moments m;
    for (std::size_t i = 0; i < samples.values.size(); i += per_unit) {
        double x = 0.0;
        for (std::size_t s = 0; s < per_unit; ++s) x += f(samples.values[i + s]);
        m.add(numeraire * x / static_cast<double>(per_unit));
    }
    return finish(m, per_unit, samples.seed);
}

McEstimate price_payoff(const TerminalSamples& samples, Payoff payoff, double K, double numeraire) {
    return price_function(samples, [payoff, K](double F) { return payoff_value(payoff, F, K); }, numeraire);
}

namespace {

constexpr int kFunctionals = 6;

struct FunctionalAccumulator {
    std::vector<Moments> m;  // ys.size() * kFunctionals
};

}  // namespace

std::vector<GFunctionalEstimates> estimate_g_functionals(const SlvPoint& point, double T,
                                                         const std::vector<double>& ys,
                                                         const McConfig& cfg) {
    point.validate();
    cfg.validate();
    if (!(T > 0.0)) throw std::invalid_argument("estimate_g_functionals: T must be > 0");
    if (ys.empty()) throw std::invalid_argument("estimate_g_functionals: no moneyness values");

    const int n_sides = cfg.antithetic ? 2 : 1;
    const std::size_t n_units = cfg.n_paths / n_sides;
    const double dt = T / cfg.n_steps;
    const double sq = std::sqrt(dt);
    const double sqrtT = std::sqrt(T);
    const double a1 = point.alpha * point.dc;
    const double q = point.alpha * point.alpha * point.c0 * point.d2c;
    const double nu = point.nu;
    const double rho = point.rho;
    const double rho_hat = point.rho_hat();
    const std::size_t ny = ys.size();
    const std::size_t upc = units_per_chunk(cfg);
    const std::size_t n_chunks = (n_units + upc - 1) / upc;

    std::vector<FunctionalAccumulator> acc(n_chunks);
    run_chunks(n_units, upc, cfg.n_threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Engine engine(chunk_seed(cfg.seed, chunk));
        Normal normal;
        auto& local = acc[chunk].m;
        local.assign(ny * kFunctionals, Moments{});
        std::vector<double> unit(ny * kFunctionals);
        for (std::size_t u = begin; u < end; ++u) {
            // side 0 uses (z1, z2); side 1 the negated draws
            double W = 0.0, B = 0.0, t = 0.0;
            double i11 = 0.0, ib = 0.0;
            double j_i11 = 0.0, j_ib = 0.0, j_w2 = 0.0, j_wb = 0.0, j_b2 = 0.0;
            for (int step = 0; step < cfg.n_steps; ++step) {
                const double db = sq * normal(engine);
                const double dw = rho * db + rho_hat * sq * normal(engine);
                j_i11 += i11 * dw;
                j_ib += ib * dw;
                j_w2 += W * W * dw;
                j_wb += W * B * dw;
                j_b2 += (B * B - t) * dw;
                i11 += W * dw;
                ib += B * dw;
                W += dw;
                B += db;
                t += dt;
            }
            std::fill(unit.begin(), unit.end(), 0.0);
            for (int s = 0; s < n_sides; ++s) {
                // negating all increments flips odd-degree integrals only
                const double sign = s == 0 ? 1.0 : -1.0;
                const double g1 = sign * W / sqrtT;
                const double g2 = (a1 * i11 + nu * ib) / sqrtT;
                const double g3 = sign *
                                  (a1 * a1 * j_i11 + a1 * nu * j_ib + 0.5 * q * j_w2 + a1 * nu * j_wb +
                                   0.5 * nu * nu * j_b2) /
                                  sqrtT;
                for (std::size_t k = 0; k < ny; ++k) {
                    const double hinge = std::max(g1 - ys[k], 0.0);
                    const double ind = g1 > ys[k] ? 1.0 : 0.0;
                    double* v = &unit[k * kFunctionals];
                    v[0] += hinge * g2;
                    v[1] += ind * g2;
                    v[2] += hinge * g3;
                    v[3] += ind * g3;
                    v[4] += ind * g2 * g2;
                    v[5] += hinge * hinge;
                }
            }
            for (std::size_t i = 0; i < unit.size(); ++i) local[i].add(unit[i] / n_sides);
        }
    });

    std::vector<Moments> total(ny * kFunctionals);
    for (const auto& a : acc) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i].merge(a.m[i]);
    }
    std::vector<GFunctionalEstimates> out(ny);
    const std::size_t per_unit = static_cast<std::size_t>(n_sides);
    for (std::size_t k = 0; k < ny; ++k) {
        const Moments* m = &total[k * kFunctionals];
        out[k].y = ys[k];
        out[k].hinge_g2 = finish(m[0], per_unit, cfg.seed);
        out[k].ind_g2 = finish(m[1], per_unit, cfg.seed);
        out[k].hinge_g3 = finish(m[2], per_unit, cfg.seed);
        out[k].ind_g3 = finish(m[3], per_unit, cfg.seed);
        out[k].ind_g2sq = finish(m[4], per_unit, cfg.seed);
        out[k].hinge_sq = finish(m[5], per_unit, cfg.seed);
    }
    return out;
}

McEstimate estimate_conditional_g2sq(const SlvPoint& point, double T, double y, const McConfig& cfg) {
    point.validate();
    cfg.validate();
    if (!(T > 0.0)) throw std::invalid_argument("estimate_conditional_g2sq: T must be > 0");

    const int n_sides = cfg.antithetic ? 2 : 1;
    const std::size_t n_units = cfg.n_paths / n_sides;
    const double dt = T / cfg.n_steps;
    const double sqrtT = std::sqrt(T);
    const double a1 = point.alpha * point.dc;
    const double nu = point.nu;
    const double rho = point.rho;
    const double rho_hat = point.rho_hat();
    const double w_end = y * sqrtT;
    const std::size_t upc = units_per_chunk(cfg);
    const std::size_t n_chunks = (n_units + upc - 1) / upc;

    std::vector<Moments> acc(n_chunks);
    run_chunks(n_units, upc, cfg.n_threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Engine engine(chunk_seed(cfg.seed, chunk));
        Normal normal;
        for (std::size_t u = begin; u < end; ++u) {
            // B = rho W + rho_hat P with P independent of the pinned W.
            // The antithetic partner negates the bridge noise and P.
            double value = 0.0;
            double W[2] = {0.0, 0.0}, P[2] = {0.0, 0.0}, i11[2] = {0.0, 0.0}, ib[2] = {0.0, 0.0};
            for (int step = 0; step < cfg.n_steps; ++step) {
                const double remaining = T - step * dt;
                const double bridge_sd = std::sqrt(std::max(remaining - dt, 0.0) * dt / remaining);
                const double zw = normal(engine);
                const double zp = normal(engine);
                for (int s = 0; s < n_sides; ++s) {
                    const double sign = s == 0 ? 1.0 : -1.0;
                    const double dw = (w_end - W[s]) * dt / remaining + sign * bridge_sd * zw;
                    const double dp = sign * std::sqrt(dt) * zp;
                    i11[s] += W[s] * dw;
                    ib[s] += (rho * W[s] + rho_hat * P[s]) * dw;
                    W[s] += dw;
                    P[s] += dp;
                }
            }
            for (int s = 0; s < n_sides; ++s) {
                const double g2 = (a1 * i11[s] + nu * ib[s]) / sqrtT;
                value += g2 * g2;
            }
            acc[chunk].add(value / n_sides);
        }
    });
    Moments total;
    for (const auto& a : acc) total.merge(a);
    return finish(total, static_cast<std::size_t>(n_sides), cfg.seed);
}

}  // namespace qcms
