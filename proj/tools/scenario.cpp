#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace qcms::app {

using nlohmann::json;

namespace {

std::string join(const std::string& base, const std::string& key) { return base + "/" + key; }

const json& require_object(const json& doc, const std::string& path) {
    if (!doc.is_object()) throw ScenarioError(path.empty() ? "/" : path, "expected an object");
    return doc;
}

std::optional<double> opt_number(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw ScenarioError(join(path, key), "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ScenarioError(join(path, key), "must be finite");
    return v;
}

double number(const json& obj, const std::string& key, const std::string& path) {
    const auto v = opt_number(obj, key, path);
    if (!v) throw ScenarioError(join(path, key), "required number is missing");
    return *v;
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
    return opt_number(obj, key, path).value_or(fallback);
}

std::string string_field(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ScenarioError(join(path, key), "required string is missing");
    if (!it->is_string()) throw ScenarioError(join(path, key), "expected a string");
    return it->get<std::string>();
}

std::vector<double> number_array(const json& obj, const std::string& key, const std::string& path) {
    const auto& arr = obj.at(key);
    if (!arr.is_array() || arr.empty()) throw ScenarioError(join(path, key), "expected a nonempty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            throw ScenarioError(join(path, key) + "/" + std::to_string(i), "expected a number");
        }
        out.push_back(arr[i].get<double>());
        if (!std::isfinite(out.back())) {
            throw ScenarioError(join(path, key) + "/" + std::to_string(i), "must be finite");
        }
        if (i > 0 && !(out[i] > out[i - 1])) {
            throw ScenarioError(join(path, key) + "/" + std::to_string(i), "grid must be strictly increasing");
        }
    }
    return out;
}

void check(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ScenarioError(field, message);
}

ModelBlock parse_model(const json& doc) {
    const std::string p = "/model";
    require_object(doc, p);
    ModelBlock m;
    m.kind = string_field(doc, "kind", p);
    m.F0 = number(doc, "F0", p);
    if (m.kind == "bachelier") {
        const double sigma = number(doc, "sigma", p);
        check(sigma > 0.0, p + "/sigma", "must be > 0");
        m.sabr = SabrParams{sigma, 0.0, 0.0};
    } else if (m.kind == "normal_sabr") {
        m.sabr.alpha = number(doc, "alpha", p);
        m.sabr.nu = number(doc, "nu", p);
        m.sabr.rho = number(doc, "rho", p);
        check(m.sabr.alpha > 0.0, p + "/alpha", "must be > 0");
        check(m.sabr.nu >= 0.0, p + "/nu", "must be >= 0");
        check(std::abs(m.sabr.rho) < 1.0, p + "/rho", "must satisfy |rho| < 1");
    } else if (m.kind == "lv") {
        m.lv.sigma0 = number(doc, "sigma0", p);
        m.lv.dsigma = number_or(doc, "dsigma", p, 0.0);
        m.lv.d2sigma = number_or(doc, "d2sigma", p, 0.0);
        check(m.lv.sigma0 > 0.0, p + "/sigma0", "must be > 0");
    } else if (m.kind == "slv") {
        m.slv.c0 = number_or(doc, "c0", p, 1.0);
        m.slv.dc = number_or(doc, "dc", p, 0.0);
        m.slv.d2c = number_or(doc, "d2c", p, 0.0);
        m.slv.alpha = number(doc, "alpha", p);
        m.slv.nu = number(doc, "nu", p);
        m.slv.rho = number(doc, "rho", p);
        check(m.slv.c0 > 0.0, p + "/c0", "must be > 0");
        check(m.slv.alpha > 0.0, p + "/alpha", "must be > 0");
        check(m.slv.nu >= 0.0, p + "/nu", "must be >= 0");
        check(std::abs(m.slv.rho) < 1.0, p + "/rho", "must satisfy |rho| < 1");
        m.sabr = SabrParams{m.slv.alpha, m.slv.nu, m.slv.rho};
    } else {
        throw ScenarioError(p + "/kind", "unknown model kind '" + m.kind + "' (bachelier, normal_sabr, lv, slv)");
    }
    return m;
}

ProductBlock parse_product(const json& doc, const ModelBlock& model) {
    const std::string p = "/product";
    require_object(doc, p);
    ProductBlock prod;
    try {
        prod.payoff = parse_payoff(string_field(doc, "payoff", p));
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(p + "/payoff", e.what());
    }
    prod.T = number(doc, "T", p);
    check(prod.T > 0.0, p + "/T", "must be > 0");
    prod.numeraire = number_or(doc, "numeraire", p, 1.0);
    check(prod.numeraire > 0.0, p + "/numeraire", "must be > 0");

    const int given = static_cast<int>(doc.contains("strike")) + static_cast<int>(doc.contains("strikes")) +
                      static_cast<int>(doc.contains("offsets"));
    check(given == 1, p, "exactly one of strike, strikes, offsets is required");
    if (doc.contains("strike")) {
        prod.strikes = {number(doc, "strike", p)};
    } else if (doc.contains("strikes")) {
        prod.strikes = number_array(doc, "strikes", p);
    } else {
        const double sd = model.atm_stdev(prod.T);
        for (double o : number_array(doc, "offsets", p)) prod.strikes.push_back(model.F0 + o * sd);
    }
    return prod;
}

Comparator parse_comparator(const std::string& name, const std::string& field) {
    if (name == "watanabe") return Comparator::watanabe;
    if (name == "hagan") return Comparator::hagan;
    if (name == "mc") return Comparator::mc;
    if (name == "replication") return Comparator::replication;
    if (name == "exact") return Comparator::exact;
    throw ScenarioError(field, "unknown comparator '" + name + "'");
}

void check_comparator(Comparator c, const ModelBlock& model, Payoff payoff, const std::string& field) {
    const bool sabr = model.is_sabr_family();
    switch (c) {
        case Comparator::watanabe:
            check(sabr || is_quadratic(payoff), field, "vanilla expansion requires a bachelier or normal_sabr model");
            break;
        case Comparator::hagan:
            check(sabr, field, "hagan requires a bachelier or normal_sabr model");
            break;
        case Comparator::replication:
            check(sabr && is_quadratic(payoff), field, "replication requires a quadratic payoff under bachelier or normal_sabr");
            break;
        case Comparator::exact:
            check(model.kind == "bachelier" || (model.kind == "normal_sabr" && payoff == Payoff::quadratic_swap),
                  field, "exact is available for bachelier, or qswap under normal_sabr");
            break;
        case Comparator::mc:
            break;
    }
}

McBlock parse_mc(const json& doc) {
    const std::string p = "/mc";
    require_object(doc, p);
    McBlock mc;
    if (doc.contains("paths")) {
        check(doc["paths"].is_number_integer() && doc["paths"].get<long long>() >= 2, p + "/paths",
              "must be an integer >= 2");
        mc.paths = doc["paths"].get<std::size_t>();
    }
    if (doc.contains("steps_per_year")) {
        check(doc["steps_per_year"].is_number_integer() && doc["steps_per_year"].get<long long>() >= 1,
              p + "/steps_per_year", "must be an integer >= 1");
        mc.steps_per_year = doc["steps_per_year"].get<int>();
    }
    if (doc.contains("antithetic")) {
        check(doc["antithetic"].is_boolean(), p + "/antithetic", "expected a boolean");
        mc.antithetic = doc["antithetic"].get<bool>();
    }
    if (doc.contains("seed")) {
        check(doc["seed"].is_number_unsigned(), p + "/seed", "expected an unsigned integer");
        mc.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("scheme")) {
        try {
            mc.scheme = parse_scheme(string_field(doc, "scheme", p));
        } catch (const ScenarioError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(p + "/scheme", e.what());
        }
    }
    return mc;
}

CmsBlock parse_cms(const json& doc, const ModelBlock& model, const ProductBlock& product) {
    const std::string p = "/cms";
    require_object(doc, p);
    CmsBlock c;
    c.setup.S0 = number_or(doc, "S0", p, model.F0);
    check(c.setup.S0 == model.F0, p + "/S0", "must equal /model/F0");
    c.setup.annuity0 = number(doc, "annuity0", p);
    check(c.setup.annuity0 > 0.0, p + "/annuity0", "must be > 0");
    c.setup.dfp = number(doc, "dfp", p);
    check(c.setup.dfp > 0.0, p + "/dfp", "must be > 0");
    c.setup.T_fix = number_or(doc, "T_fix", p, product.T);
    check(c.setup.T_fix == product.T, p + "/T_fix", "must equal /product/T");

    const std::string mp = p + "/mapping";
    check(doc.contains("mapping"), mp, "required object is missing");
    const json& mdoc = require_object(doc["mapping"], mp);
    if (mdoc.contains("flat_yield")) {
        const std::string fp = mp + "/flat_yield";
        const json& f = require_object(mdoc["flat_yield"], fp);
        FlatYieldAnnuity model_fy;
        const double n = number(f, "n_periods", fp);
        check(n >= 1.0 && n == std::floor(n), fp + "/n_periods", "must be a positive integer");
        model_fy.n_periods = static_cast<int>(n);
        model_fy.accrual = number_or(f, "accrual", fp, 1.0);
        check(model_fy.accrual > 0.0, fp + "/accrual", "must be > 0");
        model_fy.pay_delay = number_or(f, "pay_delay", fp, 0.0);
        check(model_fy.pay_delay >= 0.0, fp + "/pay_delay", "must be >= 0");
        c.mapping = mapping_from_annuity_model(c.setup, model_fy);
        c.mapping_source = "flat_yield";
    } else {
        c.mapping.m0 = number(mdoc, "m0", mp);
        c.mapping.dm = number(mdoc, "dm", mp);
        check(c.mapping.m0 > 0.0, mp + "/m0", "must be > 0");
    }

    if (doc.contains("backends")) {
        const auto& arr = doc["backends"];
        check(arr.is_array() && !arr.empty(), p + "/backends", "expected a nonempty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string f = p + "/backends/" + std::to_string(i);
            check(arr[i].is_string(), f, "expected a string");
            const auto name = arr[i].get<std::string>();
            check(name == "watanabe" || name == "mc", f, "backend must be watanabe or mc");
            c.backends.push_back(name);
        }
    } else {
        c.backends = {"watanabe"};
    }
    return c;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(field) {}

std::string to_string(Comparator c) {
    switch (c) {
        case Comparator::watanabe: return "watanabe";
        case Comparator::hagan: return "hagan";
        case Comparator::mc: return "mc";
        case Comparator::replication: return "replication";
        case Comparator::exact: return "exact";
    }
    return "unknown";
}

double ModelBlock::atm_stdev(double T) const {
    const double sqrtT = std::sqrt(T);
    if (kind == "lv") return lv.sigma0 * sqrtT;
    if (kind == "slv") return slv.alpha * slv.c0 * sqrtT;
    return sabr.alpha * sqrtT;
}

ModelSpec ModelBlock::mc_model() const {
    if (kind == "lv") return ModelSpec::lv(sqrt_quadratic_vol(F0, lv.sigma0, lv.dsigma, lv.d2sigma), F0);
    if (kind == "slv") return ModelSpec::slv(sqrt_quadratic_vol(F0, slv.c0, slv.dc, slv.d2c), sabr, F0);
    return ModelSpec::normal_sabr(sabr, F0);
}

bool Scenario::wants(Comparator c) const {
    return std::find(comparators.begin(), comparators.end(), c) != comparators.end();
}

McConfig Scenario::mc_config() const {
    McConfig cfg;
    cfg.n_paths = mc.paths;
    cfg.n_steps = std::max(1, static_cast<int>(std::lround(mc.steps_per_year * product.T)));
    cfg.seed = mc.seed.value_or(0);
    cfg.scheme = mc.scheme;
    cfg.antithetic = mc.antithetic;
    return cfg;
}

Scenario parse_scenario(const json& doc, const Overrides& overrides) {
    require_object(doc, "");
    Scenario s;
    try {
        check(doc.contains("model"), "/model", "required object is missing");
        s.model = parse_model(doc["model"]);
        check(doc.contains("product"), "/product", "required object is missing");
        s.product = parse_product(doc["product"], s.model);

        if (doc.contains("comparators")) {
            const auto& arr = doc["comparators"];
            check(arr.is_array() && !arr.empty(), "/comparators", "expected a nonempty array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string f = "/comparators/" + std::to_string(i);
                check(arr[i].is_string(), f, "expected a string");
                const Comparator c = parse_comparator(arr[i].get<std::string>(), f);
                check_comparator(c, s.model, s.product.payoff, f);
                check(!s.wants(c), f, "duplicate comparator");
                s.comparators.push_back(c);
            }
        } else {
            s.comparators = {Comparator::watanabe};
            check_comparator(Comparator::watanabe, s.model, s.product.payoff, "/comparators");
        }

        if (doc.contains("mc")) s.mc = parse_mc(doc["mc"]);
        if (overrides.seed) s.mc.seed = overrides.seed;
        if (overrides.paths) {
            check(*overrides.paths >= 2, "--paths", "must be >= 2");
            s.mc.paths = *overrides.paths;
        }
        if (overrides.steps_per_year) {
            check(*overrides.steps_per_year >= 1, "--steps-per-year", "must be >= 1");
            s.mc.steps_per_year = *overrides.steps_per_year;
        }
        if (s.mc.antithetic && s.mc.paths % 2 != 0) {
            throw ScenarioError("/mc/paths", "must be even with antithetic sampling");
        }

        if (doc.contains("output")) {
            check(doc["output"].is_string(), "/output", "expected a string");
            s.output = doc["output"].get<std::string>();
        }
        if (overrides.out) s.output = *overrides.out;

        if (doc.contains("cms")) s.cms = parse_cms(doc["cms"], s.model, s.product);

        const bool cms_mc = s.cms && std::find(s.cms->backends.begin(), s.cms->backends.end(), "mc") != s.cms->backends.end();
        if ((s.wants(Comparator::mc) || cms_mc) && !s.mc.seed) {
            throw ScenarioError("/mc/seed", "an explicit seed is required for Monte Carlo (or pass --seed)");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError("/", e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("--scenario", "cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError("--scenario", std::string("parse error: ") + e.what());
    }
    return parse_scenario(doc, overrides);
}

VolFunction sqrt_quadratic_vol(double F0, double v0, double v1, double v2) {
    const double a = v0 * v0;
    const double b = 2.0 * v0 * v1;
    const double c = v1 * v1 + v0 * v2;
    const double floor = 1e-8 * a;
    return [=](double F) {
        const double x = F - F0;
        return std::sqrt(std::max(a + b * x + c * x * x, floor));
    };
}

}  // namespace qcms::app
