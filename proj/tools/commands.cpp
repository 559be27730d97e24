#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "qcms/analytic.hpp"
#include "qcms/reference.hpp"

namespace qcms::app {

namespace {

struct Row {
    double strike = 0.0;
    std::optional<PriceResult> watanabe;
    std::optional<double> hagan;
    std::optional<McEstimate> mc;
    std::optional<ReplicationResult> replication;
    std::optional<double> exact;
};

double finite(double x, const char* what) {
    if (!std::isfinite(x)) throw NumericalError(std::string(what) + " produced a non-finite value");
    return x;
}

PriceResult watanabe_price(const ModelBlock& m, Payoff payoff, double K, double T, double N) {
    if (!is_quadratic(payoff)) {
        PriceResult call = call_normal_sabr(m.sabr, m.F0, K, T, N);
        if (payoff == Payoff::call) return call;
        const double forward_leg = N * (m.F0 - K);
        return PriceResult::from_orders(call.order0 - forward_leg, call.order1, call.order2, call.y);
    }
    const QuadraticType q = to_quadratic_type(payoff);
    if (m.kind == "lv") return quadratic_lv(m.lv, m.F0, K, T, N, q);
    if (m.kind == "slv") return quadratic_slv(m.slv, m.F0, K, T, N, q);
    return quadratic_normal_sabr(m.sabr, m.F0, K, T, N, q);
}

ReplicationResult replicate(const VanillaPricer& call_pricer, Payoff payoff, double F0, double K, double sd,
                            double N) {
    const auto put_pricer = [&](double k) { return call_pricer(k) - N * (F0 - k); };
    const StrikeGrid call_grid = default_call_grid(K, sd);
    const StrikeGrid put_grid{K - 12.0 * sd, K, call_grid.n};
    switch (payoff) {
        case Payoff::quadratic_call: return replicate_quadratic_call(call_pricer, K, call_grid);
        case Payoff::quadratic_put: return replicate_quadratic_put(put_pricer, K, put_grid);
        case Payoff::quadratic_swap: {
            const auto c = replicate_quadratic_call(call_pricer, K, call_grid);
            const auto p = replicate_quadratic_put(put_pricer, K, put_grid);
            return ReplicationResult{c.value + p.value, c.truncation_estimate + p.truncation_estimate};
        }
        default: throw std::invalid_argument("replication requires a quadratic payoff");
    }
}

double hagan_vanilla(const ModelBlock& m, Payoff payoff, double K, double T, double N) {
    const double vol = hagan_normal_vol(m.sabr, m.F0, K, T);
    return bachelier_vanilla(BachelierInputs{m.F0, K, vol, T, N}, to_option_type(payoff));
}

std::vector<Row> evaluate(const Scenario& s) {
    const ModelBlock& m = s.model;
    const ProductBlock& p = s.product;
    const double sd = m.atm_stdev(p.T);

    std::optional<TerminalSamples> samples;
    if (s.wants(Comparator::mc)) samples = simulate_terminal(m.mc_model(), p.T, s.mc_config());

    std::vector<Row> rows;
    for (double K : p.strikes) {
        Row r;
        r.strike = K;
        if (s.wants(Comparator::watanabe)) {
            r.watanabe = watanabe_price(m, p.payoff, K, p.T, p.numeraire);
            finite(r.watanabe->value, "watanabe");
        }
        if (s.wants(Comparator::hagan)) {
            if (is_quadratic(p.payoff)) {
                const VanillaPricer pricer = [&](double k) { return hagan_vanilla(m, Payoff::call, k, p.T, p.numeraire); };
                r.hagan = replicate(pricer, p.payoff, m.F0, K, sd, p.numeraire).value;
            } else {
                r.hagan = hagan_vanilla(m, p.payoff, K, p.T, p.numeraire);
            }
            finite(*r.hagan, "hagan");
        }
        if (samples) {
            r.mc = price_payoff(*samples, p.payoff, K, p.numeraire);
            finite(r.mc->mean, "mc");
        }
        if (s.wants(Comparator::replication)) {
            const VanillaPricer pricer = [&](double k) { return call_normal_sabr(m.sabr, m.F0, k, p.T, p.numeraire).value; };
            r.replication = replicate(pricer, p.payoff, m.F0, K, sd, p.numeraire);
            finite(r.replication->value, "replication");
        }
        if (s.wants(Comparator::exact)) {
            if (m.kind == "bachelier") {
                const BachelierInputs in{m.F0, K, m.sabr.alpha, p.T, p.numeraire};
                r.exact = is_quadratic(p.payoff) ? bachelier_quadratic(in, to_quadratic_type(p.payoff))
                                                 : bachelier_vanilla(in, to_option_type(p.payoff));
            } else {
                r.exact = p.numeraire * exact_quadratic_swap_normal_sabr(m.F0, K, m.sabr.alpha, m.sabr.nu, p.T);
            }
            finite(*r.exact, "exact");
        }
        rows.push_back(r);
    }
    return rows;
}

class CsvLine {
public:
    explicit CsvLine(std::ostream& out) : out_(out) {}
    CsvLine& add(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }
    CsvLine& add(double x) { return add(format_number(x)); }
    ~CsvLine() { out_ << '\n'; }

private:
    std::ostream& out_;
    bool first_ = true;
};

}  // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void cmd_price(const Scenario& s, std::ostream& out) {
    const auto rows = evaluate(s);
    {
        CsvLine h(out);
        h.add("payoff").add("strike").add("T").add("y");
        if (s.wants(Comparator::watanabe)) h.add("watanabe").add("order0").add("order1").add("order2");
        if (s.wants(Comparator::hagan)) h.add("hagan");
        if (s.wants(Comparator::mc)) h.add("mc").add("mc_se");
        if (s.wants(Comparator::replication)) h.add("replication").add("replication_truncation");
        if (s.wants(Comparator::exact)) h.add("exact");
    }
    const double sd = s.model.atm_stdev(s.product.T);
    for (const auto& r : rows) {
        CsvLine l(out);
        l.add(std::string(to_string(s.product.payoff))).add(r.strike).add(s.product.T).add((r.strike - s.model.F0) / sd);
        if (r.watanabe) l.add(r.watanabe->value).add(r.watanabe->order0).add(r.watanabe->order1).add(r.watanabe->order2);
        if (r.hagan) l.add(*r.hagan);
        if (r.mc) l.add(r.mc->mean).add(r.mc->std_error);
        if (r.replication) l.add(r.replication->value).add(r.replication->truncation_estimate);
        if (r.exact) l.add(*r.exact);
    }
}

void cmd_smile(const Scenario& s, std::ostream& out) {
    const auto rows = evaluate(s);
    {
        CsvLine h(out);
        h.add("strike");
        if (s.wants(Comparator::watanabe)) h.add("watanabe");
        if (s.wants(Comparator::hagan)) h.add("hagan");
        if (s.wants(Comparator::mc)) h.add("mc").add("mc_se");
        if (s.wants(Comparator::replication)) h.add("replication");
        if (s.wants(Comparator::exact)) h.add("exact");
    }
    for (const auto& r : rows) {
        CsvLine l(out);
        l.add(r.strike);
        if (r.watanabe) l.add(r.watanabe->value);
        if (r.hagan) l.add(*r.hagan);
        if (r.mc) l.add(r.mc->mean).add(r.mc->std_error);
        if (r.replication) l.add(r.replication->value);
        if (r.exact) l.add(*r.exact);
    }
}

void cmd_cms(const Scenario& s, std::ostream& out) {
    if (!s.cms) throw ScenarioError("/cms", "required object is missing for the cms command");
    const CmsBlock& c = *s.cms;
    const ModelBlock& m = s.model;
    const double T = s.product.T;
    const double N = c.setup.annuity0;
    for (const auto& b : c.backends) {
        if (b == "watanabe" && !m.is_sabr_family()) {
            throw ScenarioError("/cms/backends", "watanabe backend needs vanilla prices (bachelier or normal_sabr)");
        }
    }
    std::optional<TerminalSamples> samples;
    for (const auto& b : c.backends) {
        if (b == "mc" && !samples) samples = simulate_terminal(m.mc_model(), T, s.mc_config());
    }

    {
        CsvLine h(out);
        h.add("strike").add("product").add("backend").add("ca").add("ca_se").add("vanilla").add("quadratic");
    }
    const std::string pricing = m.kind == "bachelier" ? "bachelier" : "watanabe";
    auto emit = [&](double K, const char* product, const std::string& backend, double ca, double se, double v, double q) {
        CsvLine l(out);
        l.add(K).add(product).add(backend).add(finite(ca, "cms")).add(se).add(v).add(q);
    };

    for (const auto& b : c.backends) {
        for (double K : s.product.strikes) {
            if (b == "watanabe") {
                const double vc = watanabe_price(m, Payoff::call, K, T, N).value;
                const double vp = watanabe_price(m, Payoff::put, K, T, N).value;
                const double qc = watanabe_price(m, Payoff::quadratic_call, K, T, N).value;
                const double qp = watanabe_price(m, Payoff::quadratic_put, K, T, N).value;
                const double qs = watanabe_price(m, Payoff::quadratic_swap, K, T, N).value;
                emit(K, "caplet", pricing, ca_caplet(c.setup, c.mapping, K, vc, qc), 0.0, vc, qc);
                emit(K, "floorlet", pricing, ca_floorlet(c.setup, c.mapping, K, vp, qp), 0.0, vp, qp);
                emit(K, "swaplet", pricing, ca_swaplet(c.setup, c.mapping, K, qs), 0.0, N * (c.setup.S0 - K), qs);
            } else {
                // pathwise integrands of the assembled adjustments
                const double a = c.mapping.m0 - 1.0;
                const double d = c.mapping.dm - 1.0;
                auto estimate = [&](auto integrand) { return price_function(*samples, integrand, N); };
                const auto cap = estimate([&](double S) { const double h = std::max(S - K, 0.0); return a * h + d * h * h; });
                const auto flo = estimate([&](double S) { const double h = std::max(K - S, 0.0); return a * h - d * h * h; });
                const auto swp = estimate([&](double S) { const double h = S - K; return a * h + d * h * h; });
                const auto vc = price_payoff(*samples, Payoff::call, K, N);
                const auto vp = price_payoff(*samples, Payoff::put, K, N);
                const auto qc = price_payoff(*samples, Payoff::quadratic_call, K, N);
                const auto qp = price_payoff(*samples, Payoff::quadratic_put, K, N);
                const auto qs = price_payoff(*samples, Payoff::quadratic_swap, K, N);
                emit(K, "caplet", "mc", cap.mean, cap.std_error, vc.mean, qc.mean);
                emit(K, "floorlet", "mc", flo.mean, flo.std_error, vp.mean, qp.mean);
                emit(K, "swaplet", "mc", swp.mean, swp.std_error, N * (c.setup.S0 - K), qs.mean);
            }
        }
        double qc_atm = 0.0;
        double qc_se = 0.0;
        if (b == "watanabe") {
            qc_atm = watanabe_price(m, Payoff::quadratic_call, c.setup.S0, T, N).value;
        } else {
            const auto e = price_payoff(*samples, Payoff::quadratic_call, c.setup.S0, N);
            qc_atm = e.mean;
            qc_se = e.std_error;
        }
        const double rate = cms_rate_expectation(c.setup, c.mapping, qc_atm);
        emit(c.setup.S0, "cms_rate", b == "mc" ? "mc" : pricing, rate, std::abs(c.mapping.dm - 1.0) * qc_se,
             c.setup.S0, qc_atm);
    }
}

}  // namespace qcms::app
