// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "cfmm/cfmm.hpp"
#include "cfmm/payoff.hpp"
#include "cfmm/replication.hpp"
#include "cfmm/simulate.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cfmm;
using support::kE;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit_s;  // 0 = none
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Tracks the largest |excess| of a residual over zero and any failure.
struct Worst {
    double value = 0.0;
    long failures = 0;
    void observe(double residual, double bound) {
        if (std::isnan(residual)) residual = INFINITY;
        value = std::max(value, residual);
        if (residual > bound) ++failures;
    }
};

std::shared_ptr<const ReplicationProfile> quadrature_profile(const CatalogParams& c) {
    return std::make_shared<const ReplicationProfile>(make_catalog_payoff(c), CostEvaluation::Quadrature);
}

// Closed-form g for each example family, written out independently of the library.
double closed_form_g(const CatalogParams& c, double p) {
    if (const auto* x = std::get_if<CashOrNothing>(&c)) return oracle::g_cash_or_nothing(x->p0, p);
    if (const auto* x = std::get_if<CappedCall>(&c)) return oracle::g_capped_call(x->p0, x->p1, p);
    if (const auto* x = std::get_if<BlackScholesBinary>(&c))
        return oracle::g_black_scholes_binary(x->strike, x->sigma, x->tau, p);
    if (const auto* x = std::get_if<Logarithmic>(&c)) return oracle::g_logarithmic(x->p0, p);
    if (const auto* x = std::get_if<CappedPower>(&c)) return oracle::g_capped_power(x->p0, x->p1.value(), x->a, p);
    const auto& cp = std::get<ConstantProportion>(c);
    return oracle::g_constant_proportion(cp.w, cp.c, p);
}

Outcome closed_form_agreement() {
    Worst worst;
    std::string where;
    for (const auto& c : support::catalog_examples()) {
        const auto pr = quadrature_profile(c.params);
        const double lo = support::sample_bottom(*pr), hi = support::sample_top(*pr);
        for (int i = 0; i < 200; ++i) {
            const double p = i == 199 ? hi : lo * std::pow(hi / lo, i / 199.0);
            const double want = closed_form_g(c.params, p);
            const double got = replication_cost(*pr, p);
            const double err = want == 0.0 ? std::abs(got) / 1e-300 : std::abs(got - want) / std::abs(want);
            if (err > worst.value) where = c.name + " at p = " + fmt("%.6g", p);
            worst.observe(err, 1e-8);
        }
    }
    return {worst.failures == 0,
            "worst relative error " + fmt("%.3g", worst.value) + " (" + where + "), 6 families x 200 prices"};
}

Outcome infimum_oracle() {
    Worst worst;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& c : support::catalog_examples()) {
        const TradingFunction tf(support::profile_of(c.params));
        const double cap = tf.max_risky_reserve();
        for (int i = 0; i < 100; ++i) {
            const double r1 = 5.0 * u(rng);
            const double r2 = cap * (1e-6 + (1.0 - 1e-6) * u(rng));
            const double psi = trading_function_eval(tf, r1, r2);
            const double inf = trading_function_infimum(tf, r1, r2, 512);
            worst.observe(std::abs(psi - inf) / std::max(1.0, std::abs(psi)), 1e-6);
        }
    }
    return {worst.failures == 0, "worst relative gap " + fmt("%.3g", worst.value) + " over 6 x 100 reserve points"};
}

Outcome constant_product() {
    const double w = 0.5, c = 1.0;
    const double c_prime = std::pow(c * w / (1.0 - w), w / (1.0 - w));
    const auto pr = support::profile_of(ConstantProportion{w, c});
    const PricePath path = gbm_path({1.0, 0.8, 1.0, 1000, 99});
    PoolState pool = pool_init(pr, path.prices.front());
    Worst worst;
    for (std::size_t i = 1; i < path.prices.size(); ++i) {
        pool = arbitrage_to_price(pool, pr->interval().clamp(path.prices[i])).pool;
        worst.observe(std::abs(std::sqrt(pool.r1() * pool.r2()) - c_prime) / c_prime, 1e-9);
    }
    return {worst.failures == 0, "1000 steps, worst relative deviation of sqrt(R1 R2) from C' = " +
                                     fmt("%.17g", c_prime) + ": " + fmt("%.3g", worst.value)};
}

Outcome black_scholes_psi() {
    const double k = 1.0, sigma = 0.2, tau = 1.0;
    Worst worst;
    for (auto mode : {CostEvaluation::Quadrature, CostEvaluation::Analytic}) {
        const TradingFunction tf(
            std::make_shared<const ReplicationProfile>(make_catalog_payoff(BlackScholesBinary{k, sigma, tau}), mode));
        const double cap = tf.max_risky_reserve();
        for (int i = 0; i <= 200; ++i) {
            const double r2 = cap * i / 200.0;
            for (double r1 : {0.0, 0.7}) {
                const double want = oracle::psi_black_scholes_binary(k, sigma, tau, r1, r2);
                worst.observe(std::abs(trading_function_eval(tf, r1, r2) - want), 1e-6);
            }
        }
    }
    return {worst.failures == 0,
            "worst |psi - closed form| " + fmt("%.3g", worst.value) + " over r2 in [0, 1/K] (numeric and analytic g)"};
}

Outcome arbitrage_nonnegativity() {
    Worst profit, optimality;
    std::mt19937_64 rng(77);
    for (const auto& c : support::catalog_examples()) {
        const auto pr = support::profile_of(c.params);
        const double lo = support::sample_bottom(*pr), hi = support::sample_top(*pr);
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        auto draw = [&] { return std::clamp(std::exp(u(rng)), lo, hi); };
        for (int i = 0; i < 10000; ++i) {
            const double p = draw(), p_ext = draw(), q = draw();
            profit.observe(-arbitrage_to_price(pool_init(pr, p), p_ext).step.profit, 1e-10);
            const Portfolio a = portfolio_at(*pr, q), b = portfolio_at(*pr, p_ext);
            optimality.observe((b.numeraire + p_ext * b.risky) - (a.numeraire + p_ext * a.risky), 1e-10);
        }
    }
    return {profit.failures == 0 && optimality.failures == 0,
            "6 x 10^4 pairs; most negative profit " + fmt("%.3g", -profit.value) + ", most negative optimality residual " +
                fmt("%.3g", -optimality.value)};
}

Outcome earnings_identity() {
    Worst worst;
    for (const auto& c : support::catalog_examples()) {
        const auto pr = support::profile_of(c.params);
        const double start = std::sqrt(support::sample_bottom(*pr) * support::sample_top(*pr));
        for (std::uint64_t s = 0; s < 100; ++s) {
            const EarningsReport r = run_arbitrage(pr, gbm_path({start, 0.7, 1.0, 250, 1000 + s}));
            worst.observe(std::abs(r.total_w - (r.payoff_term + r.path_term)) / std::max(1.0, std::abs(r.total_w)), 1e-10);
        }
    }
    return {worst.failures == 0, "worst scaled residual " + fmt("%.3g", worst.value) + " over 6 x 100 GBM paths"};
}

Outcome variance_swap() {
    const auto pr = support::profile_of(Logarithmic{1e-6});
    const MonteCarloResult mc = monte_carlo_earnings(pr, {1.0, 0.5, 1.0, 1000, 7}, 1000);
    const double theory = 0.5 * 0.5 * 0.5 * 1.0;
    const double band = std::max(3.0 * mc.standard_error, 0.02 * theory);
    return {std::abs(mc.mean - theory) <= band, "mean W " + fmt("%.6f", mc.mean) + " (SE " +
                                                    fmt("%.6f", mc.standard_error) + ") vs 0.125, band " +
                                                    fmt("%.6f", band)};
}

Outcome finiteness() {
    const PriceInterval unbounded(0.0, ExtendedPrice::infinity());
    bool ok = true;
    std::string detail;
    const Growth lg = growth_classification(make_catalog_payoff(Logarithmic{1.0}), unbounded).classification;
    ok = ok && lg == Growth::Finite;
    detail += std::string("logarithmic ") + growth_name(lg);
    for (double w : {0.2, 0.5, 0.9}) {
        const auto spec = make_catalog_payoff(ConstantProportion{w, 1.0});
        const Growth g = growth_classification(spec, spec.interval()).classification;
        ok = ok && g == Growth::Finite;
        detail += ", constant_proportion(w=" + fmt("%.1f", w) + ") " + growth_name(g);
    }
    const auto linear = PayoffSpec::from_catalog(CappedPower{1.0, ExtendedPrice::infinity(), 1.0});
    const GrowthAnalysis ga = growth_classification(linear, linear.interval());
    ok = ok && ga.classification == Growth::Infinite;
    detail += std::string(", linear tail ") + growth_name(ga.classification);

    double worst = 0.0;
    for (std::size_t k = 1; k < ga.evidence.size(); ++k) {
        const double inc = ga.evidence[k].g_at_probe - ga.evidence[k - 1].g_at_probe;
        const double spacing = std::log(ga.evidence[k].beta_cutoff / ga.evidence[k - 1].beta_cutoff);
        worst = std::max(worst, std::abs(inc / spacing - 1.0));
        if (k > 1) {
            const double prev = ga.evidence[k - 1].g_at_probe - ga.evidence[k - 2].g_at_probe;
            worst = std::max(worst, std::abs(inc / prev - 1.0));
        }
    }
    ok = ok && ga.evidence.size() == 4 && worst <= 0.05;
    detail += "; probe increments vs log spacing off by at most " + fmt("%.2g", 100 * worst) + "%";
    return {ok, detail};
}

// The property suites shared by catalog and random table payoffs.
void property_suite(const std::shared_ptr<const ReplicationProfile>& pr, std::mt19937_64& rng, Worst& worst) {
    const double lo = support::sample_bottom(*pr), hi = support::sample_top(*pr);
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] { return std::clamp(std::exp(u(rng)), lo, hi); };
    const PayoffSpec& f = pr->payoff();

    for (int i = 0; i < 200; ++i) {
        double p = draw(), q = draw();
        if (p > q) std::swap(p, q);
        const double vp = pr->value(p), vq = pr->value(q);
        worst.observe(eval_payoff(f, p) - eval_payoff(f, q), 0.0);
        worst.observe(-eval_payoff(f, p), 0.0);
        worst.observe(pr->cost(q) - pr->cost(p), 0.0);
        worst.observe(-pr->cost(p), 0.0);
        worst.observe(vp - vq, 1e-12 * std::max(1.0, vq));
        worst.observe(0.5 * (vp + vq) - pr->value(0.5 * (p + q)), 1e-10);
    }
    for (int i = 0; i < 40; ++i) {
        const double p = draw();
        const double v = pr->value(p);
        worst.observe(std::abs(portfolio_value_integral(*pr, p) - v), 1e-8 * std::max(1.0, v));
    }
    const TradingFunction tf(pr);
    const double cap = tf.max_risky_reserve();
    if (cap <= 0.0) return;
    for (int i = 0; i < 60; ++i) {
        const double r1 = 3.0 * unit(rng), r2 = cap * (0.001 + 0.99 * unit(rng));
        const double psi = trading_function_eval(tf, r1, r2);
        worst.observe(psi - trading_function_eval(tf, r1 + 0.05, r2), 0.0);
        worst.observe(psi - trading_function_eval(tf, r1, std::min(cap, r2 + 0.005 * cap)), 1e-12 * std::max(1.0, std::abs(psi)));
        const double s1 = 3.0 * unit(rng), s2 = cap * (0.001 + 0.99 * unit(rng));
        const double mid = trading_function_eval(tf, 0.5 * (r1 + s1), 0.5 * (r2 + s2));
        worst.observe(0.5 * (psi + trading_function_eval(tf, s1, s2)) - mid, 1e-10);
    }
}

Outcome property_suites() {
    Worst worst;
    std::mt19937_64 rng(4242);
    for (const auto& c : support::catalog_examples()) property_suite(support::profile_of(c.params), rng, worst);
    int tables = 0;
    for (int i = 0; i < 50; ++i) {
        const oracle::RandomTable t = oracle::random_table(rng);
        PiecewiseTable table;
        table.points = t.points;
        for (const auto& [p, s] : t.jumps) table.jumps.push_back({p, s});
        std::optional<PriceInterval> iv;
        if (i % 3 == 0) iv = PriceInterval(0.5 * t.points.front().first, ExtendedPrice::infinity());
        property_suite(std::make_shared<const ReplicationProfile>(PayoffSpec::from_table(table, iv)), rng, worst);
        ++tables;
    }
    return {worst.failures == 0, "6 catalog families + " + std::to_string(tables) + " random tables; " +
                                     std::to_string(worst.failures) + " violations"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "closed-form g matches quadrature g within 1e-8 relative", 10.0, closed_form_agreement},
        {2, "psi matches the infimum oracle within 1e-6 relative", 30.0, infimum_oracle},
        {3, "constant proportion recovers the constant product", 0.0, constant_product},
        {4, "Black-Scholes binary psi matches its closed form within 1e-6", 0.0, black_scholes_psi},
        {5, "arbitrage profit and one-shot optimality >= -1e-10", 0.0, arbitrage_nonnegativity},
        {6, "discrete earnings identity within 1e-10", 0.0, earnings_identity},
        {7, "variance-swap earnings match sigma^2 T / 2", 60.0, variance_swap},
        {8, "replication-cost finiteness classification", 0.0, finiteness},
        {9, "property suites on catalog and random table payoffs", 0.0, property_suites},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
            o.passed = false;
            o.detail += "; exceeded the " + fmt("%.0f", c.time_limit_s) + " s budget";
        }
        std::printf("%s criterion %d: %s -- %s [%.2f s]\n", o.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    o.detail.c_str(), secs);
        failed += o.passed ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
