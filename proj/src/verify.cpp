#include "cfmm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "cfmm/cfmm.hpp"
#include "cfmm/errors.hpp"
#include "cfmm/replication.hpp"
#include "cfmm/simulate.hpp"

namespace cfmm {
namespace {

struct Range {
    double lo;
    double hi;
};

// Log-uniform sampling window inside [alpha, beta].
Range sampling_range(const ReplicationProfile& pr) {
    double hi = 0.0;
    if (pr.beta().is_finite()) {
        hi = pr.beta().value();
    } else {
        hi = 10.0 * std::max(pr.alpha(), 1.0);
        for (double b : pr.payoff().breakpoints()) hi = std::max(hi, 10.0 * b);
    }
    const double lo = pr.alpha() > 0.0 ? pr.alpha() : 1e-4 * hi;
    return {lo, hi};
}

class Sampler {
public:
    Sampler(Range r, std::uint64_t seed) : range_(r), engine_(seed) {}
    double price() {
        if (!(range_.hi > range_.lo)) return range_.lo;
        std::uniform_real_distribution<double> u(std::log(range_.lo), std::log(range_.hi));
        return std::clamp(std::exp(u(engine_)), range_.lo, range_.hi);
    }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

private:
    Range range_;
    std::mt19937_64 engine_;
};

class Tracker {
public:
    Tracker(std::string name, double tolerance) {
        result_.name = std::move(name);
        result_.tolerance = tolerance;
    }
    // Records a residual; the check fails once one exceeds `bound`.
    void observe(double residual) { observe(residual, result_.tolerance); }
    void observe(double residual, double bound) {
        if (std::isnan(residual)) residual = INFINITY;
        result_.worst_residual = std::max(result_.worst_residual, residual);
        if (residual > bound) result_.passed = false;
    }
    CheckResult done(std::string note = {}) {
        result_.note = std::move(note);
        return result_;
    }

private:
    CheckResult result_;
};

CheckResult failed(std::string name, double tolerance, const std::exception& e) {
    CheckResult r;
    r.name = std::move(name);
    r.passed = false;
    r.worst_residual = INFINITY;
    r.tolerance = tolerance;
    r.note = e.what();
    return r;
}

template <class Body>
CheckResult guarded(const std::string& name, double tolerance, Body&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return failed(name, tolerance, e);
    }
}

}  // namespace

std::vector<CheckResult> verify_payoff(const PayoffSpec& spec, const VerifyOptions& opts) {
    std::vector<CheckResult> out;
    std::shared_ptr<const ReplicationProfile> pr;
    try {
        pr = std::make_shared<const ReplicationProfile>(spec);
    } catch (const std::exception& e) {
        out.push_back(failed("replication cost finite", 0.0, e));
        return out;
    }
    const Range range = sampling_range(*pr);
    const auto scale = [](double x) { return std::max(1.0, std::abs(x)); };

    out.push_back(guarded("payoff monotone and nonnegative", 0.0, [&] {
        Tracker t("payoff monotone and nonnegative", 0.0);
        Sampler s(range, opts.seed);
        for (int i = 0; i < opts.samples; ++i) {
            double p = s.price(), q = s.price();
            if (p > q) std::swap(p, q);
            const double fp = eval_payoff(spec, p), fq = eval_payoff(spec, q);
            t.observe(fp - fq);
            t.observe(-fp);
        }
        return t.done();
    }));

    out.push_back(guarded("g nonincreasing and nonnegative", 1e-12, [&] {
        Tracker t("g nonincreasing and nonnegative", 1e-12);
        Sampler s(range, opts.seed + 1);
        std::vector<double> ps{pr->alpha()};
        for (int i = 0; i < opts.samples; ++i) ps.push_back(s.price());
        std::sort(ps.begin(), ps.end());
        double prev = INFINITY;
        for (double p : ps) {
            const double g = pr->cost(p);
            if (std::isfinite(prev)) t.observe((g - prev) / scale(prev));
            t.observe(-g);
            prev = g;
        }
        return t.done();
    }));

    out.push_back(guarded("V concave and nondecreasing", 1e-10, [&] {
        Tracker t("V concave and nondecreasing", 1e-10);
        Sampler s(range, opts.seed + 2);
        for (int i = 0; i < opts.samples; ++i) {
            double p = s.price(), q = s.price();
            if (p > q) std::swap(p, q);
            const double vp = pr->value(p), vq = pr->value(q), vm = pr->value(0.5 * (p + q));
            t.observe(((vp + vq) / 2.0 - vm) / scale(vm));
            t.observe((vp - vq) / scale(vq));
        }
        return t.done();
    }));

    out.push_back(guarded("V integral identity", 1e-8, [&] {
        Tracker t("V integral identity", 1e-8);
        Sampler s(range, opts.seed + 3);
        for (int i = 0; i < std::min(opts.samples, 25); ++i) {
            const double p = s.price();
            const double v = pr->value(p);
            t.observe(std::abs(portfolio_value_integral(*pr, p) - v) / scale(v));
        }
        return t.done();
    }));

    const TradingFunction tf(pr);
    out.push_back(guarded("psi matches infimum oracle", 1e-6, [&] {
        Tracker t("psi matches infimum oracle", 1e-6);
        Sampler s(range, opts.seed + 4);
        const double cap = tf.max_risky_reserve();
        for (int i = 0; i < opts.oracle_points && cap > 0.0; ++i) {
            const double r2 = cap * (0.001 + 0.999 * s.unit());
            const double r1 = 2.0 * s.unit() * scale(pr->payoff().value(range.hi));
            const double psi = trading_function_eval(tf, r1, r2);
            t.observe(std::abs(psi - trading_function_infimum(tf, r1, r2)) / scale(psi));
        }
        return t.done(cap > 0.0 ? "" : "g is identically zero; no interior reserves");
    }));

    if (catalog_trading_function(tf, 0.0, 0.5 * tf.max_risky_reserve())) {
        out.push_back(guarded("psi matches catalog closed form", 1e-6, [&] {
            Tracker t("psi matches catalog closed form", 1e-6);
            Sampler s(range, opts.seed + 5);
            const double cap = tf.max_risky_reserve();
            for (int i = 0; i < opts.oracle_points; ++i) {
                const double r2 = cap * (0.001 + 0.999 * s.unit());
                const double r1 = s.unit();
                const double psi = trading_function_eval(tf, r1, r2);
                t.observe(std::abs(psi - *catalog_trading_function(tf, r1, r2)) / scale(psi));
            }
            return t.done();
        }));
    }

    out.push_back(guarded("arbitrage profit and optimality", 1e-10, [&] {
        Tracker t("arbitrage profit and optimality", 1e-10);
        Sampler s(range, opts.seed + 6);
        for (int i = 0; i < opts.samples; ++i) {
            const double p = s.price(), p_ext = s.price(), q = s.price();
            const ArbitrageResult res = arbitrage_to_price(pool_init(pr, p), p_ext);
            t.observe(-res.step.profit);
            const Portfolio at_q = portfolio_at(*pr, q), at_ext = portfolio_at(*pr, p_ext);
            t.observe((at_ext.numeraire + p_ext * at_ext.risky) - (at_q.numeraire + p_ext * at_q.risky));
        }
        return t.done();
    }));

    out.push_back(guarded("earnings identity on GBM paths", 1e-10, [&] {
        Tracker t("earnings identity on GBM paths", 1e-10);
        const double start = std::sqrt(range.lo * range.hi);
        for (int i = 0; i < opts.paths; ++i) {
            GbmParams gp{start, opts.sigma, 1.0, opts.steps, opts.seed + 100 + static_cast<std::uint64_t>(i)};
            const EarningsReport r = run_arbitrage(pr, gbm_path(gp));
            t.observe(std::abs(r.total_w - (r.payoff_term + r.path_term)) / scale(r.total_w));
            t.observe(-r.total_w, 1e-9);
        }
        return t.done();
    }));

    if (const auto* cp = spec.catalog() ? std::get_if<ConstantProportion>(&*spec.catalog()) : nullptr; cp && cp->c > 0) {
        out.push_back(guarded("constant-product invariant", 1e-9, [&] {
            Tracker t("constant-product invariant", 1e-9);
            const double w = cp->w;
            const double level = cp->c * std::pow(w / (1.0 - w), w);
            Sampler s(range, opts.seed + 7);
            PoolState pool = pool_init(pr, s.price());
            for (int i = 0; i < opts.samples; ++i) {
                pool = arbitrage_to_price(pool, s.price()).pool;
                const double k = std::pow(pool.r1(), 1.0 - w) * std::pow(pool.r2(), w);
                t.observe(std::abs(k - level) / level);
            }
            return t.done("r1^(1-w) r2^w = C (w/(1-w))^w");
        }));
    }
    return out;
}

}  // namespace cfmm
