#include "cfmm/cfmm.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cfmm/errors.hpp"
#include "cfmm/normal.hpp"

namespace cfmm {
namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr int kMaxDoublings = 2000;

void check_reserves(const TradingFunction& tf, double r1, double r2) {
    if (!(r1 >= 0.0) || !(r2 >= 0.0) || !std::isfinite(r1) || !std::isfinite(r2))
        throw InvalidReserves("reserves must be finite and >= 0, got (" + format_number(r1) + ", " +
                              format_number(r2) + ")");
    const double cap = tf.max_risky_reserve();
    if (r2 > cap * (1.0 + 1e-12))
        throw InvalidReserves("risky reserve " + format_number(r2) + " exceeds g(alpha) = " + format_number(cap));
}

// r1 + p r2 - V(p), arranged to avoid cancellation near the liquidity curve.
double objective(const ReplicationProfile& pr, double r1, double r2, double p) {
    const double g = pr.cost(p);
    const double gap = r2 - g;
    return r1 - pr.payoff().value(p) + (gap == 0.0 ? 0.0 : p * gap);
}

double unbounded_level(const ReplicationProfile& pr, double r1) {
    const auto v_inf = pr.value_at_infinity();
    if (!v_inf)
        throw UnboundedBelow("psi is -infinity at r2 = 0: V(p) grows without bound as p -> infinity");
    return r1 - *v_inf;
}

}  // namespace

TradingFunction::TradingFunction(std::shared_ptr<const ReplicationProfile> profile) : profile_(std::move(profile)) {
    if (!profile_) throw InvalidParameter("TradingFunction needs a profile");
}

TradingFunction::TradingFunction(ReplicationProfile profile)
    : profile_(std::make_shared<const ReplicationProfile>(std::move(profile))) {}

double trading_function_eval(const TradingFunction& tf, double r1, double r2) {
    check_reserves(tf, r1, r2);
    const ReplicationProfile& pr = tf.profile();
    const ExtendedPrice x = pr.inverse_cost(std::min(r2, tf.max_risky_reserve()));
    if (x.is_infinite()) return unbounded_level(pr, r1);
    return objective(pr, r1, r2, x.value());
}

double trading_function_infimum(const TradingFunction& tf, double r1, double r2, int grid_points) {
    if (grid_points < 16) throw InvalidParameter("infimum grid needs at least 16 points");
    if (!(r1 >= 0.0) || !(r2 >= 0.0))
        throw InvalidReserves("reserves must be >= 0, got (" + format_number(r1) + ", " + format_number(r2) + ")");
    const ReplicationProfile& pr = tf.profile();
    const double alpha = pr.alpha();
    const auto h = [&](double p) { return objective(pr, r1, r2, p); };

    // Upper truncation: past the first price where g < r2 the objective increases.
    double hi = 0.0;
    if (pr.beta().is_finite()) {
        hi = pr.beta().value();
    } else {
        if (r2 == 0.0) return unbounded_level(pr, r1);
        hi = std::max(1.0, 2.0 * alpha);
        for (double b : pr.payoff().breakpoints()) hi = std::max(hi, b);
        for (int n = 0; n < kMaxDoublings && pr.cost(hi) >= r2; ++n) hi *= 2.0;
    }
    // Lower end: below a price where g >= r2 the objective does not increase.
    double lo = alpha;
    if (alpha == 0.0) {
        lo = hi;
        for (int n = 0; n < kMaxDoublings && lo > 1e-300 && pr.cost(lo) < r2; ++n) lo *= 0.5;
    }

    std::vector<double> xs;
    const int n = grid_points;
    if (hi > lo && lo > 0.0) {
        const double step = std::log(hi / lo) / (n - 1);
        for (int i = 0; i < n; ++i) xs.push_back(i + 1 == n ? hi : lo * std::exp(step * i));
    } else {
        xs.push_back(hi);
    }
    std::vector<double> hs;
    hs.reserve(xs.size());
    for (double x : xs) hs.push_back(h(x));
    const auto best = static_cast<std::size_t>(std::min_element(hs.begin(), hs.end()) - hs.begin());
    double result = hs[best];

    result = std::min(result, h(alpha));
    if (pr.beta().is_finite()) result = std::min(result, h(pr.beta().value()));
    for (double b : pr.payoff().breakpoints())
        if (pr.interval().contains(b)) result = std::min(result, h(b));

    if (xs.size() > 2) {
        // Golden-section search in log price; the objective is convex in p.
        double a = std::log(xs[best == 0 ? 0 : best - 1]);
        double b = std::log(xs[std::min(best + 1, xs.size() - 1)]);
        double c = b - kGolden * (b - a);
        double d = a + kGolden * (b - a);
        double hc = h(std::exp(c));
        double hd = h(std::exp(d));
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
            if (hc <= hd) {
                b = d;
                d = c;
                hd = hc;
                c = b - kGolden * (b - a);
                hc = h(pr.interval().clamp(std::exp(c)));
            } else {
                a = c;
                c = d;
                hc = hd;
                d = a + kGolden * (b - a);
                hd = h(pr.interval().clamp(std::exp(d)));
            }
        }
        result = std::min({result, hc, hd});
    }
    return result;
}

std::optional<double> catalog_trading_function(const TradingFunction& tf, double r1, double r2) {
    const ReplicationProfile& pr = tf.profile();
    const auto& catalog = pr.payoff().catalog();
    if (!catalog) return std::nullopt;
    if (pr.beta().is_finite()) {
        const auto flat = pr.payoff().constant_beyond();
        if (!flat) return std::nullopt;
        const double beta = pr.beta().value();
        const bool jump_at_flat = pr.payoff().is_breakpoint(*flat) &&
                                  std::any_of(pr.payoff().jumps().begin(), pr.payoff().jumps().end(),
                                              [&](const Jump& j) { return j.price == *flat; });
        if (beta < *flat || (beta == *flat && jump_at_flat)) return std::nullopt;
    }
    check_reserves(tf, r1, r2);

    if (const auto* c = std::get_if<CashOrNothing>(&*catalog)) return r1 + c->p0 * r2 - 1.0;
    if (const auto* c = std::get_if<CappedCall>(&*catalog)) return r1 + c->p0 - c->p1 * std::exp(-r2);
    if (const auto* b = std::get_if<BlackScholesBinary>(&*catalog)) {
        const double u = std::clamp(1.0 - b->strike * r2, 0.0, 1.0);
        return r1 - normal_cdf(normal_quantile(u) - b->sigma * std::sqrt(b->tau));
    }
    if (const auto* l = std::get_if<Logarithmic>(&*catalog)) {
        if (r2 == 0.0) throw UnboundedBelow("psi is -infinity at r2 = 0 for the logarithmic payoff");
        return r1 + std::log(l->p0 * r2);
    }
    if (const auto* c = std::get_if<CappedPower>(&*catalog)) {
        const double a = c->a;
        const double base = std::pow(c->p0, a);
        if (a == 1.0) return r1 + base - c->p1.value() * std::exp(-r2);
        const double top = c->p1.is_finite() ? std::pow(c->p1.value(), a - 1.0) : 0.0;
        const double inner = top + (1.0 - a) / a * r2;
        if (inner == 0.0) {
            if (a < 1.0) throw UnboundedBelow("psi is -infinity at r2 = 0 for an unbounded power payoff");
            return r1 + base;
        }
        return r1 + base - std::pow(inner, a / (a - 1.0));
    }
    if (const auto* c = std::get_if<ConstantProportion>(&*catalog)) {
        if (c->c == 0.0) return r1;
        if (r2 == 0.0) throw UnboundedBelow("psi is -infinity at r2 = 0 for the constant-proportion payoff");
        const double w = c->w;
        return r1 - c->c * std::pow(r2 * (1.0 - w) / (c->c * w), -w / (1.0 - w));
    }
    return std::nullopt;
}

PoolState::PoolState(std::shared_ptr<const ReplicationProfile> profile, double r1, double r2,
                     std::optional<double> price)
    : profile_(std::move(profile)), r1_(r1), r2_(r2), level_(0.0), price_(price) {
    if (!profile_) throw InvalidParameter("PoolState needs a profile");
    level_ = trading_function_eval(TradingFunction(profile_), r1_, r2_);
}

PoolState pool_init(std::shared_ptr<const ReplicationProfile> profile, double p) {
    if (!profile) throw InvalidParameter("pool_init needs a profile");
    const Portfolio pf = portfolio_at(*profile, p);
    if (!std::isfinite(pf.risky))
        throw InfiniteReplicationCost("replication cost at p = " + format_number(p) + " is infinite");
    return PoolState(std::move(profile), pf.numeraire, pf.risky, p);
}

TradeDecision validate_trade(const PoolState& pool, double d1, double d2) {
    const double r1 = pool.r1() + d1;
    const double r2 = pool.r2() + d2;
    const TradingFunction tf(pool.profile_ptr());
    const double after = trading_function_eval(tf, r1, r2);
    const double before = pool.invariant_level();
    const double tol = 1e-12 * std::max(1.0, std::abs(before));
    return {after >= before - tol, before, after};
}

ArbitrageResult arbitrage_to_price(const PoolState& pool, double p_ext) {
    const ReplicationProfile& pr = pool.profile();
    if (!pr.interval().contains(p_ext))
        throw DomainError("external price " + format_number(p_ext) + " outside [" + format_number(pr.alpha()) +
                          ", " + pr.beta().to_string() + "]; clamp it first");
    const double from = pool.price() ? *pool.price() : spot_price(pool).finite().value_or(p_ext);
    const Portfolio target = portfolio_at(pr, p_ext);
    const double risky_sold = pool.r2() - target.risky;
    const double profit = (risky_sold == 0.0 ? 0.0 : p_ext * risky_sold) + (pool.r1() - target.numeraire);
    PoolState next(pool.profile_ptr(), target.numeraire, target.risky, p_ext);
    return {std::move(next), {profit, from, p_ext}};
}

ExtendedPrice spot_price(const PoolState& pool) { return pool.profile().inverse_cost(pool.r2()); }

}  // namespace cfmm
