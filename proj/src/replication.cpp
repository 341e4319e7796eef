#include "cfmm/replication.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfmm/errors.hpp"

namespace cfmm {
namespace {

constexpr int kGridPoints = 129;
constexpr int kMaxBisections = 400;
constexpr double kInverseRelTol = 1e-12;

ExtendedPrice min_price(const ExtendedPrice& a, const ExtendedPrice& b) {
    if (a.is_infinite()) return b;
    if (b.is_infinite()) return a;
    return std::min(a.value(), b.value());
}

std::string interval_text(const PriceInterval& iv) {
    return "[" + format_number(iv.alpha()) + ", " + iv.beta().to_string() + "]";
}

// int_a^top f'(q)/q dq over one segment by adaptive quadrature.
QuadratureResult segment_cost_quadrature(const SegmentForm& form, double a, const ExtendedPrice& top,
                                         const QuadratureOptions& opts) {
    if (std::holds_alternative<form::Constant>(form)) return {};
    const Integrand integrand = [&form](double q) { return form_slope(form, q) / q; };
    if (top.is_infinite()) {
        if (a > 0.0) return integrate_to_infinity(integrand, a, opts);
        QuadratureResult r = integrate_from_zero(integrand, 1.0, opts);
        r += integrate_to_infinity(integrand, 1.0, opts);
        return r;
    }
    if (a == 0.0) return integrate_from_zero(integrand, top.value(), opts);
    return integrate_log_panels(integrand, a, top.value(), opts);
}

// Cost of the payoff truncated to [p, top), by quadrature.
double truncated_cost_quadrature(const PayoffSpec& spec, double p, const ExtendedPrice& top, Side side,
                                 const QuadratureOptions& opts) {
    double total = 0.0;
    for (const Segment& seg : spec.segments()) {
        const double a = std::max(seg.lo, p);
        const ExtendedPrice b = min_price(seg.hi, top);
        if (!(b > a)) continue;
        total += segment_cost_quadrature(seg.form, a, b, opts).value;
    }
    for (const Jump& j : spec.jumps()) {
        const bool above = side == Side::Left ? j.price >= p : j.price > p;
        if (above && top > j.price) total += j.size / j.price;
    }
    return total;
}

}  // namespace

ReplicationProfile::ReplicationProfile(PayoffSpec payoff, CostEvaluation mode, QuadratureOptions options)
    : payoff_(std::move(payoff)), mode_(mode), options_(options) {
    options_.validate();
    g_alpha_ = cost_analytic(alpha());
    if (!std::isfinite(g_alpha_)) {
        const bool tail = beta().is_infinite() && payoff_.asymptotic_exponent().value_or(0.0) >= 1.0;
        throw InfiniteReplicationCost(
            tail ? "replication cost diverges on " + interval_text(interval()) +
                       ": the payoff must grow sublinearly (f(p) = o(p)) for a finite risky reserve"
                 : "replication cost at alpha = " + format_number(alpha()) + " is infinite; raise alpha");
    }
    if (mode_ == CostEvaluation::Quadrature) g_alpha_ = cost_quadrature(alpha());

    // Tabulate g on a log grid for bracketing in numeric inversion.
    const double a = alpha();
    double hi = 0.0;
    if (beta().is_finite()) {
        hi = beta().value();
    } else {
        hi = 10.0 * std::max(a, 1.0);
        for (double b : payoff_.breakpoints()) hi = std::max(hi, 10.0 * b);
    }
    const double lo = a > 0.0 ? a : std::min(1e-8, 1e-8 * hi);
    if (a == 0.0) {
        grid_p_.push_back(0.0);
        grid_g_.push_back(g_alpha_);
    }
    if (hi > lo) {
        const double step = std::log(hi / lo) / (kGridPoints - 1);
        for (int i = 0; i < kGridPoints; ++i) {
            const double p = i + 1 == kGridPoints ? hi : lo * std::exp(step * i);
            grid_p_.push_back(p);
            grid_g_.push_back(p == a ? g_alpha_ : cost(p));
        }
    } else {
        grid_p_.push_back(hi);
        grid_g_.push_back(cost(hi));
    }
}

void ReplicationProfile::require_in_interval(double p) const {
    if (!interval().contains(p))
        throw DomainError("price " + format_number(p) + " outside " + interval_text(interval()));
}

double ReplicationProfile::jump_mass(double p, Side side) const {
    double total = 0.0;
    for (const Jump& j : payoff_.jumps()) {
        const bool above = side == Side::Left ? j.price >= p : j.price > p;
        if (above && beta() > j.price) total += j.size / j.price;
    }
    return total;
}

double ReplicationProfile::cost(double p, Side side) const {
    return mode_ == CostEvaluation::Analytic ? cost_analytic(p, side) : cost_quadrature(p, side);
}

double ReplicationProfile::cost_analytic(double p, Side side) const {
    require_in_interval(p);
    double total = 0.0;
    for (const Segment& seg : payoff_.segments()) {
        const double a = std::max(seg.lo, p);
        const ExtendedPrice b = min_price(seg.hi, beta());
        if (!(b > a)) continue;
        total += form_cost(seg.form, a, b);
    }
    return total + jump_mass(p, side);
}

double ReplicationProfile::cost_quadrature(double p, Side side) const { return cost_quadrature(p, side, options_); }

double ReplicationProfile::cost_quadrature(double p, Side side, const QuadratureOptions& opts) const {
    require_in_interval(p);
    return truncated_cost_quadrature(payoff_, p, beta(), side, opts);
}

double ReplicationProfile::value(double p) const {
    const double g = cost(p);
    return payoff_.value(p) + (g == 0.0 ? 0.0 : p * g);
}

std::optional<double> ReplicationProfile::value_at_infinity() const { return payoff_.supremum(); }

ExtendedPrice ReplicationProfile::inverse_edge_cases(double r2, bool& done) const {
    done = true;
    if (!(r2 >= 0.0)) throw InvalidParameter("g_inverse needs r2 >= 0, got " + format_number(r2));
    if (r2 > g_alpha_) return alpha();
    if (r2 == 0.0) return beta();
    done = false;
    return alpha();
}

ExtendedPrice ReplicationProfile::inverse_cost(double r2) const {
    return mode_ == CostEvaluation::Analytic ? inverse_cost_analytic(r2) : inverse_cost_numeric(r2);
}

ExtendedPrice ReplicationProfile::inverse_cost_analytic(double r2) const {
    bool done = false;
    const ExtendedPrice edge = inverse_edge_cases(r2, done);
    if (done) return edge;

    // Walk down from beta accumulating g until it reaches r2.
    const auto& segs = payoff_.segments();
    const double a = alpha();
    double cum = 0.0;
    for (std::size_t k = segs.size(); k-- > 0;) {
        const Segment& seg = segs[k];
        if (!(beta() > seg.lo)) continue;
        const ExtendedPrice top = min_price(seg.hi, beta());
        if (top.is_finite() && top.value() < a) break;
        if (top.is_finite() && beta() > top.value()) {
            const double t = top.value();
            for (const Jump& j : payoff_.jumps())
                if (j.price == t) cum += j.size / t;
            if (cum >= r2) return t;
        }
        const double bottom = std::max(seg.lo, a);
        if (!(top > bottom)) continue;
        const double c = form_cost(seg.form, bottom, top);
        if (cum + c >= r2 && form_is_increasing(seg.form)) {
            const double p = form_cost_inverse(seg.form, top, r2 - cum);
            return top.is_finite() ? std::clamp(p, bottom, top.value()) : std::max(p, bottom);
        }
        cum += c;
        if (bottom <= a) break;
    }
    return a;
}

ExtendedPrice ReplicationProfile::inverse_cost_numeric(double r2) const {
    bool done = false;
    const ExtendedPrice edge = inverse_edge_cases(r2, done);
    if (done) return edge;

    // Bracket: g(lo) >= r2 > g(hi).
    const auto it = std::find_if(grid_g_.begin(), grid_g_.end(), [r2](double g) { return g < r2; });
    double lo = 0.0;
    double hi = 0.0;
    if (it == grid_g_.end()) {
        if (beta().is_finite()) return beta();
        lo = grid_p_.back();
        hi = 2.0 * lo;
        while (cost(hi) >= r2) {
            lo = hi;
            hi *= 2.0;
            if (!std::isfinite(hi)) return ExtendedPrice::infinity();
        }
    } else {
        const auto i = static_cast<std::size_t>(it - grid_g_.begin());
        if (i == 0) return alpha();
        lo = grid_p_[i - 1];
        hi = grid_p_[i];
    }

    for (int n = 0; n < kMaxBisections && hi - lo > kInverseRelTol * hi; ++n) {
        const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (cost(mid) >= r2)
            lo = mid;
        else
            hi = mid;
    }
    // A jump inside the final bracket is where the sup actually sits.
    const auto& bps = payoff_.breakpoints();
    for (auto b = std::upper_bound(bps.begin(), bps.end(), hi); b != bps.begin();) {
        --b;
        if (*b <= lo) break;
        if (interval().contains(*b) && cost(*b) >= r2) return *b;
    }
    return lo;
}

double replication_cost(const ReplicationProfile& profile, double p, const QuadratureOptions& opts) {
    if (profile.mode() == CostEvaluation::Analytic) return profile.cost_analytic(p);
    return profile.cost_quadrature(p, Side::Left, opts);
}

Portfolio portfolio_at(const ReplicationProfile& profile, double p) {
    const double g = profile.cost(p);
    return {profile.payoff().value(p), g};
}

double portfolio_value(const ReplicationProfile& profile, double p) { return profile.value(p); }

double portfolio_value_integral(const ReplicationProfile& profile, double p, const QuadratureOptions& opts) {
    opts.validate();
    const double a = profile.alpha();
    if (!profile.interval().contains(p))
        throw DomainError("price " + format_number(p) + " outside " + interval_text(profile.interval()));

    std::vector<double> cuts{a};
    for (double b : profile.payoff().breakpoints())
        if (b > a && b < p) cuts.push_back(b);
    cuts.push_back(p);

    double total = profile.value(a);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k];
        const double hi = cuts[k + 1];
        if (!(hi > lo)) continue;
        // g is left-continuous, so the piece starts from the right limit at lo.
        const double g_lo = profile.cost(lo, Side::Right);
        const Integrand g = [&](double q) {
            q = std::clamp(q, lo, hi);
            return q <= lo ? g_lo : profile.cost(q);
        };
        total += (lo == 0.0 ? integrate_from_zero(g, hi, opts) : integrate_log_panels(g, lo, hi, opts)).value;
    }
    return total;
}

ExtendedPrice g_inverse(const ReplicationProfile& profile, double r2) { return profile.inverse_cost(r2); }

const char* growth_name(Growth g) {
    switch (g) {
        case Growth::Finite: return "Finite";
        case Growth::Infinite: return "Infinite";
        case Growth::Unknown: return "Unknown";
    }
    return "Unknown";
}

GrowthAnalysis growth_classification(const PayoffSpec& spec, const PriceInterval& interval,
                                     const QuadratureOptions& opts) {
    opts.validate();
    GrowthAnalysis out;
    out.asymptotic_exponent = spec.asymptotic_exponent();
    if (interval.beta().is_finite()) {
        out.classification = Growth::Finite;
        return out;
    }

    const double p_ref = std::max(interval.alpha(), 1.0);
    const double scale = p_ref >= 100.0 ? p_ref : 1.0;
    for (double c : {1e2, 1e3, 1e4, 1e5}) {
        const double cutoff = c * scale;
        out.evidence.push_back({cutoff, truncated_cost_quadrature(spec, p_ref, cutoff, Side::Left, opts)});
    }

    if (out.asymptotic_exponent) {
        out.classification = *out.asymptotic_exponent < 1.0 ? Growth::Finite : Growth::Infinite;
        return out;
    }

    std::vector<double> inc;
    for (std::size_t k = 1; k < out.evidence.size(); ++k)
        inc.push_back(out.evidence[k].g_at_probe - out.evidence[k - 1].g_at_probe);
    if (inc.back() <= opts.abs_tol) {
        out.classification = Growth::Finite;
        return out;
    }
    bool unbounded = true;
    for (std::size_t k = 0; k < inc.size(); ++k) {
        if (!(inc[k] > opts.abs_tol)) unbounded = false;
        if (k > 0 && inc[k] < 0.9 * inc[k - 1]) unbounded = false;
    }
    out.classification = unbounded ? Growth::Infinite : Growth::Unknown;
    return out;
}

}  // namespace cfmm
