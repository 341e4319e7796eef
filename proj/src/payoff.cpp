#include "cfmm/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfmm/errors.hpp"

namespace cfmm {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr ExtendedPrice kInfinity = ExtendedPrice::infinity();

void require(bool ok, std::string_view family, const std::string& what) {
    if (!ok) throw InvalidParameter(std::string(family) + ": " + what);
}

bool finite(double x) { return std::isfinite(x); }

// Drops empty segments.
std::vector<Segment> tidy(std::vector<Segment> segs) {
    std::erase_if(segs, [](const Segment& s) { return s.hi <= s.lo; });
    return segs;
}

std::vector<Segment> step_segments(double at, double low, double high) {
    return {{0.0, at, form::Constant{low}}, {at, kInfinity, form::Constant{high}}};
}

std::vector<Segment> catalog_segments(const CatalogParams& params) {
    return std::visit(
        overloaded{
            [](const CashOrNothing& c) { return step_segments(c.p0, 0.0, 1.0); },
            [](const CappedCall& c) {
                return tidy({{0.0, c.p0, form::Constant{0.0}},
                             {c.p0, c.p1, form::Affine{1.0, -c.p0}},
                             {c.p1, kInfinity, form::Constant{c.p1 - c.p0}}});
            },
            [](const BlackScholesBinary& b) {
                if (b.sigma == 0.0) return step_segments(b.strike, 0.0, 1.0);
                return std::vector<Segment>{{0.0, kInfinity, form::NormalCdf{b.strike, b.sigma, b.tau}}};
            },
            [](const Logarithmic& l) {
                return std::vector<Segment>{{0.0, l.p0, form::Constant{0.0}},
                                            {l.p0, kInfinity, form::LogRatio{1.0, l.p0, 0.0}}};
            },
            [](const CappedPower& c) {
                const double base = std::pow(c.p0, c.a);
                std::vector<Segment> segs;
                if (c.p0 > 0.0) segs.push_back({0.0, c.p0, form::Constant{0.0}});
                segs.push_back({c.p0, c.p1, form::Power{1.0, c.a, -base}});
                if (c.p1.is_finite())
                    segs.push_back({c.p1.value(), kInfinity, form::Constant{std::pow(c.p1.value(), c.a) - base}});
                return tidy(std::move(segs));
            },
            [](const ConstantProportion& c) {
                if (c.c == 0.0) return std::vector<Segment>{{0.0, kInfinity, form::Constant{0.0}}};
                return std::vector<Segment>{{0.0, kInfinity, form::Power{c.c, c.w, 0.0}}};
            },
        },
        params);
}

}  // namespace

std::string_view catalog_name(const CatalogParams& params) {
    return std::visit(overloaded{
                          [](const CashOrNothing&) { return std::string_view("cash_or_nothing"); },
                          [](const CappedCall&) { return std::string_view("capped_call"); },
                          [](const BlackScholesBinary&) { return std::string_view("black_scholes_binary"); },
                          [](const Logarithmic&) { return std::string_view("logarithmic"); },
                          [](const CappedPower&) { return std::string_view("capped_power"); },
                          [](const ConstantProportion&) { return std::string_view("constant_proportion"); },
                      },
                      params);
}

void validate_catalog_params(const CatalogParams& params) {
    const auto name = catalog_name(params);
    std::visit(overloaded{
                   [&](const CashOrNothing& c) { require(finite(c.p0) && c.p0 > 0.0, name, "need p0 > 0"); },
                   [&](const CappedCall& c) {
                       require(finite(c.p0) && c.p0 > 0.0, name, "need p0 > 0");
                       require(finite(c.p1) && c.p1 >= c.p0, name, "need finite p1 >= p0");
                   },
                   [&](const BlackScholesBinary& b) {
                       require(finite(b.strike) && b.strike > 0.0, name, "need K > 0");
                       require(finite(b.sigma) && b.sigma >= 0.0, name, "need sigma >= 0");
                       require(finite(b.tau) && b.tau > 0.0, name, "need tau > 0");
                   },
                   [&](const Logarithmic& l) { require(finite(l.p0) && l.p0 > 0.0, name, "need p0 > 0"); },
                   [&](const CappedPower& c) {
                       require(finite(c.p0) && c.p0 >= 0.0, name, "need p0 >= 0");
                       require(c.p1.is_infinite() || (finite(c.p1.value()) && c.p1.value() >= c.p0), name,
                               "need p1 >= p0");
                       require(finite(c.a) && c.a > 0.0, name, "need exponent a > 0");
                   },
                   [&](const ConstantProportion& c) {
                       require(finite(c.w) && c.w > 0.0 && c.w < 1.0, name, "need 0 < w < 1");
                       require(finite(c.c) && c.c >= 0.0, name, "need C >= 0");
                   },
               },
               params);
}

PriceInterval default_interval(const CatalogParams& params) {
    return std::visit(overloaded{
                          [](const CappedCall& c) { return PriceInterval(c.p0, c.p1); },
                          [](const CappedPower& c) {
                              if (c.p0 > 0.0 || c.a > 1.0) return PriceInterval(c.p0, c.p1);
                              const double scale = c.p1.is_finite() ? std::min(1.0, c.p1.value()) : 1.0;
                              return PriceInterval(0.01 * scale, c.p1);
                          },
                          [](const ConstantProportion&) { return PriceInterval(0.01, kInfinity); },
                          [](const auto&) { return PriceInterval(0.0, kInfinity); },
                      },
                      params);
}

PayoffSpec::PayoffSpec(std::vector<Segment> segments, PriceInterval interval, std::optional<CatalogParams> catalog,
                       std::optional<PiecewiseTable> table)
    : segments_(std::move(segments)), interval_(interval), catalog_(std::move(catalog)), table_(std::move(table)) {
    for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
        const double b = segments_[k].hi.value();
        breakpoints_.push_back(b);
        const double left = form_value(segments_[k].form, b);
        const double right = form_value(segments_[k + 1].form, b);
        const double size = right - left;
        const double noise = 1e-14 * std::max(1.0, std::abs(left));
        if (size < -noise)
            throw MonotonicityError("payoff decreases across the breakpoint at p = " + format_number(b));
        if (size > noise) jumps_.push_back({b, size});
    }
}

PayoffSpec PayoffSpec::from_catalog(const CatalogParams& params, std::optional<PriceInterval> interval) {
    validate_catalog_params(params);
    return PayoffSpec(catalog_segments(params), interval.value_or(default_interval(params)), params, std::nullopt);
}

PayoffSpec PayoffSpec::from_table(PiecewiseTable table, std::optional<PriceInterval> interval) {
    const auto& pts = table.points;
    if (pts.size() < 2) throw InvalidParameter("piecewise: need at least two points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto [p, v] = pts[i];
        if (!finite(p) || p < 0.0) throw InvalidParameter("piecewise: point prices must be finite and >= 0");
        if (!finite(v)) throw InvalidParameter("piecewise: point values must be finite");
        if (v < 0.0)
            throw NegativePayoffError("piecewise: negative payoff " + format_number(v) + " at p = " + format_number(p));
        if (i > 0) {
            if (p <= pts[i - 1].first) throw InvalidParameter("piecewise: point prices must be strictly increasing");
            if (v < pts[i - 1].second)
                throw MonotonicityError("piecewise: payoff decreases from " + format_number(pts[i - 1].second) +
                                        " to " + format_number(v) + " between p = " + format_number(pts[i - 1].first) +
                                        " and p = " + format_number(p));
        }
    }
    const double first = pts.front().first;
    const double last = pts.back().first;
    for (const auto& j : table.jumps) {
        if (!finite(j.price) || j.price < first || j.price >= last || j.price <= 0.0)
            throw InvalidParameter("piecewise: jump at p = " + format_number(j.price) +
                                   " must lie in [first point, last point) and be > 0");
        if (!finite(j.size) || j.size < 0.0)
            throw MonotonicityError("piecewise: jump size at p = " + format_number(j.price) + " must be >= 0");
    }

    std::vector<double> knots;
    for (const auto& pt : pts) knots.push_back(pt.first);
    for (const auto& j : table.jumps) knots.push_back(j.price);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    auto interp = [&](double p) {
        auto it = std::lower_bound(pts.begin(), pts.end(), p, [](const auto& pt, double x) { return pt.first < x; });
        if (it->first == p) return it->second;
        const auto& [p1, v1] = *it;
        const auto& [p0, v0] = *(it - 1);
        return v0 + (v1 - v0) * (p - p0) / (p1 - p0);
    };
    auto jumps_through = [&](double p) {
        double total = 0.0;
        for (const auto& j : table.jumps)
            if (j.price <= p) total += j.size;
        return total;
    };

    std::vector<Segment> segs;
    if (knots.front() > 0.0) segs.push_back({0.0, knots.front(), form::Constant{pts.front().second}});
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double a = knots[k], b = knots[k + 1];
        const double va = interp(a), vb = interp(b);
        const double base = va + jumps_through(a);
        if (vb == va) {
            segs.push_back({a, b, form::Constant{base}});
        } else {
            const double slope = (vb - va) / (b - a);
            segs.push_back({a, b, form::Affine{slope, base - slope * a}});
        }
    }
    segs.push_back({knots.back(), kInfinity, form::Constant{pts.back().second + jumps_through(last)}});

    const PriceInterval iv = interval.value_or(PriceInterval(first, last));
    return PayoffSpec(std::move(segs), iv, std::nullopt, std::move(table));
}

PayoffSpec PayoffSpec::with_interval(const PriceInterval& interval) const {
    PayoffSpec copy = *this;
    copy.interval_ = interval;
    return copy;
}

std::size_t PayoffSpec::segment_index(double p) const {
    auto it = std::partition_point(segments_.begin(), segments_.end(), [p](const Segment& s) { return s.hi < p; });
    return static_cast<std::size_t>(it - segments_.begin());
}

bool PayoffSpec::is_breakpoint(double p) const {
    return std::binary_search(breakpoints_.begin(), breakpoints_.end(), p);
}

double PayoffSpec::value(double p) const {
    if (!(p >= 0.0)) throw DomainError("payoff evaluated at negative price " + format_number(p));
    return form_value(segments_[segment_index(p)].form, p);
}

double PayoffSpec::slope(double p, Side side) const {
    if (!(p >= 0.0)) throw DomainError("payoff derivative at negative price " + format_number(p));
    std::size_t k = segment_index(p);
    if (side == Side::Right && k + 1 < segments_.size() && segments_[k].hi.value() == p) ++k;
    return form_slope(segments_[k].form, p);
}

std::optional<double> PayoffSpec::supremum() const {
    const SegmentForm& tail = segments_.back().form;
    if (const auto* c = std::get_if<form::Constant>(&tail)) return c->value;
    if (std::holds_alternative<form::NormalCdf>(tail)) return 1.0;
    if (const auto* a = std::get_if<form::Affine>(&tail); a && a->slope == 0.0) return a->offset;
    return std::nullopt;
}

std::optional<double> PayoffSpec::constant_beyond() const {
    if (std::holds_alternative<form::Constant>(segments_.back().form)) return segments_.back().lo;
    return std::nullopt;
}

std::optional<double> PayoffSpec::asymptotic_exponent() const {
    if (!catalog_) return std::nullopt;
    return std::visit(overloaded{
                          [](const CappedPower& c) { return c.p1.is_finite() ? 0.0 : c.a; },
                          [](const ConstantProportion& c) { return c.c == 0.0 ? 0.0 : c.w; },
                          [](const auto&) { return 0.0; },
                      },
                      *catalog_);
}

PayoffSpec make_catalog_payoff(const CatalogParams& params, std::optional<PriceInterval> interval) {
    PayoffSpec spec = PayoffSpec::from_catalog(params, interval);
    const auto name = std::string(catalog_name(params));
    const PriceInterval& iv = spec.interval();
    if (iv.beta().is_infinite() && spec.asymptotic_exponent().value_or(0.0) >= 1.0)
        throw InfiniteReplicationCost(name +
                                      ": payoff grows at least linearly on an unbounded interval, so the risky "
                                      "reserve diverges (a finite reserve needs f(p) = o(p)); use a finite p1 or beta");
    if (iv.alpha() == 0.0) {
        const bool diverges_at_zero = std::visit(overloaded{
                                                     [](const ConstantProportion& c) { return c.c > 0.0; },
                                                     [](const CappedPower& c) { return c.p0 == 0.0 && c.a <= 1.0; },
                                                     [](const auto&) { return false; },
                                                 },
                                                 params);
        if (diverges_at_zero)
            throw InfiniteReplicationCost(name + ": replication cost at alpha = 0 is infinite; choose alpha > 0");
    }
    return spec;
}

double eval_payoff(const PayoffSpec& spec, double p) {
    if (!spec.interval().contains(p))
        throw DomainError("price " + format_number(p) + " outside [" + format_number(spec.interval().alpha()) + ", " +
                          spec.interval().beta().to_string() + "]");
    return spec.value(p);
}

double eval_payoff_derivative(const PayoffSpec& spec, double p) {
    if (!spec.interval().contains(p))
        throw DomainError("price " + format_number(p) + " outside [" + format_number(spec.interval().alpha()) + ", " +
                          spec.interval().beta().to_string() + "]");
    if (spec.is_breakpoint(p))
        throw BreakpointError("payoff is not differentiable at breakpoint p = " + format_number(p));
    return spec.slope(p, Side::Left);
}

std::vector<double> payoff_breakpoints(const PayoffSpec& spec) { return spec.breakpoints(); }

}  // namespace cfmm
