#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cfmm/forms.hpp"
#include "cfmm/price.hpp"

namespace cfmm {

enum class Side { Left, Right };

/// f restricted to (lo, hi]; the first segment of a payoff also contains lo.
struct Segment {
    double lo;
    ExtendedPrice hi;
    SegmentForm form;
};

/// f jumps up by `size` just after `price` (f itself takes the lower value).
struct Jump {
    double price;
    double size;
};

// Catalog families.

struct CashOrNothing {
    double p0;
};

struct CappedCall {
    double p0;
    double p1;
};

struct BlackScholesBinary {
    double strike;
    double sigma;
    double tau;
};

struct Logarithmic {
    double p0;
};

/// p^a - p0^a on [p0, p1], constant beyond p1.
struct CappedPower {
    double p0;
    ExtendedPrice p1;
    double a;
};

/// C p^w.
struct ConstantProportion {
    double w;
    double c;
};

using CatalogParams =
    std::variant<CashOrNothing, CappedCall, BlackScholesBinary, Logarithmic, CappedPower, ConstantProportion>;

std::string_view catalog_name(const CatalogParams& params);

/// Throws InvalidParameter naming the violated constraint.
void validate_catalog_params(const CatalogParams& params);

/// Interval used when none is given: the family's active region, moved off
/// zero where the replication cost at zero is infinite.
PriceInterval default_interval(const CatalogParams& params);

/// Monotone piecewise-linear table with optional upward jumps.
///
/// f(p) = linear interpolation of `points` (constant outside them) plus the
/// sum of jump sizes at locations strictly below p.
struct PiecewiseTable {
    std::vector<std::pair<double, double>> points;
    std::vector<Jump> jumps;
};

/// Immutable monotone payoff on a price interval.
class PayoffSpec {
public:
    /// Validates the table: at least two points, strictly increasing prices,
    /// nondecreasing nonnegative values, jumps >= 0 inside [first, last).
    static PayoffSpec from_table(PiecewiseTable table, std::optional<PriceInterval> interval = std::nullopt);

    /// Catalog payoff without the finite-replication-cost check (see make_catalog_payoff).
    static PayoffSpec from_catalog(const CatalogParams& params, std::optional<PriceInterval> interval = std::nullopt);

    const PriceInterval& interval() const noexcept { return interval_; }
    PayoffSpec with_interval(const PriceInterval& interval) const;

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<Jump>& jumps() const noexcept { return jumps_; }
    const std::optional<CatalogParams>& catalog() const noexcept { return catalog_; }
    const std::optional<PiecewiseTable>& table() const noexcept { return table_; }

    /// f(p) for any p >= 0, ignoring the interval.
    double value(double p) const;
    /// One-sided derivative; the side only matters at breakpoints.
    double slope(double p, Side side) const;
    /// Index of the segment whose (lo, hi] contains p.
    std::size_t segment_index(double p) const;
    bool is_breakpoint(double p) const;

    /// lim f(p) as p -> infinity, or nullopt when f is unbounded.
    std::optional<double> supremum() const;
    /// Price beyond which f is constant, if any.
    std::optional<double> constant_beyond() const;
    /// Growth exponent e with f ~ p^e at infinity (catalog payoffs only).
    std::optional<double> asymptotic_exponent() const;

private:
    PayoffSpec(std::vector<Segment> segments, PriceInterval interval, std::optional<CatalogParams> catalog,
               std::optional<PiecewiseTable> table);

    std::vector<Segment> segments_;
    std::vector<double> breakpoints_;
    std::vector<Jump> jumps_;
    PriceInterval interval_;
    std::optional<CatalogParams> catalog_;
    std::optional<PiecewiseTable> table_;
};

/// Catalog payoff with the interval checked for finite replication cost.
/// Throws InvalidParameter or InfiniteReplicationCost.
PayoffSpec make_catalog_payoff(const CatalogParams& params, std::optional<PriceInterval> interval = std::nullopt);

/// f(p); throws DomainError outside the interval.
double eval_payoff(const PayoffSpec& spec, double p);

/// f'(p); throws DomainError outside the interval and BreakpointError at kinks/jumps.
double eval_payoff_derivative(const PayoffSpec& spec, double p);

/// Sorted, deduplicated kink and jump locations.
std::vector<double> payoff_breakpoints(const PayoffSpec& spec);

}  // namespace cfmm
