#pragma once

// Closed-form shapes a payoff takes between two breakpoints, together with
// the analytic risky-reserve integral  int_a^b f'(q)/q dq  and its inverse.

#include <variant>

#include "cfmm/price.hpp"

namespace cfmm {
namespace form {

struct Constant {
    double value;
};

/// offset + slope * p
struct Affine {
    double slope;
    double offset;
};

/// offset + coefficient * p^exponent
struct Power {
    double coefficient;
    double exponent;
    double offset;
};

/// offset + scale * log(p / reference)
struct LogRatio {
    double scale;
    double reference;
    double offset;
};

/// Phi(d(p)),  d(p) = (log(p/K) - sigma^2 tau / 2) / (sigma sqrt(tau)),  sigma > 0.
struct NormalCdf {
    double strike;
    double sigma;
    double tau;
};

}  // namespace form

using SegmentForm = std::variant<form::Constant, form::Affine, form::Power, form::LogRatio, form::NormalCdf>;

double form_value(const SegmentForm& f, double p);
double form_slope(const SegmentForm& f, double p);

/// int_a^b f'(q)/q dq for 0 <= a <= b.  +inf when the integral diverges.
double form_cost(const SegmentForm& f, double a, const ExtendedPrice& b);

/// The p in [0, b] with form_cost(f, p, b) == y, for y > 0.  Returns 0 when y
/// exceeds form_cost(f, 0, b).  Requires a strictly increasing form.
double form_cost_inverse(const SegmentForm& f, const ExtendedPrice& b, double y);

/// Whether f' > 0 on the segment.
bool form_is_increasing(const SegmentForm& f);

}  // namespace cfmm
