#include "cfmm/forms.hpp"

#include <cmath>
#include <limits>

#include "cfmm/errors.hpp"
#include "cfmm/normal.hpp"

namespace cfmm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double vol(const form::NormalCdf& n) { return n.sigma * std::sqrt(n.tau); }

// d(p) + sigma sqrt(tau), the argument of the risky-reserve CDF.
double shifted_d(const form::NormalCdf& n, double p) {
    const double v = vol(n);
    if (p <= 0.0) return -kInf;
    return (std::log(p / n.strike) + 0.5 * v * v) / v;
}

}  // namespace

double form_value(const SegmentForm& f, double p) {
    return std::visit(
        overloaded{
            [](const form::Constant& c) { return c.value; },
            [p](const form::Affine& a) { return a.offset + a.slope * p; },
            [p](const form::Power& w) { return w.offset + w.coefficient * std::pow(p, w.exponent); },
            [p](const form::LogRatio& l) { return l.offset + l.scale * std::log(p / l.reference); },
            [p](const form::NormalCdf& n) {
                if (p <= 0.0) return 0.0;
                const double v = vol(n);
                return normal_cdf((std::log(p / n.strike) - 0.5 * v * v) / v);
            },
        },
        f);
}

double form_slope(const SegmentForm& f, double p) {
    return std::visit(
        overloaded{
            [](const form::Constant&) { return 0.0; },
            [](const form::Affine& a) { return a.slope; },
            [p](const form::Power& w) {
                return w.coefficient * w.exponent * std::pow(p, w.exponent - 1.0);
            },
            [p](const form::LogRatio& l) { return l.scale / p; },
            [p](const form::NormalCdf& n) {
                if (p <= 0.0) return 0.0;
                const double v = vol(n);
                return normal_pdf((std::log(p / n.strike) - 0.5 * v * v) / v) / (p * v);
            },
        },
        f);
}

bool form_is_increasing(const SegmentForm& f) {
    return std::visit(overloaded{
                          [](const form::Constant&) { return false; },
                          [](const form::Affine& a) { return a.slope > 0.0; },
                          [](const form::Power& w) { return w.coefficient > 0.0 && w.exponent > 0.0; },
                          [](const form::LogRatio& l) { return l.scale > 0.0; },
                          [](const form::NormalCdf&) { return true; },
                      },
                      f);
}

double form_cost(const SegmentForm& f, double a, const ExtendedPrice& b) {
    if (b <= a) return 0.0;
    const bool tail = b.is_infinite();
    const double hi = tail ? 0.0 : b.value();

    return std::visit(
        overloaded{
            [](const form::Constant&) { return 0.0; },
            [&](const form::Affine& af) {
                if (af.slope == 0.0) return 0.0;
                if (a == 0.0 || tail) return kInf;
                return af.slope * std::log(hi / a);
            },
            [&](const form::Power& w) {
                if (w.coefficient == 0.0) return 0.0;
                const double e = w.exponent;
                const double ce = w.coefficient * e;
                if (tail) {
                    if (e >= 1.0 || a == 0.0) return kInf;
                    return ce / (1.0 - e) * std::pow(a, e - 1.0);
                }
                if (a == 0.0) {
                    if (e <= 1.0) return kInf;
                    return ce / (e - 1.0) * std::pow(hi, e - 1.0);
                }
                const double log_ratio = std::log(hi / a);
                if (e == 1.0) return ce * log_ratio;
                // a^(e-1) * expm1((e-1) log(b/a)) / (e-1) stays accurate as e -> 1.
                return ce * std::pow(a, e - 1.0) * std::expm1((e - 1.0) * log_ratio) / (e - 1.0);
            },
            [&](const form::LogRatio& l) {
                if (a == 0.0) return kInf;
                if (tail) return l.scale / a;
                return l.scale * (hi - a) / (a * hi);
            },
            [&](const form::NormalCdf& n) {
                const double xa = shifted_d(n, a);
                const double xb = tail ? kInf : shifted_d(n, hi);
                // Difference taken in whichever tail keeps precision.
                const double mass = xb < 0.0 ? normal_cdf(xb) - normal_cdf(xa)
                                             : normal_cdf_complement(xa) - normal_cdf_complement(xb);
                return mass / n.strike;
            },
        },
        f);
}

double form_cost_inverse(const SegmentForm& f, const ExtendedPrice& b, double y) {
    if (!(y > 0.0)) throw InvalidParameter("form_cost_inverse: y must be > 0");
    if (!form_is_increasing(f)) throw InvalidParameter("form_cost_inverse: segment is flat");
    const bool tail = b.is_infinite();
    const double hi = tail ? 0.0 : b.value();
    if (y >= form_cost(f, 0.0, b)) return 0.0;

    return std::visit(
        overloaded{
            [](const form::Constant&) { return 0.0; },
            [&](const form::Affine& af) {
                if (tail) throw InfiniteReplicationCost("affine payoff tail has unbounded replication cost");
                return hi * std::exp(-y / af.slope);
            },
            [&](const form::Power& w) {
                const double e = w.exponent;
                const double ce = w.coefficient * e;
                if (tail) {
                    if (e >= 1.0) throw InfiniteReplicationCost("power payoff tail with exponent >= 1");
                    return std::pow(y * (1.0 - e) / ce, 1.0 / (e - 1.0));
                }
                if (e == 1.0) return hi * std::exp(-y / ce);
                const double arg = -y * (e - 1.0) / ce * std::pow(hi, 1.0 - e);
                if (arg <= -1.0) return 0.0;
                return hi * std::exp(std::log1p(arg) / (e - 1.0));
            },
            [&](const form::LogRatio& l) {
                if (tail) return l.scale / y;
                return 1.0 / (1.0 / hi + y / l.scale);
            },
            [&](const form::NormalCdf& n) {
                const double v = vol(n);
                const double xb = tail ? kInf : shifted_d(n, hi);
                const double upper = y * n.strike + (tail ? 0.0 : normal_cdf_complement(xb));
                double x;
                if (upper <= 0.5) {
                    x = -normal_quantile(upper);
                } else {
                    const double lower = xb < 0.0 ? normal_cdf(xb) - y * n.strike : 1.0 - upper;
                    if (lower <= 0.0) return 0.0;
                    x = normal_quantile(lower);
                }
                return n.strike * std::exp(v * x - 0.5 * v * v);
            },
        },
        f);
}

}  // namespace cfmm
