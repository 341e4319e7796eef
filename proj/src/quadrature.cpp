#include "cfmm/quadrature.hpp"

#include <cmath>
#include <string>

#include "cfmm/errors.hpp"
#include "cfmm/price.hpp"

namespace cfmm {
namespace {

constexpr int kMaxPanels = 1000;
constexpr int kDivergenceWindow = 64;
constexpr double kDivergentRatio = 0.999;

struct Simpson {
    const Integrand& f;
    int max_depth;
    QuadratureResult result;

    double eval(double x) {
        ++result.evaluations;
        const double y = f(x);
        if (!std::isfinite(y))
            throw DivergentIntegral("integrand is not finite at q = " + format_number(x));
        return y;
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        if (!(a < lm && lm < m && m < rm && rm < b)) {
            result.converged = false;
            return whole;
        }
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
        if (depth >= max_depth) {
            result.converged = false;
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
    }
};

// Sums panel(k) for k = 0, 1, ... until the contributions decay geometrically.
template <class Panel>
QuadratureResult panel_series(Panel&& panel, const QuadratureOptions& opts, const char* what) {
    QuadratureResult total;
    double prev = 0.0;
    double prev_ratio = INFINITY;
    int stable = 0;
    for (int k = 0; k < kMaxPanels; ++k) {
        const QuadratureResult c = panel(k);
        total += c;
        if (c.value == 0.0) {
            if (total.value != 0.0) return total;
            prev = 0.0;
            continue;
        }
        if (prev > 0.0) {
            const double ratio = c.value / prev;
            if (k >= kDivergenceWindow && ratio >= kDivergentRatio)
                throw DivergentIntegral(std::string(what) + ": panel contributions do not decay");
            if (ratio < 1.0 && ratio <= prev_ratio * (1.0 + 1e-3)) {
                stable = std::abs(ratio - prev_ratio) <= 1e-8 * ratio ? stable + 1 : 0;
                const double tail = c.value * ratio / (1.0 - ratio);
                if (tail <= 1e-3 * opts.rel_tol * std::abs(total.value) || (stable >= 3 && k >= 8)) {
                    total.value += tail;
                    return total;
                }
            } else {
                stable = 0;
            }
            prev_ratio = ratio;
        }
        prev = c.value;
    }
    if (total.value == 0.0) return total;
    throw DivergentIntegral(std::string(what) + ": no convergence within " + std::to_string(kMaxPanels) + " panels");
}

}  // namespace

void QuadratureOptions::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidParameter("quadrature tolerances must be > 0");
    if (max_depth < 1) throw InvalidParameter("quadrature max_depth must be >= 1");
}

QuadratureResult adaptive_simpson(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
    Simpson s{f, opts.max_depth, {}};
    if (!(b > a)) return s.result;
    const double fa = s.eval(a);
    const double fm = s.eval(0.5 * (a + b));
    const double fb = s.eval(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double eps = whole != 0.0 ? opts.rel_tol * std::abs(whole) : opts.abs_tol;
    s.result.value = s.recurse(a, b, fa, fm, fb, whole, eps, 0);
    return s.result;
}

QuadratureResult integrate_log_panels(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
    QuadratureResult total;
    if (!(b > a)) return total;
    if (!(a > 0.0)) throw InvalidParameter("integrate_log_panels needs a > 0");
    const int panels = std::max(1, static_cast<int>(std::ceil(std::log2(b / a))));
    const double la = std::log(a);
    const double lb = std::log(b);
    const Integrand in_log = [&f](double t) {
        const double q = std::exp(t);
        return f(q) * q;
    };
    for (int k = 0; k < panels; ++k) {
        const double t0 = la + (lb - la) * k / panels;
        const double t1 = k + 1 == panels ? lb : la + (lb - la) * (k + 1) / panels;
        total += adaptive_simpson(in_log, t0, t1, opts);
    }
    return total;
}

QuadratureResult integrate_from_zero(const Integrand& f, double b, const QuadratureOptions& opts) {
    if (!(b > 0.0)) return {};
    return panel_series(
        [&](int k) {
            const double hi = std::ldexp(b, -k);
            return adaptive_simpson(f, 0.5 * hi, hi, opts);
        },
        opts, "integral from 0");
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a, const QuadratureOptions& opts) {
    if (!(a > 0.0)) throw InvalidParameter("integrate_to_infinity needs a > 0");
    const double u0 = 1.0 / a;
    const Integrand in_u = [&f](double u) { return f(1.0 / u) / (u * u); };
    return panel_series(
        [&](int k) {
            const double hi = std::ldexp(u0, -k);
            return adaptive_simpson(in_u, 0.5 * hi, hi, opts);
        },
        opts, "integral to infinity");
}

}  // namespace cfmm
