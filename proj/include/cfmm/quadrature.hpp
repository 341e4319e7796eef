#pragma once

#include <functional>

namespace cfmm {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_depth = 60;

    /// Throws InvalidParameter unless tolerances > 0 and max_depth >= 1.
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    bool converged = true;
    long evaluations = 0;

    QuadratureResult& operator+=(const QuadratureResult& other) {
        value += other.value;
        converged = converged && other.converged;
        evaluations += other.evaluations;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

/// Adaptive Simpson on [a, b] with recursive error control. The integrand
/// must be finite on the closed interval. Tolerance is rel_tol times the
/// magnitude of the coarse estimate (abs_tol when that estimate is zero).
QuadratureResult adaptive_simpson(const Integrand& f, double a, double b, const QuadratureOptions& opts);

/// int_a^b f(q) dq for 0 < a <= b, integrated in t = log q on panels whose
/// endpoint ratio is at most 2.
QuadratureResult integrate_log_panels(const Integrand& f, double a, double b, const QuadratureOptions& opts);

/// int_0^b f(q) dq on dyadic panels [b/2^(k+1), b/2^k] toward 0.
/// Throws DivergentIntegral when panel contributions stop decaying.
QuadratureResult integrate_from_zero(const Integrand& f, double b, const QuadratureOptions& opts);

/// int_a^inf f(q) dq for a > 0.  Substitutes u = 1/q and integrates
/// f(1/u)/u^2 on dyadic panels toward u = 0; a geometric tail estimate closes
/// the series once the panel ratio settles.  Throws DivergentIntegral when
/// panel contributions stop decaying.
QuadratureResult integrate_to_infinity(const Integrand& f, double a, const QuadratureOptions& opts);

}  // namespace cfmm
