#pragma once

#include <optional>
#include <vector>

#include "cfmm/payoff.hpp"
#include "cfmm/price.hpp"
#include "cfmm/quadrature.hpp"

namespace cfmm {

/// How a profile evaluates g.  Analytic integrates each payoff segment in
/// closed form; Quadrature integrates f'(q)/q numerically and inverts g by
/// bisection on a cached tabulation.
enum class CostEvaluation { Analytic, Quadrature };

/// A payoff on its interval [alpha, beta] with evaluators for the replication
/// cost g, the portfolio value V = f + p g, and the generalized inverse of g.
///
/// g(p) = int_p^beta f'(q)/q dq + sum of jump sizes / q_j over jumps q_j in [p, beta).
/// g is nonincreasing and left-continuous.  Immutable once constructed.
class ReplicationProfile {
public:
    /// Throws InfiniteReplicationCost when g(alpha) is infinite.
    explicit ReplicationProfile(PayoffSpec payoff, CostEvaluation mode = CostEvaluation::Analytic,
                                QuadratureOptions options = {});

    const PayoffSpec& payoff() const noexcept { return payoff_; }
    const PriceInterval& interval() const noexcept { return payoff_.interval(); }
    double alpha() const noexcept { return interval().alpha(); }
    const ExtendedPrice& beta() const noexcept { return interval().beta(); }
    CostEvaluation mode() const noexcept { return mode_; }
    const QuadratureOptions& options() const noexcept { return options_; }

    /// True for catalog payoffs, whose g, g^-1 and psi have known closed forms.
    bool has_catalog_closed_form() const noexcept { return payoff_.catalog().has_value(); }

    /// g(p) by the profile's evaluation mode.  Side::Right gives the right
    /// limit, which leaves out a jump located exactly at p.
    double cost(double p, Side side = Side::Left) const;
    double cost_analytic(double p, Side side = Side::Left) const;
    double cost_quadrature(double p, Side side = Side::Left) const;
    double cost_quadrature(double p, Side side, const QuadratureOptions& opts) const;

    double cost_at_alpha() const noexcept { return g_alpha_; }

    /// V(p) = f(p) + p g(p).
    double value(double p) const;

    /// lim V(p) as p -> infinity, or nullopt when f is unbounded.
    std::optional<double> value_at_infinity() const;

    /// sup{p in [alpha, beta] : g(p) >= r2}, alpha when the set is empty, and
    /// the infinity marker when g(p) >= r2 on all of [alpha, infinity).
    ExtendedPrice inverse_cost(double r2) const;
    ExtendedPrice inverse_cost_analytic(double r2) const;
    ExtendedPrice inverse_cost_numeric(double r2) const;

private:
    void require_in_interval(double p) const;
    double jump_mass(double p, Side side) const;
    ExtendedPrice inverse_edge_cases(double r2, bool& done) const;

    PayoffSpec payoff_;
    CostEvaluation mode_;
    QuadratureOptions options_;
    double g_alpha_ = 0.0;
    // Log-spaced (price, g) samples used to bracket numeric inversion.
    std::vector<double> grid_p_;
    std::vector<double> grid_g_;
};

struct Portfolio {
    double numeraire;
    double risky;
};

/// g(p): closed form in Analytic mode, adaptive quadrature with `opts` otherwise.
double replication_cost(const ReplicationProfile& profile, double p, const QuadratureOptions& opts = {});

/// The replicating allocation (f(p), g(p)).
Portfolio portfolio_at(const ReplicationProfile& profile, double p);

/// V(p) = f(p) + p g(p).
double portfolio_value(const ReplicationProfile& profile, double p);

/// V(alpha) + int_alpha^p g(q) dq, integrated numerically piece by piece
/// between breakpoints.  Agrees with portfolio_value up to quadrature error.
double portfolio_value_integral(const ReplicationProfile& profile, double p, const QuadratureOptions& opts = {});

ExtendedPrice g_inverse(const ReplicationProfile& profile, double r2);

enum class Growth { Finite, Infinite, Unknown };

const char* growth_name(Growth g);

struct GrowthProbe {
    double beta_cutoff;
    double g_at_probe;
};

struct GrowthAnalysis {
    Growth classification = Growth::Unknown;
    /// g at a reference price with the interval truncated at each cutoff.
    std::vector<GrowthProbe> evidence;
    std::optional<double> asymptotic_exponent;
};

/// Whether the replication cost is finite on `interval`.  A finite beta is
/// always Finite.  On an unbounded interval catalog payoffs are decided by
/// their growth exponent (f ~ p^e needs e < 1); other payoffs by numeric
/// probes at cutoffs 1e2 .. 1e5 (scaled up for large reference prices).
GrowthAnalysis growth_classification(const PayoffSpec& spec, const PriceInterval& interval,
                                     const QuadratureOptions& opts = {});

}  // namespace cfmm
