#pragma once

#include <memory>
#include <optional>

#include "cfmm/price.hpp"
#include "cfmm/replication.hpp"

namespace cfmm {

/// psi(R1, R2) = R1 + g^-1(R2) R2 - V(g^-1(R2)), the trading function whose
/// zero level set is the replicating liquidity position (f(p), g(p)).
class TradingFunction {
public:
    explicit TradingFunction(std::shared_ptr<const ReplicationProfile> profile);
    explicit TradingFunction(ReplicationProfile profile);

    const ReplicationProfile& profile() const noexcept { return *profile_; }
    const std::shared_ptr<const ReplicationProfile>& profile_ptr() const noexcept { return profile_; }

    /// Largest valid risky reserve, g(alpha).  The smallest is g(beta) = 0.
    double max_risky_reserve() const noexcept { return profile_->cost_at_alpha(); }

private:
    std::shared_ptr<const ReplicationProfile> profile_;
};

/// psi(r1, r2).  Throws InvalidReserves for negative reserves or r2 > g(alpha),
/// and UnboundedBelow when r2 = 0 on an unbounded interval with unbounded V.
/// With g^-1(r2) at the infinity marker the term g^-1 r2 is taken as 0.
double trading_function_eval(const TradingFunction& tf, double r1, double r2);

/// inf over p in [alpha, beta] of r1 + p r2 - V(p), by a log-spaced grid of
/// `grid_points` prices and golden-section refinement around the best cell.
/// An unbounded beta is truncated where g(p) drops below r2, past which the
/// objective increases.  Throws UnboundedBelow when the infimum is -inf.
double trading_function_infimum(const TradingFunction& tf, double r1, double r2, int grid_points = 512);

/// The closed-form psi of a catalog payoff, when the interval
/// reaches the region where f is constant (or is unbounded) so that those
/// formulas apply.  nullopt for table payoffs and truncated intervals.
std::optional<double> catalog_trading_function(const TradingFunction& tf, double r1, double r2);

/// Reserves of a fee-free pool plus the level psi(r1, r2).
class PoolState {
public:
    /// Throws InvalidReserves when (r1, r2) is outside the valid range.
    PoolState(std::shared_ptr<const ReplicationProfile> profile, double r1, double r2,
              std::optional<double> price = std::nullopt);

    double r1() const noexcept { return r1_; }
    double r2() const noexcept { return r2_; }
    double invariant_level() const noexcept { return level_; }
    /// Price the pool was last aligned to, when known.
    const std::optional<double>& price() const noexcept { return price_; }
    const ReplicationProfile& profile() const noexcept { return *profile_; }
    const std::shared_ptr<const ReplicationProfile>& profile_ptr() const noexcept { return profile_; }

private:
    std::shared_ptr<const ReplicationProfile> profile_;
    double r1_;
    double r2_;
    double level_;
    std::optional<double> price_;
};

struct ArbStepProfit {
    double profit;
    double from_price;
    double to_price;
};

struct ArbitrageResult {
    PoolState pool;
    ArbStepProfit step;
};

struct TradeDecision {
    bool accepted;
    double level_before;
    double level_after;
};

/// Pool holding (f(p), g(p)).  Throws DomainError outside [alpha, beta].
PoolState pool_init(std::shared_ptr<const ReplicationProfile> profile, double p);

/// Accept iff psi does not drop by more than 1e-12 max(1, |psi|).  Throws
/// InvalidReserves when the post-trade reserves are invalid.
TradeDecision validate_trade(const PoolState& pool, double d1, double d2);

/// Moves the pool to (f(p_ext), g(p_ext)), the allocation minimizing its
/// value at the external price.  The arbitrageur earns
/// p_ext (r2 - g(p_ext)) + r1 - f(p_ext).
ArbitrageResult arbitrage_to_price(const PoolState& pool, double p_ext);

/// g^-1(r2), the price implied by the risky reserve.
ExtendedPrice spot_price(const PoolState& pool);

}  // namespace cfmm
