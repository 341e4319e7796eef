#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cfmm/replication.hpp"

namespace cfmm {

struct PricePath {
    std::vector<double> times;
    std::vector<double> prices;

    /// Same lengths (at least one point), times strictly increasing from 0, prices > 0.
    void validate() const;
};

/// Driftless geometric Brownian motion dP = P sigma dW.
struct GbmParams {
    double p_start = 1.0;
    double sigma = 0.0;
    double horizon = 1.0;
    int steps = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Standard normal draws by inversion of a 53-bit uniform from mt19937_64.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed);
    double operator()();

private:
    struct State;
    std::shared_ptr<State> state_;
};

/// Exact log-Euler steps P_{i+1} = P_i exp(sigma sqrt(dt) Z_i - sigma^2 dt / 2).
PricePath gbm_path(const GbmParams& params);

struct EarningsReport {
    std::vector<double> step_profits;
    double total_w = 0.0;
    /// V(P_0) - V(P_T).
    double payoff_term = 0.0;
    /// sum of g(P_{i-1}) (P_i - P_{i-1}), left endpoint.
    double path_term = 0.0;
};

/// Arbitrages a pool initialized at the first price along the path.  Prices
/// are clamped into [alpha, beta] first.
EarningsReport run_arbitrage(std::shared_ptr<const ReplicationProfile> profile, const PricePath& path);

struct MonteCarloResult {
    double mean = 0.0;
    double standard_error = 0.0;
    std::vector<double> w;
    std::vector<double> payoff_terms;
    std::vector<double> path_terms;
};

/// Earnings over n_paths GBM paths, path i seeded with params.seed + i.
/// Paths run on `threads` workers (0 picks the hardware concurrency); the
/// result does not depend on the thread count.
MonteCarloResult monte_carlo_earnings(std::shared_ptr<const ReplicationProfile> profile, const GbmParams& params,
                                      int n_paths, unsigned threads = 0);

}  // namespace cfmm
