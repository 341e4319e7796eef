#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfmm/payoff.hpp"

namespace cfmm {

struct CheckResult {
    std::string name;
    bool passed = true;
    /// Largest violation seen (0 when none).
    double worst_residual = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct VerifyOptions {
    int samples = 200;
    int oracle_points = 40;
    int paths = 20;
    int steps = 250;
    double sigma = 0.5;
    std::uint64_t seed = 1;
};

/// Runs the invariant checks for one payoff: monotone nonnegative f, g
/// nonincreasing, V concave and nondecreasing, the V integral identity, psi
/// against its infimum oracle (and catalog closed form), arbitrage profit
/// and optimality, and the earnings identity on GBM paths.  Constant-
/// proportion payoffs also get the constant-product residual.
std::vector<CheckResult> verify_payoff(const PayoffSpec& spec, const VerifyOptions& opts = {});

}  // namespace cfmm
