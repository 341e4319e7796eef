#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "cfmm/payoff.hpp"
#include "cfmm/replication.hpp"

namespace support {

inline const double kE = std::exp(1.0);

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

/// |got - want| / |want|, for values that may be far below 1.
inline double strict_rel_err(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

struct NamedCatalog {
    std::string name;
    cfmm::CatalogParams params;
};

/// One representative parameter set per catalog family.
inline std::vector<NamedCatalog> catalog_examples() {
    return {
        {"cash_or_nothing", cfmm::CashOrNothing{2.0}},
        {"capped_call", cfmm::CappedCall{1.0, kE}},
        {"black_scholes_binary", cfmm::BlackScholesBinary{1.0, 0.2, 1.0}},
        {"logarithmic", cfmm::Logarithmic{1.0}},
        {"capped_power", cfmm::CappedPower{1.0, 4.0, 2.0}},
        {"constant_proportion", cfmm::ConstantProportion{0.5, 1.0}},
    };
}

inline std::shared_ptr<const cfmm::ReplicationProfile> profile_of(const cfmm::CatalogParams& params) {
    return std::make_shared<const cfmm::ReplicationProfile>(cfmm::make_catalog_payoff(params));
}

/// Upper end for sampling: beta, or 10x past the last breakpoint on unbounded intervals.
inline double sample_top(const cfmm::ReplicationProfile& pr) {
    if (pr.beta().is_finite()) return pr.beta().value();
    double hi = 10.0 * std::max(pr.alpha(), 1.0);
    for (double b : pr.payoff().breakpoints()) hi = std::max(hi, 10.0 * b);
    return hi;
}

inline double sample_bottom(const cfmm::ReplicationProfile& pr) {
    return pr.alpha() > 0.0 ? pr.alpha() : 1e-4 * sample_top(pr);
}

}  // namespace support
