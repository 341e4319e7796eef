#pragma once

// Payoff specification documents (JSON).
//
//   {"catalog": "capped_call", "p0": 1.0, "p1": 2.0, "alpha": 1.0, "beta": "inf"}
//   {"piecewise": {"points": [[p, f], ...], "jumps": [[p, size], ...]}, "alpha": 0.5}
//
// "alpha" and "beta" are optional; "inf" is accepted for beta and capped_power's p1.

#include <filesystem>
#include <string>
#include <string_view>

#include "cfmm/payoff.hpp"

namespace cfmm {

/// Parses and validates a payoff document. Throws PayoffFormatError (with
/// line number for syntax errors), MonotonicityError, NegativePayoffError,
/// InvalidParameter or InfiniteReplicationCost.
PayoffSpec parse_payoff_file(std::string_view text);

PayoffSpec load_payoff_file(const std::filesystem::path& path);

/// Inverse of parse_payoff_file.
std::string serialize_payoff(const PayoffSpec& spec);

/// Parameter names accepted by a catalog family, in documentation order.
std::vector<std::string_view> catalog_parameter_names(std::string_view family);

/// The six catalog family names.
std::vector<std::string_view> catalog_families();

}  // namespace cfmm
