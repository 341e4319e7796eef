#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cfmm::cli {

struct RunConfig {
    std::string command;
    /// File path or "catalog:NAME".
    std::string payoff_source;
    /// "key=value" pairs for catalog payoffs.
    std::vector<std::string> params;
    std::optional<std::string> alpha;
    std::optional<std::string> beta;
    int grid = 50;
    std::string output_path;
    double sigma = 0.5;
    double horizon = 1.0;
    int steps = 1000;
    int paths = 1000;
    std::uint64_t seed = 7;
    double start_price = 1.0;
    unsigned threads = 0;
    bool check_infimum = false;
    std::optional<double> p_min;
    std::optional<double> p_max;
    std::optional<double> r2_min;
    std::optional<double> r2_max;
    /// Family named on the catalog command line.
    std::string family;
};

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

/// Parses argv and runs the selected subcommand, writing results to `out`
/// (unless --out is set) and diagnostics to `err`.  Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already parsed configuration.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace cfmm::cli
