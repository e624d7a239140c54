#pragma once

#include <string>

namespace ratingforge {

/// Batch run configuration (mirrors the CLI flags).
struct RunConfig {
    std::string config_path;
    std::string out_dir;
    std::string command;  // solve-deterministic | classify | check-conditions |
                          // oracle-compare | stochastic-audit | signaling | fee-design
    std::size_t grid_n = 0;  // 0 = use config / defaults
    bool quiet = false;
};

/// Executes a command, writing result.json plus CSV tables into out_dir.
/// Returns 0 on success, 2 on validation errors, 3 on solver errors.
int run(const RunConfig& config);

}  // namespace ratingforge
