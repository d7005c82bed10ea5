#pragma once

#include "tbc/config.hpp"
#include "tbc/table.hpp"

namespace tbc {

inline constexpr const char* kVersion = "0.1.0";

/// Runs the configured experiment. The table metadata records the version,
/// the configuration (parameters, seed, window, ...) and the tolerances in
/// use. For verify-all, metadata key "all_passed" is "true" or "false".
/// Library errors are rethrown as std::runtime_error prefixed with the
/// experiment name.
ResultTable run_experiment(const RunConfig& cfg);

}  // namespace tbc
