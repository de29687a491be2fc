#pragma once

#include "qpack/report.hpp"

namespace qpack {

// Validates a run configuration and dispatches to the named subcommand.
// Returns the full report document. Unknown config keys are rejected.
Json run_config(const Json& config);

// 0 when every check in the report passed, 1 otherwise.
int report_exit_code(const Json& report);

}  // namespace qpack
