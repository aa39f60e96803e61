#pragma once

#include <json.hpp>

namespace rankdyn {

/// Command implementations behind the `rankdyn` front end. Each takes a
/// fully merged JSON config (file values overridden by flags); unknown keys
/// are rejected before any computation.
void cmd_simulate(const nlohmann::json& cfg);
void cmd_fit(const nlohmann::json& cfg);
void cmd_forecast(const nlohmann::json& cfg);
void cmd_evaluate(const nlohmann::json& cfg);

/// Worker cap: RANKDYN_THREADS if set, else hardware concurrency.
int worker_threads();

/// Parses argv, dispatches, and maps exceptions to exit codes
/// (0 ok, 2 config, 3 data validation, 4 internal).
int run_cli(int argc, char** argv);

} // namespace rankdyn
