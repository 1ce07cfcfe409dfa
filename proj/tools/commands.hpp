#pragma once

#include <iosfwd>

#include <json.hpp>

#include "mbsp/simulation.hpp"
#include "mbsp/summary.hpp"
#include "run_config.hpp"

namespace mbsp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

// Loads X and Y from CSV and centers them unless config.center is false.
Dataset load_dataset(const RunConfig& config);

nlohmann::json summary_to_json(const PosteriorSummary& summary, const nlohmann::json& hyper);

// Each command writes its artifacts under config.out and returns the
// in-memory result. `log` receives a short human-readable report.
PosteriorSummary cmd_fit(const RunConfig& config, std::ostream& log);
ExperimentResult cmd_experiment(const RunConfig& config, std::ostream& log);
CrossValidationResult cmd_cv(const RunConfig& config, std::ostream& log);
PosteriorSummary cmd_summarize(const RunConfig& config, std::ostream& log);

// Parses argv, dispatches, and maps errors to exit codes (2 input, 3 numeric).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mbsp::cli
