#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "mbsp/sampler.hpp"

namespace mbsp::cli {

// Everything a command needs to reproduce its outputs. The effective config
// (after defaults are resolved) is written as config.json next to the
// artifacts, and `--config` accepts the same file.
struct RunConfig {
  std::string command;
  std::string x_csv;
  std::string y_csv;
  std::string chain;
  std::string out = ".";
  int experiment_id = 1;
  std::size_t replications = 100;
  std::size_t folds = 5;
  double level = 0.95;
  bool center = true;
  std::string chain_format = "binary";
  bool store_sigma = false;
  Hyperparameters hyper;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json hyper_to_json(const Hyperparameters& hyper);
Hyperparameters hyper_from_json(const nlohmann::json& j);

RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace mbsp::cli
