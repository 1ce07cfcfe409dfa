#include "run_config.hpp"

#include "json_writer.hpp"
#include "mbsp/error.hpp"

namespace mbsp::cli {
namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

template <typename T>
void read_if_present(const nlohmann::json& j, const char* key, T& target) {
  if (j.contains(key) && !j.at(key).is_null()) target = j.at(key).get<T>();
}

}  // namespace

nlohmann::json hyper_to_json(const Hyperparameters& hyper) {
  return {
      {"u", hyper.u},
      {"a", hyper.a},
      {"tau", optional_number(hyper.tau)},
      {"d", hyper.d},
      {"k", optional_number(hyper.k)},
      {"iterations", hyper.iterations},
      {"burn_in", hyper.burn_in},
      {"thin", hyper.thin},
      {"seed", hyper.seed},
  };
}

Hyperparameters hyper_from_json(const nlohmann::json& j) {
  Hyperparameters h;
  try {
    read_if_present(j, "u", h.u);
    read_if_present(j, "a", h.a);
    h.tau = read_optional(j, "tau");
    read_if_present(j, "d", h.d);
    h.k = read_optional(j, "k");
    read_if_present(j, "iterations", h.iterations);
    read_if_present(j, "burn_in", h.burn_in);
    read_if_present(j, "thin", h.thin);
    read_if_present(j, "seed", h.seed);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad hyperparameter entry: ") + e.what());
  }
  return h;
}

nlohmann::json to_json(const RunConfig& c) {
  return {
      {"command", c.command},
      {"x_csv", c.x_csv},
      {"y_csv", c.y_csv},
      {"chain", c.chain},
      {"out", c.out},
      {"experiment_id", c.experiment_id},
      {"replications", c.replications},
      {"folds", c.folds},
      {"level", c.level},
      {"center", c.center},
      {"chain_format", c.chain_format},
      {"store_sigma", c.store_sigma},
      {"hyperparameters", hyper_to_json(c.hyper)},
  };
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  RunConfig c;
  try {
    read_if_present(j, "command", c.command);
    read_if_present(j, "x_csv", c.x_csv);
    read_if_present(j, "y_csv", c.y_csv);
    read_if_present(j, "chain", c.chain);
    read_if_present(j, "out", c.out);
    read_if_present(j, "experiment_id", c.experiment_id);
    read_if_present(j, "replications", c.replications);
    read_if_present(j, "folds", c.folds);
    read_if_present(j, "level", c.level);
    read_if_present(j, "center", c.center);
    read_if_present(j, "chain_format", c.chain_format);
    read_if_present(j, "store_sigma", c.store_sigma);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad config entry: ") + e.what());
  }
  if (j.contains("hyperparameters")) c.hyper = hyper_from_json(j.at("hyperparameters"));
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  try {
    return run_config_from_json(read_json(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace mbsp::cli
