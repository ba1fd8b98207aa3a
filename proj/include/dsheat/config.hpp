#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsheat/experiments.hpp"
#include "dsheat/field.hpp"
#include "dsheat/params.hpp"

namespace dsheat {

/// Everything a CLI invocation can be configured with. Loaded from JSON,
/// then overridden by flags.
struct Config {
  Params params;
  std::string init = "delta:1";
  std::int64_t horizon = 100;
  std::int64_t dump_every = 0;
  std::size_t cell_budget = kDefaultCellBudget;
  unsigned threads = 1;
  std::string out = "";
  std::uint64_t seed = 20240501;

  // sweep / critical
  std::vector<double> alphas{0.5, 1.0, 2.0, 3.0};
  std::vector<double> epsilons{0.5, 0.1, 0.01};
  InitShape init_shape = InitShape::PointMass;
  std::int64_t box_width = 1;
  bool stop_at_exceedance = false;

  // kernel
  std::int64_t max_tau = 1000;

  // verify
  std::int64_t samples = 10000;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Invalid configuration or flag combination (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Overwrites the fields present in `j`. Unknown keys and type mismatches
/// raise ConfigError.
void apply_json(Config& cfg, const nlohmann::json& j);
Config load_config_file(const std::filesystem::path& path);
nlohmann::json to_json(const Config& cfg);

/// Parses `delta:EPS`, `box:W:VAL` (centered cube of side W) or
/// `file:PATH` (snapshot CSV).
Field parse_init_spec(const std::string& spec, int d);

InitShape parse_init_shape(const std::string& name);
std::string_view to_string(InitShape s);

}  // namespace dsheat
