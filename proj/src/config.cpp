#include "dsheat/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "dsheat/errors.hpp"
#include "dsheat/snapshot.hpp"

namespace dsheat {

using nlohmann::json;

namespace {

template <class T>
T get_field(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + key + "' has the wrong type");
  }
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

}  // namespace

InitShape parse_init_shape(const std::string& name) {
  if (name == "point") return InitShape::PointMass;
  if (name == "box") return InitShape::Box;
  throw ConfigError("init_shape: expected point|box, got '" + name + "'");
}

std::string_view to_string(InitShape s) {
  return s == InitShape::PointMass ? "point" : "box";
}

void Config::validate() const {
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (params.variant == Variant::NaiveEuler && !params.delta)
    throw ConfigError("delta: the naive variant needs a time step");
  if (horizon < 0) throw ConfigError("horizon: must be >= 0");
  if (dump_every < 0) throw ConfigError("dump_every: must be >= 0");
  if (cell_budget == 0) throw ConfigError("cell_budget: must be positive");
  if (threads == 0) throw ConfigError("threads: must be >= 1");
  if (max_tau < 0) throw ConfigError("max_tau: must be >= 0");
  if (samples < 1) throw ConfigError("samples: must be >= 1");
  if (box_width < 1) throw ConfigError("box_width: must be >= 1");
  for (double a : alphas)
    if (!(a > 0.0)) throw ConfigError("alphas: every entry must be positive");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("epsilons: every entry must be positive");
}

void apply_json(Config& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "d") {
      cfg.params.d = get_field<int>(j, key);
    } else if (key == "alpha") {
      cfg.params.alpha = get_field<double>(j, key);
    } else if (key == "delta") {
      if (value.is_null())
        cfg.params.delta.reset();
      else
        cfg.params.delta = get_field<double>(j, key);
    } else if (key == "variant") {
      try {
        cfg.params.variant = parse_variant(get_field<std::string>(j, key));
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "lambda") {
      cfg.params.naive_lambda = get_field<double>(j, key);
    } else if (key == "init") {
      cfg.init = get_field<std::string>(j, key);
    } else if (key == "horizon") {
      cfg.horizon = get_field<std::int64_t>(j, key);
    } else if (key == "dump_every") {
      cfg.dump_every = get_field<std::int64_t>(j, key);
    } else if (key == "cell_budget") {
      cfg.cell_budget = get_field<std::size_t>(j, key);
    } else if (key == "threads") {
      cfg.threads = get_field<unsigned>(j, key);
    } else if (key == "out") {
      cfg.out = get_field<std::string>(j, key);
    } else if (key == "seed") {
      cfg.seed = get_field<std::uint64_t>(j, key);
    } else if (key == "alphas") {
      cfg.alphas = get_field<std::vector<double>>(j, key);
    } else if (key == "epsilons") {
      cfg.epsilons = get_field<std::vector<double>>(j, key);
    } else if (key == "init_shape") {
      cfg.init_shape = parse_init_shape(get_field<std::string>(j, key));
    } else if (key == "box_width") {
      cfg.box_width = get_field<std::int64_t>(j, key);
    } else if (key == "stop_at_exceedance") {
      cfg.stop_at_exceedance = get_field<bool>(j, key);
    } else if (key == "max_tau") {
      cfg.max_tau = get_field<std::int64_t>(j, key);
    } else if (key == "samples") {
      cfg.samples = get_field<std::int64_t>(j, key);
    } else {
      throw ConfigError("config: unknown field '" + key + "'");
    }
  }
}

Config load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  Config cfg;
  apply_json(cfg, j);
  return cfg;
}

json to_json(const Config& cfg) {
  json j;
  j["d"] = cfg.params.d;
  j["alpha"] = cfg.params.alpha;
  j["delta"] = cfg.params.delta ? json(*cfg.params.delta) : json(nullptr);
  j["variant"] = std::string(to_string(cfg.params.variant));
  j["lambda"] = cfg.params.naive_lambda;
  j["init"] = cfg.init;
  j["horizon"] = cfg.horizon;
  j["dump_every"] = cfg.dump_every;
  j["cell_budget"] = cfg.cell_budget;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out;
  j["seed"] = cfg.seed;
  j["alphas"] = cfg.alphas;
  j["epsilons"] = cfg.epsilons;
  j["init_shape"] = std::string(to_string(cfg.init_shape));
  j["box_width"] = cfg.box_width;
  j["stop_at_exceedance"] = cfg.stop_at_exceedance;
  j["max_tau"] = cfg.max_tau;
  j["samples"] = cfg.samples;
  return j;
}

Field parse_init_spec(const std::string& spec, int d) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("init: expected delta:EPS, box:W:VAL or file:PATH");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  try {
    if (kind == "delta") return initial_field(d, InitShape::PointMass, parse_number(rest, "init"));
    if (kind == "box") {
      const auto c2 = rest.find(':');
      if (c2 == std::string::npos) throw ConfigError("init: box needs W:VAL");
      const double w = parse_number(rest.substr(0, c2), "init width");
      if (w != std::floor(w) || w < 1) throw ConfigError("init: box width must be a positive integer");
      return initial_field(d, InitShape::Box, parse_number(rest.substr(c2 + 1), "init value"),
                           static_cast<std::int64_t>(w));
    }
    if (kind == "file") {
      Field f = read_snapshot(rest);
      if (f.dim() != d)
        throw ConfigError("init: snapshot has dimension " + std::to_string(f.dim()) + " but d is " +
                          std::to_string(d));
      return f;
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("init: ") + e.what());
  }
  throw ConfigError("init: unknown kind '" + kind + "'");
}

}  // namespace dsheat
