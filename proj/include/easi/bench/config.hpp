#pragma once

// Experiment configuration: a versioned JSON document on disk, validated
// structs in memory. Missing fields take documented defaults; unknown keys
// and out-of-range values are rejected with the offending field named, so a
// typo cannot silently run the wrong experiment.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "easi/metrics.hpp"
#include "easi/separator.hpp"
#include "easi/signal.hpp"

namespace easi::bench {

inline constexpr std::uint64_t kConfigVersion = 1;

struct MixtureConfig {
  std::size_t m = 4;
  std::size_t n = 2;
  std::vector<SourceSpec> sources = {SourceSpec{}, SourceSpec{}};
  Schedule schedule;

  friend bool operator==(const MixtureConfig&, const MixtureConfig&) = default;
};

struct ArmConfig {
  std::string name;
  Hyperparameters<float> hp;

  friend bool operator==(const ArmConfig&, const ArmConfig&) = default;
};

struct ExperimentConfig {
  MixtureConfig mixture;
  std::vector<ArmConfig> arms;
  std::vector<std::uint64_t> seeds;
  std::size_t max_samples = 50000;
  ConvergenceCriterion convergence;
  std::string out_dir = "bench_out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ---- enum <-> string ----

inline std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::MomentumSgd: return "momentum";
    case OptimizerKind::Smbgd: return "smbgd";
  }
  throw std::logic_error("unreachable optimizer kind");
}

inline OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "momentum") return OptimizerKind::MomentumSgd;
  if (s == "smbgd") return OptimizerKind::Smbgd;
  throw std::runtime_error("config: unknown optimizer '" + s +
                           "' (expected sgd, momentum, or smbgd)");
}

inline std::string to_string(Nonlinearity k) {
  return k == Nonlinearity::Cubic ? "cubic" : "tanh";
}

inline Nonlinearity parse_nonlinearity(const std::string& s) {
  if (s == "cubic") return Nonlinearity::Cubic;
  if (s == "tanh") return Nonlinearity::Tanh;
  throw std::runtime_error("config: unknown nonlinearity '" + s + "' (expected cubic or tanh)");
}

inline std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::Uniform: return "uniform";
    case SourceKind::Laplace: return "laplace";
    case SourceKind::Sinusoid: return "sinusoid";
  }
  throw std::logic_error("unreachable source kind");
}

inline SourceKind parse_source_kind(const std::string& s) {
  if (s == "uniform") return SourceKind::Uniform;
  if (s == "laplace") return SourceKind::Laplace;
  if (s == "sinusoid") return SourceKind::Sinusoid;
  throw std::runtime_error("config: unknown source kind '" + s +
                           "' (expected uniform, laplace, or sinusoid)");
}

inline std::string to_string(ScheduleKind k) {
  return k == ScheduleKind::Stationary ? "stationary" : "rotating";
}

inline ScheduleKind parse_schedule_kind(const std::string& s) {
  if (s == "stationary") return ScheduleKind::Stationary;
  if (s == "rotating") return ScheduleKind::Rotating;
  throw std::runtime_error("config: unknown schedule kind '" + s +
                           "' (expected stationary or rotating)");
}

// ---- JSON field access with path-qualified errors ----

namespace detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& ctx, const std::string& what) {
  throw std::runtime_error("config: " + ctx + ": " + what);
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& ctx) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) fail(ctx, "unknown key '" + item.key() + "'");
  }
}

inline const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double get_number(const json& obj, const char* key, double fallback,
                         const std::string& ctx) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(ctx + "." + key, "expected a number");
  return v->get<double>();
}

inline std::uint64_t get_uint(const json& obj, const char* key, std::uint64_t fallback,
                              const std::string& ctx) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_unsigned()) fail(ctx + "." + key, "expected a non-negative integer");
  return v->get<std::uint64_t>();
}

inline std::string get_string(const json& obj, const char* key, const std::string& fallback,
                              const std::string& ctx) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(ctx + "." + key, "expected a string");
  return v->get<std::string>();
}

inline SourceSpec source_from_json(const json& j, const std::string& ctx) {
  SourceSpec spec;
  if (j.is_string()) {
    spec.kind = parse_source_kind(j.get<std::string>());
    return spec;
  }
  if (!j.is_object()) fail(ctx, "expected a source kind string or object");
  reject_unknown_keys(j, {"kind", "half_width", "scale", "frequency", "phase"}, ctx);
  spec.kind = parse_source_kind(get_string(j, "kind", "uniform", ctx));
  spec.half_width = get_number(j, "half_width", spec.half_width, ctx);
  spec.scale = get_number(j, "scale", spec.scale, ctx);
  spec.frequency = get_number(j, "frequency", spec.frequency, ctx);
  spec.phase = get_number(j, "phase", spec.phase, ctx);
  return spec;
}

inline json source_to_json(const SourceSpec& spec) {
  json j;
  j["kind"] = easi::bench::to_string(spec.kind);
  switch (spec.kind) {
    case SourceKind::Uniform:
      j["half_width"] = spec.half_width;
      break;
    case SourceKind::Laplace:
      j["scale"] = spec.scale;
      break;
    case SourceKind::Sinusoid:
      j["frequency"] = spec.frequency;
      j["phase"] = spec.phase;
      break;
  }
  return j;
}

}  // namespace detail

inline void validate(const ExperimentConfig& config) {
  const MixtureConfig& mix = config.mixture;
  if (mix.n < 1 || mix.m < mix.n)
    throw std::runtime_error("config: mixture: need m >= n >= 1, got m=" +
                             std::to_string(mix.m) + " n=" + std::to_string(mix.n));
  if (mix.sources.size() != mix.n)
    throw std::runtime_error("config: mixture.sources: expected " + std::to_string(mix.n) +
                             " entries, got " + std::to_string(mix.sources.size()));
  for (std::size_t i = 0; i < mix.sources.size(); ++i) {
    try {
      easi::validate(mix.sources[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error("config: mixture.sources[" + std::to_string(i) + "]: " + e.what());
    }
  }
  try {
    easi::validate(mix.schedule, mix.n);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: mixture.schedule: ") + e.what());
  }

  if (config.arms.empty()) throw std::runtime_error("config: arms: need at least one arm");
  for (std::size_t i = 0; i < config.arms.size(); ++i) {
    const ArmConfig& arm = config.arms[i];
    const std::string ctx = "config: arms[" + std::to_string(i) + "]";
    if (arm.name.empty()) throw std::runtime_error(ctx + ": name must be non-empty");
    for (const char c : arm.name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
        throw std::runtime_error(ctx + ": name '" + arm.name +
                                 "' may only contain [A-Za-z0-9_.-] (it is used in CSV cells "
                                 "and file names)");
    for (std::size_t j = 0; j < i; ++j)
      if (config.arms[j].name == arm.name)
        throw std::runtime_error(ctx + ": duplicate arm name '" + arm.name + "'");
    try {
      easi::validate(arm.hp);
    } catch (const std::exception& e) {
      throw std::runtime_error(ctx + ": " + e.what());
    }
  }

  if (config.seeds.empty()) throw std::runtime_error("config: seeds: need at least one seed");
  for (std::size_t i = 0; i < config.seeds.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (config.seeds[j] == config.seeds[i])
        throw std::runtime_error("config: seeds: duplicate seed " +
                                 std::to_string(config.seeds[i]));
  try {
    easi::validate(config.convergence);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: convergence: ") + e.what());
  }
  if (config.max_samples < config.convergence.window)
    throw std::runtime_error("config: max_samples must be >= convergence.window");
  if (config.out_dir.empty()) throw std::runtime_error("config: out_dir must be non-empty");
}

inline ExperimentConfig default_config() {
  ExperimentConfig config;
  ArmConfig sgd;
  sgd.name = "sgd";
  sgd.hp.optimizer = OptimizerKind::Sgd;
  ArmConfig smbgd;
  smbgd.name = "smbgd";
  smbgd.hp.optimizer = OptimizerKind::Smbgd;
  config.arms = {sgd, smbgd};
  config.seeds.resize(50);
  std::iota(config.seeds.begin(), config.seeds.end(), std::uint64_t{0});
  return config;
}

inline ExperimentConfig config_from_json(const nlohmann::json& root) {
  using detail::fail;
  using detail::find;
  using nlohmann::json;
  if (!root.is_object()) throw std::runtime_error("config: top level must be a JSON object");
  detail::reject_unknown_keys(
      root, {"version", "mixture", "arms", "seeds", "max_samples", "convergence", "out_dir"},
      "top level");
  const std::uint64_t version = detail::get_uint(root, "version", kConfigVersion, "top level");
  if (version != kConfigVersion)
    throw std::runtime_error("config: version " + std::to_string(version) +
                             " is not supported (expected " + std::to_string(kConfigVersion) +
                             ")");

  ExperimentConfig config;

  if (const json* mix = find(root, "mixture")) {
    if (!mix->is_object()) fail("mixture", "expected an object");
    detail::reject_unknown_keys(*mix, {"m", "n", "sources", "schedule"}, "mixture");
    config.mixture.m = detail::get_uint(*mix, "m", config.mixture.m, "mixture");
    config.mixture.n = detail::get_uint(*mix, "n", config.mixture.n, "mixture");
    config.mixture.sources.assign(config.mixture.n, SourceSpec{});
    if (const json* sources = find(*mix, "sources")) {
      if (!sources->is_array()) fail("mixture.sources", "expected an array");
      config.mixture.sources.clear();
      for (std::size_t i = 0; i < sources->size(); ++i)
        config.mixture.sources.push_back(detail::source_from_json(
            (*sources)[i], "mixture.sources[" + std::to_string(i) + "]"));
    }
    if (const json* schedule = find(*mix, "schedule")) {
      if (!schedule->is_object()) fail("mixture.schedule", "expected an object");
      detail::reject_unknown_keys(*schedule, {"kind", "rate", "plane"}, "mixture.schedule");
      config.mixture.schedule.kind =
          parse_schedule_kind(detail::get_string(*schedule, "kind", "stationary",
                                                 "mixture.schedule"));
      config.mixture.schedule.rate =
          detail::get_number(*schedule, "rate", 0.0, "mixture.schedule");
      if (const json* plane = find(*schedule, "plane")) {
        if (!plane->is_array() || plane->size() != 2 || !(*plane)[0].is_number_unsigned() ||
            !(*plane)[1].is_number_unsigned())
          fail("mixture.schedule.plane", "expected [i, j] with non-negative integers");
        config.mixture.schedule.plane_i = (*plane)[0].get<std::size_t>();
        config.mixture.schedule.plane_j = (*plane)[1].get<std::size_t>();
      }
    }
  }

  if (const json* arms = find(root, "arms")) {
    if (!arms->is_array()) fail("arms", "expected an array");
    config.arms.clear();
    for (std::size_t i = 0; i < arms->size(); ++i) {
      const json& a = (*arms)[i];
      const std::string ctx = "arms[" + std::to_string(i) + "]";
      if (!a.is_object()) fail(ctx, "expected an object");
      detail::reject_unknown_keys(
          a, {"name", "optimizer", "mu", "beta", "gamma", "batch_size", "nonlinearity"}, ctx);
      ArmConfig arm;
      arm.hp.optimizer = parse_optimizer(detail::get_string(a, "optimizer", "smbgd", ctx));
      arm.name = detail::get_string(a, "name", to_string(arm.hp.optimizer), ctx);
      arm.hp.learning_rate =
          static_cast<float>(detail::get_number(a, "mu", arm.hp.learning_rate, ctx));
      arm.hp.batch_decay =
          static_cast<float>(detail::get_number(a, "beta", arm.hp.batch_decay, ctx));
      arm.hp.momentum = static_cast<float>(detail::get_number(a, "gamma", arm.hp.momentum, ctx));
      arm.hp.batch_size =
          static_cast<std::size_t>(detail::get_uint(a, "batch_size", arm.hp.batch_size, ctx));
      arm.hp.nonlinearity =
          parse_nonlinearity(detail::get_string(a, "nonlinearity", to_string(arm.hp.nonlinearity),
                                                ctx));
      config.arms.push_back(arm);
    }
  } else {
    config.arms = default_config().arms;
  }

  if (const json* seeds = find(root, "seeds")) {
    if (seeds->is_number_unsigned()) {
      config.seeds.resize(seeds->get<std::size_t>());
      std::iota(config.seeds.begin(), config.seeds.end(), std::uint64_t{0});
    } else if (seeds->is_array()) {
      for (const json& s : *seeds) {
        if (!s.is_number_unsigned()) fail("seeds", "expected non-negative integer entries");
        config.seeds.push_back(s.get<std::uint64_t>());
      }
    } else {
      fail("seeds", "expected a count or an array of seeds");
    }
  } else {
    config.seeds = default_config().seeds;
  }

  config.max_samples = detail::get_uint(root, "max_samples", config.max_samples, "top level");

  if (const json* conv = find(root, "convergence")) {
    if (!conv->is_object()) fail("convergence", "expected an object");
    detail::reject_unknown_keys(*conv, {"threshold", "window"}, "convergence");
    config.convergence.threshold =
        detail::get_number(*conv, "threshold", config.convergence.threshold, "convergence");
    config.convergence.window = static_cast<std::size_t>(
        detail::get_uint(*conv, "window", config.convergence.window, "convergence"));
  }

  config.out_dir = detail::get_string(root, "out_dir", config.out_dir, "top level");

  validate(config);
  return config;
}

namespace detail {

// Shortest decimal that still parses back to the exact float, stored as the
// double nearest that text. Keeps emitted configs human-readable (0.01, not
// 0.009999999776482582) while the read path (double -> float) stays lossless.
inline double json_real(float v) {
  char buf[48];
  for (int precision = 1; precision <= 9; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, static_cast<double>(v));
    if (std::strtof(buf, nullptr) == v) break;
  }
  return std::strtod(buf, nullptr);
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json root;
  root["version"] = kConfigVersion;

  nlohmann::json mix;
  mix["m"] = config.mixture.m;
  mix["n"] = config.mixture.n;
  mix["sources"] = nlohmann::json::array();
  for (const SourceSpec& spec : config.mixture.sources)
    mix["sources"].push_back(detail::source_to_json(spec));
  nlohmann::json schedule;
  schedule["kind"] = to_string(config.mixture.schedule.kind);
  if (config.mixture.schedule.kind == ScheduleKind::Rotating) {
    schedule["rate"] = config.mixture.schedule.rate;
    schedule["plane"] = {config.mixture.schedule.plane_i, config.mixture.schedule.plane_j};
  }
  mix["schedule"] = schedule;
  root["mixture"] = mix;

  root["arms"] = nlohmann::json::array();
  for (const ArmConfig& arm : config.arms) {
    nlohmann::json a;
    a["name"] = arm.name;
    a["optimizer"] = to_string(arm.hp.optimizer);
    a["mu"] = detail::json_real(arm.hp.learning_rate);
    if (arm.hp.optimizer != OptimizerKind::Sgd) a["gamma"] = detail::json_real(arm.hp.momentum);
    if (arm.hp.optimizer == OptimizerKind::Smbgd) {
      a["beta"] = detail::json_real(arm.hp.batch_decay);
      a["batch_size"] = arm.hp.batch_size;
    }
    a["nonlinearity"] = to_string(arm.hp.nonlinearity);
    root["arms"].push_back(a);
  }

  bool iota_seeds = true;
  for (std::size_t i = 0; i < config.seeds.size(); ++i)
    if (config.seeds[i] != i) {
      iota_seeds = false;
      break;
    }
  if (iota_seeds)
    root["seeds"] = config.seeds.size();
  else
    root["seeds"] = config.seeds;

  root["max_samples"] = config.max_samples;
  root["convergence"] = {{"threshold", config.convergence.threshold},
                         {"window", config.convergence.window}};
  root["out_dir"] = config.out_dir;
  return root;
}

inline std::string config_text(const ExperimentConfig& config) {
  return to_json(config).dump(2) + "\n";
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("config: not valid JSON: ") + e.what());
  }
  return config_from_json(root);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(e.what()) + " (from '" + path + "')");
  }
}

}  // namespace easi::bench
