// Copyright 2026 The dearsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dearsim/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <initializer_list>
#include <stdexcept>

namespace dearsim {

namespace {

using nlohmann::json;

void check_keys(const json& object, const char* section,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("config: unknown key \"" + key +
                                  "\" in section " + section);
    }
  }
}

const json& require(const json& object, const char* section, const char* key) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw std::invalid_argument(std::string("config: section ") + section +
                                " is missing required key \"" + key + "\"");
  }
  return *it;
}

ClusterSpec parse_cluster(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: \"cluster\" must be an object");
  }
  check_keys(j, "cluster", {"name", "workers", "alpha", "beta"});
  ClusterSpec c;
  c.workers = require(j, "cluster", "workers").get<int>();
  c.alpha = require(j, "cluster", "alpha").get<double>();
  c.beta = require(j, "cluster", "beta").get<double>();
  if (j.contains("name")) c.name = j["name"].get<std::string>();
  validate(c);
  return c;
}

ModelSpec parse_model(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: \"model\" must be an object");
  }
  if (j.contains("preset")) {
    check_keys(j, "model",
               {"preset", "total_ff_seconds", "bp_to_ff_ratio", "profile"});
    const auto preset = j["preset"].get<std::string>();
    const double ff = require(j, "model", "total_ff_seconds").get<double>();
    const double ratio = j.value("bp_to_ff_ratio", 2.0);
    ParamProfile profile = ParamProfile::Uniform;
    if (j.contains("profile")) {
      const auto name = j["profile"].get<std::string>();
      if (name == "uniform") {
        profile = ParamProfile::Uniform;
      } else if (name == "imbalanced") {
        profile = ParamProfile::Imbalanced;
      } else {
        throw std::invalid_argument(
            "config: model profile must be \"uniform\" or \"imbalanced\"");
      }
    }
    return preset_model(preset, ff, ratio, profile);
  }

  check_keys(j, "model", {"name", "layers"});
  ModelSpec m;
  m.name = j.value("name", "custom");
  const json& layers = require(j, "model", "layers");
  if (!layers.is_array() || layers.empty()) {
    throw std::invalid_argument(
        "config: model \"layers\" must be a non-empty array");
  }
  int index = 1;
  for (const json& lj : layers) {
    check_keys(lj, "model.layers",
               {"index", "param_count", "bytes_per_element", "t_ff", "t_bp"});
    LayerSpec l;
    l.index = lj.value("index", index);
    l.param_count = require(lj, "model.layers", "param_count").get<std::int64_t>();
    l.bytes_per_element = lj.value("bytes_per_element", 4);
    l.t_ff = require(lj, "model.layers", "t_ff").get<double>();
    l.t_bp = require(lj, "model.layers", "t_bp").get<double>();
    m.layers.push_back(l);
    ++index;
  }
  validate(m);
  return m;
}

PolicySpec parse_policy(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: \"policy\" must be an object");
  }
  check_keys(j, "policy",
             {"kind", "fusion_buffer_bytes", "partition_bytes",
              "negotiation_rounds", "negotiation_floating",
              "dear_group_dependency"});
  PolicySpec p;
  p.kind = policy_kind_from_string(require(j, "policy", "kind").get<std::string>());
  p.fusion_buffer_bytes = j.value("fusion_buffer_bytes", std::int64_t{0});
  p.partition_bytes = j.value("partition_bytes", std::int64_t{0});
  p.negotiation_rounds = j.value("negotiation_rounds", 1);
  p.negotiation_floating = j.value("negotiation_floating", false);
  p.dear_group_dependency = j.value("dear_group_dependency", false);
  validate(p);
  return p;
}

TunerConfig parse_tuner(const json& j, TunerConfig base) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: \"tuner\" must be an object");
  }
  check_keys(j, "tuner",
             {"lower_bytes", "upper_bytes", "xi", "init_buffer_bytes",
              "measure_steps", "max_trials", "seed", "lengthscale",
              "signal_variance", "noise_variance"});
  base.lower_bytes = j.value("lower_bytes", base.lower_bytes);
  base.upper_bytes = j.value("upper_bytes", base.upper_bytes);
  base.xi = j.value("xi", base.xi);
  base.init_buffer_bytes = j.value("init_buffer_bytes", base.init_buffer_bytes);
  base.measure_steps = j.value("measure_steps", base.measure_steps);
  base.max_trials = j.value("max_trials", base.max_trials);
  base.seed = j.value("seed", base.seed);
  base.gp.lengthscale = j.value("lengthscale", base.gp.lengthscale);
  base.gp.signal_variance = j.value("signal_variance", base.gp.signal_variance);
  base.gp.noise_variance = j.value("noise_variance", base.gp.noise_variance);
  validate(base);
  return base;
}

}  // namespace

RunConfig parse_config(const json& root) {
  if (!root.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  check_keys(root, "top level",
             {"cluster", "model", "policy", "policies", "tuner",
              "samples_per_iteration"});
  if (!root.contains("cluster")) {
    throw std::invalid_argument(
        "config: missing required section \"cluster\"");
  }
  if (!root.contains("model")) {
    throw std::invalid_argument("config: missing required section \"model\"");
  }

  RunConfig config;
  config.cluster = parse_cluster(root["cluster"]);
  config.model = parse_model(root["model"]);
  if (root.contains("policy")) {
    config.policy = parse_policy(root["policy"]);
  }
  if (root.contains("policies")) {
    const json& list = root["policies"];
    if (!list.is_array() || list.empty()) {
      throw std::invalid_argument(
          "config: \"policies\" must be a non-empty array");
    }
    for (const json& pj : list) config.policies.push_back(parse_policy(pj));
  }
  if (root.contains("tuner")) {
    config.tuner = parse_tuner(root["tuner"], config.tuner);
  }
  config.samples_per_iteration =
      root.value("samples_per_iteration", config.samples_per_iteration);
  if (!(config.samples_per_iteration > 0.0)) {
    throw std::invalid_argument("config: samples_per_iteration must be > 0");
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open file " + path);
  }
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  return parse_config(root);
}

}  // namespace dearsim
