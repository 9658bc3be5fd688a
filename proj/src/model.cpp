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

#include "dearsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dearsim {

std::int64_t ModelSpec::total_params() const {
  std::int64_t total = 0;
  for (const auto& l : layers) total += l.param_count;
  return total;
}

std::int64_t ModelSpec::total_bytes() const {
  std::int64_t total = 0;
  for (const auto& l : layers) total += l.byte_size();
  return total;
}

double ModelSpec::total_ff_seconds() const {
  double total = 0.0;
  for (const auto& l : layers) total += l.t_ff;
  return total;
}

double ModelSpec::total_bp_seconds() const {
  double total = 0.0;
  for (const auto& l : layers) total += l.t_bp;
  return total;
}

void validate(const ModelSpec& model) {
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const LayerSpec& l = model.layers[i];
    if (l.index != static_cast<int>(i) + 1) {
      throw std::invalid_argument("model '" + model.name +
                                  "': layer indices must be exactly 1..L; "
                                  "position " +
                                  std::to_string(i + 1) + " has index " +
                                  std::to_string(l.index));
    }
    if (l.param_count < 0) {
      throw std::invalid_argument("model: param_count must be >= 0");
    }
    if (l.bytes_per_element < 1) {
      throw std::invalid_argument("model: bytes_per_element must be >= 1");
    }
    if (!(l.t_ff >= 0.0) || !(l.t_bp >= 0.0) || !std::isfinite(l.t_ff) ||
        !std::isfinite(l.t_bp)) {
      throw std::invalid_argument(
          "model: layer compute times must be finite and >= 0");
    }
  }
}

namespace {

struct PresetInfo {
  const char* name;
  int tensors;
  std::int64_t params;
};

// Benchmark models: learnable-tensor counts and parameter totals.
constexpr PresetInfo kPresets[] = {
    {"resnet50", 161, 25'600'000},
    {"densenet201", 604, 20'000'000},
    {"inceptionv4", 449, 42'700'000},
    {"bert_base", 206, 110'100'000},
    {"bert_large", 398, 336'200'000},
};

// Spreads `total` over `count` integer shares that sum to total exactly;
// the first (total % count) shares get one extra element.
void spread_uniform(std::vector<std::int64_t>& out, std::size_t begin,
                    std::size_t count, std::int64_t total) {
  if (count == 0) return;
  const std::int64_t base = total / static_cast<std::int64_t>(count);
  const std::int64_t extra = total % static_cast<std::int64_t>(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[begin + i] = base + (static_cast<std::int64_t>(i) < extra ? 1 : 0);
  }
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& p : kPresets) v.emplace_back(p.name);
    return v;
  }();
  return names;
}

ModelSpec preset_model(const std::string& name, double total_ff_seconds,
                       double bp_to_ff_ratio, ParamProfile profile) {
  const PresetInfo* info = nullptr;
  for (const auto& p : kPresets) {
    if (name == p.name) {
      info = &p;
      break;
    }
  }
  if (info == nullptr) {
    std::string valid;
    for (const auto& p : kPresets) {
      if (!valid.empty()) valid += ", ";
      valid += p.name;
    }
    throw std::invalid_argument("unknown preset model '" + name +
                                "'; valid presets: " + valid);
  }
  if (!(total_ff_seconds > 0.0)) {
    throw std::invalid_argument("preset_model: total_ff_seconds must be > 0");
  }
  if (!(bp_to_ff_ratio > 0.0)) {
    throw std::invalid_argument("preset_model: bp_to_ff_ratio must be > 0");
  }

  const int n = info->tensors;
  std::vector<std::int64_t> params(static_cast<std::size_t>(n), 0);
  if (profile == ParamProfile::Uniform) {
    spread_uniform(params, 0, static_cast<std::size_t>(n), info->params);
  } else {
    // 80% of the parameters in the last 20% of tensors.
    const auto tail =
        std::max<std::int64_t>(1, std::llround(0.2 * static_cast<double>(n)));
    const std::int64_t head = n - tail;
    const std::int64_t tail_params =
        head == 0 ? info->params
                  : std::llround(0.8 * static_cast<double>(info->params));
    spread_uniform(params, 0, static_cast<std::size_t>(head),
                   info->params - tail_params);
    spread_uniform(params, static_cast<std::size_t>(head),
                   static_cast<std::size_t>(tail), tail_params);
  }

  const double t_ff = total_ff_seconds / n;
  ModelSpec model;
  model.name = info->name;
  model.layers.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    LayerSpec layer;
    layer.index = i + 1;
    layer.param_count = params[static_cast<std::size_t>(i)];
    layer.bytes_per_element = 4;
    layer.t_ff = t_ff;
    layer.t_bp = bp_to_ff_ratio * t_ff;
    model.layers.push_back(layer);
  }
  return model;
}

}  // namespace dearsim
