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

#include "dearsim/fusion.hpp"

#include <stdexcept>

namespace dearsim {

std::int64_t group_bytes(const ModelSpec& model, const FusionGroup& group) {
  std::int64_t total = 0;
  for (int l = group.low_layer; l <= group.high_layer; ++l) {
    total += model.layers[static_cast<std::size_t>(l - 1)].byte_size();
  }
  return total;
}

FusionPlan build_fusion_plan(const ModelSpec& model,
                             std::int64_t buffer_bytes) {
  validate(model);
  if (model.layers.empty()) {
    throw std::invalid_argument("build_fusion_plan: empty model");
  }
  if (buffer_bytes <= 0) {
    throw std::invalid_argument("build_fusion_plan: buffer_bytes must be > 0");
  }

  FusionPlan plan;
  plan.buffer_bytes = buffer_bytes;
  const int L = model.layer_count();
  int high = L;
  std::int64_t acc = model.layers[static_cast<std::size_t>(L - 1)].byte_size();
  for (int l = L - 1; l >= 1; --l) {
    const std::int64_t next =
        model.layers[static_cast<std::size_t>(l - 1)].byte_size();
    if (acc + next <= buffer_bytes) {
      acc += next;
    } else {
      plan.groups.push_back({l + 1, high});
      high = l;
      acc = next;
    }
  }
  plan.groups.push_back({1, high});
  return plan;
}

FusionPlan per_layer_plan(const ModelSpec& model) {
  validate(model);
  if (model.layers.empty()) {
    throw std::invalid_argument("per_layer_plan: empty model");
  }
  FusionPlan plan;
  plan.buffer_bytes = 0;
  for (int l = model.layer_count(); l >= 1; --l) {
    plan.groups.push_back({l, l});
  }
  return plan;
}

void validate(const FusionPlan& plan, const ModelSpec& model) {
  const int L = model.layer_count();
  if (plan.groups.empty()) {
    throw std::invalid_argument("fusion plan: no groups");
  }
  int expected_high = L;
  for (const FusionGroup& g : plan.groups) {
    if (g.high_layer != expected_high || g.low_layer > g.high_layer ||
        g.low_layer < 1) {
      throw std::invalid_argument(
          "fusion plan: groups must partition 1..L in descending order");
    }
    if (plan.buffer_bytes > 0 && g.layer_count() > 1 &&
        group_bytes(model, g) > plan.buffer_bytes) {
      throw std::invalid_argument(
          "fusion plan: multi-layer group exceeds the buffer threshold");
    }
    expected_high = g.low_layer - 1;
  }
  if (expected_high != 0) {
    throw std::invalid_argument("fusion plan: groups do not cover 1..L");
  }
}

}  // namespace dearsim
