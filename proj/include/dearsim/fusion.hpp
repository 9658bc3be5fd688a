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

#pragma once

#include <cstdint>

#include "dearsim/model.hpp"

namespace dearsim {

/// A contiguous, inclusive range of layer indices fused into one
/// communication buffer.
struct FusionGroup {
  int low_layer = 0;
  int high_layer = 0;

  int layer_count() const { return high_layer - low_layer + 1; }
};

/// Ordered partition of 1..L into contiguous groups. Groups are stored in
/// backpropagation issue order: groups[0] contains layer L.
struct FusionPlan {
  std::vector<FusionGroup> groups;
  std::int64_t buffer_bytes = 0;  // threshold that generated the plan; 0 = hand-built

  int group_count() const { return static_cast<int>(groups.size()); }
};

/// Greedy grouping from layer L down to layer 1: layers accumulate into the
/// current group while the group total stays <= buffer_bytes; a single layer
/// larger than the threshold forms its own group.
FusionPlan build_fusion_plan(const ModelSpec& model, std::int64_t buffer_bytes);

/// One singleton group per layer, descending (the unfused plan).
FusionPlan per_layer_plan(const ModelSpec& model);

std::int64_t group_bytes(const ModelSpec& model, const FusionGroup& group);

/// Checks the partition/ordering/threshold invariants against the model.
void validate(const FusionPlan& plan, const ModelSpec& model);

}  // namespace dearsim
