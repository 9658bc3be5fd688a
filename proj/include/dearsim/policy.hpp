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
#include <string>

namespace dearsim {

/// Communication scheduling policies for one training iteration.
///
/// Wfbp:              per-layer all-reduce issued in gradient-readiness
///                    (descending layer) order, overlapping backprop only.
/// WfbpFused:         Wfbp over fused buffers from a FusionPlan.
/// PriorityPartition: per-layer all-reduce with large tensors split into
///                    parts, issued in ascending-layer (priority) order,
///                    each part preceded by a negotiation round-trip.
/// Dear:              all-reduce decoupled into reduce-scatter (overlaps
///                    backprop) and all-gather (overlaps the next
///                    iteration's feed-forward), per layer.
/// DearFused:         Dear over fused buffers.
enum class PolicyKind { Wfbp, WfbpFused, PriorityPartition, Dear, DearFused };

struct PolicySpec {
  PolicyKind kind = PolicyKind::Wfbp;
  std::int64_t fusion_buffer_bytes = 0;  // required > 0 for fused kinds
  std::int64_t partition_bytes = 0;      // required > 0 for PriorityPartition
  int negotiation_rounds = 1;            // PriorityPartition only

  // Study knobs, off by default.
  bool negotiation_floating = false;   // negotiation latency off the comm stream
  bool dear_group_dependency = false;  // AG_g waits on RS_g instead of a global barrier
};

void validate(const PolicySpec& policy);

bool is_fused(PolicyKind kind);
std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

}  // namespace dearsim
