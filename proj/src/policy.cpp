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

#include "dearsim/policy.hpp"

#include <stdexcept>

namespace dearsim {

bool is_fused(PolicyKind kind) {
  return kind == PolicyKind::WfbpFused || kind == PolicyKind::DearFused;
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Wfbp:
      return "WFBP";
    case PolicyKind::WfbpFused:
      return "WFBP_FUSED";
    case PolicyKind::PriorityPartition:
      return "PRIORITY_PARTITION";
    case PolicyKind::Dear:
      return "DEAR";
    case PolicyKind::DearFused:
      return "DEAR_FUSED";
  }
  throw std::logic_error("unreachable policy kind");
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "WFBP") return PolicyKind::Wfbp;
  if (name == "WFBP_FUSED") return PolicyKind::WfbpFused;
  if (name == "PRIORITY_PARTITION") return PolicyKind::PriorityPartition;
  if (name == "DEAR") return PolicyKind::Dear;
  if (name == "DEAR_FUSED") return PolicyKind::DearFused;
  throw std::invalid_argument(
      "unknown policy kind '" + name +
      "'; expected one of WFBP, WFBP_FUSED, PRIORITY_PARTITION, DEAR, "
      "DEAR_FUSED");
}

void validate(const PolicySpec& policy) {
  if (is_fused(policy.kind) && policy.fusion_buffer_bytes <= 0) {
    throw std::invalid_argument(to_string(policy.kind) +
                                " requires fusion_buffer_bytes > 0");
  }
  if (policy.kind == PolicyKind::PriorityPartition &&
      policy.partition_bytes <= 0) {
    throw std::invalid_argument(
        "PRIORITY_PARTITION requires partition_bytes > 0");
  }
  if (policy.negotiation_rounds < 0) {
    throw std::invalid_argument("negotiation_rounds must be >= 0");
  }
}

}  // namespace dearsim
