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

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

#include "dearsim/cluster.hpp"
#include "dearsim/model.hpp"
#include "dearsim/policy.hpp"
#include "dearsim/tuner.hpp"

namespace dearsim {

/// Experiment description loaded from a JSON config. Sections `cluster` and
/// `model` are required; `policy` (single), `policies` (sweep list),
/// `tuner` and `samples_per_iteration` are optional. Unknown keys are
/// rejected with the offending key named.
struct RunConfig {
  ClusterSpec cluster;
  ModelSpec model;
  std::optional<PolicySpec> policy;
  std::vector<PolicySpec> policies;
  TunerConfig tuner;
  double samples_per_iteration = 1.0;
};

RunConfig parse_config(const nlohmann::json& root);
RunConfig load_config(const std::string& path);

}  // namespace dearsim
