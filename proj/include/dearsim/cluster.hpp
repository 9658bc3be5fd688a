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

#include <string>

namespace dearsim {

/// A symmetric cluster of `workers` ranks connected by links with
/// per-message startup latency `alpha` (seconds) and per-byte transfer
/// time `beta` (seconds/byte). Effective link bandwidth is 1/beta.
struct ClusterSpec {
  std::string name = "cluster";
  int workers = 1;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Throws std::invalid_argument unless workers >= 1, alpha >= 0, beta >= 0.
void validate(const ClusterSpec& cluster);

/// Link bandwidth in bytes/second; +infinity when beta == 0.
double bandwidth(const ClusterSpec& cluster);

}  // namespace dearsim
