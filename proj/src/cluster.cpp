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

#include "dearsim/cluster.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dearsim {

void validate(const ClusterSpec& c) {
  if (c.workers < 1) {
    throw std::invalid_argument("cluster: workers must be >= 1, got " +
                                std::to_string(c.workers));
  }
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) {
    throw std::invalid_argument("cluster: alpha must be finite and >= 0");
  }
  if (!(c.beta >= 0.0) || !std::isfinite(c.beta)) {
    throw std::invalid_argument("cluster: beta must be finite and >= 0");
  }
}

double bandwidth(const ClusterSpec& c) {
  if (c.beta == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / c.beta;
}

}  // namespace dearsim
