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

#include <cmath>
#include <random>

#include "dearsim/cluster.hpp"
#include "dearsim/model.hpp"

namespace dearsim::testing {

inline double rand_log(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
  return std::exp(dist(rng));
}

struct Scenario {
  ModelSpec model;
  ClusterSpec cluster;
};

/// Randomized steady-state training scenario. Per-layer backprop time stays
/// within 1.2x-2.0x of feed-forward time (training workloads run near the
/// 2x mark; far outside it the decoupled pipeline has no headroom to win).
inline Scenario random_scenario(std::mt19937_64& rng, int min_layers = 10,
                                int max_layers = 300) {
  std::uniform_int_distribution<int> layer_count(min_layers, max_layers);
  std::uniform_real_distribution<double> ratio(1.2, 2.0);
  const int workers_choices[] = {2, 4, 8, 16, 32, 64};
  std::uniform_int_distribution<int> worker_pick(0, 5);

  Scenario s;
  const int L = layer_count(rng);
  s.model.name = "random";
  for (int l = 1; l <= L; ++l) {
    LayerSpec layer;
    layer.index = l;
    layer.param_count =
        static_cast<std::int64_t>(rand_log(rng, 1e3, 2e7));
    layer.t_ff = rand_log(rng, 1e-4, 5e-3);
    layer.t_bp = ratio(rng) * layer.t_ff;
    s.model.layers.push_back(layer);
  }
  s.cluster.workers = workers_choices[worker_pick(rng)];
  s.cluster.alpha = rand_log(rng, 1e-6, 1e-4);
  s.cluster.beta = rand_log(rng, 1e-11, 2e-9);
  return s;
}

}  // namespace dearsim::testing
