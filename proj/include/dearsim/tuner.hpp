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
#include <functional>
#include <vector>

#include "dearsim/gp.hpp"

namespace dearsim {

/// Search space and protocol for the fusion-buffer tuner. Buffer sizes are
/// continuous during the search and rounded to whole bytes when the
/// objective is evaluated.
struct TunerConfig {
  double lower_bytes = 1e6;          // 1 MB
  double upper_bytes = 1e8;          // 100 MB
  double xi = 0.1;                   // EI exploration margin
  double init_buffer_bytes = 2.5e7;  // first trial, 25 MB
  int measure_steps = 10;            // objective evaluations per observation
  int max_trials = 20;               // search iterations after the first
  std::uint64_t seed = 0;
  GpHyperParams gp;
};

void validate(const TunerConfig& config);

struct TrialRecord {
  int trial = 0;  // 1-based
  double buffer_bytes = 0.0;
  double throughput = 0.0;  // NaN when the evaluation failed
  bool ok = true;
  double cumulative_best = 0.0;
};

struct TuneResult {
  double best_buffer_bytes = 0.0;
  double best_throughput = 0.0;
  std::vector<TrialRecord> trace;
};

/// throughput(buffer_bytes); may throw to signal a failed evaluation.
using Objective = std::function<double(double)>;

/// Argmax of expected improvement over the bounds: a 512-point grid scan
/// refined by golden-section search around the best cell. When every EI is
/// zero, falls back to the highest-variance candidate (then lowest buffer).
double suggest_next(const GpPosterior& posterior, const TunerConfig& config);

/// Bayesian-optimization loop: evaluate the default buffer first, then
/// fit -> suggest -> evaluate up to max_trials times. Each observation
/// averages measure_steps objective calls. Failed evaluations are recorded
/// and skipped; three consecutive failures abort the search.
TuneResult tune(const Objective& objective, const TunerConfig& config);

/// Seeded uniform sampling over the bounds; same trace shape as tune.
TuneResult random_search(const Objective& objective, const TunerConfig& config);

/// Evaluates an even grid of max_trials cell-center points over the bounds.
TuneResult grid_search(const Objective& objective, const TunerConfig& config);

}  // namespace dearsim
