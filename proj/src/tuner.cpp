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

#include "dearsim/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dearsim {

void validate(const TunerConfig& c) {
  if (!(c.lower_bytes < c.upper_bytes) || !(c.lower_bytes > 0.0)) {
    throw std::invalid_argument("tuner: need 0 < lower_bytes < upper_bytes");
  }
  if (c.xi < 0.0) throw std::invalid_argument("tuner: xi must be >= 0");
  if (c.init_buffer_bytes < c.lower_bytes ||
      c.init_buffer_bytes > c.upper_bytes) {
    throw std::invalid_argument("tuner: init_buffer_bytes out of bounds");
  }
  if (c.measure_steps < 1) {
    throw std::invalid_argument("tuner: measure_steps must be >= 1");
  }
  if (c.max_trials < 1) {
    throw std::invalid_argument("tuner: max_trials must be >= 1");
  }
}

namespace {

constexpr int kGridPoints = 512;
constexpr int kRefineIterations = 60;

double golden_refine(const GpPosterior& posterior, const TunerConfig& config,
                     double best_throughput, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = expected_improvement(posterior, c, best_throughput, config.xi);
  double fd = expected_improvement(posterior, d, best_throughput, config.xi);
  for (int i = 0; i < kRefineIterations; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = expected_improvement(posterior, c, best_throughput, config.xi);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = expected_improvement(posterior, d, best_throughput, config.xi);
    }
  }
  return fc >= fd ? c : d;
}

class SearchLog {
 public:
  explicit SearchLog(const TunerConfig& config) : config_(config) {}

  // Evaluates the objective measure_steps times at a whole-byte buffer and
  // records the averaged observation. Returns false on failure.
  bool evaluate(const Objective& objective, double buffer_bytes) {
    const double x = std::clamp(std::round(buffer_bytes), config_.lower_bytes,
                                config_.upper_bytes);
    TrialRecord record;
    record.trial = static_cast<int>(trace_.size()) + 1;
    record.buffer_bytes = x;
    try {
      double sum = 0.0;
      for (int s = 0; s < config_.measure_steps; ++s) sum += objective(x);
      record.throughput = sum / config_.measure_steps;
      record.ok = true;
    } catch (const std::exception&) {
      record.throughput = std::numeric_limits<double>::quiet_NaN();
      record.ok = false;
    }
    if (record.ok) {
      observations_.push_back({x, record.throughput, config_.measure_steps});
      best_ = std::max(best_, record.throughput);
      consecutive_failures_ = 0;
    } else {
      ++consecutive_failures_;
    }
    record.cumulative_best = best_;
    trace_.push_back(record);
    return record.ok;
  }

  bool aborted() const { return consecutive_failures_ >= 3; }
  const std::vector<Observation>& observations() const { return observations_; }

  TuneResult finish() && {
    if (observations_.empty()) {
      throw std::runtime_error("tuner: no successful observations");
    }
    TuneResult result;
    result.trace = std::move(trace_);
    result.best_throughput = best_;
    for (const Observation& o : observations_) {
      if (o.throughput == best_) {
        result.best_buffer_bytes = o.buffer_bytes;
        break;
      }
    }
    return result;
  }

 private:
  const TunerConfig& config_;
  std::vector<TrialRecord> trace_;
  std::vector<Observation> observations_;
  double best_ = -std::numeric_limits<double>::infinity();
  int consecutive_failures_ = 0;
};

}  // namespace

double suggest_next(const GpPosterior& posterior, const TunerConfig& config) {
  validate(config);
  const double lo = config.lower_bytes;
  const double hi = config.upper_bytes;
  const double best = posterior.best_throughput();

  const double step = (hi - lo) / (kGridPoints - 1);
  int best_index = 0;
  double best_ei = -1.0;
  double best_ei_var = -1.0;
  double best_var = -1.0;
  int var_index = 0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = lo + step * i;
    const double ei = expected_improvement(posterior, x, best, config.xi);
    const double var = posterior.normalized_variance(x);
    // Ties go to the higher-variance candidate, then the lower buffer size
    // (the ascending scan keeps the first hit).
    if (ei > best_ei || (ei == best_ei && var > best_ei_var)) {
      best_ei = ei;
      best_ei_var = var;
      best_index = i;
    }
    if (var > best_var) {
      best_var = var;
      var_index = i;
    }
  }
  if (best_ei <= 0.0) {
    // Converged posterior: explore the most uncertain candidate instead.
    return lo + step * var_index;
  }
  const double cell_lo = lo + step * std::max(0, best_index - 1);
  const double cell_hi = lo + step * std::min(kGridPoints - 1, best_index + 1);
  const double refined =
      golden_refine(posterior, config, best, cell_lo, cell_hi);
  const double refined_ei =
      expected_improvement(posterior, refined, best, config.xi);
  return refined_ei > best_ei ? refined : lo + step * best_index;
}

TuneResult tune(const Objective& objective, const TunerConfig& config) {
  validate(config);
  SearchLog log(config);

  log.evaluate(objective, config.init_buffer_bytes);
  // Deterministic probes used only while no evaluation has succeeded yet.
  const double fallback[] = {0.5 * (config.lower_bytes + config.upper_bytes),
                             config.lower_bytes +
                                 0.75 * (config.upper_bytes - config.lower_bytes),
                             config.lower_bytes +
                                 0.25 * (config.upper_bytes - config.lower_bytes)};
  int fallback_at = 0;

  for (int trial = 0; trial < config.max_trials && !log.aborted(); ++trial) {
    double next;
    if (log.observations().empty()) {
      next = fallback[fallback_at % 3];
      ++fallback_at;
    } else {
      const GpPosterior posterior =
          gp_fit(log.observations(), config.gp, config.lower_bytes,
                 config.upper_bytes);
      next = suggest_next(posterior, config);
    }
    log.evaluate(objective, next);
  }
  return std::move(log).finish();
}

TuneResult random_search(const Objective& objective,
                         const TunerConfig& config) {
  validate(config);
  SearchLog log(config);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(config.lower_bytes,
                                              config.upper_bytes);
  for (int trial = 0; trial < config.max_trials && !log.aborted(); ++trial) {
    log.evaluate(objective, dist(rng));
  }
  return std::move(log).finish();
}

TuneResult grid_search(const Objective& objective, const TunerConfig& config) {
  validate(config);
  SearchLog log(config);
  const double width =
      (config.upper_bytes - config.lower_bytes) / config.max_trials;
  for (int i = 0; i < config.max_trials && !log.aborted(); ++i) {
    log.evaluate(objective, config.lower_bytes + (i + 0.5) * width);
  }
  return std::move(log).finish();
}

}  // namespace dearsim
