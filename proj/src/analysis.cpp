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

#include "dearsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dearsim {

namespace {

void check_duration(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) +
                                " must be finite and >= 0");
  }
}

}  // namespace

double max_speedup(double t_ff, double t_bp, double t_rs, double t_ag,
                   int workers) {
  check_duration(t_ff, "t_ff");
  check_duration(t_bp, "t_bp");
  check_duration(t_rs, "t_rs");
  check_duration(t_ag, "t_ag");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const double denominator =
      std::max(t_ff, t_ag) + std::max(t_bp, t_rs);
  if (!(denominator > 0.0)) {
    throw std::invalid_argument(
        "max_speedup: denominator is zero (no compute and no communication)");
  }
  return static_cast<double>(workers) * ((t_ff + t_bp) / denominator);
}

TheoreticalTimes theoretical_times(double t_ff, double t_bp, double t_rs,
                                   double t_ag) {
  check_duration(t_ff, "t_ff");
  check_duration(t_bp, "t_bp");
  check_duration(t_rs, "t_rs");
  check_duration(t_ag, "t_ag");
  TheoreticalTimes t;
  t.dear = std::max(t_ff, t_ag) + std::max(t_bp, t_rs);
  t.baseline = t_ff + std::max(t_bp, t_rs + t_ag);
  return t;
}

double theoretical_gap(double t_ff, double t_ag) {
  if (!(t_ff > 0.0)) {
    throw std::invalid_argument("theoretical_gap: t_ff must be > 0");
  }
  check_duration(t_ag, "t_ag");
  double gap;
  if (t_ag <= t_ff) {
    gap = 0.0;
  } else if (t_ag <= 2.0 * t_ff) {
    gap = t_ag - t_ff;
  } else {
    gap = t_ff;
  }
  // The piecewise form is exactly baseline - dear under t_bp = 2 t_ff,
  // t_rs = t_ag; anything beyond rounding noise is a logic error.
  const TheoreticalTimes t = theoretical_times(t_ff, 2.0 * t_ff, t_ag, t_ag);
  const double recomputed = t.baseline - t.dear;
  if (std::abs(recomputed - gap) > 1e-12 * std::max(1.0, t.baseline)) {
    throw std::logic_error("theoretical_gap: piecewise form disagrees");
  }
  return gap;
}

Breakdown breakdown(const Timeline& timeline, const ModelSpec& model) {
  Breakdown b;
  b.ff_seconds = model.total_ff_seconds();
  b.bp_seconds = model.total_bp_seconds();
  b.iteration_seconds = timeline.iteration_seconds;
  b.exposed_comm_seconds =
      timeline.iteration_seconds - b.ff_seconds - b.bp_seconds;
  const double noise = 1e-9 * std::max(1.0, timeline.iteration_seconds);
  if (b.exposed_comm_seconds < 0.0) {
    if (b.exposed_comm_seconds < -noise) {
      throw std::runtime_error(
          "breakdown: makespan smaller than compute totals");
    }
    b.exposed_comm_seconds = 0.0;
  }
  return b;
}

CommTotals comm_totals(const TaskGraph& graph) {
  CommTotals totals;
  for (const Task& t : graph.tasks) {
    switch (t.kind) {
      case TaskKind::ReduceScatter:
        totals.t_rs += t.duration;
        break;
      case TaskKind::AllGather:
        totals.t_ag += t.duration;
        break;
      case TaskKind::AllReduce:
        totals.t_rs += 0.5 * t.duration;
        totals.t_ag += 0.5 * t.duration;
        break;
      default:
        break;
    }
  }
  totals.t_ar = totals.t_rs + totals.t_ag;
  return totals;
}

SpeedupReport report_for(const ModelSpec& model, const ClusterSpec& cluster,
                         const PolicySpec& policy) {
  const TaskGraph graph = build_graph(model, policy, cluster);
  const Timeline timeline = simulate(graph);

  SpeedupReport report;
  report.policy = to_string(policy.kind);
  report.workers = cluster.workers;
  report.t_ff = model.total_ff_seconds();
  report.t_bp = model.total_bp_seconds();
  // Communication terms are properties of the model and cluster (the whole
  // gradient moved as one collective), so every policy is measured against
  // the same ceiling.
  const double bytes = static_cast<double>(model.total_bytes());
  report.t_rs = reduce_scatter_time(bytes, cluster);
  report.t_ag = all_gather_time(bytes, cluster);
  report.t_ar = report.t_rs + report.t_ag;
  report.iteration_seconds = timeline.iteration_seconds;
  const double single_worker = report.t_ff + report.t_bp;
  report.simulated_speedup = static_cast<double>(cluster.workers) *
                             single_worker / timeline.iteration_seconds;
  report.s_max =
      max_speedup(report.t_ff, report.t_bp, report.t_rs, report.t_ag,
                  cluster.workers);
  report.ratio = report.simulated_speedup / report.s_max;
  return report;
}

std::vector<SpeedupReport> compare_policies(
    const ModelSpec& model, const ClusterSpec& cluster,
    const std::vector<PolicySpec>& policies) {
  validate(model);
  validate(cluster);

  std::vector<SpeedupReport> reports;
  SpeedupReport baseline;
  baseline.policy = "SINGLE_WORKER";
  baseline.workers = 1;
  baseline.t_ff = model.total_ff_seconds();
  baseline.t_bp = model.total_bp_seconds();
  baseline.iteration_seconds = baseline.t_ff + baseline.t_bp;
  baseline.s_max = 1.0;
  baseline.simulated_speedup = 1.0;
  baseline.ratio = 1.0;
  reports.push_back(baseline);

  for (const PolicySpec& policy : policies) {
    reports.push_back(report_for(model, cluster, policy));
  }
  return reports;
}

}  // namespace dearsim
