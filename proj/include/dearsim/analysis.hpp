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
#include <vector>

#include "dearsim/simulate.hpp"

namespace dearsim {

/// Closed-form speedup ceiling and the simulated speedup against it for one
/// policy. Compute terms are the model's totals; t_rs/t_ag are the cost of
/// moving the whole gradient as one collective on this cluster (the same
/// ceiling for every policy), with t_ar == t_rs + t_ag always.
struct SpeedupReport {
  std::string policy;
  int workers = 1;
  double t_ff = 0.0;
  double t_bp = 0.0;
  double t_rs = 0.0;
  double t_ag = 0.0;
  double t_ar = 0.0;
  double s_max = 1.0;
  double simulated_speedup = 1.0;
  double ratio = 1.0;  // simulated_speedup / s_max
  double iteration_seconds = 0.0;
};

/// Maximum achievable speedup over a single worker for any schedule that
/// overlaps reduce-scatter with backprop and all-gather with feed-forward:
///
///   P (t_ff + t_bp) / (t_ff + t_bp + t_ar - min{t_rs,t_bp} - min{t_ag,t_ff})
///
/// with t_ar = t_rs + t_ag. The denominator is evaluated as
/// max{t_ff, t_ag} + max{t_bp, t_rs} (the same quantity), so the fully
/// hidden case t_rs <= t_bp, t_ag <= t_ff yields exactly P.
double max_speedup(double t_ff, double t_bp, double t_rs, double t_ag,
                   int workers);

struct TheoreticalTimes {
  double dear = 0.0;      // max{t_ff, t_ag} + max{t_bp, t_rs}
  double baseline = 0.0;  // t_ff + max{t_bp, t_rs + t_ag}
};

/// Per-iteration lower bounds under perfect overlap for the decoupled
/// pipeline and for backprop-only overlap.
TheoreticalTimes theoretical_times(double t_ff, double t_bp, double t_rs,
                                   double t_ag);

/// Iteration-time gap baseline - dear under t_ar = 2 t_rs = 2 t_ag and
/// t_bp = 2 t_ff:  0 when t_ag <= t_ff;  t_ag - t_ff up to 2 t_ff;  t_ff
/// beyond. Cross-checked against theoretical_times internally.
double theoretical_gap(double t_ff, double t_ag);

struct Breakdown {
  double ff_seconds = 0.0;
  double bp_seconds = 0.0;
  double exposed_comm_seconds = 0.0;  // communication not hidden by compute
  double iteration_seconds = 0.0;
};

/// Splits a simulated iteration into compute totals and exposed (non-
/// overlapped) communication; ff + bp + exposed == makespan.
Breakdown breakdown(const Timeline& timeline, const ModelSpec& model);

/// Communication totals of a built graph, split into reduce-scatter-like
/// and all-gather-like halves (all-reduce tasks count half toward each).
/// Negotiation latency is excluded.
struct CommTotals {
  double t_rs = 0.0;
  double t_ag = 0.0;
  double t_ar = 0.0;
};
CommTotals comm_totals(const TaskGraph& graph);

SpeedupReport report_for(const ModelSpec& model, const ClusterSpec& cluster,
                         const PolicySpec& policy);

/// One report per policy, preceded by the single-worker compute baseline
/// used as the speedup denominator.
std::vector<SpeedupReport> compare_policies(
    const ModelSpec& model, const ClusterSpec& cluster,
    const std::vector<PolicySpec>& policies);

}  // namespace dearsim
