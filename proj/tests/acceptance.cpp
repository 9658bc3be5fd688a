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

// End-to-end verification suite. Each numbered criterion prints one
// PASS/FAIL line; the exit code is the number of failures.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "dearsim/analysis.hpp"
#include "dearsim/collective.hpp"
#include "dearsim/cost_model.hpp"
#include "dearsim/simulate.hpp"
#include "dearsim/tuner.hpp"
#include "helpers.hpp"

using namespace dearsim;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

double ratio_of(const TaskGraph& graph, const Timeline& timeline) {
  const double f = graph.model.total_ff_seconds();
  const double b = graph.model.total_bp_seconds();
  const double bytes = static_cast<double>(graph.model.total_bytes());
  const double rs = reduce_scatter_time(bytes, graph.cluster);
  const double speedup = static_cast<double>(graph.cluster.workers) * (f + b) /
                         timeline.iteration_seconds;
  return speedup / max_speedup(f, b, rs, rs, graph.cluster.workers);
}

// Shared across criteria: the worst speedup-to-ceiling ratio and breakdown
// residual seen over every simulated scenario.
double worst_ratio = 0.0;
double worst_breakdown_residual = 0.0;

void observe(const TaskGraph& graph, const Timeline& timeline) {
  worst_ratio = std::max(worst_ratio, ratio_of(graph, timeline));
  const Breakdown b = breakdown(timeline, graph.model);
  worst_breakdown_residual =
      std::max(worst_breakdown_residual,
               std::abs(b.ff_seconds + b.bp_seconds + b.exposed_comm_seconds -
                        b.iteration_seconds));
}

ModelSpec uniform_model(int layers, double t_ff, double t_bp,
                        std::int64_t bytes_per_layer) {
  ModelSpec m;
  m.name = "uniform";
  for (int l = 1; l <= layers; ++l) {
    m.layers.push_back({l, bytes_per_layer / 4, 4, t_ff, t_bp});
  }
  return m;
}

// ---------------------------------------------------------------------------

void criterion_1_decoupling_identity() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> bytes(0.0, 4e9);
  std::uniform_real_distribution<double> alpha(0.0, 1e-3);
  std::uniform_real_distribution<double> beta(0.0, 1e-8);
  std::uniform_int_distribution<int> workers(1, 1024);
  int exact = 0;
  const int total = 1000;
  for (int i = 0; i < total; ++i) {
    const ClusterSpec c{"r", workers(rng), alpha(rng), beta(rng)};
    const double d = bytes(rng);
    const double rs = reduce_scatter_time(d, c);
    const double ag = all_gather_time(d, c);
    if (rs + ag == all_reduce_time(d, c) && rs == ag) ++exact;
  }
  report(1, "decoupling identity (rs + ag == ar, zero tolerance)",
         exact == total, fmt("%d/%d random (d,P,alpha,beta) tuples bit-exact",
                             exact, total));
}

void criterion_2_collective_oracle() {
  bool pass = true;
  double max_dev = 0.0;
  std::string first_failure;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  for (int p : {1, 2, 3, 4, 8, 16}) {
    for (Eigen::Index d :
         {Eigen::Index{1}, Eigen::Index{std::max(1, p - 1)}, Eigen::Index{p},
          Eigen::Index{p + 1}, Eigen::Index{1000}, Eigen::Index{100000}}) {
      std::vector<Vector> vectors(static_cast<std::size_t>(p));
      for (Vector& v : vectors) {
        v.resize(d);
        for (Eigen::Index i = 0; i < d; ++i) v(i) = dist(rng);
      }
      Vector expected = Vector::Zero(d);
      for (const Vector& v : vectors) expected += v;

      const ReduceScatterResult rs = ring_reduce_scatter(vectors);
      const AllGatherResult ag = ring_all_gather(rs.chunks, rs.ranges);
      if (rs.rounds != p - 1 || ag.rounds != p - 1) {
        pass = false;
        if (first_failure.empty()) first_failure = fmt("rounds at P=%d", p);
      }
      for (const Vector& v : ag.vectors) {
        for (Eigen::Index i = 0; i < d; ++i) {
          const double dev = std::abs(v(i) - expected(i)) /
                             std::max(1.0, std::abs(expected(i)));
          max_dev = std::max(max_dev, dev);
          if (dev > 1e-12) {
            pass = false;
            if (first_failure.empty()) {
              first_failure = fmt("deviation %g at P=%d d=%lld", dev, p,
                                  static_cast<long long>(d));
            }
          }
        }
        if (v != ag.vectors.front()) {
          pass = false;
          if (first_failure.empty()) first_failure = "replicas differ";
        }
      }
    }
  }
  // Replica bit-consistency through synchronous SGD steps.
  const int p = 8;
  const Eigen::Index d = 4097;
  Vector w0(d);
  for (Eigen::Index i = 0; i < d; ++i) w0(i) = dist(rng);
  std::vector<SgdState> states(p, {w0, 0.05});
  for (int step = 0; step < 3; ++step) {
    std::vector<Vector> grads(p);
    for (Vector& g : grads) {
      g.resize(d);
      for (Eigen::Index i = 0; i < d; ++i) g(i) = dist(rng);
    }
    states = sgd_step(states, grads);
    for (const SgdState& s : states) {
      if (s.weights != states.front().weights) {
        pass = false;
        if (first_failure.empty()) first_failure = "sgd replicas diverged";
      }
    }
  }
  report(2, "ring pair equals the direct sum; P-1 rounds; replicas identical",
         pass,
         pass ? fmt("max deviation %.3g (tolerance 1e-12), sgd replicas "
                    "bit-identical over 3 steps",
                    max_dev)
              : first_failure);
}

void criterion_3_calibration() {
  const Calibration cal =
      calibrate_alpha_beta({{1e6, 4.5e-3}, {5e5, 3.9e-3}}, 64);
  const ClusterSpec c{"10GbE", 64, cal.alpha, cal.beta};
  const double t1 = all_reduce_time(1e6, c);
  const double t2 = all_reduce_time(5e5, c);
  const double split = partitioned_all_reduce_time(1e6, 2, c);
  const bool pass = std::abs(t1 - 4.5e-3) <= 1e-3 * 4.5e-3 &&
                    std::abs(t2 - 3.9e-3) <= 1e-3 * 3.9e-3 &&
                    std::abs(split - 7.8e-3) <= 1e-2 * 7.8e-3 && split > t1;
  report(3, "calibration reproduces the measured cluster points", pass,
         fmt("alpha=%.4g beta=%.4g; ar(1MB)=%.4gms ar(500KB)=%.4gms "
             "split-in-2=%.4gms > %.4gms",
             cal.alpha, cal.beta, t1 * 1e3, t2 * 1e3, split * 1e3, t1 * 1e3));
}

void criterion_4_piecewise_savings() {
  const int layers = 200;
  const double t_ff = 5e-4;  // per layer; total 0.1 s
  const double total_ff = layers * t_ff;
  const std::int64_t layer_bytes = 1'000'000;
  const int workers = 16;
  const double alpha = 1e-6;

  bool pass = true;
  std::string detail;
  const double regimes[] = {0.5, 1.5, 5.0};
  const double expected_factor[] = {0.0, 0.5, 1.0};
  for (int i = 0; i < 3; ++i) {
    const double target_ag = regimes[i] * total_ff;
    // Solve beta so the summed per-layer all-gather time hits the target.
    const double total_bytes = static_cast<double>(layers * layer_bytes);
    const double beta = (target_ag - layers * (workers - 1) * alpha) *
                        workers / ((workers - 1) * total_bytes);
    const ClusterSpec c{"synthetic", workers, alpha, beta};
    const ModelSpec m = uniform_model(layers, t_ff, 2.0 * t_ff, layer_bytes);

    const TaskGraph g_wfbp = build_graph(m, {PolicyKind::Wfbp}, c);
    const TaskGraph g_dear = build_graph(m, {PolicyKind::Dear}, c);
    const Timeline t_wfbp = simulate(g_wfbp);
    const Timeline t_dear = simulate(g_dear);
    observe(g_wfbp, t_wfbp);
    observe(g_dear, t_dear);

    const double savings =
        t_wfbp.iteration_seconds - t_dear.iteration_seconds;
    const double expected = expected_factor[i] * total_ff;
    const double error = std::abs(savings - expected);
    if (error > 0.05 * total_ff) pass = false;
    detail += fmt("%st_ag/t_ff=%.1f: savings %.4fs vs %.4fs (err %.1f%% of "
                  "t_ff)",
                  i == 0 ? "" : "; ", regimes[i], savings, expected,
                  100.0 * error / total_ff);
  }
  report(4, "piecewise baseline-minus-decoupled savings at 200 layers", pass,
         detail);
}

void criterion_5_dominance() {
  std::mt19937_64 rng(505);
  const int scenarios = 200;
  int unfused_ok = 0;
  int fused_ok = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < scenarios; ++i) {
    const auto s = dearsim::testing::random_scenario(rng, 10, 300);
    const std::int64_t buffer = static_cast<std::int64_t>(
        dearsim::testing::rand_log(rng, 1e6, 1e8));

    const TaskGraph g_wfbp = build_graph(s.model, {PolicyKind::Wfbp}, s.cluster);
    const TaskGraph g_dear = build_graph(s.model, {PolicyKind::Dear}, s.cluster);
    PolicySpec wf{PolicyKind::WfbpFused};
    wf.fusion_buffer_bytes = buffer;
    PolicySpec df{PolicyKind::DearFused};
    df.fusion_buffer_bytes = buffer;
    const TaskGraph g_wfbp_f = build_graph(s.model, wf, s.cluster);
    const TaskGraph g_dear_f = build_graph(s.model, df, s.cluster);

    const Timeline t_wfbp = simulate(g_wfbp);
    const Timeline t_dear = simulate(g_dear);
    const Timeline t_wfbp_f = simulate(g_wfbp_f);
    const Timeline t_dear_f = simulate(g_dear_f);
    observe(g_wfbp, t_wfbp);
    observe(g_dear, t_dear);
    observe(g_wfbp_f, t_wfbp_f);
    observe(g_dear_f, t_dear_f);

    if (t_dear.iteration_seconds <= t_wfbp.iteration_seconds + 1e-9) {
      ++unfused_ok;
    } else {
      worst_gap = std::max(
          worst_gap, t_dear.iteration_seconds - t_wfbp.iteration_seconds);
    }
    if (t_dear_f.iteration_seconds <= t_wfbp_f.iteration_seconds + 1e-9) {
      ++fused_ok;
    } else {
      worst_gap = std::max(worst_gap, t_dear_f.iteration_seconds -
                                          t_wfbp_f.iteration_seconds);
    }
  }
  const bool pass = unfused_ok == scenarios && fused_ok == scenarios;
  report(5, "decoupled pipeline never loses to WFBP (matched buffers)", pass,
         pass ? fmt("%d/%d unfused and %d/%d fused scenarios within 1e-9",
                    unfused_ok, scenarios, fused_ok, scenarios)
              : fmt("%d/%d unfused, %d/%d fused; worst excess %.3g s",
                    unfused_ok, scenarios, fused_ok, scenarios, worst_gap));
}

void criterion_6_speedup_bound() {
  // Aggregated over every scenario simulated in criteria 4 and 5.
  bool pass = worst_ratio <= 1.0 + 1e-9;

  // Boundary case: communication fully hidden on both sides gives exactly P
  // (the 64-worker DenseNet-201 configuration reaches its full 64).
  const Calibration cal =
      calibrate_alpha_beta({{1e6, 4.5e-3}, {5e5, 3.9e-3}}, 64);
  const ClusterSpec c{"10GbE", 64, cal.alpha, cal.beta};
  const ModelSpec m = preset_model("densenet201", 10.0, 2.0);
  const SpeedupReport r = report_for(m, c, {PolicyKind::Dear});
  const bool hidden = r.t_rs <= r.t_bp && r.t_ag <= r.t_ff;
  if (!hidden || r.s_max != 64.0) pass = false;

  report(6, "simulated speedup never exceeds the closed-form ceiling", pass,
         fmt("worst ratio %.12f over all scenarios; hidden-comm boundary "
             "s_max = %g (expect exactly 64)",
             worst_ratio, r.s_max));
}

void criterion_7_tuner_efficiency() {
  const Calibration cal =
      calibrate_alpha_beta({{1e6, 4.5e-3}, {5e5, 3.9e-3}}, 64);
  const ClusterSpec cluster{"10GbE", 64, cal.alpha, cal.beta};
  const ModelSpec model =
      preset_model("densenet201", 0.05, 2.0, ParamProfile::Imbalanced);
  const double samples = 2048.0;  // 32 per worker
  const Objective objective = [&](double buffer_bytes) {
    PolicySpec p{PolicyKind::DearFused};
    p.fusion_buffer_bytes =
        static_cast<std::int64_t>(std::llround(buffer_bytes));
    return throughput(model, p, cluster, samples);
  };

  TunerConfig grid_cfg;
  grid_cfg.max_trials = 100;
  const TuneResult grid = grid_search(objective, grid_cfg);
  const double target = 0.97 * grid.best_throughput;

  const auto trials_to_target = [&](const TuneResult& r) {
    for (const TrialRecord& t : r.trace) {
      if (t.ok && t.throughput >= target) return t.trial;
    }
    return 1000;  // never reached
  };
  const auto median = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };

  std::vector<int> bo_trials, random_trials;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TunerConfig cfg;
    cfg.seed = seed;
    bo_trials.push_back(trials_to_target(tune(objective, cfg)));
    random_trials.push_back(trials_to_target(random_search(objective, cfg)));
  }
  const int bo_med = median(bo_trials);
  const int rnd_med = median(random_trials);
  const bool pass = bo_med <= 20 && rnd_med >= 2 * bo_med;
  report(7, "BO reaches 3% of the grid optimum fast; random search lags 2x",
         pass,
         fmt("grid best %.1f samples/s at %.1f MB; median trials-to-3%%: "
             "BO %d, random %d",
             grid.best_throughput, grid.best_buffer_bytes / 1e6, bo_med,
             rnd_med));
}

void criterion_8_breakdowns() {
  // Conservation residuals were collected by observe() over criteria 4-5.
  bool pass = worst_breakdown_residual <= 1e-9;

  // Zeroing the all-gather half exposes no more communication than zeroing
  // the reduce-scatter half when backprop is twice feed-forward.
  std::string detail =
      fmt("max |ff+bp+exposed-makespan| = %.3g;", worst_breakdown_residual);
  for (double comm_scale : {0.5, 1.0, 2.0}) {
    const double t_ff = 2e-3;
    const ModelSpec m = uniform_model(50, t_ff, 2.0 * t_ff, 4'000'000);
    ClusterSpec c{"c", 16, 1e-6, 0.0};
    c.beta = (comm_scale * t_ff / 15.0 - c.alpha) * 16.0 / 4e6;

    TaskGraph rs_only = build_graph(m, {PolicyKind::Dear}, c);
    zero_durations(rs_only, TaskKind::AllGather);
    TaskGraph ag_only = build_graph(m, {PolicyKind::Dear}, c);
    zero_durations(ag_only, TaskKind::ReduceScatter);
    const Breakdown rs_b = breakdown(simulate(rs_only), m);
    const Breakdown ag_b = breakdown(simulate(ag_only), m);
    if (rs_b.exposed_comm_seconds > ag_b.exposed_comm_seconds + 1e-12) {
      pass = false;
    }
    detail += fmt(" scale %.1f: RS-only %.2gms <= AG-only %.2gms;",
                  comm_scale, rs_b.exposed_comm_seconds * 1e3,
                  ag_b.exposed_comm_seconds * 1e3);
  }
  report(8, "breakdown conservation and RS/AG exposure asymmetry", pass,
         detail);
}

void criterion_9_out_of_scope() {
  report(9, "hardware-bound results are out of scope by design", true,
         "end-to-end cluster speedups, measured speedup rows and wall-clock "
         "tuning costs need real GPUs/networks; the property suites above "
         "stand in for them");
}

}  // namespace

int main() {
  criterion_1_decoupling_identity();
  criterion_2_collective_oracle();
  criterion_3_calibration();
  criterion_4_piecewise_savings();
  criterion_5_dominance();
  criterion_6_speedup_bound();
  criterion_7_tuner_efficiency();
  criterion_8_breakdowns();
  criterion_9_out_of_scope();
  if (failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures;
}
