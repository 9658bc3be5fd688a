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

// Command-line surface: simulate one policy, compare policies, tune the
// fusion buffer, calibrate the cost model, verify the ring collectives on
// data, and evaluate the closed-form speedup bounds.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dearsim/analysis.hpp"
#include "dearsim/collective.hpp"
#include "dearsim/config.hpp"
#include "dearsim/cost_model.hpp"
#include "dearsim/simulate.hpp"
#include "dearsim/trace_export.hpp"
#include "dearsim/tuner.hpp"

namespace {

using namespace dearsim;

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw std::invalid_argument("cannot open output file " + out_path);
  }
  out << content;
}

PolicySpec policy_for_kind(PolicyKind kind, const RunConfig& config) {
  PolicySpec p = config.policy.value_or(PolicySpec{});
  p.kind = kind;
  validate(p);
  return p;
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& format) {
  const RunConfig config = load_config(config_path);
  if (!config.policy.has_value()) {
    throw std::invalid_argument(
        "config: missing required section \"policy\" for simulate");
  }
  const TaskGraph graph =
      build_graph(config.model, *config.policy, config.cluster);
  const Timeline timeline = simulate(graph);
  const Breakdown b = breakdown(timeline, config.model);
  const CommTotals comm = comm_totals(graph);

  std::ostringstream summary;
  summary << "policy: " << to_string(config.policy->kind) << "\n"
          << "workers: " << config.cluster.workers << "\n"
          << "tasks: " << graph.tasks.size() << "\n"
          << "iteration_seconds: " << format_double(timeline.iteration_seconds)
          << "\n"
          << "ff_seconds: " << format_double(b.ff_seconds) << "\n"
          << "bp_seconds: " << format_double(b.bp_seconds) << "\n"
          << "exposed_comm_seconds: " << format_double(b.exposed_comm_seconds)
          << "\n"
          << "scheduled_rs_seconds: " << format_double(comm.t_rs) << "\n"
          << "scheduled_ag_seconds: " << format_double(comm.t_ag) << "\n"
          << "scheduled_ar_seconds: " << format_double(comm.t_ar) << "\n";
  std::cout << summary.str();

  if (!out_path.empty()) {
    if (format == "csv") {
      write_output(timeline_csv(graph, timeline), out_path);
    } else if (format == "trace") {
      write_output(chrome_trace_string(graph, timeline) + "\n", out_path);
    } else {
      throw std::invalid_argument("simulate: format must be trace or csv");
    }
    std::cerr << "wrote " << format << " to " << out_path << "\n";
  }
  return 0;
}

int run_compare(const std::string& config_path, const std::string& out_path,
                const std::string& format, const std::string& kinds_arg) {
  const RunConfig config = load_config(config_path);
  std::vector<PolicySpec> policies = config.policies;
  if (policies.empty()) {
    std::vector<std::string> kinds;
    std::stringstream ss(kinds_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) kinds.push_back(item);
    }
    for (const std::string& kind : kinds) {
      policies.push_back(
          policy_for_kind(policy_kind_from_string(kind), config));
    }
  }
  if (policies.empty()) {
    throw std::invalid_argument(
        "compare: no policies (use --policies or a \"policies\" section)");
  }
  const std::vector<SpeedupReport> reports =
      compare_policies(config.model, config.cluster, policies);
  if (format == "csv") {
    write_output(reports_csv(reports), out_path);
  } else if (format == "md") {
    write_output(reports_markdown(reports), out_path);
  } else {
    throw std::invalid_argument("compare: format must be csv or md");
  }
  return 0;
}

int run_tune(const std::string& config_path, const std::string& out_path,
             const std::string& method, std::optional<std::uint64_t> seed) {
  const RunConfig config = load_config(config_path);
  TunerConfig tuner = config.tuner;
  if (seed.has_value()) tuner.seed = *seed;

  PolicySpec policy = config.policy.value_or(PolicySpec{});
  policy.kind = PolicyKind::DearFused;
  const ModelSpec& model = config.model;
  const ClusterSpec& cluster = config.cluster;
  const double samples = config.samples_per_iteration;
  const Objective objective = [&](double buffer_bytes) {
    PolicySpec p = policy;
    p.fusion_buffer_bytes = static_cast<std::int64_t>(std::llround(buffer_bytes));
    return throughput(model, p, cluster, samples);
  };

  TuneResult result;
  if (method == "bo") {
    result = tune(objective, tuner);
  } else if (method == "random") {
    result = random_search(objective, tuner);
  } else if (method == "grid") {
    result = grid_search(objective, tuner);
  } else {
    throw std::invalid_argument("tune: method must be bo, random or grid");
  }

  std::cout << "method: " << method << "\n"
            << "trials: " << result.trace.size() << "\n"
            << "best_buffer_bytes: " << format_double(result.best_buffer_bytes)
            << "\n"
            << "best_throughput: " << format_double(result.best_throughput)
            << "\n";
  if (!out_path.empty()) {
    write_output(tuner_trace_csv(result), out_path);
    std::cerr << "wrote trace to " << out_path << "\n";
  }
  return 0;
}

int run_calibrate(int workers, const std::vector<std::string>& points,
                  const std::string& out_path, const std::string& format) {
  std::vector<std::pair<double, double>> measurements;
  for (const std::string& point : points) {
    const auto eq = point.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("calibrate: --point expects BYTES=SECONDS, got '" +
                                  point + "'");
    }
    measurements.emplace_back(std::stod(point.substr(0, eq)),
                              std::stod(point.substr(eq + 1)));
  }
  const Calibration c = calibrate_alpha_beta(measurements, workers);
  if (c.clamped) {
    std::cerr << "warning: least-squares solution clamped to >= 0\n";
  }
  std::ostringstream out;
  if (format == "csv") {
    out << "alpha,beta,clamped\n"
        << format_double(c.alpha) << ',' << format_double(c.beta) << ','
        << (c.clamped ? 1 : 0) << '\n';
  } else {
    out << "alpha: " << format_double(c.alpha) << "\n"
        << "beta: " << format_double(c.beta) << "\n";
  }
  write_output(out.str(), out_path);
  return 0;
}

int run_collective_check(int workers, std::int64_t elems, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Vector> vectors(static_cast<std::size_t>(workers));
  for (auto& v : vectors) {
    v.resize(elems);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = dist(rng);
  }

  Vector expected = Vector::Zero(elems);
  for (const Vector& v : vectors) expected += v;

  const ReduceScatterResult rs = ring_reduce_scatter(vectors);
  const AllGatherResult ag = ring_all_gather(rs.chunks, rs.ranges);

  double max_dev = 0.0;
  bool replicas_identical = true;
  for (const Vector& v : ag.vectors) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double dev = std::abs(v(i) - expected(i)) /
                         std::max(1.0, std::abs(expected(i)));
      max_dev = std::max(max_dev, dev);
    }
    if (v != ag.vectors.front()) replicas_identical = false;
  }

  const bool rounds_ok =
      rs.rounds == workers - 1 && ag.rounds == workers - 1;
  const bool pass = rounds_ok && replicas_identical && max_dev <= 1e-12;
  std::cout << (pass ? "PASS" : "FAIL") << ": workers=" << workers
            << " elems=" << elems << " seed=" << seed
            << " rounds=" << rs.rounds << "+" << ag.rounds
            << " max_deviation=" << format_double(max_dev)
            << (replicas_identical ? "" : " (replicas differ)") << "\n";
  return pass ? 0 : 2;
}

int run_analyze(double t_ff, double t_bp, double t_rs, double t_ag,
                int workers) {
  const double s_max = max_speedup(t_ff, t_bp, t_rs, t_ag, workers);
  const TheoreticalTimes t = theoretical_times(t_ff, t_bp, t_rs, t_ag);
  char line[160];
  std::snprintf(line, sizeof(line), "t_ar: %.6g\n", t_rs + t_ag);
  std::cout << line;
  std::snprintf(line, sizeof(line), "s_max: %.6g\n", s_max);
  std::cout << line;
  std::snprintf(line, sizeof(line), "t_dear: %.6g\n", t.dear);
  std::cout << line;
  std::snprintf(line, sizeof(line), "t_baseline: %.6g\n", t.baseline);
  std::cout << line;
  std::snprintf(line, sizeof(line), "savings: %.6g\n", t.baseline - t.dear);
  std::cout << line;
  if (t_rs == t_ag && t_bp == 2.0 * t_ff && t_ff > 0.0) {
    std::snprintf(line, sizeof(line), "piecewise_gap: %.6g\n",
                  theoretical_gap(t_ff, t_ag));
    std::cout << line;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator and analysis toolkit for gradient "
               "communication scheduling in data-parallel training"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;

  auto* sim = app.add_subcommand(
      "simulate", "Simulate one policy and report its timeline breakdown");
  sim->add_option("--config", config_path, "JSON experiment config")
      ->required();
  sim->add_option("--out", out_path, "Write the timeline to this file");
  std::string sim_format = "trace";
  sim->add_option("--format", sim_format, "Timeline format: trace or csv");

  auto* cmp = app.add_subcommand(
      "compare", "Simulate several policies and tabulate speedups");
  cmp->add_option("--config", config_path, "JSON experiment config")
      ->required();
  cmp->add_option("--out", out_path, "Write the table to this file");
  std::string cmp_format = "md";
  cmp->add_option("--format", cmp_format, "Table format: csv or md");
  std::string cmp_kinds = "WFBP,DEAR";
  cmp->add_option("--policies", cmp_kinds,
                  "Comma-separated policy kinds (ignored when the config has "
                  "a \"policies\" section)");

  auto* tun = app.add_subcommand(
      "tune", "Search the fusion buffer size for DEAR_FUSED throughput");
  tun->add_option("--config", config_path, "JSON experiment config")
      ->required();
  tun->add_option("--out", out_path, "Write the trial trace CSV here");
  std::string tune_method = "bo";
  tun->add_option("--method", tune_method, "bo, random or grid");
  std::uint64_t tune_seed = 0;
  auto* seed_opt = tun->add_option("--seed", tune_seed, "Seed override");

  auto* cal = app.add_subcommand(
      "calibrate", "Fit alpha/beta from measured all-reduce timings");
  int cal_workers = 0;
  cal->add_option("--workers", cal_workers, "Worker count")->required();
  std::vector<std::string> cal_points;
  cal->add_option("--point", cal_points,
                  "Measurement BYTES=SECONDS (repeat >= 2 times)")
      ->required();
  std::string cal_format = "text";
  cal->add_option("--format", cal_format, "text or csv");
  cal->add_option("--out", out_path, "Write the result to this file");

  auto* chk = app.add_subcommand(
      "collective-check",
      "Run the ring collectives on data and verify against a direct sum");
  int chk_workers = 0;
  std::int64_t chk_elems = 0;
  std::uint64_t chk_seed = 1;
  chk->add_option("--workers", chk_workers, "Worker count")->required();
  chk->add_option("--elems", chk_elems, "Vector length")->required();
  chk->add_option("--seed", chk_seed, "RNG seed");

  auto* ana = app.add_subcommand(
      "analyze", "Closed-form speedup bound and iteration-time gaps");
  double a_tff = 0, a_tbp = 0, a_trs = 0, a_tag = 0;
  int a_workers = 0;
  ana->add_option("--tff", a_tff, "Feed-forward seconds")->required();
  ana->add_option("--tbp", a_tbp, "Backprop seconds")->required();
  ana->add_option("--trs", a_trs, "Reduce-scatter seconds")->required();
  ana->add_option("--tag", a_tag, "All-gather seconds")->required();
  ana->add_option("--workers", a_workers, "Worker count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed()) return run_simulate(config_path, out_path, sim_format);
    if (cmp->parsed()) {
      return run_compare(config_path, out_path, cmp_format, cmp_kinds);
    }
    if (tun->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = tune_seed;
      return run_tune(config_path, out_path, tune_method, seed);
    }
    if (cal->parsed()) {
      return run_calibrate(cal_workers, cal_points, out_path, cal_format);
    }
    if (chk->parsed()) {
      return run_collective_check(chk_workers, chk_elems, chk_seed);
    }
    if (ana->parsed()) {
      return run_analyze(a_tff, a_tbp, a_trs, a_tag, a_workers);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
