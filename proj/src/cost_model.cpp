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

#include "dearsim/cost_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace dearsim {

namespace {

void check_message(double message_bytes) {
  if (!(message_bytes >= 0.0) || !std::isfinite(message_bytes)) {
    throw std::invalid_argument("message_bytes must be finite and >= 0");
  }
}

}  // namespace

double reduce_scatter_time(double message_bytes, const ClusterSpec& c) {
  check_message(message_bytes);
  validate(c);
  const double p = static_cast<double>(c.workers);
  return (p - 1.0) * (c.alpha + (message_bytes / p) * c.beta);
}

double all_gather_time(double message_bytes, const ClusterSpec& c) {
  return reduce_scatter_time(message_bytes, c);
}

double all_reduce_time(double message_bytes, const ClusterSpec& c) {
  return reduce_scatter_time(message_bytes, c) +
         all_gather_time(message_bytes, c);
}

double partitioned_all_reduce_time(double message_bytes, int n_parts,
                                   const ClusterSpec& c) {
  if (n_parts < 1) {
    throw std::invalid_argument("partitioned_all_reduce_time: n_parts >= 1");
  }
  check_message(message_bytes);
  const double part = message_bytes / static_cast<double>(n_parts);
  double total = 0.0;
  for (int i = 0; i < n_parts; ++i) total += all_reduce_time(part, c);
  return total;
}

CollectiveTiming time_collective(Collective collective, double message_bytes,
                                 const ClusterSpec& c) {
  double seconds = 0.0;
  switch (collective) {
    case Collective::ReduceScatter:
      seconds = reduce_scatter_time(message_bytes, c);
      break;
    case Collective::AllGather:
      seconds = all_gather_time(message_bytes, c);
      break;
    case Collective::AllReduce:
      seconds = all_reduce_time(message_bytes, c);
      break;
  }
  return {collective, message_bytes, seconds};
}

Calibration calibrate_alpha_beta(
    const std::vector<std::pair<double, double>>& measurements, int workers) {
  if (workers < 2) {
    throw std::invalid_argument("calibrate_alpha_beta: workers must be >= 2");
  }
  if (measurements.size() < 2) {
    throw std::invalid_argument(
        "calibrate_alpha_beta: need at least 2 measurements");
  }
  bool distinct = false;
  for (const auto& [d, t] : measurements) {
    if (!(d >= 0.0) || !std::isfinite(d) || !std::isfinite(t)) {
      throw std::invalid_argument(
          "calibrate_alpha_beta: measurements must be finite, sizes >= 0");
    }
    if (d != measurements.front().first) distinct = true;
  }
  if (!distinct) {
    throw std::invalid_argument("rank-deficient calibration: all message "
                                "sizes are identical");
  }

  // t_i = 2(P-1) * alpha + (2(P-1) d_i / P) * beta, solved in least squares
  // with the size column rescaled to keep the system well conditioned.
  const auto n = static_cast<Eigen::Index>(measurements.size());
  const double p = static_cast<double>(workers);
  const double startup_coeff = 2.0 * (p - 1.0);
  double max_size = 0.0;
  for (const auto& m : measurements) max_size = std::max(max_size, m.first);
  const double size_scale = max_size > 0.0 ? max_size : 1.0;

  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [d, seconds] = measurements[static_cast<std::size_t>(i)];
    A(i, 0) = startup_coeff;
    A(i, 1) = startup_coeff * (d / p) / size_scale;
    t(i) = seconds;
  }
  const Eigen::Vector2d x = A.colPivHouseholderQr().solve(t);

  Calibration result;
  result.alpha = x(0);
  result.beta = x(1) / size_scale;
  result.clamped = false;
  if (result.alpha < 0.0) {
    result.alpha = 0.0;
    result.clamped = true;
  }
  if (result.beta < 0.0) {
    result.beta = 0.0;
    result.clamped = true;
  }
  return result;
}

}  // namespace dearsim
