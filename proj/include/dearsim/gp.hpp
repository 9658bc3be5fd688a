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

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <vector>

namespace dearsim {

/// One throughput measurement at a fusion buffer size.
struct Observation {
  double buffer_bytes = 0.0;
  double throughput = 0.0;   // samples/second, averaged over steps_averaged
  int steps_averaged = 1;
};

/// Squared-exponential kernel hyperparameters, stated in normalized space
/// (inputs scaled to [0,1], outputs standardized). Fixed rather than fitted
/// so the tuner is deterministic; override via config if needed.
struct GpHyperParams {
  double lengthscale = 0.2;
  double signal_variance = 1.0;
  double noise_variance = 1e-6;
};

/// Exact Gaussian-process regression over (buffer size, throughput)
/// observations. Inputs are normalized to [0,1] over [lower, upper]; outputs
/// are standardized. The kernel system is solved by Cholesky with jitter
/// escalation (1e-10 .. 1e-6).
class GpPosterior {
 public:
  struct Prediction {
    double mean = 0.0;      // throughput units
    double variance = 0.0;  // throughput units squared, clamped >= 0
  };

  static GpPosterior fit(const std::vector<Observation>& observations,
                         const GpHyperParams& hyper, double lower_bytes,
                         double upper_bytes);

  Prediction predict(double buffer_bytes) const;

  /// Mean and variance in standardized-output space; acquisition functions
  /// work here so they are exactly shift/scale invariant.
  Prediction predict_standardized(double buffer_bytes) const;

  /// Posterior variance in standardized-output space (for invariants).
  double normalized_variance(double buffer_bytes) const;

  const std::vector<Observation>& observations() const {
    return observations_;
  }
  double best_throughput() const;
  double lower_bytes() const { return lower_; }
  double upper_bytes() const { return upper_; }
  double output_mean() const { return y_mean_; }
  double output_scale() const { return y_scale_; }

 private:
  GpPosterior() = default;

  double kernel(double a, double b) const;
  double normalize(double buffer_bytes) const;

  std::vector<Observation> observations_;
  GpHyperParams hyper_;
  double lower_ = 0.0;
  double upper_ = 1.0;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  Eigen::VectorXd x_norm_;
  Eigen::VectorXd weights_;  // (K + noise I)^-1 y_standardized
  Eigen::LLT<Eigen::MatrixXd> chol_;
};

/// Free-function spelling of GpPosterior::fit.
GpPosterior gp_fit(const std::vector<Observation>& observations,
                   const GpHyperParams& hyper, double lower_bytes,
                   double upper_bytes);

/// Expected improvement of sampling at `buffer_bytes` over the best observed
/// throughput, under the maximization convention with exploration margin xi.
double expected_improvement(const GpPosterior& posterior, double buffer_bytes,
                            double best_throughput, double xi);

/// Closed form the posterior version evaluates:
///   (mu - best - xi) Phi(z) + sigma phi(z),  z = (mu - best - xi) / sigma,
/// and max(0, mu - best - xi) when sigma == 0.
double expected_improvement_value(double mean, double sigma,
                                  double best_throughput, double xi);

}  // namespace dearsim
