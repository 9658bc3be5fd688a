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

#include "dearsim/gp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dearsim {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143268;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Variances this close to zero (standardized space) are treated as exactly
// zero; they are solver jitter, not signal.
constexpr double kVarianceSnap = 1e-12;

}  // namespace

double GpPosterior::kernel(double a, double b) const {
  const double r = (a - b) / hyper_.lengthscale;
  return hyper_.signal_variance * std::exp(-0.5 * r * r);
}

double GpPosterior::normalize(double buffer_bytes) const {
  return (buffer_bytes - lower_) / (upper_ - lower_);
}

GpPosterior GpPosterior::fit(const std::vector<Observation>& observations,
                             const GpHyperParams& hyper, double lower_bytes,
                             double upper_bytes) {
  if (observations.empty()) {
    throw std::invalid_argument("gp_fit: need at least one observation");
  }
  if (!(lower_bytes < upper_bytes)) {
    throw std::invalid_argument("gp_fit: lower bound must be < upper bound");
  }
  if (!(hyper.lengthscale > 0.0) || !(hyper.signal_variance > 0.0) ||
      !(hyper.noise_variance >= 0.0)) {
    throw std::invalid_argument("gp_fit: bad hyperparameters");
  }
  if (hyper.noise_variance == 0.0) {
    for (std::size_t i = 0; i < observations.size(); ++i) {
      for (std::size_t j = i + 1; j < observations.size(); ++j) {
        if (observations[i].buffer_bytes == observations[j].buffer_bytes &&
            observations[i].throughput != observations[j].throughput) {
          throw std::invalid_argument(
              "gp_fit: inconsistent noise-free observations (same buffer, "
              "different throughput)");
        }
      }
    }
  }

  GpPosterior gp;
  gp.observations_ = observations;
  gp.hyper_ = hyper;
  gp.lower_ = lower_bytes;
  gp.upper_ = upper_bytes;

  const auto n = static_cast<Eigen::Index>(observations.size());
  Eigen::VectorXd y(n);
  gp.x_norm_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Observation& o = observations[static_cast<std::size_t>(i)];
    gp.x_norm_(i) = gp.normalize(o.buffer_bytes);
    y(i) = o.throughput;
  }
  gp.y_mean_ = y.mean();
  const double sd =
      std::sqrt((y.array() - gp.y_mean_).square().sum() / static_cast<double>(n));
  gp.y_scale_ = sd > 1e-15 * std::max(1.0, std::abs(gp.y_mean_)) ? sd : 1.0;
  const Eigen::VectorXd y_std = (y.array() - gp.y_mean_) / gp.y_scale_;

  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = gp.kernel(gp.x_norm_(i), gp.x_norm_(j));
      k(i, j) = v;
      k(j, i) = v;
    }
    k(i, i) += hyper.noise_variance;
  }

  for (double jitter : {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
    Eigen::MatrixXd kj = k;
    if (jitter > 0.0) kj.diagonal().array() += jitter;
    gp.chol_.compute(kj);
    if (gp.chol_.info() == Eigen::Success) {
      gp.weights_ = gp.chol_.solve(y_std);
      return gp;
    }
  }
  throw std::runtime_error(
      "gp_fit: kernel matrix not positive definite after jitter escalation");
}

GpPosterior gp_fit(const std::vector<Observation>& observations,
                   const GpHyperParams& hyper, double lower_bytes,
                   double upper_bytes) {
  return GpPosterior::fit(observations, hyper, lower_bytes, upper_bytes);
}

double GpPosterior::normalized_variance(double buffer_bytes) const {
  const auto n = x_norm_.size();
  const double x = normalize(buffer_bytes);
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) k_star(i) = kernel(x, x_norm_(i));
  const Eigen::VectorXd v =
      chol_.matrixL().solve(k_star);
  double variance = hyper_.signal_variance - v.squaredNorm();
  if (variance < kVarianceSnap) variance = 0.0;
  return variance;
}

GpPosterior::Prediction GpPosterior::predict_standardized(
    double buffer_bytes) const {
  const auto n = x_norm_.size();
  const double x = normalize(buffer_bytes);
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) k_star(i) = kernel(x, x_norm_(i));
  Prediction out;
  out.mean = k_star.dot(weights_);
  out.variance = normalized_variance(buffer_bytes);
  return out;
}

GpPosterior::Prediction GpPosterior::predict(double buffer_bytes) const {
  Prediction out = predict_standardized(buffer_bytes);
  out.mean = out.mean * y_scale_ + y_mean_;
  out.variance *= y_scale_ * y_scale_;
  return out;
}

double GpPosterior::best_throughput() const {
  double best = observations_.front().throughput;
  for (const Observation& o : observations_) {
    best = std::max(best, o.throughput);
  }
  return best;
}

double expected_improvement_value(double mean, double sigma,
                                  double best_throughput, double xi) {
  if (xi < 0.0) throw std::invalid_argument("expected_improvement: xi >= 0");
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("expected_improvement: sigma >= 0");
  }
  const double gain = mean - best_throughput - xi;
  if (sigma == 0.0) return std::max(0.0, gain);
  const double z = gain / sigma;
  return std::max(0.0, gain * normal_cdf(z) + sigma * normal_pdf(z));
}

double expected_improvement(const GpPosterior& posterior, double buffer_bytes,
                            double best_throughput, double xi) {
  // Evaluated in standardized space: xi is an exploration margin in output
  // standard deviations, and the result only shifts with the data, never
  // with its absolute level.
  const GpPosterior::Prediction p =
      posterior.predict_standardized(buffer_bytes);
  const double best_std =
      (best_throughput - posterior.output_mean()) / posterior.output_scale();
  return expected_improvement_value(p.mean, std::sqrt(p.variance), best_std,
                                    xi);
}

}  // namespace dearsim
