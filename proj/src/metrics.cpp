// Copyright 2026 The coevo-skill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coevo/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "coevo/errors.hpp"
#include "coevo/kernels.hpp"

namespace coevo::metrics {
namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

void check_stats(const GaussianStats& s, const char* which) {
  const std::size_t d = s.dim();
  if (d == 0 || s.covariance.rows() != d || s.covariance.cols() != d)
    throw ShapeError(std::string("frechet_distance: malformed stats for ") + which);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r + 1; c < d; ++c)
      if (std::abs(s.covariance(r, c) - s.covariance(c, r)) > 1e-9)
        throw NumericalError(std::string("frechet_distance: covariance of ") + which +
                             " is not symmetric");
}

// Eigenvalues of a symmetric matrix, with tiny negatives clamped to zero.
Eigen::VectorXd psd_eigenvalues(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError(std::string("eigendecomposition failed for ") + what);
  Eigen::VectorXd values = solver.eigenvalues();
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values[k] < -kEigenTolerance)
      throw NumericalError(std::string(what) + " is not positive semidefinite");
    values[k] = std::max(values[k], 0.0);
  }
  return values;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  Eigen::VectorXd values = solver.eigenvalues();
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values[k] < -kEigenTolerance)
      throw NumericalError("covariance is not positive semidefinite");
    values[k] = std::sqrt(std::max(values[k], 0.0));
  }
  return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

GaussianStats fit_gaussian(const Matrix& samples) {
  if (samples.rows() < 2) throw InvalidInput("fit_gaussian: need at least two samples");
  const std::size_t n = samples.rows();
  const std::size_t d = samples.cols();
  GaussianStats stats;
  stats.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) stats.mean[c] += samples(r, c);
  for (double& m : stats.mean) m /= static_cast<double>(n);

  stats.covariance = Matrix(d, d);
  kernels::covariance(samples, stats.mean, stats.covariance);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r + 1; c < d; ++c) {
      const double avg = 0.5 * (stats.covariance(r, c) + stats.covariance(c, r));
      stats.covariance(r, c) = avg;
      stats.covariance(c, r) = avg;
    }
  return stats;
}

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  if (a.dim() != b.dim()) throw ShapeError("frechet_distance: dimension mismatch");
  check_stats(a, "a");
  check_stats(b, "b");

  double mean_term = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) mean_term += (a.mean[k] - b.mean[k]) * (a.mean[k] - b.mean[k]);

  const Eigen::MatrixXd sa = to_eigen(a.covariance);
  const Eigen::MatrixXd sb = to_eigen(b.covariance);
  const Eigen::MatrixXd root_b = psd_sqrt(sb);
  Eigen::MatrixXd inner = root_b * sa * root_b;
  inner = 0.5 * (inner + inner.transpose()).eval();
  const Eigen::VectorXd lambda = psd_eigenvalues(inner, "product covariance");
  double trace_sqrt = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) trace_sqrt += std::sqrt(lambda[k]);

  const double distance = mean_term + sa.trace() + sb.trace() - 2.0 * trace_sqrt;
  if (!std::isfinite(distance)) throw NumericalError("frechet_distance: non-finite result");
  // Rounding can push an exact zero slightly negative.
  return std::max(distance, 0.0);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("pearson: series lengths differ");
  if (x.size() < 2) throw InvalidInput("pearson: need at least two points");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DomainError("pearson: zero variance, correlation undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k + 1;
    while (end < order.size() && values[order[end]] == values[order[k]]) ++end;
    // Positions k..end-1 hold ranks k+1..end.
    const double rank = 0.5 * static_cast<double>(k + 1 + end);
    for (std::size_t t = k; t < end; ++t) ranks[order[t]] = rank;
    k = end;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("spearman: series lengths differ");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

std::size_t parameter_count(const netcore::NetworkParams& net) {
  std::size_t count = 0;
  for (const auto& layer : net.layers) count += layer.weights.size() + layer.bias.size();
  return count;
}

MeanInterval mean_confidence(std::span<const double> values, double level) {
  if (values.empty()) throw InvalidInput("mean_confidence: no values");
  MeanInterval out;
  out.mean = mean_of(values);
  if (values.size() < 2) return out;
  const double n = static_cast<double>(values.size());
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
  out.half_width = t * std::sqrt(sample_variance(values) / n);
  return out;
}

double welch_less_p_value(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InvalidInput("welch test: need two values per group");
  const double va = sample_variance(a) / static_cast<double>(a.size());
  const double vb = sample_variance(b) / static_cast<double>(b.size());
  const double diff = mean_of(a) - mean_of(b);
  const double se2 = va + vb;
  if (se2 == 0.0) return diff < 0.0 ? 0.0 : 1.0;
  const double t = diff / std::sqrt(se2);
  const double df = se2 * se2 / (va * va / static_cast<double>(a.size() - 1) +
                                 vb * vb / static_cast<double>(b.size() - 1));
  return boost::math::cdf(boost::math::students_t(df), t);
}

}  // namespace coevo::metrics
