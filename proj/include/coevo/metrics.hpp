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

#ifndef COEVO_METRICS_HPP_
#define COEVO_METRICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "coevo/matrix.hpp"
#include "coevo/netcore.hpp"

namespace coevo::metrics {

struct GaussianStats {
  std::vector<double> mean;
  Matrix covariance;  // d x d, symmetric PSD

  std::size_t dim() const { return mean.size(); }
};

// Sample mean and unbiased (n - 1) covariance, symmetrized. Needs n >= 2.
GaussianStats fit_gaussian(const Matrix& samples);

// Fréchet distance between two Gaussians:
//   |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a S_b)^{1/2}).
// The trace of the square root is taken from the eigenvalues of the
// symmetric matrix S_b^{1/2} S_a S_b^{1/2}; eigenvalues down to -1e-9 are
// treated as zero, anything more negative is a NumericalError.
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

inline constexpr double kEigenTolerance = 1e-9;

// Throws DomainError when either series has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

std::size_t parameter_count(const netcore::NetworkParams& net);

struct MeanInterval {
  double mean = 0.0;
  double half_width = 0.0;  // 0 for a single observation
};

// Mean with a two-sided Student-t confidence interval.
MeanInterval mean_confidence(std::span<const double> values, double level = 0.95);

// One-sided Welch t-test p-value for H1: mean(a) < mean(b).
double welch_less_p_value(std::span<const double> a, std::span<const double> b);

}  // namespace coevo::metrics

#endif  // COEVO_METRICS_HPP_
