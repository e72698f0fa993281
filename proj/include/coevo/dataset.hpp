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

// Synthetic low-dimensional data distributions.

#ifndef COEVO_DATASET_HPP_
#define COEVO_DATASET_HPP_

#include <memory>
#include <string_view>

#include "coevo/netcore.hpp"
#include "coevo/random.hpp"

namespace coevo::harness {

enum class DatasetKind {
  Ring2D,  // 8 Gaussians on a radius-2 circle, sigma 0.05
  Grid2D,  // 5 x 5 Gaussians at integer points of [-2, 2]^2, sigma 0.05
  Gauss1D  // standard normal
};

std::string_view to_string(DatasetKind k);
DatasetKind parse_dataset(std::string_view name);

inline constexpr double kModeStddev = 0.05;
inline constexpr double kRingRadius = 2.0;
inline constexpr int kRingModes = 8;
inline constexpr int kGridSide = 5;

class SyntheticDataset : public netcore::DataSampler {
 public:
  SyntheticDataset(DatasetKind kind, Rng rng) : kind_(kind), rng_(rng) {}

  std::size_t dim() const override { return kind_ == DatasetKind::Gauss1D ? 1 : 2; }
  Batch sample(std::size_t n) override;
  DatasetKind kind() const { return kind_; }

 private:
  DatasetKind kind_;
  Rng rng_;
};

// The sampler owns an engine split off `rng`.
std::unique_ptr<SyntheticDataset> make_dataset(DatasetKind kind, Rng& rng);

}  // namespace coevo::harness

#endif  // COEVO_DATASET_HPP_
