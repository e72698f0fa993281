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

#include "coevo/dataset.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coevo/errors.hpp"

namespace coevo::harness {

std::string_view to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::Ring2D:
      return "ring2d";
    case DatasetKind::Grid2D:
      return "grid2d";
    case DatasetKind::Gauss1D:
      return "gauss1d";
  }
  return "ring2d";
}

DatasetKind parse_dataset(std::string_view name) {
  for (DatasetKind k : {DatasetKind::Ring2D, DatasetKind::Grid2D, DatasetKind::Gauss1D})
    if (to_string(k) == name) return k;
  throw InvalidInput("unknown dataset '" + std::string(name) + "'");
}

Batch SyntheticDataset::sample(std::size_t n) {
  if (n == 0) throw InvalidInput("sample: n must be positive");
  Batch out(n, dim());
  for (std::size_t r = 0; r < n; ++r) {
    switch (kind_) {
      case DatasetKind::Ring2D: {
        const auto mode = static_cast<double>(uniform_index(rng_, kRingModes));
        const double angle = 2.0 * std::numbers::pi * mode / kRingModes;
        out(r, 0) = kRingRadius * std::cos(angle) + kModeStddev * standard_normal(rng_);
        out(r, 1) = kRingRadius * std::sin(angle) + kModeStddev * standard_normal(rng_);
        break;
      }
      case DatasetKind::Grid2D: {
        const std::size_t mode = uniform_index(rng_, kGridSide * kGridSide);
        const double half = (kGridSide - 1) / 2.0;
        out(r, 0) = static_cast<double>(mode % kGridSide) - half + kModeStddev * standard_normal(rng_);
        out(r, 1) = static_cast<double>(mode / kGridSide) - half + kModeStddev * standard_normal(rng_);
        break;
      }
      case DatasetKind::Gauss1D:
        out(r, 0) = standard_normal(rng_);
        break;
    }
  }
  return out;
}

std::unique_ptr<SyntheticDataset> make_dataset(DatasetKind kind, Rng& rng) {
  return std::make_unique<SyntheticDataset>(kind, split(rng));
}

}  // namespace coevo::harness
