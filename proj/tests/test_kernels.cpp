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

#include <doctest.h>

#include <random>

#include "coevo/errors.hpp"
#include "coevo/kernels.hpp"
#include "support/gradcheck.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace coevo;

TEST_SUITE("kernels") {
  TEST_CASE("parallel kernels are bit-identical to the serial reference") {
#ifdef _OPENMP
    omp_set_num_threads(4);
#endif
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::size_t> dim(1, 70);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = dim(rng), in = dim(rng), out = dim(rng);
      const Matrix x = testing::random_batch(rng, n, in);
      const Matrix w = testing::random_batch(rng, out, in);
      const Matrix up = testing::random_batch(rng, n, out);
      std::vector<double> bias(out, 0.25);

      Matrix ys(n, out), yp(n, out);
      kernels::serial::affine_forward(x, w, bias, ys);
      kernels::parallel::affine_forward(x, w, bias, yp);
      CHECK(ys == yp);

      Matrix dws(out, in), dwp(out, in);
      std::vector<double> dbs(out), dbp(out);
      kernels::serial::affine_grad_params(up, x, dws, dbs);
      kernels::parallel::affine_grad_params(up, x, dwp, dbp);
      CHECK(dws == dwp);
      CHECK(dbs == dbp);

      Matrix dxs(n, in), dxp(n, in);
      kernels::serial::affine_grad_input(up, w, dxs);
      kernels::parallel::affine_grad_input(up, w, dxp);
      CHECK(dxs == dxp);

      if (n >= 2) {
        std::vector<double> mean(in, 0.1);
        Matrix cs(in, in), cp(in, in);
        kernels::serial::covariance(x, mean, cs);
        kernels::parallel::covariance(x, mean, cp);
        CHECK(cs == cp);
      }
    }
#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
  }

  TEST_CASE("serial forward matches naive triple loop") {
    std::mt19937_64 rng(8);
    const Matrix x = testing::random_batch(rng, 5, 7);
    const Matrix w = testing::random_batch(rng, 3, 7);
    const std::vector<double> bias{0.5, -0.5, 1.0};
    Matrix y(5, 3);
    kernels::serial::affine_forward(x, w, bias, y);
    for (std::size_t n = 0; n < 5; ++n)
      for (std::size_t o = 0; o < 3; ++o) {
        double s = bias[o];
        for (std::size_t i = 0; i < 7; ++i) s += x(n, i) * w(o, i);
        CHECK(y(n, o) == doctest::Approx(s).epsilon(1e-12));
      }
  }

  TEST_CASE("shape errors") {
    Matrix y(2, 2);
    std::vector<double> bias(2);
    CHECK_THROWS_AS(kernels::affine_forward(Matrix(2, 3), Matrix(2, 2), bias, y), ShapeError);
    Matrix cov(2, 2);
    std::vector<double> mean(2);
    CHECK_THROWS_AS(kernels::covariance(Matrix(1, 2), mean, cov), ShapeError);
  }
}
