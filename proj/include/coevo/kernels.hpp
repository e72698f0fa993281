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

// Dense-layer kernels.
//
// Each kernel exists twice: a serial reference in `serial` and an OpenMP
// version in `parallel`. The parallel versions split work over independent
// output rows and keep the serial summation order inside each row, so both
// produce bit-identical results for any thread count. Callers normally use
// the dispatching functions at namespace scope, which pick the parallel path
// once the problem is large enough to amortize a parallel region.

#ifndef COEVO_KERNELS_HPP_
#define COEVO_KERNELS_HPP_

#include <cstddef>
#include <span>

#include "coevo/matrix.hpp"

namespace coevo::kernels {

// Multiply-accumulate count above which dispatch goes parallel.
inline constexpr std::size_t kParallelWork = 1 << 15;

namespace serial {

// y = x * w^T + bias, with x: n x in, w: out x in, y: n x out.
void affine_forward(const Matrix& x, const Matrix& w, std::span<const double> bias, Matrix& y);
// dw = upstream^T * x, dbias = column sums of upstream.
void affine_grad_params(const Matrix& upstream, const Matrix& x, Matrix& dw,
                        std::span<double> dbias);
// dx = upstream * w.
void affine_grad_input(const Matrix& upstream, const Matrix& w, Matrix& dx);
// Sum of outer products of centered rows, divided by (n - 1).
void covariance(const Matrix& samples, std::span<const double> mean, Matrix& cov);

}  // namespace serial

namespace parallel {

void affine_forward(const Matrix& x, const Matrix& w, std::span<const double> bias, Matrix& y);
void affine_grad_params(const Matrix& upstream, const Matrix& x, Matrix& dw,
                        std::span<double> dbias);
void affine_grad_input(const Matrix& upstream, const Matrix& w, Matrix& dx);
void covariance(const Matrix& samples, std::span<const double> mean, Matrix& cov);

}  // namespace parallel

void affine_forward(const Matrix& x, const Matrix& w, std::span<const double> bias, Matrix& y);
void affine_grad_params(const Matrix& upstream, const Matrix& x, Matrix& dw,
                        std::span<double> dbias);
void affine_grad_input(const Matrix& upstream, const Matrix& w, Matrix& dx);
void covariance(const Matrix& samples, std::span<const double> mean, Matrix& cov);

// Threads OpenMP would use for a top-level parallel region (1 without OpenMP).
int max_threads();

}  // namespace coevo::kernels

#endif  // COEVO_KERNELS_HPP_
