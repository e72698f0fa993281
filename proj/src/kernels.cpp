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

#include "coevo/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "coevo/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coevo::kernels {
namespace {

// Four independent partial sums; fixed association order regardless of
// vectorization flags.
inline double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

void expect(bool ok, const char* kernel, const char* what) {
  if (!ok) throw ShapeError(std::string(kernel) + ": " + what);
}

void check_forward(const Matrix& x, const Matrix& w, std::span<const double> bias,
                   const Matrix& y) {
  expect(x.cols() == w.cols(), "affine_forward", "input width != weight in-dimension");
  expect(bias.size() == w.rows(), "affine_forward", "bias size != weight out-dimension");
  expect(y.rows() == x.rows() && y.cols() == w.rows(), "affine_forward", "output shape");
}

void check_grad_params(const Matrix& up, const Matrix& x, const Matrix& dw,
                       std::span<double> dbias) {
  expect(up.rows() == x.rows(), "affine_grad_params", "batch sizes differ");
  expect(dw.rows() == up.cols() && dw.cols() == x.cols(), "affine_grad_params",
         "weight gradient shape");
  expect(dbias.size() == up.cols(), "affine_grad_params", "bias gradient size");
}

void check_grad_input(const Matrix& up, const Matrix& w, const Matrix& dx) {
  expect(up.cols() == w.rows(), "affine_grad_input", "upstream width != out-dimension");
  expect(dx.rows() == up.rows() && dx.cols() == w.cols(), "affine_grad_input",
         "input gradient shape");
}

void check_covariance(const Matrix& samples, std::span<const double> mean, const Matrix& cov) {
  expect(samples.rows() >= 2, "covariance", "need at least two samples");
  expect(mean.size() == samples.cols(), "covariance", "mean size");
  expect(cov.rows() == samples.cols() && cov.cols() == samples.cols(), "covariance",
         "covariance shape");
}

// Row r of the centered-and-transposed sample matrix: feature r across samples.
Matrix centered_transpose(const Matrix& samples, std::span<const double> mean) {
  Matrix t(samples.cols(), samples.rows());
  for (std::size_t n = 0; n < samples.rows(); ++n)
    for (std::size_t a = 0; a < samples.cols(); ++a) t(a, n) = samples(n, a) - mean[a];
  return t;
}

// Blocked so both sides stay cache-resident.
Matrix transpose(const Matrix& m) {
  constexpr std::size_t kBlock = 16;
  Matrix t(m.cols(), m.rows());
  for (std::size_t r0 = 0; r0 < m.rows(); r0 += kBlock)
    for (std::size_t c0 = 0; c0 < m.cols(); c0 += kBlock) {
      const std::size_t r1 = std::min(r0 + kBlock, m.rows());
      const std::size_t c1 = std::min(c0 + kBlock, m.cols());
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) t(c, r) = m(r, c);
    }
  return t;
}

// C[rows] += A[rows] * B for row-major A (M x K) and B (K x N). Each element
// of C is accumulated sequentially over k starting from its current value,
// so the result does not depend on how rows are tiled or split across
// threads. The tile keeps kTileRows x kTileCols accumulators in registers.
constexpr std::size_t kTileRows = 4;
constexpr std::size_t kTileCols = 16;

// Lane count follows the widest vector unit the build targets; the
// arithmetic per element is the same either way.
#if defined(__AVX512F__)
constexpr std::size_t kLanes = 8;
#else
constexpr std::size_t kLanes = 4;
#endif
using Vec = double __attribute__((vector_size(kLanes * sizeof(double))));
constexpr std::size_t kTileVecs = kTileCols / kLanes;

inline Vec load_vec(const double* p) {
  Vec v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void store_vec(double* p, Vec v) { std::memcpy(p, &v, sizeof v); }

// Accumulates R rows of A times a kTileCols-wide panel of B (row stride
// ldb) into R x kTileCols values of C (row stride ldc).
template <std::size_t R>
inline void gemm_tile(const double* const* arow, std::size_t depth, const double* bpanel,
                      std::size_t ldb, double* const* crow) {
  Vec acc[R][kTileVecs];
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t v = 0; v < kTileVecs; ++v) acc[r][v] = load_vec(crow[r] + kLanes * v);
  for (std::size_t k = 0; k < depth; ++k, bpanel += ldb) {
    Vec bv[kTileVecs];
    for (std::size_t v = 0; v < kTileVecs; ++v) bv[v] = load_vec(bpanel + kLanes * v);
    for (std::size_t r = 0; r < R; ++r) {
      const Vec av = Vec{} + arow[r][k];
      for (std::size_t v = 0; v < kTileVecs; ++v) acc[r][v] += av * bv[v];
    }
  }
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t v = 0; v < kTileVecs; ++v) store_vec(crow[r] + kLanes * v, acc[r][v]);
}

// A product C += A * B prepared once per kernel call and shared read-only by
// all threads. Columns past the last full panel of B are copied into a
// zero-padded panel so they also run through the vector tile.
class Gemm {
 public:
  Gemm(const Matrix& a, const Matrix& b) : a_(a), b_(b), full_(b.cols() - b.cols() % kTileCols) {
    tail_ = b.cols() - full_;
    if (tail_ > 0) {
      padded_ = Matrix(b.rows(), kTileCols);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t j = 0; j < tail_; ++j) padded_(k, j) = b(k, full_ + j);
    }
  }

  std::size_t blocks(const Matrix& c) const { return (c.rows() + kTileRows - 1) / kTileRows; }

  // Row blocks [first, last) of C, each kTileRows rows (fewer for the last
  // block of C). Panels of B are the outer loop so each stays in L1 while
  // the row blocks sweep over it.
  void run_blocks(Matrix& c, std::size_t first, std::size_t last) const {
    for (std::size_t j0 = 0; j0 < full_; j0 += kTileCols)
      for (std::size_t block = first; block < last; ++block) dispatch(c, block, j0);
    if (tail_ == 0) return;
    for (std::size_t block = first; block < last; ++block) dispatch(c, block, full_);
  }

 private:
  void dispatch(Matrix& c, std::size_t block, std::size_t j0) const {
    const std::size_t r0 = block * kTileRows;
    switch (std::min(kTileRows, c.rows() - r0)) {
      case 4: panel<4>(c, r0, j0); break;
      case 3: panel<3>(c, r0, j0); break;
      case 2: panel<2>(c, r0, j0); break;
      default: panel<1>(c, r0, j0); break;
    }
  }

  template <std::size_t R>
  void panel(Matrix& c, std::size_t r0, std::size_t j0) const {
    const double* arow[R];
    double* crow[R];
    for (std::size_t r = 0; r < R; ++r) arow[r] = a_.row(r0 + r).data();
    const std::size_t depth = a_.cols();
    if (j0 < full_) {
      for (std::size_t r = 0; r < R; ++r) crow[r] = c.row(r0 + r).data() + j0;
      gemm_tile<R>(arow, depth, b_.data() + j0, b_.cols(), crow);
      return;
    }
    double scratch[R][kTileCols] = {};
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t j = 0; j < tail_; ++j) scratch[r][j] = c(r0 + r, full_ + j);
      crow[r] = scratch[r];
    }
    gemm_tile<R>(arow, depth, padded_.data(), kTileCols, crow);
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t j = 0; j < tail_; ++j) c(r0 + r, full_ + j) = scratch[r][j];
  }

  const Matrix& a_;
  const Matrix& b_;
  std::size_t full_;
  std::size_t tail_ = 0;
  Matrix padded_;
};

// Splits the row blocks of C into one contiguous range per thread.
void run_parallel(const Gemm& gemm, Matrix& c) {
  const std::size_t total = gemm.blocks(c);
#pragma omp parallel
  {
#ifdef _OPENMP
    const auto threads = static_cast<std::size_t>(omp_get_num_threads());
    const auto id = static_cast<std::size_t>(omp_get_thread_num());
#else
    const std::size_t threads = 1, id = 0;
#endif
    gemm.run_blocks(c, total * id / threads, total * (id + 1) / threads);
  }
}

void init_rows_with_bias(Matrix& y, std::span<const double> bias) {
  for (std::size_t n = 0; n < y.rows(); ++n)
    std::copy(bias.begin(), bias.end(), y.row(n).begin());
}

void column_sums(const Matrix& m, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t n = 0; n < m.rows(); ++n)
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += m(n, c);
}

inline void covariance_row(const Matrix& centered_t, Matrix& cov, std::size_t a) {
  const double scale = 1.0 / static_cast<double>(centered_t.cols() - 1);
  for (std::size_t b = 0; b < centered_t.rows(); ++b)
    cov(a, b) = dot(centered_t.row(a).data(), centered_t.row(b).data(), centered_t.cols()) * scale;
}

}  // namespace

namespace serial {

void affine_forward(const Matrix& x, const Matrix& w, std::span<const double> bias, Matrix& y) {
  check_forward(x, w, bias, y);
  const Matrix wt = transpose(w);
  init_rows_with_bias(y, bias);
  const Gemm gemm(x, wt);
  gemm.run_blocks(y, 0, gemm.blocks(y));
}

void affine_grad_params(const Matrix& upstream, const Matrix& x, Matrix& dw,
                        std::span<double> dbias) {
  check_grad_params(upstream, x, dw, dbias);
  const Matrix ut = transpose(upstream);
  dw.fill(0.0);
  const Gemm gemm(ut, x);
  gemm.run_blocks(dw, 0, gemm.blocks(dw));
  column_sums(upstream, dbias);
}

void affine_grad_input(const Matrix& upstream, const Matrix& w, Matrix& dx) {
  check_grad_input(upstream, w, dx);
  dx.fill(0.0);
  const Gemm gemm(upstream, w);
  gemm.run_blocks(dx, 0, gemm.blocks(dx));
}

void covariance(const Matrix& samples, std::span<const double> mean, Matrix& cov) {
  check_covariance(samples, mean, cov);
  const Matrix t = centered_transpose(samples, mean);
  for (std::size_t a = 0; a < t.rows(); ++a) covariance_row(t, cov, a);
}

}  // namespace serial

namespace parallel {

void affine_forward(const Matrix& x, const Matrix& w, std::span<const double> bias, Matrix& y) {
  check_forward(x, w, bias, y);
  const Matrix wt = transpose(w);
  init_rows_with_bias(y, bias);
  const Gemm gemm(x, wt);
  run_parallel(gemm, y);
}

void affine_grad_params(const Matrix& upstream, const Matrix& x, Matrix& dw,
                        std::span<double> dbias) {
  check_grad_params(upstream, x, dw, dbias);
  const Matrix ut = transpose(upstream);
  dw.fill(0.0);
  const Gemm gemm(ut, x);
  run_parallel(gemm, dw);
  column_sums(upstream, dbias);
}

void affine_grad_input(const Matrix& upstream, const Matrix& w, Matrix& dx) {
  check_grad_input(upstream, w, dx);
  dx.fill(0.0);
  const Gemm gemm(upstream, w);
  run_parallel(gemm, dx);
}

void covariance(const Matrix& samples, std::span<const double> mean, Matrix& cov) {
  check_covariance(samples, mean, cov);
  const Matrix t = centered_transpose(samples, mean);
  const auto dims = static_cast<std::ptrdiff_t>(t.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < dims; ++a) covariance_row(t, cov, static_cast<std::size_t>(a));
}

}  // namespace parallel

namespace {
bool go_parallel(std::size_t work) {
#ifdef _OPENMP
  return work >= kParallelWork && !omp_in_parallel() && omp_get_max_threads() > 1;
#else
  (void)work;
  return false;
#endif
}
}  // namespace

void affine_forward(const Matrix& x, const Matrix& w, std::span<const double> bias, Matrix& y) {
  if (go_parallel(x.rows() * w.size()))
    parallel::affine_forward(x, w, bias, y);
  else
    serial::affine_forward(x, w, bias, y);
}

void affine_grad_params(const Matrix& upstream, const Matrix& x, Matrix& dw,
                        std::span<double> dbias) {
  if (go_parallel(upstream.size() * x.cols()))
    parallel::affine_grad_params(upstream, x, dw, dbias);
  else
    serial::affine_grad_params(upstream, x, dw, dbias);
}

void affine_grad_input(const Matrix& upstream, const Matrix& w, Matrix& dx) {
  if (go_parallel(upstream.rows() * w.size()))
    parallel::affine_grad_input(upstream, w, dx);
  else
    serial::affine_grad_input(upstream, w, dx);
}

void covariance(const Matrix& samples, std::span<const double> mean, Matrix& cov) {
  if (go_parallel(samples.size() * samples.cols()))
    parallel::covariance(samples, mean, cov);
  else
    serial::covariance(samples, mean, cov);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace coevo::kernels
