// Copyright 2026 The TrajCover Authors
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

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "trajcover/simd/kernels.h"

namespace trajcover::simd {
namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double HorizontalMax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

// Four points per iteration: two 256-bit loads hold (x0 y0 x1 y1) and
// (x2 y2 x3 y3); hadd pairs the squared components into per-point norms.
DistanceSummary PointwiseDistanceAvx2(const double* a, const double* b,
                                      std::size_t n) {
  __m256d sum = _mm256_setzero_pd();
  __m256d max = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + 2 * i),
                                     _mm256_loadu_pd(b + 2 * i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + 2 * i + 4),
                                     _mm256_loadu_pd(b + 2 * i + 4));
    // hadd -> (p0, p2, p1, p3); order is irrelevant for sum/max.
    const __m256d sq = _mm256_hadd_pd(_mm256_mul_pd(d0, d0),
                                      _mm256_mul_pd(d1, d1));
    const __m256d dist = _mm256_sqrt_pd(sq);
    sum = _mm256_add_pd(sum, dist);
    max = _mm256_max_pd(max, dist);
  }
  DistanceSummary out{HorizontalSum(sum), HorizontalMax(max)};
  for (; i < n; ++i) {
    const double dx = a[2 * i] - b[2 * i];
    const double dy = a[2 * i + 1] - b[2 * i + 1];
    const double d = std::sqrt(dx * dx + dy * dy);
    out.sum += d;
    if (d > out.max) out.max = d;
  }
  return out;
}

void GemvAvx2(const double* w, const double* x, const double* bias, double* y,
              std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c),
                             acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c + 4),
                             _mm256_loadu_pd(x + c + 4), acc1);
    }
    for (; c + 4 <= cols; c += 4) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c),
                             acc0);
    }
    double acc = HorizontalSum(_mm256_add_pd(acc0, acc1));
    for (; c < cols; ++c) acc += row[c] * x[c];
    y[r] = bias != nullptr ? acc + bias[r] : acc;
  }
}

void AxpyAvx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void GemvTransposedAccAvx2(const double* w, const double* dy, double* dx,
                           std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (dy[r] == 0.0) continue;
    AxpyAvx2(dy[r], w + r * cols, dx, cols);
  }
}

void Rank1UpdateAvx2(double* w, const double* dy, const double* x,
                     double scale, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double g = scale * dy[r];
    if (g == 0.0) continue;
    AxpyAvx2(g, x, w + r * cols, cols);
  }
}

}  // namespace

const KernelTable* Avx2KernelTable() {
  static const KernelTable table{
      .name = "avx2",
      .pointwise_distance = PointwiseDistanceAvx2,
      .gemv = GemvAvx2,
      .gemv_transposed_acc = GemvTransposedAccAvx2,
      .rank1_update = Rank1UpdateAvx2,
      .axpy = AxpyAvx2,
  };
  return &table;
}

}  // namespace trajcover::simd
