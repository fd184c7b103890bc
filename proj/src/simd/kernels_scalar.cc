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

#include <cmath>
#include <cstddef>

#include "trajcover/simd/kernels.h"

namespace trajcover::simd {
namespace {

DistanceSummary PointwiseDistanceScalar(const double* a, const double* b,
                                        std::size_t n) {
  DistanceSummary out;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = a[2 * i] - b[2 * i];
    const double dy = a[2 * i + 1] - b[2 * i + 1];
    const double d = std::sqrt(dx * dx + dy * dy);
    out.sum += d;
    if (d > out.max) out.max = d;
  }
  return out;
}

void GemvScalar(const double* w, const double* x, const double* bias,
                double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = bias != nullptr ? acc + bias[r] : acc;
  }
}

void GemvTransposedAccScalar(const double* w, const double* dy, double* dx,
                             std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double g = dy[r];
    if (g == 0.0) continue;
    const double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) dx[c] += row[c] * g;
  }
}

void Rank1UpdateScalar(double* w, const double* dy, const double* x,
                       double scale, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double g = scale * dy[r];
    if (g == 0.0) continue;
    double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += g * x[c];
  }
}

void AxpyScalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable& ScalarKernels() {
  static const KernelTable table{
      .name = "scalar",
      .pointwise_distance = PointwiseDistanceScalar,
      .gemv = GemvScalar,
      .gemv_transposed_acc = GemvTransposedAccScalar,
      .rank1_update = Rank1UpdateScalar,
      .axpy = AxpyScalar,
  };
  return table;
}

}  // namespace trajcover::simd
