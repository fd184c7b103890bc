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

#ifndef TRAJCOVER_SIMD_KERNELS_H_
#define TRAJCOVER_SIMD_KERNELS_H_

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the distance, coverage and dense-layer
// code. Every kernel has a scalar reference implementation; vector variants
// must agree with it to rounding (max-reductions agree exactly).
//
// Point arrays are interleaved (x0, y0, x1, y1, ...). Matrices are row-major.

namespace trajcover::simd {

struct DistanceSummary {
  double sum = 0.0;  // sum of point-wise Euclidean distances
  double max = 0.0;  // largest point-wise Euclidean distance
};

struct KernelTable {
  std::string_view name;

  // Point-wise distances between two interleaved point arrays of n points.
  DistanceSummary (*pointwise_distance)(const double* a, const double* b,
                                        std::size_t n);

  // y[r] = bias[r] + sum_c w[r * cols + c] * x[c]. bias may be null.
  void (*gemv)(const double* w, const double* x, const double* bias, double* y,
               std::size_t rows, std::size_t cols);

  // dx[c] += sum_r w[r * cols + c] * dy[r].
  void (*gemv_transposed_acc)(const double* w, const double* dy, double* dx,
                              std::size_t rows, std::size_t cols);

  // w[r * cols + c] += scale * dy[r] * x[c].
  void (*rank1_update)(double* w, const double* dy, const double* x,
                       double scale, std::size_t rows, std::size_t cols);

  // y[i] += a * x[i].
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable& ScalarKernels();

// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* Avx2Kernels();

// The table used by the library. Picks the widest supported variant once per
// process; TRAJCOVER_SIMD=scalar forces the reference kernels.
const KernelTable& ActiveKernels();

}  // namespace trajcover::simd

#endif  // TRAJCOVER_SIMD_KERNELS_H_
