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

#ifndef TRAJCOVER_PARALLEL_H_
#define TRAJCOVER_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace trajcover {

// Worker count: TRAJCOVER_THREADS when set (>= 1), otherwise the hardware
// concurrency.
int WorkerCount();

// Runs fn(i) for i in [0, n) on up to WorkerCount() threads using contiguous
// static blocks. Callers write results into per-index slots, so output never
// depends on the thread count. The first exception thrown is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace trajcover

#endif  // TRAJCOVER_PARALLEL_H_
