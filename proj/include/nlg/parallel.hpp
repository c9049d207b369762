// Copyright 2026 The nlg Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace nlg {

/// Worker count: NLG_THREADS if set (>=1), else hardware concurrency.
size_t thread_count();

/// Runs body(i) for i in [0, n) across up to thread_count() workers.
/// Each index runs exactly once; callers write results into per-index slots
/// so output never depends on scheduling.
void parallel_for(size_t n, const std::function<void(size_t)> &body);

/// SplitMix64 finalizer, used to derive independent stream seeds.
uint64_t mix_seed(uint64_t seed, uint64_t stream);

/// FNV-1a over a byte string.
uint64_t fnv1a(const void *data, size_t size, uint64_t basis = 0xcbf29ce484222325ULL);

/// Uniform double in [0, 1) from 53 high bits of a 64-bit draw.
inline double unit_double(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace nlg
