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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "nlg/parallel.hpp"

namespace nlg {

/// mt19937_64 with portable uniform/normal draws (no std distributions,
/// whose output differs across standard libraries).
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {
    }

    double uniform() {
        return unit_double(engine_());
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    uint64_t bits() {
        return engine_();
    }
    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace nlg
