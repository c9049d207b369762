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

#include <utility>
#include <vector>

namespace nlg {

/// Conditional distribution f(a, b | x, y) over a list of question pairs.
/// freqs[q][a * outcomes_b + b]; shots[q] is N_xy (0 for exact tables).
struct BehaviorTable {
    int outcomes_a = 4;
    int outcomes_b = 4;
    std::vector<std::pair<int, int>> support;
    std::vector<std::vector<double>> freqs;
    std::vector<double> shots;

    size_t cells() const {
        return static_cast<size_t>(outcomes_a) * outcomes_b;
    }
    double at(size_t q, int a, int b) const {
        return freqs[q][static_cast<size_t>(a) * outcomes_b + b];
    }
    /// Max |sum of a row - 1| over questions.
    double normalization_error() const;
};

}  // namespace nlg
