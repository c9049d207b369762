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

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "nlg/random.hpp"

namespace nlg {

using Objective = std::function<double(std::span<const double>)>;
using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;

struct MinimizeOptions {
    int max_iterations = 5000;
    double gradient_tolerance = 1e-9;
    /// Central-difference step used by fd_gradient.
    double fd_step = 1e-6;
    /// Stop as soon as f <= target.
    double target = -std::numeric_limits<double>::infinity();
};

struct MinimizeResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    double gradient_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Central differences: g_i = (f(x + h e_i) - f(x - h e_i)) / 2h.
void fd_gradient(const Objective &f, std::span<const double> x, std::span<double> grad, double step);

/// Quasi-Newton (BFGS, inverse-Hessian form) with Armijo backtracking.
MinimizeResult bfgs(const Objective &f, const GradientFn &grad, std::vector<double> x0, const MinimizeOptions &options);

struct MultiStartResult {
    MinimizeResult best;
    size_t best_restart = 0;
    std::vector<double> restart_values;
};

/// Runs `restarts` independent local solves, restart r seeded by
/// mix_seed(seed, r). Restarts may run in parallel; the result is the lowest
/// value, ties going to the lowest restart index.
MultiStartResult multi_start(size_t restarts, uint64_t seed, const std::function<MinimizeResult(Rng &)> &solve);

}  // namespace nlg
