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
#include <utility>
#include <vector>

#include "json.hpp"
#include "nlg/behavior.hpp"
#include "nlg/counts.hpp"
#include "nlg/graph.hpp"

namespace nlg {

/// sum_k coeff_k * P[var_k] = rhs, with P flattened as question * cells + a * nb + b.
struct LinearEquality {
    std::vector<std::pair<size_t, double>> terms;
    double rhs = 0;
};

/// Marginal equalities for every x (and every a) across the y's it meets,
/// the same for every y, then one normalization per question. Redundant
/// rows are kept.
std::vector<LinearEquality> ns_constraints(const std::vector<std::pair<int, int>> &support, int outcomes_a,
                                           int outcomes_b);

/// Max |lhs - rhs| over the equalities.
double ns_residual(const BehaviorTable &t, const std::vector<LinearEquality> &constraints);

struct KlOptions {
    double gap_tolerance = 1e-12;  ///< target bound on the objective's optimality gap
    /// Largest gap bound accepted when round-off stops the solver before the target.
    double acceptable_gap = 1e-8;
    int max_outer = 40;
    int max_newton = 100;  ///< per centering
};

struct NSProjection {
    BehaviorTable p_star;
    double kl = 0;
    double constraint_residual = 0;
    int iterations = 0;                   ///< Newton steps
    double gap_bound = 0;                 ///< (variables)/t at the returned point
    std::vector<double> objective_history;  ///< KL after each centering
};

/// argmin over the non-signaling polytope of sum_q sum_ab f log(f / P).
/// Throws NumericError (carrying the constraint residual) on failure.
NSProjection kl_projection(const BehaviorTable &table, const KlOptions &options = {});

struct Shot {
    int question;  ///< index into the support
    int a;
    int b;
};

struct PbrFold {
    double t_log = 0;  ///< log t; -inf when a test shot hits a zero training cell
    double p_u = 1;
    double kl = 0;
};

/// log t = sum over test shots of log(f_train / P*); p_U = min(1/t, 1).
PbrFold pbr_test(const BehaviorTable &train, const NSProjection &projection, const std::vector<Shot> &test);
PbrFold pbr_test(const BehaviorTable &train, const std::vector<Shot> &test);

/// Expands counts to shots on the game's directed questions. Edge-circuit
/// shots alternate between (u, v) and (v, u) by shot index, the latter
/// with Alice's and Bob's colors swapped.
std::vector<Shot> shots_from_counts(const CountsDataset &d, const ColoringGame &game);

/// Empirical frequencies; pseudo_count is added to every cell first.
BehaviorTable table_from_shots(const std::vector<Shot> &shots, const std::vector<std::pair<int, int>> &support,
                               int outcomes_a, int outcomes_b, double pseudo_count = 0);

struct PbrOptions {
    int folds = 5;
    uint64_t seed = 0;
    double alpha = 0.05;
    /// Exploratory smoothing of the training table; results are then not inferential.
    double pseudo_count = 0;
    KlOptions kl;
};

struct PbrResult {
    std::vector<PbrFold> per_fold;
    double max_kl = 0;
    double min_p_u = 1;
    PbrOptions options;
    bool rejected() const {
        return min_p_u < options.alpha;
    }
};

/// Stratified k-fold split of each question's shots, seeded per question.
PbrResult kfold_pbr(const std::vector<Shot> &shots, const std::vector<std::pair<int, int>> &support,
                    int outcomes_a, int outcomes_b, const PbrOptions &options);
PbrResult kfold_pbr(const CountsDataset &d, const ColoringGame &game, const PbrOptions &options);

nlohmann::ordered_json pbr_to_json(const PbrResult &r);

}  // namespace nlg
