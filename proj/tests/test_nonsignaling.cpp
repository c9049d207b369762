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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "nlg/circuits.hpp"
#include "nlg/errors.hpp"
#include "nlg/nonsignaling.hpp"
#include "nlg/random.hpp"
#include "nlg/simulator.hpp"
#include "nlg/strategy.hpp"
#include "ns_oracle.hpp"

using namespace nlg;
using nlg::testing::grid_oracle;
using nlg::testing::kl_cell;

namespace {

const std::vector<std::pair<int, int>> kChsh{{0, 0}, {0, 1}, {1, 0}, {1, 1}};

BehaviorTable table2(const std::vector<std::array<double, 4>> &rows) {
    BehaviorTable t;
    t.outcomes_a = t.outcomes_b = 2;
    t.support = kChsh;
    for (const auto &r : rows) {
        t.freqs.emplace_back(r.begin(), r.end());
        t.shots.push_back(0);
    }
    return t;
}

double total_kl(const BehaviorTable &f, const BehaviorTable &p) {
    double s = 0;
    for (size_t q = 0; q < f.freqs.size(); q++) {
        for (size_t c = 0; c < f.cells(); c++) s += kl_cell(f.freqs[q][c], p.freqs[q][c]);
    }
    return s;
}

const Strategy &perfect() {
    static const Strategy s = build_perfect_strategy(find_orthogonal_representation(g14(), 1));
    return s;
}

std::vector<Shot> signaling_shots(int per_question) {
    // a = y, b = x: each answer reveals the other player's input.
    std::vector<Shot> shots;
    for (int q = 0; q < 4; q++) {
        auto [x, y] = kChsh[q];
        for (int i = 0; i < per_question; i++) shots.push_back({q, y, x});
    }
    return shots;
}

}  // namespace

TEST(Constraints, ChshShape) {
    auto cons = ns_constraints(kChsh, 2, 2);
    int norm = 0;
    for (const auto &e : cons) norm += e.rhs == 1;
    EXPECT_EQ(norm, 4);
    EXPECT_EQ(cons.size() - norm, 8u);
}

TEST(Constraints, LoneInputHasNoCrossConstraint) {
    auto cons = ns_constraints({{0, 0}, {1, 0}, {1, 1}}, 2, 2);
    // x=0 appears once; x=1 twice (2 constraints); y=0 twice (2); y=1 once. Plus 3 normalizations.
    EXPECT_EQ(cons.size(), 7u);
    for (const auto &e : cons) {
        if (e.rhs == 1) continue;
        bool touches_q0 = false, touches_other = false;
        for (auto [i, c] : e.terms) (i < 4 ? touches_q0 : touches_other) = true;
        if (touches_q0) EXPECT_TRUE(touches_other);
    }
    EXPECT_THROW(ns_constraints({}, 2, 2), DomainError);
}

TEST(Constraints, G14MatchesBruteForceGenerator) {
    auto game = build_game(g14(), 4);
    std::vector<std::pair<int, int>> support;
    for (const auto &q : game.questions) support.emplace_back(q.x, q.y);
    auto cons = ns_constraints(support, 4, 4);
    EXPECT_EQ(cons.size(), 8u * 2 * 37 + 88);

    const int vars = 88 * 16;
    auto to_matrix = [&](const std::vector<LinearEquality> &es) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(es.size()), vars + 1);
        for (size_t r = 0; r < es.size(); r++) {
            for (auto [i, c] : es[r].terms) m(r, i) += c;
            m(r, vars) = es[r].rhs;
        }
        return m;
    };
    // Every pair of questions sharing an input, every outcome.
    std::vector<LinearEquality> brute;
    for (size_t q = 0; q < support.size(); q++) {
        for (size_t r = q + 1; r < support.size(); r++) {
            for (int side = 0; side < 2; side++) {
                int sq = side ? support[q].second : support[q].first;
                int sr = side ? support[r].second : support[r].first;
                if (sq != sr) continue;
                for (int o = 0; o < 4; o++) {
                    LinearEquality e;
                    for (int other = 0; other < 4; other++) {
                        int cell = side ? other * 4 + o : o * 4 + other;
                        e.terms.emplace_back(q * 16 + cell, 1.0);
                        e.terms.emplace_back(r * 16 + cell, -1.0);
                    }
                    brute.push_back(e);
                }
            }
        }
        LinearEquality n;
        n.rhs = 1;
        for (int c = 0; c < 16; c++) n.terms.emplace_back(q * 16 + c, 1.0);
        brute.push_back(n);
    }
    Eigen::MatrixXd a = to_matrix(cons), b = to_matrix(brute);
    Eigen::MatrixXd both(a.rows() + b.rows(), a.cols());
    both << a, b;
    auto rank = [](const Eigen::MatrixXd &m) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
        qr.setThreshold(1e-9);
        return qr.rank();
    };
    auto ra = rank(a);
    EXPECT_EQ(ra, rank(b));
    EXPECT_EQ(ra, rank(both));
}

TEST(Projection, QuantumTableIsAlreadyNonSignaling) {
    auto game = build_game(g14(), 4);
    auto t = behavior_table(perfect(), game);
    auto cons = ns_constraints(t.support, 4, 4);
    EXPECT_LT(ns_residual(t, cons), 1e-12);
    auto proj = kl_projection(t);
    EXPECT_LT(proj.kl, 1e-10);
    EXPECT_LT(proj.constraint_residual, 1e-8);
    for (size_t q = 0; q < t.freqs.size(); q++) {
        for (size_t c = 0; c < 16; c++) EXPECT_NEAR(proj.p_star.freqs[q][c], t.freqs[q][c], 1e-6);
    }
}

TEST(Projection, RandomStrategyTablesAreNonSignaling) {
    Rng rng(12);
    std::vector<Mat4> us;
    for (int v = 0; v < 14; v++) {
        Mat4 g;
        for (int i = 0; i < 16; i++) g(i / 4, i % 4) = cdouble(rng.normal(), rng.normal());
        us.push_back(Eigen::HouseholderQR<Mat4>(g).householderQ());
    }
    auto t = behavior_table(Strategy(us), build_game(g14(), 4));
    EXPECT_LT(kl_projection(t).kl, 1e-10);
}

TEST(Projection, MatchesGridOracleOnSignalingToys) {
    Rng rng(21);
    for (int trial = 0; trial < 3; trial++) {
        // Product-form NS behavior, then shift Alice's marginal under y=1 by 0.1.
        std::vector<std::array<double, 4>> rows;
        double pa[2] = {rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
        double pb[2] = {rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
        for (auto [x, y] : kChsh) {
            double a0 = pa[x] + (y == 1 ? 0.1 : 0.0);
            rows.push_back({a0 * pb[y], a0 * (1 - pb[y]), (1 - a0) * pb[y], (1 - a0) * (1 - pb[y])});
        }
        auto t = table2(rows);
        auto proj = kl_projection(t);
        double oracle = grid_oracle(t);
        EXPECT_GT(proj.kl, 1e-4);
        EXPECT_NEAR(proj.kl, oracle, 1e-4) << "trial " << trial;
        EXPECT_NEAR(total_kl(t, proj.p_star), proj.kl, 1e-12);
        EXPECT_LT(proj.constraint_residual, 1e-8);
        EXPECT_LT(proj.p_star.normalization_error(), 1e-10);
    }
}

TEST(Projection, HistoryIsMonotone) {
    auto game = build_game(g14(), 4);
    auto circuits = game_circuits(AnsatzTemplate::one_rxx(),
                                  optimize_game_ansatz(game, AnsatzTemplate::one_rxx(), 4, 7).params, game);
    auto d = run_experiment(circuits, noise_from_preset("silver"), 500, 9);
    std::vector<std::pair<int, int>> support;
    for (const auto &q : game.questions) support.emplace_back(q.x, q.y);
    auto t = table_from_shots(shots_from_counts(d, game), support, 4, 4);
    auto proj = kl_projection(t);
    ASSERT_GE(proj.objective_history.size(), 2u);
    for (size_t i = 1; i < proj.objective_history.size(); i++) {
        EXPECT_LE(proj.objective_history[i], proj.objective_history[i - 1] + 1e-12) << i;
    }
    EXPECT_GE(proj.kl, 0);
    EXPECT_LT(proj.constraint_residual, 1e-8);
    EXPECT_LT(proj.p_star.normalization_error(), 1e-10);
}

TEST(Projection, RejectsMalformedTables) {
    auto t = table2({{0.5, 0.5, 0, 0}, {0.5, 0.5, 0, 0}, {0.5, 0.5, 0, 0}, {0.5, 0.4, 0, 0}});
    EXPECT_THROW(kl_projection(t), DomainError);
    t.freqs[3] = {0.5, 0.5, -0.1, 0.1};
    EXPECT_THROW(kl_projection(t), DomainError);
}

TEST(Pbr, NonSignalingTrainGivesUnitRatio) {
    // Product rows pa[x] * pb[y] are non-signaling.
    const double pa[2] = {0.3, 0.6}, pb[2] = {0.4, 0.7};
    std::vector<std::array<double, 4>> rows;
    for (auto [x, y] : kChsh) {
        rows.push_back({pa[x] * pb[y], pa[x] * (1 - pb[y]), (1 - pa[x]) * pb[y], (1 - pa[x]) * (1 - pb[y])});
    }
    auto t = table2(rows);
    auto cons = ns_constraints(t.support, 2, 2);
    ASSERT_LT(ns_residual(t, cons), 1e-12);
    std::vector<Shot> test;
    for (int q = 0; q < 4; q++)
        for (int o = 0; o < 4; o++) test.push_back({q, o / 2, o % 2});
    auto r = pbr_test(t, test);
    EXPECT_NEAR(r.t_log, 0.0, 1e-6);
    EXPECT_EQ(r.p_u, 1.0);
}

TEST(Pbr, ZeroTrainingCellGivesVacuousBound) {
    auto t = table2({{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}});
    auto r = pbr_test(t, {{0, 1, 1}});
    EXPECT_TRUE(std::isinf(r.t_log) && r.t_log < 0);
    EXPECT_EQ(r.p_u, 1.0);
}

TEST(Pbr, DetectsSignaling) {
    auto shots = signaling_shots(2500);
    ASSERT_EQ(shots.size(), 10000u);
    PbrOptions opt;
    opt.seed = 3;
    auto res = kfold_pbr(shots, kChsh, 2, 2, opt);
    EXPECT_LT(res.min_p_u, 0.05);
    EXPECT_TRUE(res.rejected());
    EXPECT_GT(res.max_kl, 0.1);
}

TEST(Pbr, DeterministicAndValidated) {
    auto shots = signaling_shots(50);
    PbrOptions opt;
    opt.seed = 9;
    auto a = kfold_pbr(shots, kChsh, 2, 2, opt);
    auto b = kfold_pbr(shots, kChsh, 2, 2, opt);
    ASSERT_EQ(a.per_fold.size(), 5u);
    for (size_t i = 0; i < 5; i++) {
        EXPECT_EQ(a.per_fold[i].t_log, b.per_fold[i].t_log);
        EXPECT_EQ(a.per_fold[i].kl, b.per_fold[i].kl);
    }
    opt.folds = 1;
    EXPECT_THROW(kfold_pbr(shots, kChsh, 2, 2, opt), DomainError);
    opt.folds = 5;
    EXPECT_THROW(kfold_pbr(signaling_shots(3), kChsh, 2, 2, opt), DomainError);
    auto j = pbr_to_json(a);
    EXPECT_EQ(j["per_fold"].size(), 5u);
}

TEST(Pbr, IdealG14DataIsNotRejected) {
    auto game = build_game(g14(), 4);
    auto circuits = game_circuits(AnsatzTemplate::one_rxx(),
                                  optimize_game_ansatz(game, AnsatzTemplate::one_rxx(), 4, 7).params, game);
    auto d = run_experiment(circuits, NoiseModel{}, 2000, 4);
    PbrOptions opt;
    opt.seed = 7;
    auto res = kfold_pbr(d, game, opt);
    for (const auto &f : res.per_fold) EXPECT_EQ(f.p_u, 1.0);
    EXPECT_FALSE(res.rejected());
}

TEST(Pbr, ShotsSplitEdgeCircuitsAcrossDirections) {
    auto game = build_game(complete_graph(2), 4);
    CountsDataset d;
    CountsRecord v0{"v0", RecordKind::Vertex, 4, {{"0000", 4}}};
    CountsRecord v1{"v1", RecordKind::Vertex, 4, {{"0101", 4}}};
    CountsRecord e{"e0_1", RecordKind::Edge, 4, {{"0001", 4}}};
    d.records = {v0, v1, e};
    auto shots = shots_from_counts(d, game);
    ASSERT_EQ(shots.size(), 12u);
    int forward = game.question_index(0, 1), backward = game.question_index(1, 0);
    int nf = 0, nb = 0;
    for (const auto &s : shots) {
        if (s.question == forward) {
            nf++;
            EXPECT_EQ(s.a, 0);
            EXPECT_EQ(s.b, 1);
        } else if (s.question == backward) {
            nb++;
            EXPECT_EQ(s.a, 1);
            EXPECT_EQ(s.b, 0);
        }
    }
    EXPECT_EQ(nf, 2);
    EXPECT_EQ(nb, 2);
}
