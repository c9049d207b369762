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

#include "nlg/errors.hpp"
#include "nlg/random.hpp"
#include "nlg/strategy.hpp"

using namespace nlg;

namespace {

UnitVec4 random_unit(Rng &rng) {
    return UnitVec4::normalized(Eigen::Vector4d(rng.normal(), rng.normal(), rng.normal(), rng.normal()));
}

const OrthogonalRep &g14_rep() {
    static const OrthogonalRep rep = find_orthogonal_representation(g14(), 1);
    return rep;
}

}  // namespace

TEST(Quaternion, OrthogonalWithConstantDiagonal) {
    Rng rng(2);
    for (int trial = 0; trial < 20; trial++) {
        UnitVec4 p = random_unit(rng), q = random_unit(rng);
        RealMat4 mp = quaternion_matrix(p), mq = quaternion_matrix(q);
        EXPECT_LT((mp.transpose() * mp - RealMat4::Identity()).norm(), 1e-12);
        EXPECT_NEAR(mp.determinant(), 1.0, 1e-12);
        RealMat4 prod = mq.transpose() * mp;
        double ip = q.vec().dot(p.vec());
        for (int k = 0; k < 4; k++) {
            EXPECT_NEAR(prod(k, k), ip, 1e-12);
        }
    }
}

TEST(Quaternion, UnitVectorChecked) {
    EXPECT_THROW(UnitVec4(Eigen::Vector4d(1, 1, 0, 0)), DomainError);
    EXPECT_THROW(UnitVec4::normalized(Eigen::Vector4d::Zero()), DomainError);
}

TEST(Representation, G14Orthogonal) {
    const auto &rep = g14_rep();
    ASSERT_TRUE(rep.valid());
    EXPECT_LT(rep.residual, 1e-8);
    Graph g = g14();
    for (auto [u, v] : g.edges()) {
        EXPECT_LT(std::abs(rep.vectors[u].vec().dot(rep.vectors[v].vec())), 1e-8);
    }
}

TEST(Representation, Deterministic) {
    auto a = find_orthogonal_representation(g14(), 1);
    for (int v = 0; v < 14; v++) {
        EXPECT_EQ(a.vectors[v].vec(), g14_rep().vectors[v].vec());
    }
}

TEST(Representation, JsonRoundTrip) {
    auto j = representation_to_json(g14_rep());
    auto back = representation_from_json(j, g14());
    EXPECT_NEAR(back.residual, g14_rep().residual, 1e-15);
    EXPECT_THROW(representation_from_json(nlohmann::json::object(), g14()), DataError);
}

TEST(PerfectStrategy, WinsEveryQuestion) {
    Graph g = g14();
    auto game = build_game(g, 4);
    Strategy s = build_perfect_strategy(g14_rep());
    EXPECT_GE(quantum_value(s, game), 1 - 1e-9);
    for (auto [u, v] : g.edges()) {
        EXPECT_LT(edge_residual(s, g, u, v), 1e-8);
    }
    EXPECT_THROW(edge_residual(s, g, 0, 9), DomainError);
}

TEST(PerfectStrategy, MatchesStateOracle) {
    // P(a,b|x,y) = |<a b| U_x (x) conj(U_y) |psi>|^2 with |psi> = sum_j |jj>/2.
    Strategy s = build_perfect_strategy(g14_rep());
    Vec16 psi = shared_state();
    for (int x : {0, 3, 13}) {
        for (int y : {0, 4, 9}) {
            Mat16 op;
            Mat4 ux = s.unitary(x), uy = s.unitary(y).conjugate();
            for (int i = 0; i < 4; i++) {
                for (int j = 0; j < 4; j++) {
                    op.block<4, 4>(4 * i, 4 * j) = ux(i, j) * uy;
                }
            }
            Vec16 out = op * psi;
            auto p = s.probabilities(x, y);
            for (int k = 0; k < 16; k++) {
                EXPECT_NEAR(p[k], std::norm(out[k]), 1e-12);
            }
        }
    }
}

TEST(PerfectStrategy, ReversalIdentity) {
    Strategy s = build_perfect_strategy(g14_rep());
    const Graph g = g14();
    for (auto [u, v] : g.edges()) {
        auto puv = s.probabilities(u, v), pvu = s.probabilities(v, u);
        for (int a = 0; a < 4; a++) {
            for (int b = 0; b < 4; b++) {
                EXPECT_NEAR(puv[a * 4 + b], pvu[b * 4 + a], 1e-14);
            }
        }
    }
}

TEST(PerfectStrategy, BehaviorTableNormalized) {
    auto game = build_game(g14(), 4);
    auto t = behavior_table(build_perfect_strategy(g14_rep()), game);
    EXPECT_EQ(t.freqs.size(), 88u);
    EXPECT_LT(t.normalization_error(), 1e-12);
}

TEST(Strategy, RejectsNonUnitary) {
    std::vector<Mat4> us(2, Mat4::Identity());
    us[1](0, 0) = 1.1;
    EXPECT_THROW(Strategy{us}, DomainError);
}

TEST(Strategy, RequiresFourColors) {
    Strategy s = build_perfect_strategy(g14_rep());
    EXPECT_THROW(quantum_value(s, build_game(g14(), 3)), DomainError);
    EXPECT_THROW(quantum_value(s, build_game(complete_graph(3), 4)), DomainError);
}

TEST(Strategy, JsonRoundTrip) {
    Strategy s = build_perfect_strategy(g14_rep());
    Strategy t = strategy_from_json(strategy_to_json(s));
    for (int v = 0; v < s.vertices(); v++) {
        EXPECT_LT((s.unitary(v) - t.unitary(v)).norm(), 1e-15);
    }
}
