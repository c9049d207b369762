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

#include <array>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "nlg/behavior.hpp"
#include "nlg/graph.hpp"
#include "nlg/linalg.hpp"

namespace nlg {

/// Point on S^3. Construction fails unless the norm is 1 within 1e-12.
class UnitVec4 {
   public:
    explicit UnitVec4(const Eigen::Vector4d &q);
    /// Normalizes q first; throws on a (near) zero vector.
    static UnitVec4 normalized(const Eigen::Vector4d &q);

    const Eigen::Vector4d &vec() const {
        return q_;
    }
    double operator[](int i) const {
        return q_[i];
    }

   private:
    Eigen::Vector4d q_;
};

struct OrthogonalRep {
    std::vector<UnitVec4> vectors;  ///< one per vertex
    double residual = 0;            ///< max over edges of |<q_u, q_v>|
    int restarts_used = 0;

    bool valid() const {
        return residual < 1e-8;
    }
};

/// M_q: the left-multiplication matrix of the quaternion q. Orthogonal with
/// det +1, and diag(M_q^T M_p) = <q, p> (1, 1, 1, 1).
RealMat4 quaternion_matrix(const UnitVec4 &q);

struct RepSearchOptions {
    int restarts = 32;
    int max_iterations = 20000;
    double gradient_tolerance = 1e-10;
};

/// Multi-restart projected gradient descent on (S^3)^n minimizing
/// sum over edges of <q_u, q_v>^2. Returns the restart with the smallest
/// edge residual (lowest restart index on ties). Never throws on failure;
/// callers inspect `residual`.
OrthogonalRep find_orthogonal_representation(const Graph &graph, uint64_t seed, const RepSearchOptions &options = {});

/// Shared state (1/2) sum_j |j>_A |j>_B on four qubits, Alice = q0 q1.
Vec16 shared_state();

/// Alice applies U(v) on her two qubits, Bob the entrywise conjugate of
/// U(v) on his; both measure in the computational basis.
class Strategy {
   public:
    /// Throws DomainError if any unitary has ||U^dag U - I||_F >= 1e-10.
    explicit Strategy(std::vector<Mat4> unitaries);

    const std::vector<Mat4> &unitaries() const {
        return unitaries_;
    }
    const Mat4 &unitary(int v) const {
        return unitaries_[v];
    }
    int vertices() const {
        return static_cast<int>(unitaries_.size());
    }

    /// P(a, b | x, y) = |(1/2) (U(x) U(y)^dag)_{ab}|^2, indexed [a * 4 + b].
    std::array<double, 16> probabilities(int x, int y) const;

   private:
    std::vector<Mat4> unitaries_;
};

/// U(v) = M_{phi(v)}^T. Requires rep.valid().
Strategy build_perfect_strategy(const OrthogonalRep &rep);

/// max_a |(U(u) U(v)^dag)_{aa}|, the amplitude scale of a same-color answer on
/// edge {u, v}. Throws DomainError unless {u, v} is an edge.
double edge_residual(const Strategy &strategy, const Graph &graph, int u, int v);

double quantum_value(const Strategy &strategy, const ColoringGame &game);

BehaviorTable behavior_table(const Strategy &strategy, const ColoringGame &game);

nlohmann::json representation_to_json(const OrthogonalRep &rep);
OrthogonalRep representation_from_json(const nlohmann::json &j, const Graph &graph);
nlohmann::json strategy_to_json(const Strategy &s);
Strategy strategy_from_json(const nlohmann::json &j);

}  // namespace nlg
