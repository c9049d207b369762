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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "nlg/graph.hpp"
#include "nlg/linalg.hpp"
#include "nlg/strategy.hpp"

namespace nlg {

// Gate conventions (trapped-ion native set):
//   Rphi(theta, phi) = exp(-i theta/2 (cos(phi) X + sin(phi) Y))
//   Rz(theta)        = exp(-i theta/2 Z)
//   Rxx(theta)       = exp(-i theta X (x) X); theta = pi/4 is fully entangling.
// Multi-qubit matrices use qubit 0 as the most significant bit.

struct Rphi {
    int q;
    double theta;
    double phi;
};
struct Rz {
    int q;
    double theta;
};
struct Rxx {
    int a;
    int b;
    double theta;
};
using NativeGate = std::variant<Rphi, Rz, Rxx>;

Mat2 rphi_matrix(double theta, double phi);
Mat2 rz_matrix(double theta);
Mat4 rxx_matrix(double theta);

inline constexpr double kFullyEntangling = 0.78539816339744830962;  // pi/4

struct Circuit {
    int n_qubits = 4;
    std::vector<NativeGate> gates;
    std::string label;

    int entangling_count() const;
    /// Throws DomainError on out-of-range targets or non-finite angles.
    void validate() const;
};

/// 2^n x 2^n unitary of the whole circuit.
Eigen::MatrixXcd circuit_unitary(const Circuit &c);

/// Embeds gate g into the 2^n space.
Eigen::MatrixXcd gate_unitary(const NativeGate &g, int n_qubits);

/// Two Bell pairs on (0, 2) and (1, 3): output is (1/2) sum_j |j>_A |j>_B
/// with Alice on qubits {0, 1} and Bob on {2, 3}. Two Rxx(pi/4) gates.
Circuit bell_prep_circuit();

/// Gate sequence realizing the entrywise conjugate of c's unitary, up to a
/// global phase, using only native gates and without adding Rxx gates.
std::vector<NativeGate> conjugate_gates(const std::vector<NativeGate> &gates);

enum class AnsatzKind { OneRxx, TwoRxx };

/// Parametrized two-qubit measurement circuit.
///   OneRxx (8 angles):  Rphi(t0,p0) x Rphi(t1,p1); Rxx(pi/4); Rphi(t2,p2) x Rphi(t3,p3)
///   TwoRxx (18 angles): three layers of [Rphi(t,p) then Rz(l)] on each qubit,
///                       separated by two Rxx(pi/4).
/// Params for a layer are grouped per qubit: (theta, phi[, lambda]).
class AnsatzTemplate {
   public:
    static AnsatzTemplate one_rxx() {
        return AnsatzTemplate(AnsatzKind::OneRxx);
    }
    static AnsatzTemplate two_rxx() {
        return AnsatzTemplate(AnsatzKind::TwoRxx);
    }
    static AnsatzTemplate from_name(const std::string &name);

    AnsatzKind kind() const {
        return kind_;
    }
    std::string name() const;
    size_t parameter_count() const;
    int entangling_gates() const;

    /// Native gates on qubits (qa, qb); qa is the more significant bit.
    std::vector<NativeGate> gates(std::span<const double> params, int qa, int qb) const;

   private:
    explicit AnsatzTemplate(AnsatzKind k) : kind_(k) {
    }
    AnsatzKind kind_;
};

/// 4x4 unitary of the ansatz circuit. Throws DomainError on wrong arity.
Mat4 ansatz_unitary(const AnsatzTemplate &t, std::span<const double> params);

struct FitResult {
    std::vector<double> params;
    double distance = 0;  ///< min over theta of ||ansatz - e^{i theta} target||_F
};

FitResult fit_unitary(const Mat4 &target, const AnsatzTemplate &t, int restarts, uint64_t seed);

struct GameAnsatzResult {
    std::vector<std::vector<double>> params;  ///< per vertex
    double value = 0;                         ///< quantum value of the strategy
    size_t best_restart = 0;
    std::vector<double> restart_values;       ///< 1 - value per restart
};

struct GameAnsatzOptions {
    int max_iterations = 4000;
    double gradient_tolerance = 1e-9;
    double fd_step = 1e-6;
};

/// Maximizes the quantum value over all per-vertex ansatz parameters, with
/// Bob applying the conjugate of Alice's unitary.
GameAnsatzResult optimize_game_ansatz(const ColoringGame &game, const AnsatzTemplate &t, int restarts, uint64_t seed,
                                      const GameAnsatzOptions &options = {});

Strategy strategy_from_params(const AnsatzTemplate &t, const std::vector<std::vector<double>> &params);

/// One circuit per vertex ("v{i}") then one per undirected edge ("e{u}_{v}")
/// in graph edge order: Bell preparation, the ansatz for U(x) on qubits
/// (0, 1), and the conjugate of U(y) on qubits (2, 3).
std::vector<Circuit> game_circuits(const AnsatzTemplate &t, const std::vector<std::vector<double>> &params,
                                   const ColoringGame &game);

nlohmann::json circuit_to_json(const Circuit &c);
Circuit circuit_from_json(const nlohmann::json &j);

nlohmann::json params_to_json(const AnsatzTemplate &t, const std::vector<std::vector<double>> &params, double value);
std::pair<AnsatzTemplate, std::vector<std::vector<double>>> params_from_json(const nlohmann::json &j);

}  // namespace nlg
