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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlg/circuits.hpp"
#include "nlg/counts.hpp"
#include "nlg/linalg.hpp"

namespace nlg {

using Distribution = std::array<double, 16>;

struct NoiseModel {
    double p1 = 0;     ///< depolarizing strength after each 1-qubit gate
    double p2 = 0;     ///< depolarizing strength after each Rxx
    double eps01 = 0;  ///< P(read 1 | 0), per qubit
    double eps10 = 0;  ///< P(read 0 | 1), per qubit
    std::string name = "custom";

    void validate() const;
    bool ideal() const {
        return p1 == 0 && p2 == 0 && eps01 == 0 && eps10 == 0;
    }
};

/// silver, gold, blue, aria, ideal.
NoiseModel noise_from_preset(const std::string &name);
std::vector<std::string> preset_names();
/// {"preset": name} or {"p1", "p2", "eps01", "eps10"}.
NoiseModel noise_from_json(const nlohmann::json &j);
nlohmann::json noise_to_json(const NoiseModel &m);

/// p = (1 - F) d / (d - 1).
double depolarizing_from_fidelity(double fidelity, int dim);

class DensityMatrix {
   public:
    /// |0000><0000|.
    DensityMatrix();
    explicit DensityMatrix(const Mat16 &rho);

    const Mat16 &matrix() const {
        return rho_;
    }
    void apply_unitary(const Mat16 &u);
    /// (1 - p) rho + p (I_S / d_S) (x) Tr_S rho, i.e. the uniform Pauli twirl on S.
    void depolarize(std::initializer_list<int> qubits, double p);

    double trace_error() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;
    Distribution diagonal() const;

   private:
    Mat16 rho_;
};

using GateObserver = std::function<void(const DensityMatrix &)>;

DensityMatrix evolve(const Circuit &c, const NoiseModel &noise, const GateObserver &observer = {});

/// Ideal-readout distribution followed by the per-qubit confusion.
Distribution simulate_circuit(const Circuit &c, const NoiseModel &noise);

Distribution apply_readout(const Distribution &p, double eps01, double eps10);

std::map<std::string, int64_t> sample_counts(const Distribution &dist, int64_t shots, uint64_t seed);

CountsDataset run_experiment(const std::vector<Circuit> &circuits, const NoiseModel &noise, int64_t shots,
                             uint64_t seed);

}  // namespace nlg
