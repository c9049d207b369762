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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "nlg/counts.hpp"
#include "nlg/graph.hpp"
#include "nlg/rational.hpp"
#include "nlg/simulator.hpp"

namespace nlg {

/// Fraction of shots won: a = b for vertex records, a != b for edge records.
double circuit_winrate(const CountsRecord &record, int colors = 4);
double circuit_winrate(RecordKind kind, const Distribution &freqs);

/// Circuit labels a game needs: "v{i}" per vertex, "e{u}_{v}" per edge.
std::vector<std::string> required_labels(const Graph &g);

struct CircuitRate {
    std::string label;
    RecordKind kind;
    double p_hat;
    double shots;
    double weight;  ///< questions covered / |Q|
};

struct WinRateReport {
    double omega = 0;
    double omega_v = 0;
    double omega_e = 0;
    std::vector<CircuitRate> circuits;
    double sigma_w = 0;
    int64_t n = 0;  ///< min shots per circuit
    double delta = 0.05;
    double epsilon = 0;
    Rational omega_c;
    std::optional<double> p_value;  ///< only for raw data above omega_c
    bool bound_violated = false;
    bool corrected = false;
    std::string provenance;
};

/// Throws DataError listing missing labels when the dataset is incomplete.
WinRateReport weighted_winrate(const CountsDataset &d, const Graph &g);

/// sigma_w^2 = sum_j w_j^2 p_j (1 - p_j) / n_j.
double sigma_weighted(const std::vector<double> &p_hat, const std::vector<double> &shots,
                      const std::vector<double> &weights);

/// eps = 2 ln(2/delta) / (3n) + sigma_w sqrt(2 ln(2/delta)).
double bernstein_interval(double sigma_w, double n, double delta);

struct Significance {
    double p_value = 1;
    bool bound_violated = false;
};
Significance significance(double omega_bar, double omega_c, double sigma_w, double n);

/// Per-qubit column-stochastic matrices [[P(0|0), P(0|1)], [P(1|0), P(1|1)]].
struct ConfusionCalibration {
    std::array<Eigen::Matrix2d, 4> qubits;

    static ConfusionCalibration identity();
    static ConfusionCalibration from_noise(const NoiseModel &m);
    /// Columns must sum to 1; returns qubits with a diagonal entry below 0.5.
    std::vector<int> validate() const;
    Eigen::Matrix<double, 16, 16> full() const;
};
ConfusionCalibration calibration_from_json(const nlohmann::json &j);
nlohmann::json calibration_to_json(const ConfusionCalibration &c);

/// Applies the inverse confusion, clips negatives, renormalizes.
Distribution spam_correct(const Distribution &freqs, const ConfusionCalibration &cal);

struct CorrectedRecord {
    std::string label;
    RecordKind kind;
    int64_t shots;
    Distribution freqs;
};
CorrectedRecord spam_correct(const CountsRecord &r, const ConfusionCalibration &cal);

/// Full analysis: win rates, sigma_w, Bernstein half-width and, for raw data
/// above omega_c, the significance bound.
WinRateReport analyze(const CountsDataset &d, const Graph &g, const Rational &omega_c, double delta);
/// Same rates on SPAM-corrected frequencies. Never carries a p-value.
WinRateReport analyze_corrected(const CountsDataset &d, const Graph &g, const Rational &omega_c, double delta,
                                const ConfusionCalibration &cal);

nlohmann::ordered_json report_to_json(const WinRateReport &r);

}  // namespace nlg
