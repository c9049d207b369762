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

// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "nlg/circuits.hpp"
#include "nlg/graph.hpp"
#include "nlg/nonsignaling.hpp"
#include "nlg/random.hpp"
#include "nlg/simulator.hpp"
#include "nlg/stats.hpp"
#include "nlg/strategy.hpp"
#include "ns_oracle.hpp"

using namespace nlg;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kRepResidual = 1e-8;
constexpr double kPerfectValue = 1 - 1e-9;
constexpr double kOneRxxValue = 1 - 1e-6;
constexpr double kFitDistance = 1e-5;
constexpr double kOracleTol = 1e-9;
constexpr double kSpamTol = 1e-9;
constexpr double kKlQuantum = 1e-10;
constexpr double kKlOracle = 1e-4;
constexpr double kHalfWidthTarget = 0.003;
constexpr double kHalfWidthSlack = 0.5;
constexpr double kAlpha = 0.05;
constexpr int kRestarts = 64;
constexpr int64_t kShots = 2000;
constexpr uint64_t kSeed = 7;

int failures = 0;

void report(int id, bool ok, const std::string &what) {
    std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << what << std::endl;
    failures += ok ? 0 : 1;
}

void skipped(int id, const std::string &what) {
    std::cout << "SKIPPED [" << id << "] " << what << std::endl;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::pair<int, int>> support_of(const ColoringGame &game) {
    std::vector<std::pair<int, int>> s;
    for (const auto &q : game.questions) s.emplace_back(q.x, q.y);
    return s;
}

}  // namespace

int main() {
    const ColoringGame game = build_game(load_graph(std::string(NLG_DATA_DIR) + "/g14.json"), 4);
    const Rational omega_c(86, 88);

    // 1. Classical bound.
    {
        auto t0 = std::chrono::steady_clock::now();
        auto r = classical_value(game);
        double secs = seconds_since(t0);
        report(1, r.wins == 86 && r.total == 88 && r.value == omega_c && secs < 900,
               "classical value " + std::to_string(r.wins) + "/" + std::to_string(r.total) + " in " + fmt(secs) +
                   " s (want 86/88, < 900 s)");
    }

    // 2. Perfect strategy.
    Strategy perfect(std::vector<Mat4>{});
    OrthogonalRep rep;
    {
        auto t0 = std::chrono::steady_clock::now();
        rep = find_orthogonal_representation(game.graph, kSeed);
        double worst_edge = 0, value = 0;
        if (rep.residual < kRepResidual) {
            perfect = build_perfect_strategy(rep);
            for (auto [u, v] : game.graph.edges()) worst_edge = std::max(worst_edge, edge_residual(perfect, game.graph, u, v));
            value = quantum_value(perfect, game);
        }
        double secs = seconds_since(t0);
        report(2, rep.residual < kRepResidual && worst_edge < kRepResidual && value >= kPerfectValue && secs < 300,
               "representation residual " + fmt(rep.residual) + ", edge residual " + fmt(worst_edge) +
                   ", quantum value 1 - " + fmt(1 - value) + " in " + fmt(secs) + " s");
    }

    // 3. Ansatz plateau.
    GameAnsatzResult one;
    {
        auto t0 = std::chrono::steady_clock::now();
        one = optimize_game_ansatz(game, AnsatzTemplate::one_rxx(), kRestarts, kSeed);
        double worst_fit_init = perfect.vertices() == game.graph.n() ? 0.0 : INFINITY;
        double worst_fit = worst_fit_init;
        for (int v = 0; v < perfect.vertices(); v++) {
            worst_fit = std::max(worst_fit, fit_unitary(perfect.unitary(v), AnsatzTemplate::two_rxx(), kRestarts,
                                                        mix_seed(kSeed, v)).distance);
        }
        double secs = seconds_since(t0);
        report(3, one.value >= kOneRxxValue && worst_fit < kFitDistance && secs < 1800,
               "1-Rxx game value 1 - " + fmt(1 - one.value) + ", worst 2-Rxx fit distance " + fmt(worst_fit) + " in " +
                   fmt(secs) + " s (" + std::to_string(kRestarts) + " restarts)");
    }

    // 4. Circuit/strategy oracle equivalence.
    const auto circuits = game_circuits(AnsatzTemplate::one_rxx(), one.params, game);
    {
        Strategy s = strategy_from_params(AnsatzTemplate::one_rxx(), one.params);
        double worst = 0;
        for (const auto &c : circuits) {
            auto lbl = parse_label(c.label);
            auto direct = s.probabilities(lbl.x, lbl.y);
            auto sim = simulate_circuit(c, NoiseModel{});
            for (int i = 0; i < 16; i++) worst = std::max(worst, std::abs(sim[i] - direct[i]));
        }
        report(4, circuits.size() == 51 && worst < kOracleTol,
               std::to_string(circuits.size()) + " circuits, max deviation " + fmt(worst));
    }

    // 5. Noise presets.
    CountsDataset blue_data, silver_data;
    {
        bool ok = true;
        std::string msg;
        for (const auto &name : preset_names()) {
            if (name == "ideal") continue;
            auto d = run_experiment(circuits, noise_from_preset(name), kShots, kSeed);
            auto r = weighted_winrate(d, game.graph);
            ok = ok && r.omega_e >= r.omega_v;
            msg += name + " w=" + fmt(r.omega) + " (v " + fmt(r.omega_v) + ", e " + fmt(r.omega_e) + "); ";
            if (name == "blue") {
                ok = ok && r.omega >= 0.96 && r.omega <= 0.995;
                blue_data = d;
            }
            if (name == "silver") {
                ok = ok && r.omega >= 0.92 && r.omega <= 0.97;
                silver_data = d;
            }
        }
        report(5, ok, msg + "want blue in [0.96, 0.995], silver in [0.92, 0.97], w_e >= w_v");
    }

    // 6. Statistics.
    {
        auto r = analyze(blue_data, game.graph, omega_c, 0.05);
        auto sig = significance(0.982, omega_c.to_double(), r.sigma_w, static_cast<double>(kShots));
        bool width_ok = std::abs(r.epsilon - kHalfWidthTarget) <= kHalfWidthSlack * kHalfWidthTarget;
        report(6, width_ok && sig.p_value < kAlpha,
               "blue half-width " + fmt(r.epsilon) + " (want 0.003 +/- 50%), p(0.982) = " + fmt(sig.p_value));
        skipped(6, "public Blue dataset not bundled; p <= 4.8e-6 reproduction not run");
    }

    // 7. SPAM correction.
    {
        Rng rng(kSeed);
        double worst = 0;
        for (int trial = 0; trial < 50; trial++) {
            ConfusionCalibration cal;
            for (auto &m : cal.qubits) {
                double a = rng.uniform(0, 0.1), b = rng.uniform(0, 0.1);
                m << 1 - a, b, a, 1 - b;
            }
            Eigen::Matrix<double, 16, 1> p;
            for (int i = 0; i < 16; i++) p[i] = rng.uniform();
            p /= p.sum();
            Eigen::Matrix<double, 16, 1> noisy = cal.full() * p;
            Distribution f;
            for (int i = 0; i < 16; i++) f[i] = noisy[i];
            auto back = spam_correct(f, cal);
            for (int i = 0; i < 16; i++) worst = std::max(worst, std::abs(back[i] - p[i]));
        }
        auto cal = ConfusionCalibration::from_noise(noise_from_preset("silver"));
        double raw = analyze(silver_data, game.graph, omega_c, 0.05).omega;
        double corrected = analyze_corrected(silver_data, game.graph, omega_c, 0.05, cal).omega;
        report(7, worst < kSpamTol && corrected > raw,
               "inverse identity error " + fmt(worst) + "; silver raw " + fmt(raw) + " -> corrected " + fmt(corrected));
    }

    // 8. Non-signaling suite.
    {
        double worst_quantum = 0;
        std::vector<Strategy> quantum{strategy_from_params(AnsatzTemplate::one_rxx(), one.params)};
        if (perfect.vertices() > 0) quantum.push_back(perfect);
        Rng rng(kSeed);
        for (int k = 0; k < 3; k++) {
            std::vector<Mat4> us;
            for (int v = 0; v < 14; v++) {
                Mat4 g;
                for (int i = 0; i < 16; i++) g(i / 4, i % 4) = cdouble(rng.normal(), rng.normal());
                us.push_back(Eigen::HouseholderQR<Mat4>(g).householderQ());
            }
            quantum.emplace_back(us);
        }
        for (const auto &s : quantum) worst_quantum = std::max(worst_quantum, kl_projection(behavior_table(s, game)).kl);

        const std::vector<std::pair<int, int>> chsh{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        double worst_oracle = 0;
        for (int trial = 0; trial < 4; trial++) {
            BehaviorTable t;
            t.outcomes_a = t.outcomes_b = 2;
            t.support = chsh;
            double pa[2] = {rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
            double pb[2] = {rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
            double shift = trial == 0 ? 0.0 : 0.1;
            for (auto [x, y] : chsh) {
                double a0 = pa[x] + (y == 1 ? shift : 0.0);
                t.freqs.push_back({a0 * pb[y], a0 * (1 - pb[y]), (1 - a0) * pb[y], (1 - a0) * (1 - pb[y])});
                t.shots.push_back(0);
            }
            worst_oracle = std::max(worst_oracle, std::abs(kl_projection(t).kl - testing::grid_oracle(t)));
        }

        PbrOptions opt;
        opt.seed = kSeed;
        auto ideal = run_experiment(circuits, NoiseModel{}, kShots, kSeed);
        auto pbr_ideal = kfold_pbr(ideal, game, opt);
        bool all_one = pbr_ideal.per_fold.size() == 5;
        for (const auto &f : pbr_ideal.per_fold) all_one = all_one && f.p_u == 1.0;

        std::vector<Shot> signaling;
        for (int q = 0; q < 4; q++) {
            for (int i = 0; i < 2500; i++) signaling.push_back({q, chsh[q].second, chsh[q].first});
        }
        auto pbr_sig = kfold_pbr(signaling, chsh, 2, 2, opt);

        report(8, worst_quantum < kKlQuantum && worst_oracle < kKlOracle && all_one && pbr_sig.min_p_u < kAlpha,
               "quantum kl max " + fmt(worst_quantum) + ", oracle gap " + fmt(worst_oracle) + ", ideal min p_U " +
                   fmt(pbr_ideal.min_p_u) + ", signaling min p_U " + fmt(pbr_sig.min_p_u) + " (10^4 shots)");
    }

    // 9. Determinism of the full pipeline.
    {
        fs::path base = fs::temp_directory_path() / "nlg_acceptance";
        fs::remove_all(base);
        std::string cmd = std::string(NLG_CLI_PATH) + " run --preset blue --shots 2000 --seed 7 --out-dir ";
        int a = std::system((cmd + (base / "a").string() + " > /dev/null").c_str());
        int b = std::system((cmd + (base / "b").string() + " > /dev/null").c_str());
        bool same = a == 0 && b == 0;
        std::string diff;
        for (const char *f : {"params.json", "circuits.json", "counts.jsonl", "report.json", "frontier.csv", "pbr.json"}) {
            bool eq = fs::exists(base / "a" / f) && slurp(base / "a" / f) == slurp(base / "b" / f);
            if (!eq) diff += std::string(" ") + f;
            same = same && eq;
        }
        report(9, same, same ? "two identical runs produced byte-identical artifacts" : "differs:" + diff);
    }

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
