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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlg/circuits.hpp"
#include "nlg/errors.hpp"
#include "nlg/graph.hpp"
#include "nlg/nonsignaling.hpp"
#include "nlg/parallel.hpp"
#include "nlg/simulator.hpp"
#include "nlg/stats.hpp"
#include "nlg/strategy.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::string kDefaultGraph = std::string(NLG_DATA_DIR) + "/g14.json";

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json meta(const nlg::Graph &g, uint64_t seed) {
    json m;
    m["version"] = NLG_VERSION;
    m["seed"] = seed;
    m["graph"] = g.name();
    m["graph_hash"] = hex64(g.hash());
    return m;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) {
        throw nlg::DataError("cannot write " + path);
    }
    out << text;
}

void write_json(const std::string &path, const json &j) {
    write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw nlg::DataError("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &ex) {
        throw nlg::DataError("cannot parse " + path + ": " + ex.what());
    }
}

/// Wins over questions, unreduced, as in "86/88 ≈ 0.97727".
std::string format_value(int64_t wins, int64_t total) {
    if (wins == total) {
        return "1";
    }
    std::ostringstream os;
    os << wins << "/" << total << " ≈ " << std::fixed << std::setprecision(5)
       << static_cast<double>(wins) / static_cast<double>(total);
    return os.str();
}

nlg::NoiseModel pick_noise(const std::string &preset, const std::string &noise_file) {
    if (!noise_file.empty()) {
        return nlg::noise_from_json(read_json(noise_file));
    }
    return nlg::noise_from_preset(preset);
}

struct StrategyChoice {
    std::string template_name = "one_rxx";
    std::string mode = "game";  // game: optimize the ansatz on the game; fit: fit quaternion unitaries
    int restarts = 64;
};

struct FittedParams {
    nlg::AnsatzTemplate tmpl = nlg::AnsatzTemplate::one_rxx();
    std::vector<std::vector<double>> params;
    double value = 0;
};

FittedParams fit_strategy(const nlg::ColoringGame &game, const StrategyChoice &c, uint64_t seed) {
    FittedParams out;
    out.tmpl = nlg::AnsatzTemplate::from_name(c.template_name);
    if (c.mode == "game") {
        auto r = nlg::optimize_game_ansatz(game, out.tmpl, c.restarts, seed);
        out.params = r.params;
        out.value = r.value;
        return out;
    }
    if (c.mode != "fit") {
        throw nlg::DomainError("strategy mode must be 'game' or 'fit'");
    }
    auto rep = nlg::find_orthogonal_representation(game.graph, seed);
    if (!rep.valid()) {
        throw nlg::NumericError("no orthogonal representation found", rep.residual);
    }
    auto perfect = nlg::build_perfect_strategy(rep);
    for (int v = 0; v < game.graph.n(); v++) {
        auto f = nlg::fit_unitary(perfect.unitary(v), out.tmpl, c.restarts, nlg::mix_seed(seed, v));
        out.params.push_back(f.params);
    }
    out.value = nlg::quantum_value(nlg::strategy_from_params(out.tmpl, out.params), game);
    return out;
}

json circuits_json(const std::vector<nlg::Circuit> &circuits, const nlg::Graph &g, uint64_t seed) {
    json j;
    j["meta"] = meta(g, seed);
    json arr = json::array();
    for (const auto &c : circuits) {
        arr.push_back(json(nlg::circuit_to_json(c)));
    }
    j["circuits"] = arr;
    return j;
}

std::vector<nlg::Circuit> circuits_from_file(const std::string &path) {
    auto j = read_json(path);
    std::vector<nlg::Circuit> out;
    const auto &arr = j.contains("circuits") ? j.at("circuits") : j;
    for (const auto &c : arr) {
        out.push_back(nlg::circuit_from_json(c));
    }
    return out;
}

json analysis_json(const nlg::CountsDataset &d, const nlg::Graph &g, double delta, uint64_t seed,
                   const std::optional<nlg::ConfusionCalibration> &cal, const std::string &noise_label) {
    auto game = nlg::build_game(g, 4);
    auto omega_c = nlg::classical_value(game).value;
    json j;
    j["meta"] = meta(g, seed);
    j["meta"]["noise"] = noise_label;
    if (d.provenance == "simulated") {
        j["meta"]["noise_model"] = "phenomenological noise (depolarizing + readout confusion)";
    }
    j["meta"]["n_rule"] = "sigma_w uses each circuit's shots; the range term uses the minimum shots per circuit";
    j["raw"] = nlg::report_to_json(nlg::analyze(d, g, omega_c, delta));
    if (cal) {
        j["spam_corrected"] = nlg::report_to_json(nlg::analyze_corrected(d, g, omega_c, delta, *cal));
    }
    return j;
}

std::string frontier_csv(const json &report, const nlg::Rational &omega_c, const nlg::Graph &g) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "series,omega_v,omega_e,omega\n";
    for (const char *key : {"raw", "spam_corrected"}) {
        if (report.contains(key)) {
            const auto &r = report.at(key);
            os << key << "," << r.at("omega_v").get<double>() << "," << r.at("omega_e").get<double>() << ","
               << r.at("omega").get<double>() << "\n";
        }
    }
    // Locus of omega = omega_c: n w_v + 2|E| w_e = |Q| omega_c.
    const double nv = g.n(), ne = static_cast<double>(g.edges().size());
    const double q = nv + 2 * ne;
    for (int k = 0; k <= 100; k++) {
        double wv = k / 100.0;
        double we = (q * omega_c.to_double() - nv * wv) / (2 * ne);
        if (we >= 0 && we <= 1) {
            os << "classical_bound," << wv << "," << we << "," << omega_c.to_double() << "\n";
        }
    }
    return os.str();
}

json pbr_json(const nlg::CountsDataset &d, const nlg::Graph &g, int folds, uint64_t seed, double alpha,
              double pseudo) {
    auto game = nlg::build_game(g, 4);
    nlg::PbrOptions po;
    po.folds = folds;
    po.seed = seed;
    po.alpha = alpha;
    po.pseudo_count = pseudo;
    json j = nlg::pbr_to_json(nlg::kfold_pbr(d, game, po));
    j["meta"] = meta(g, seed);
    return j;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Graph-coloring nonlocal game toolkit"};
    app.set_version_flag("--version", std::string(NLG_VERSION));
    app.require_subcommand(1);

    std::string graph_path = kDefaultGraph;
    int colors = 4;
    uint64_t seed = 7;

    // classical-value
    auto *cv = app.add_subcommand("classical-value", "exact classical value of the coloring game");
    bool allow_large = false;
    cv->add_option("--graph", graph_path, "graph JSON")->check(CLI::ExistingFile);
    cv->add_option("--colors", colors, "number of colors")->check(CLI::Range(1, 64));
    cv->add_flag("--allow-large", allow_large, "lift the size guard");

    // repfind
    auto *rf = app.add_subcommand("repfind", "orthogonal representation in R^4");
    std::string rep_out = "representation.json";
    int rep_restarts = 32;
    rf->add_option("--graph", graph_path)->check(CLI::ExistingFile);
    rf->add_option("--seed", seed);
    rf->add_option("--restarts", rep_restarts)->check(CLI::PositiveNumber);
    rf->add_option("--out", rep_out);

    // strategy-fit
    auto *sf = app.add_subcommand("strategy-fit", "native-gate parameters for every vertex");
    StrategyChoice choice;
    std::string params_out = "params.json";
    sf->add_option("--graph", graph_path)->check(CLI::ExistingFile);
    sf->add_option("--seed", seed);
    sf->add_option("--template", choice.template_name, "one_rxx or two_rxx");
    sf->add_option("--mode", choice.mode, "game (optimize on the game) or fit (fit quaternion unitaries)");
    sf->add_option("--restarts", choice.restarts)->check(CLI::PositiveNumber);
    sf->add_option("--out", params_out);

    // circuits
    auto *ci = app.add_subcommand("circuits", "emit the game circuits");
    std::string params_in, circuits_out = "circuits.json";
    ci->add_option("--graph", graph_path)->check(CLI::ExistingFile);
    ci->add_option("--params", params_in)->required()->check(CLI::ExistingFile);
    ci->add_option("--out", circuits_out);

    // simulate
    auto *si = app.add_subcommand("simulate", "density-matrix simulation and shot sampling");
    std::string circuits_in, preset = "blue", noise_file, counts_out = "counts.jsonl";
    int64_t shots = 2000;
    si->add_option("--circuits", circuits_in)->required()->check(CLI::ExistingFile);
    si->add_option("--preset", preset, "silver, gold, blue, aria or ideal");
    si->add_option("--noise", noise_file, "noise JSON")->check(CLI::ExistingFile);
    si->add_option("--shots", shots)->check(CLI::PositiveNumber);
    si->add_option("--seed", seed);
    si->add_option("--out", counts_out);

    // analyze
    auto *an = app.add_subcommand("analyze", "win rates, confidence interval and significance");
    std::string counts_in, report_out, calibration_file, calibration_preset;
    double delta = 0.05;
    an->add_option("--counts", counts_in)->required()->check(CLI::ExistingFile);
    an->add_option("--graph", graph_path)->check(CLI::ExistingFile);
    an->add_option("--delta", delta)->check(CLI::Range(1e-12, 1 - 1e-12));
    an->add_option("--calibration", calibration_file, "confusion matrices for SPAM correction")
        ->check(CLI::ExistingFile);
    an->add_option("--calibration-preset", calibration_preset, "SPAM correction from a noise preset");
    an->add_option("--out", report_out);

    // pbr
    auto *pb = app.add_subcommand("pbr", "k-fold prediction-based-ratio non-signaling test");
    int folds = 5;
    double alpha = 0.05, pseudo = 0;
    std::string pbr_out;
    pb->add_option("--counts", counts_in)->required()->check(CLI::ExistingFile);
    pb->add_option("--graph", graph_path)->check(CLI::ExistingFile);
    pb->add_option("--folds", folds)->check(CLI::Range(2, 1000));
    pb->add_option("--seed", seed);
    pb->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    pb->add_option("--pseudo-count", pseudo, "exploratory smoothing; disables inference")
        ->check(CLI::NonNegativeNumber);
    pb->add_option("--out", pbr_out);

    // run
    auto *rn = app.add_subcommand("run", "full pipeline: strategy, circuits, counts, reports");
    std::string out_dir = "nlg_out", params_file;
    bool spam_correct = false;
    rn->add_option("--graph", graph_path)->check(CLI::ExistingFile);
    rn->add_option("--preset", preset);
    rn->add_option("--noise", noise_file)->check(CLI::ExistingFile);
    rn->add_option("--shots", shots)->check(CLI::PositiveNumber);
    rn->add_option("--seed", seed);
    rn->add_option("--template", choice.template_name);
    rn->add_option("--mode", choice.mode);
    rn->add_option("--restarts", choice.restarts)->check(CLI::PositiveNumber);
    rn->add_option("--params", params_file, "reuse fitted parameters")->check(CLI::ExistingFile);
    rn->add_option("--counts", counts_in, "analyze these counts instead of simulating")->check(CLI::ExistingFile);
    rn->add_option("--delta", delta)->check(CLI::Range(1e-12, 1 - 1e-12));
    rn->add_option("--folds", folds)->check(CLI::Range(2, 1000));
    rn->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    rn->add_flag("--spam-correct", spam_correct, "add a SPAM-corrected section (never used for claims)");
    rn->add_option("--calibration", calibration_file)->check(CLI::ExistingFile);
    rn->add_option("--out-dir", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        nlg::Graph g = nlg::load_graph(graph_path);

        if (cv->parsed()) {
            auto game = nlg::build_game(g, colors);
            nlg::ClassicalOptions opt;
            opt.allow_large = allow_large;
            auto r = nlg::classical_value(game, opt);
            std::cout << format_value(r.wins, r.total) << "\n";
            return 0;
        }

        if (rf->parsed()) {
            nlg::RepSearchOptions opt;
            opt.restarts = rep_restarts;
            auto rep = nlg::find_orthogonal_representation(g, seed, opt);
            json j;
            j["meta"] = meta(g, seed);
            j["residual"] = rep.residual;
            j["vectors"] = nlg::representation_to_json(rep);
            write_json(rep_out, j);
            std::cout << "edge residual " << rep.residual << (rep.valid() ? "" : " (not orthogonal)") << "\n";
            return rep.valid() ? 0 : 4;
        }

        if (sf->parsed()) {
            auto game = nlg::build_game(g, 4);
            auto fp = fit_strategy(game, choice, seed);
            json j = nlg::params_to_json(fp.tmpl, fp.params, fp.value);
            j["meta"] = meta(g, seed);
            write_json(params_out, j);
            std::cout << fp.tmpl.name() << " quantum value " << std::setprecision(12) << fp.value << "\n";
            return 0;
        }

        if (ci->parsed()) {
            auto game = nlg::build_game(g, 4);
            auto [tmpl, params] = nlg::params_from_json(read_json(params_in));
            write_json(circuits_out, circuits_json(nlg::game_circuits(tmpl, params, game), g, seed));
            return 0;
        }

        if (si->parsed()) {
            auto noise = pick_noise(preset, noise_file);
            auto d = nlg::run_experiment(circuits_from_file(circuits_in), noise, shots, seed);
            nlg::save_counts(counts_out, d);
            return 0;
        }

        if (an->parsed()) {
            auto d = nlg::load_counts(counts_in);
            std::optional<nlg::ConfusionCalibration> cal;
            if (!calibration_file.empty()) {
                cal = nlg::calibration_from_json(read_json(calibration_file));
            } else if (!calibration_preset.empty()) {
                cal = nlg::ConfusionCalibration::from_noise(nlg::noise_from_preset(calibration_preset));
            }
            json j = analysis_json(d, g, delta, seed, cal, d.provenance);
            if (report_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                write_json(report_out, j);
            }
            return 0;
        }

        if (pb->parsed()) {
            json j = pbr_json(nlg::load_counts(counts_in), g, folds, seed, alpha, pseudo);
            if (pbr_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                write_json(pbr_out, j);
            }
            return 0;
        }

        // run
        fs::create_directories(out_dir);
        auto game = nlg::build_game(g, 4);
        FittedParams fp;
        if (!params_file.empty()) {
            auto [tmpl, params] = nlg::params_from_json(read_json(params_file));
            fp.tmpl = tmpl;
            fp.params = params;
            fp.value = nlg::quantum_value(nlg::strategy_from_params(tmpl, params), game);
        } else {
            fp = fit_strategy(game, choice, seed);
        }
        json pj = nlg::params_to_json(fp.tmpl, fp.params, fp.value);
        pj["meta"] = meta(g, seed);
        write_json(out_dir + "/params.json", pj);

        auto circuits = nlg::game_circuits(fp.tmpl, fp.params, game);
        write_json(out_dir + "/circuits.json", circuits_json(circuits, g, seed));

        nlg::CountsDataset d;
        std::string noise_label;
        std::optional<nlg::NoiseModel> noise;
        if (!counts_in.empty()) {
            d = nlg::load_counts(counts_in);
            noise_label = d.provenance;
        } else {
            noise = pick_noise(preset, noise_file);
            noise_label = noise->name;
            d = nlg::run_experiment(circuits, *noise, shots, seed);
        }
        nlg::save_counts(out_dir + "/counts.jsonl", d);

        std::optional<nlg::ConfusionCalibration> cal;
        if (spam_correct) {
            if (!calibration_file.empty()) {
                cal = nlg::calibration_from_json(read_json(calibration_file));
            } else if (noise) {
                cal = nlg::ConfusionCalibration::from_noise(*noise);
            } else {
                throw nlg::DomainError("--spam-correct on ingested counts needs --calibration");
            }
        }
        json report = analysis_json(d, g, delta, seed, cal, noise_label);
        report["meta"]["template"] = fp.tmpl.name();
        report["meta"]["strategy_value"] = fp.value;
        if (noise) {
            report["meta"]["noise_parameters"] = nlg::noise_to_json(*noise);
            report["meta"]["noise_caveat"] =
                "preset fidelities were estimated in different ways per system and are mapped uniformly";
        }
        write_json(out_dir + "/report.json", report);
        write_text(out_dir + "/frontier.csv", frontier_csv(report, nlg::classical_value(game).value, g));
        write_json(out_dir + "/pbr.json", pbr_json(d, g, folds, seed, alpha, 0));

        const auto &raw = report.at("raw");
        std::cout << "omega " << std::setprecision(6) << raw.at("omega").get<double>() << " +/- "
                  << raw.at("ci").at("half_width").get<double>();
        if (raw.contains("p_value")) {
            std::cout << "  p <= " << raw.at("p_value").get<double>();
        }
        std::cout << "\n";
        return 0;
    } catch (const nlg::SizeError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlg::DataError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nlg::DomainError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nlg::NumericError &e) {
        std::cerr << "error: " << e.what() << " (residual " << e.last_residual << ")\n";
        return 4;
    }
}
