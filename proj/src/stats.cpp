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

#include "nlg/stats.hpp"

#include <algorithm>
#include <cmath>

#include "nlg/errors.hpp"

namespace nlg {

namespace {

bool wins(RecordKind kind, int outcome) {
    bool same = alice_color(outcome) == bob_color(outcome);
    return kind == RecordKind::Vertex ? same : !same;
}

}  // namespace

double circuit_winrate(const CountsRecord &record, int colors) {
    if (colors != 4) {
        throw DomainError("4-bit outcome strings encode exactly 4 colors");
    }
    record.validate();
    int64_t won = 0;
    for (const auto &[bits, n] : record.counts) {
        if (wins(record.kind, parse_outcome(bits))) {
            won += n;
        }
    }
    return static_cast<double>(won) / static_cast<double>(record.shots);
}

double circuit_winrate(RecordKind kind, const Distribution &freqs) {
    double s = 0;
    for (int i = 0; i < 16; i++) {
        if (wins(kind, i)) {
            s += freqs[i];
        }
    }
    return s;
}

std::vector<std::string> required_labels(const Graph &g) {
    std::vector<std::string> out;
    for (int v = 0; v < g.n(); v++) {
        out.push_back("v" + std::to_string(v));
    }
    for (auto [u, v] : g.edges()) {
        out.push_back("e" + std::to_string(u) + "_" + std::to_string(v));
    }
    return out;
}

double sigma_weighted(const std::vector<double> &p_hat, const std::vector<double> &shots,
                      const std::vector<double> &weights) {
    if (p_hat.size() != shots.size() || p_hat.size() != weights.size()) {
        throw DomainError("sigma_weighted: length mismatch");
    }
    double var = 0;
    for (size_t j = 0; j < p_hat.size(); j++) {
        if (!(p_hat[j] >= 0 && p_hat[j] <= 1) || !(shots[j] >= 1)) {
            throw DomainError("sigma_weighted: p_hat must lie in [0,1] and shots be >= 1");
        }
        var += weights[j] * weights[j] * p_hat[j] * (1 - p_hat[j]) / shots[j];
    }
    return std::sqrt(var);
}

double bernstein_interval(double sigma_w, double n, double delta) {
    if (!(delta > 0 && delta < 1) || !(n >= 1)) {
        throw DomainError("bernstein_interval needs delta in (0,1) and n >= 1");
    }
    double l = std::log(2.0 / delta);
    return 2.0 * l / (3.0 * n) + sigma_w * std::sqrt(2.0 * l);
}

Significance significance(double omega_bar, double omega_c, double sigma_w, double n) {
    Significance s;
    double eps = omega_bar - omega_c;
    if (!(eps > 0)) {
        return s;
    }
    s.bound_violated = true;
    s.p_value = std::exp(-(eps * eps / 2.0) / (sigma_w * sigma_w + eps / (3.0 * n)));
    return s;
}

namespace {

WinRateReport summarize(std::vector<CircuitRate> circuits, const Graph &g) {
    WinRateReport r;
    const double questions = g.n() + 2.0 * g.edges().size();
    double sv = 0, se = 0;
    std::vector<double> p, n, w;
    for (auto &c : circuits) {
        c.weight = (c.kind == RecordKind::Vertex ? 1.0 : 2.0) / questions;
        (c.kind == RecordKind::Vertex ? sv : se) += c.p_hat;
        p.push_back(c.p_hat);
        n.push_back(c.shots);
        w.push_back(c.weight);
    }
    r.omega = (sv + 2 * se) / questions;
    r.omega_v = sv / g.n();
    r.omega_e = g.edges().empty() ? 0 : se / g.edges().size();
    r.sigma_w = sigma_weighted(p, n, w);
    r.circuits = std::move(circuits);
    return r;
}

std::vector<const CountsRecord *> complete_records(const CountsDataset &d, const Graph &g) {
    std::vector<const CountsRecord *> out;
    std::string missing;
    for (const auto &label : required_labels(g)) {
        const CountsRecord *r = d.find(label);
        if (r == nullptr) {
            missing += (missing.empty() ? "" : ", ") + label;
        }
        out.push_back(r);
    }
    if (!missing.empty()) {
        throw DataError("incomplete dataset, missing circuits: " + missing);
    }
    return out;
}

}  // namespace

WinRateReport weighted_winrate(const CountsDataset &d, const Graph &g) {
    d.validate();
    std::vector<CircuitRate> rates;
    for (const auto *r : complete_records(d, g)) {
        rates.push_back({r->label, r->kind, circuit_winrate(*r), static_cast<double>(r->shots), 0});
    }
    auto rep = summarize(std::move(rates), g);
    rep.provenance = d.provenance;
    return rep;
}

namespace {

void finish(WinRateReport &rep, const CountsDataset &d, const Rational &omega_c, double delta) {
    rep.n = d.min_shots();
    rep.delta = delta;
    rep.omega_c = omega_c;
    rep.epsilon = bernstein_interval(rep.sigma_w, static_cast<double>(rep.n), delta);
    if (!rep.corrected) {
        auto s = significance(rep.omega, omega_c.to_double(), rep.sigma_w, static_cast<double>(rep.n));
        rep.bound_violated = s.bound_violated;
        if (s.bound_violated) {
            rep.p_value = s.p_value;
        }
    }
}

}  // namespace

WinRateReport analyze(const CountsDataset &d, const Graph &g, const Rational &omega_c, double delta) {
    auto rep = weighted_winrate(d, g);
    finish(rep, d, omega_c, delta);
    return rep;
}

WinRateReport analyze_corrected(const CountsDataset &d, const Graph &g, const Rational &omega_c, double delta,
                                const ConfusionCalibration &cal) {
    d.validate();
    std::vector<CircuitRate> rates;
    for (const auto *r : complete_records(d, g)) {
        auto c = spam_correct(*r, cal);
        double p = std::clamp(circuit_winrate(r->kind, c.freqs), 0.0, 1.0);  // renormalization round-off
        rates.push_back({r->label, r->kind, p, static_cast<double>(r->shots), 0});
    }
    auto rep = summarize(std::move(rates), g);
    rep.provenance = d.provenance;
    rep.corrected = true;
    finish(rep, d, omega_c, delta);
    return rep;
}

ConfusionCalibration ConfusionCalibration::identity() {
    ConfusionCalibration c;
    for (auto &m : c.qubits) {
        m.setIdentity();
    }
    return c;
}

ConfusionCalibration ConfusionCalibration::from_noise(const NoiseModel &m) {
    ConfusionCalibration c;
    for (auto &q : c.qubits) {
        q << 1 - m.eps01, m.eps10, m.eps01, 1 - m.eps10;
    }
    return c;
}

std::vector<int> ConfusionCalibration::validate() const {
    std::vector<int> flagged;
    for (int q = 0; q < 4; q++) {
        const auto &m = qubits[q];
        for (int col = 0; col < 2; col++) {
            if (m(0, col) < 0 || m(1, col) < 0 || std::abs(m(0, col) + m(1, col) - 1) > 1e-9) {
                throw DataError("confusion matrix of qubit " + std::to_string(q) + " is not column stochastic");
            }
        }
        if (m(0, 0) < 0.5 || m(1, 1) < 0.5) {
            flagged.push_back(q);
        }
    }
    return flagged;
}

Eigen::Matrix<double, 16, 16> ConfusionCalibration::full() const {
    Eigen::Matrix<double, 16, 16> out;
    for (int i = 0; i < 16; i++) {
        for (int j = 0; j < 16; j++) {
            double v = 1;
            for (int q = 0; q < 4; q++) {
                int bit = 8 >> q;
                v *= qubits[q]((i & bit) ? 1 : 0, (j & bit) ? 1 : 0);
            }
            out(i, j) = v;
        }
    }
    return out;
}

ConfusionCalibration calibration_from_json(const nlohmann::json &j) {
    ConfusionCalibration c;
    try {
        const auto &arr = j.contains("qubits") ? j.at("qubits") : j;
        if (arr.size() != 4) {
            throw DataError("calibration needs 4 per-qubit matrices");
        }
        for (int q = 0; q < 4; q++) {
            for (int r = 0; r < 2; r++) {
                for (int s = 0; s < 2; s++) {
                    c.qubits[q](r, s) = arr.at(q).at(r).at(s).get<double>();
                }
            }
        }
    } catch (const nlohmann::json::exception &ex) {
        throw DataError(std::string("bad calibration: ") + ex.what());
    }
    c.validate();
    return c;
}

nlohmann::json calibration_to_json(const ConfusionCalibration &c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &m : c.qubits) {
        arr.push_back({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
    }
    return {{"qubits", arr}};
}

Distribution spam_correct(const Distribution &freqs, const ConfusionCalibration &cal) {
    // Inverting qubit by qubit is the same as inverting the tensor product.
    std::array<Eigen::Matrix2d, 4> inv;
    for (int q = 0; q < 4; q++) {
        double det = cal.qubits[q].determinant();
        if (!(std::abs(det) > 1e-12)) {
            throw NumericError("singular confusion matrix for qubit " + std::to_string(q), std::abs(det));
        }
        inv[q] = cal.qubits[q].inverse();
    }
    Distribution cur = freqs;
    for (int q = 0; q < 4; q++) {
        const int bit = 8 >> q;
        Distribution next{};
        for (int i = 0; i < 16; i++) {
            if (i & bit) {
                continue;
            }
            double p0 = cur[i], p1 = cur[i | bit];
            next[i] = inv[q](0, 0) * p0 + inv[q](0, 1) * p1;
            next[i | bit] = inv[q](1, 0) * p0 + inv[q](1, 1) * p1;
        }
        cur = next;
    }
    double total = 0;
    for (auto &v : cur) {
        v = std::max(v, 0.0);
        total += v;
    }
    if (!(total > 0)) {
        throw NumericError("SPAM correction removed all probability mass", total);
    }
    for (auto &v : cur) {
        v /= total;
    }
    return cur;
}

CorrectedRecord spam_correct(const CountsRecord &r, const ConfusionCalibration &cal) {
    r.validate();
    Distribution f{};
    for (const auto &[bits, n] : r.counts) {
        f[parse_outcome(bits)] = static_cast<double>(n) / static_cast<double>(r.shots);
    }
    return {r.label, r.kind, r.shots, spam_correct(f, cal)};
}

nlohmann::ordered_json report_to_json(const WinRateReport &r) {
    nlohmann::ordered_json j;
    j["data"] = r.corrected ? "spam_corrected" : "raw";
    j["provenance"] = r.provenance;
    j["omega"] = r.omega;
    j["omega_v"] = r.omega_v;
    j["omega_e"] = r.omega_e;
    j["sigma_w"] = r.sigma_w;
    j["n"] = r.n;
    j["ci"] = {{"delta", r.delta}, {"half_width", r.epsilon}};
    j["omega_c"] = r.omega_c.str();
    j["omega_c_decimal"] = r.omega_c.to_double();
    if (r.corrected) {
        j["bound_violated"] = nullptr;
        j["note"] = "SPAM-corrected rates are not evidence against the classical bound";
    } else {
        j["bound_violated"] = r.bound_violated;
    }
    if (r.p_value) {
        j["p_value"] = *r.p_value;
    }
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto &c : r.circuits) {
        p[c.label] = c.p_hat;
    }
    j["p_hat"] = p;
    return j;
}

}  // namespace nlg
