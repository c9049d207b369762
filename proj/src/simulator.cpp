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

#include "nlg/simulator.hpp"

#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "nlg/errors.hpp"
#include "nlg/parallel.hpp"
#include "nlg/random.hpp"

namespace nlg {

namespace {

struct PresetRow {
    const char *name;
    double spam;
    double f2;
    double f1;
};

// Hardware SPAM error, two-qubit and single-qubit gate fidelities.
constexpr PresetRow kPresets[] = {
    {"silver", 0.0083, 0.986, 0.9998},
    {"gold", 0.0044, 0.9855, 0.9995},
    {"blue", 0.0037, 0.995, 0.9997},
    {"aria", 0.0039, 0.996, 0.9995},
};

}  // namespace

void NoiseModel::validate() const {
    auto check = [](double v, const char *what) {
        if (!std::isfinite(v) || v < 0 || v > 1) {
            throw DomainError(std::string("noise parameter ") + what + " must lie in [0, 1]");
        }
    };
    check(p1, "p1");
    check(p2, "p2");
    check(eps01, "eps01");
    check(eps10, "eps10");
}

double depolarizing_from_fidelity(double fidelity, int dim) {
    return (1.0 - fidelity) * dim / (dim - 1.0);
}

NoiseModel noise_from_preset(const std::string &name) {
    if (name == "ideal") {
        NoiseModel m;
        m.name = "ideal";
        return m;
    }
    for (const auto &row : kPresets) {
        if (name == row.name) {
            NoiseModel m;
            m.name = row.name;
            m.p1 = depolarizing_from_fidelity(row.f1, 2);
            m.p2 = depolarizing_from_fidelity(row.f2, 4);
            m.eps01 = row.spam;
            m.eps10 = row.spam;
            return m;
        }
    }
    throw DomainError("unknown noise preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto &row : kPresets) {
        out.emplace_back(row.name);
    }
    out.emplace_back("ideal");
    return out;
}

NoiseModel noise_from_json(const nlohmann::json &j) {
    try {
        if (j.contains("preset")) {
            return noise_from_preset(j.at("preset").get<std::string>());
        }
        NoiseModel m;
        m.p1 = j.at("p1").get<double>();
        m.p2 = j.at("p2").get<double>();
        m.eps01 = j.at("eps01").get<double>();
        m.eps10 = j.at("eps10").get<double>();
        m.name = j.value("name", std::string("custom"));
        m.validate();
        return m;
    } catch (const nlohmann::json::exception &ex) {
        throw DataError(std::string("bad noise config: ") + ex.what());
    }
}

nlohmann::json noise_to_json(const NoiseModel &m) {
    return {{"name", m.name}, {"p1", m.p1}, {"p2", m.p2}, {"eps01", m.eps01}, {"eps10", m.eps10}};
}

DensityMatrix::DensityMatrix() : rho_(Mat16::Zero()) {
    rho_(0, 0) = 1;
}

DensityMatrix::DensityMatrix(const Mat16 &rho) : rho_(rho) {
}

void DensityMatrix::apply_unitary(const Mat16 &u) {
    rho_ = u * rho_ * u.adjoint();
}

void DensityMatrix::depolarize(std::initializer_list<int> qubits, double p) {
    if (p == 0) {
        return;
    }
    int mask = 0;
    for (int q : qubits) {
        mask |= 8 >> q;
    }
    const double d = static_cast<double>(1 << qubits.size());
    // Tr_S rho, indexed by the full index with S bits cleared.
    Mat16 reduced = Mat16::Zero();
    for (int i = 0; i < 16; i++) {
        for (int j = 0; j < 16; j++) {
            if ((i & mask) == (j & mask)) {
                reduced(i & ~mask, j & ~mask) += rho_(i, j);
            }
        }
    }
    Mat16 out = (1 - p) * rho_;
    for (int i = 0; i < 16; i++) {
        for (int j = 0; j < 16; j++) {
            if ((i & mask) == (j & mask)) {
                out(i, j) += p / d * reduced(i & ~mask, j & ~mask);
            }
        }
    }
    rho_ = out;
}

double DensityMatrix::trace_error() const {
    return std::abs(rho_.trace() - cdouble(1, 0));
}

double DensityMatrix::hermiticity_error() const {
    return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat16> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Distribution DensityMatrix::diagonal() const {
    Distribution p{};
    for (int i = 0; i < 16; i++) {
        p[i] = rho_(i, i).real();
    }
    return p;
}

DensityMatrix evolve(const Circuit &c, const NoiseModel &noise, const GateObserver &observer) {
    if (c.n_qubits != 4) {
        throw DomainError("simulator handles 4-qubit circuits only");
    }
    noise.validate();
    c.validate();
    DensityMatrix rho;
    for (const auto &g : c.gates) {
        Mat16 u = gate_unitary(g, 4);
        rho.apply_unitary(u);
        if (const auto *x = std::get_if<Rxx>(&g)) {
            rho.depolarize({x->a, x->b}, noise.p2);
        } else if (const auto *r = std::get_if<Rphi>(&g)) {
            rho.depolarize({r->q}, noise.p1);
        } else {
            rho.depolarize({std::get<Rz>(g).q}, noise.p1);
        }
        if (observer) {
            observer(rho);
        }
    }
    return rho;
}

Distribution apply_readout(const Distribution &p, double eps01, double eps10) {
    Distribution cur = p;
    for (int q = 0; q < 4; q++) {
        const int bit = 8 >> q;
        Distribution next{};
        for (int i = 0; i < 16; i++) {
            if (i & bit) {
                continue;
            }
            double p0 = cur[i], p1 = cur[i | bit];
            next[i] = (1 - eps01) * p0 + eps10 * p1;
            next[i | bit] = eps01 * p0 + (1 - eps10) * p1;
        }
        cur = next;
    }
    return cur;
}

Distribution simulate_circuit(const Circuit &c, const NoiseModel &noise) {
    Distribution p = evolve(c, noise).diagonal();
    for (auto &v : p) {
        v = std::max(v, 0.0);  // round-off only; rho stays PSD
    }
    return apply_readout(p, noise.eps01, noise.eps10);
}

std::map<std::string, int64_t> sample_counts(const Distribution &dist, int64_t shots, uint64_t seed) {
    if (shots < 1) {
        throw DomainError("shots must be at least 1");
    }
    double total = 0;
    for (double v : dist) {
        if (!std::isfinite(v) || v < -1e-12) {
            throw DomainError("distribution has a negative or non-finite entry");
        }
        total += v;
    }
    if (std::abs(total - 1) > 1e-9) {
        throw DomainError("distribution sums to " + std::to_string(total));
    }
    std::array<double, 16> cdf{};
    double acc = 0;
    int last = 0;
    for (int i = 0; i < 16; i++) {
        acc += std::max(dist[i], 0.0);
        cdf[i] = acc;
        if (dist[i] > 0) {
            last = i;
        }
    }
    std::array<int64_t, 16> tally{};
    Rng rng(seed);
    for (int64_t s = 0; s < shots; s++) {
        double u = rng.uniform() * acc;
        int k = 0;
        while (k < last && (cdf[k] <= u || dist[k] <= 0)) {
            k++;
        }
        tally[k]++;
    }
    std::map<std::string, int64_t> out;
    for (int i = 0; i < 16; i++) {
        if (tally[i] > 0) {
            out[outcome_string(i)] = tally[i];
        }
    }
    return out;
}

CountsDataset run_experiment(const std::vector<Circuit> &circuits, const NoiseModel &noise, int64_t shots,
                             uint64_t seed) {
    noise.validate();
    std::set<std::string> labels;
    for (const auto &c : circuits) {
        if (!labels.insert(c.label).second) {
            throw DomainError("duplicate circuit label " + c.label);
        }
    }
    CountsDataset d;
    d.provenance = "simulated";
    d.records.resize(circuits.size());
    parallel_for(circuits.size(), [&](size_t i) {
        const auto &c = circuits[i];
        CountsRecord &r = d.records[i];
        r.label = c.label;
        r.kind = parse_label(c.label).kind;
        r.shots = shots;
        r.counts = sample_counts(simulate_circuit(c, noise), shots, mix_seed(seed, fnv1a(c.label.data(), c.label.size())));
    });
    return d;
}

}  // namespace nlg
