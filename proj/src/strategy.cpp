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

#include "nlg/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "nlg/errors.hpp"
#include "nlg/parallel.hpp"
#include "nlg/random.hpp"

namespace nlg {

double BehaviorTable::normalization_error() const {
    double worst = 0;
    for (const auto &row : freqs) {
        double s = 0;
        for (double p : row) {
            s += p;
        }
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

UnitVec4::UnitVec4(const Eigen::Vector4d &q) : q_(q) {
    if (!q.allFinite() || std::abs(q.norm() - 1.0) > 1e-12) {
        throw DomainError("quaternion is not a unit vector");
    }
}

UnitVec4 UnitVec4::normalized(const Eigen::Vector4d &q) {
    double n = q.norm();
    if (!(n > 1e-300)) {
        throw DomainError("cannot normalize a zero vector");
    }
    return UnitVec4(q / n);
}

RealMat4 quaternion_matrix(const UnitVec4 &u) {
    const double q0 = u[0], q1 = u[1], q2 = u[2], q3 = u[3];
    RealMat4 m;
    m << q0, -q1, -q2, -q3,
         q1, q0, q3, -q2,
         q2, -q3, q0, q1,
         q3, q2, -q1, q0;
    return m;
}

namespace {

struct RepAttempt {
    std::vector<Eigen::Vector4d> q;
    double residual = 1;
};

double rep_objective(const Graph &g, const std::vector<Eigen::Vector4d> &q) {
    double f = 0;
    for (auto [u, v] : g.edges()) {
        double d = q[u].dot(q[v]);
        f += d * d;
    }
    return f;
}

double rep_residual(const Graph &g, const std::vector<Eigen::Vector4d> &q) {
    double r = 0;
    for (auto [u, v] : g.edges()) {
        r = std::max(r, std::abs(q[u].dot(q[v])));
    }
    return r;
}

RepAttempt descend(const Graph &g, uint64_t seed, const RepSearchOptions &opt) {
    Rng rng(seed);
    const int n = g.n();
    std::vector<Eigen::Vector4d> q(n);
    for (auto &v : q) {
        do {
            v = Eigen::Vector4d(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        } while (v.norm() < 1e-6);
        v.normalize();
    }

    std::vector<Eigen::Vector4d> grad(n), trial(n);
    double f = rep_objective(g, q);
    double step = 0.1;
    for (int it = 0; it < opt.max_iterations && f > 0; it++) {
        for (auto &v : grad) {
            v.setZero();
        }
        for (auto [u, v] : g.edges()) {
            double d = q[u].dot(q[v]);
            grad[u] += 2 * d * q[v];
            grad[v] += 2 * d * q[u];
        }
        double gnorm2 = 0;
        for (int v = 0; v < n; v++) {
            grad[v] -= grad[v].dot(q[v]) * q[v];
            gnorm2 += grad[v].squaredNorm();
        }
        if (std::sqrt(gnorm2) < opt.gradient_tolerance) {
            break;
        }
        // Armijo backtracking along the retraction q -> normalize(q - t g).
        step = std::min(step * 2.0, 10.0);
        double ft = f;
        while (step > 1e-16) {
            for (int v = 0; v < n; v++) {
                trial[v] = (q[v] - step * grad[v]).normalized();
            }
            ft = rep_objective(g, trial);
            if (ft <= f - 1e-4 * step * gnorm2) {
                break;
            }
            step *= 0.5;
        }
        if (step <= 1e-16) {
            break;
        }
        q.swap(trial);
        f = ft;
    }
    double residual = rep_residual(g, q);
    return RepAttempt{std::move(q), residual};
}

}  // namespace

OrthogonalRep find_orthogonal_representation(const Graph &graph, uint64_t seed, const RepSearchOptions &options) {
    const int restarts = std::max(1, options.restarts);
    std::vector<RepAttempt> attempts(restarts);
    parallel_for(restarts, [&](size_t r) { attempts[r] = descend(graph, mix_seed(seed, r), options); });

    size_t best = 0;
    for (size_t r = 1; r < attempts.size(); r++) {
        if (attempts[r].residual < attempts[best].residual) {
            best = r;
        }
    }
    OrthogonalRep rep;
    for (const auto &v : attempts[best].q) {
        rep.vectors.push_back(UnitVec4::normalized(v));
    }
    rep.residual = rep_residual(graph, attempts[best].q);
    rep.restarts_used = restarts;
    return rep;
}

Vec16 shared_state() {
    Vec16 psi = Vec16::Zero();
    for (int j = 0; j < 4; j++) {
        psi[4 * j + j] = 0.5;
    }
    return psi;
}

Strategy::Strategy(std::vector<Mat4> unitaries) : unitaries_(std::move(unitaries)) {
    for (size_t v = 0; v < unitaries_.size(); v++) {
        if (!(unitarity_error(unitaries_[v]) < 1e-10)) {
            throw DomainError("strategy matrix for vertex " + std::to_string(v) + " is not unitary");
        }
    }
}

std::array<double, 16> Strategy::probabilities(int x, int y) const {
    Mat4 amp = 0.5 * unitaries_[x] * unitaries_[y].adjoint();
    std::array<double, 16> p{};
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            p[a * 4 + b] = std::norm(amp(a, b));
        }
    }
    return p;
}

Strategy build_perfect_strategy(const OrthogonalRep &rep) {
    if (!rep.valid()) {
        throw DomainError("orthogonal representation residual " + std::to_string(rep.residual) +
                          " is not below 1e-8");
    }
    std::vector<Mat4> us;
    us.reserve(rep.vectors.size());
    for (const auto &q : rep.vectors) {
        us.push_back(quaternion_matrix(q).transpose().cast<cdouble>());
    }
    return Strategy(std::move(us));
}

double edge_residual(const Strategy &strategy, const Graph &graph, int u, int v) {
    if (!graph.has_edge(u, v)) {
        throw DomainError("(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
    }
    Mat4 m = strategy.unitary(u) * strategy.unitary(v).adjoint();
    double r = 0;
    for (int a = 0; a < 4; a++) {
        r = std::max(r, std::abs(m(a, a)));
    }
    return r;
}

namespace {
void check_compatible(const Strategy &strategy, const ColoringGame &game) {
    if (strategy.vertices() != game.graph.n()) {
        throw DomainError("strategy covers " + std::to_string(strategy.vertices()) + " vertices, game has " +
                          std::to_string(game.graph.n()));
    }
    if (game.colors != 4) {
        throw DomainError("two-qubit strategies answer with exactly 4 colors");
    }
}
}  // namespace

double quantum_value(const Strategy &strategy, const ColoringGame &game) {
    check_compatible(strategy, game);
    double total = 0;
    for (const auto &q : game.questions) {
        auto p = strategy.probabilities(q.x, q.y);
        double win = 0;
        for (int a = 0; a < 4; a++) {
            for (int b = 0; b < 4; b++) {
                if (rule_lambda(a, b, q, 4)) {
                    win += p[a * 4 + b];
                }
            }
        }
        total += win;
    }
    return total / static_cast<double>(game.questions.size());
}

BehaviorTable behavior_table(const Strategy &strategy, const ColoringGame &game) {
    check_compatible(strategy, game);
    BehaviorTable t;
    t.outcomes_a = 4;
    t.outcomes_b = 4;
    for (const auto &q : game.questions) {
        auto p = strategy.probabilities(q.x, q.y);
        t.support.emplace_back(q.x, q.y);
        t.freqs.emplace_back(p.begin(), p.end());
        t.shots.push_back(0);
    }
    return t;
}

nlohmann::json representation_to_json(const OrthogonalRep &rep) {
    nlohmann::json j = nlohmann::json::object();
    for (size_t v = 0; v < rep.vectors.size(); v++) {
        const auto &q = rep.vectors[v].vec();
        j[std::to_string(v)] = {q[0], q[1], q[2], q[3]};
    }
    return j;
}

OrthogonalRep representation_from_json(const nlohmann::json &j, const Graph &graph) {
    OrthogonalRep rep;
    try {
        std::vector<Eigen::Vector4d> q(graph.n());
        for (int v = 0; v < graph.n(); v++) {
            const auto &arr = j.at(std::to_string(v));
            if (arr.size() != 4) {
                throw DataError("representation vectors need 4 components");
            }
            q[v] = Eigen::Vector4d(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
                                   arr[3].get<double>());
            rep.vectors.push_back(UnitVec4::normalized(q[v]));
        }
        rep.residual = rep_residual(graph, q);
    } catch (const nlohmann::json::exception &ex) {
        throw DataError(std::string("bad representation json: ") + ex.what());
    }
    return rep;
}

nlohmann::json strategy_to_json(const Strategy &s) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &u : s.unitaries()) {
        nlohmann::json m = nlohmann::json::array();
        for (int r = 0; r < 4; r++) {
            for (int c = 0; c < 4; c++) {
                m.push_back({u(r, c).real(), u(r, c).imag()});
            }
        }
        out.push_back(m);
    }
    return out;
}

Strategy strategy_from_json(const nlohmann::json &j) {
    std::vector<Mat4> us;
    try {
        for (const auto &m : j) {
            if (m.size() != 16) {
                throw DataError("strategy matrices need 16 entries");
            }
            Mat4 u;
            for (int k = 0; k < 16; k++) {
                u(k / 4, k % 4) = cdouble(m[k][0].get<double>(), m[k][1].get<double>());
            }
            us.push_back(u);
        }
    } catch (const nlohmann::json::exception &ex) {
        throw DataError(std::string("bad strategy json: ") + ex.what());
    }
    return Strategy(std::move(us));
}

}  // namespace nlg
