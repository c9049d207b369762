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

#include "nlg/circuits.hpp"

#include <cmath>
#include <numbers>

#include "nlg/errors.hpp"
#include "nlg/optimize.hpp"
#include "nlg/parallel.hpp"

namespace nlg {

namespace {
constexpr cdouble kI(0, 1);
}

Mat2 rphi_matrix(double theta, double phi) {
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat2 m;
    m << c, -kI * s * std::exp(-kI * phi),
        -kI * s * std::exp(kI * phi), c;
    return m;
}

Mat2 rz_matrix(double theta) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::exp(-kI * (theta / 2));
    m(1, 1) = std::exp(kI * (theta / 2));
    return m;
}

Mat4 rxx_matrix(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    Mat4 m = Mat4::Zero();
    for (int i = 0; i < 4; i++) {
        m(i, i) = c;
        m(3 - i, i) = -kI * s;
    }
    return m;
}

int Circuit::entangling_count() const {
    int k = 0;
    for (const auto &g : gates) {
        k += std::holds_alternative<Rxx>(g);
    }
    return k;
}

void Circuit::validate() const {
    auto check_q = [&](int q) {
        if (q < 0 || q >= n_qubits) {
            throw DomainError("gate target " + std::to_string(q) + " out of range in circuit " + label);
        }
    };
    auto check_angle = [&](double a) {
        if (!std::isfinite(a)) {
            throw DomainError("non-finite angle in circuit " + label);
        }
    };
    for (const auto &g : gates) {
        std::visit(
            [&](const auto &gate) {
                using T = std::decay_t<decltype(gate)>;
                if constexpr (std::is_same_v<T, Rphi>) {
                    check_q(gate.q);
                    check_angle(gate.theta);
                    check_angle(gate.phi);
                } else if constexpr (std::is_same_v<T, Rz>) {
                    check_q(gate.q);
                    check_angle(gate.theta);
                } else {
                    check_q(gate.a);
                    check_q(gate.b);
                    check_angle(gate.theta);
                    if (gate.a == gate.b) {
                        throw DomainError("Rxx needs two distinct qubits in circuit " + label);
                    }
                }
            },
            g);
    }
}

namespace {

Eigen::MatrixXcd embed_single(const Mat2 &m, int q, int n) {
    const int dim = 1 << n;
    const int bit = 1 << (n - 1 - q);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; i++) {
        int bi = (i & bit) ? 1 : 0;
        int base = i & ~bit;
        out(base, i) = m(0, bi);
        out(base | bit, i) = m(1, bi);
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd gate_unitary(const NativeGate &g, int n) {
    const int dim = 1 << n;
    if (const auto *r = std::get_if<Rphi>(&g)) {
        return embed_single(rphi_matrix(r->theta, r->phi), r->q, n);
    }
    if (const auto *r = std::get_if<Rz>(&g)) {
        return embed_single(rz_matrix(r->theta), r->q, n);
    }
    const auto &x = std::get<Rxx>(g);
    const int flip = (1 << (n - 1 - x.a)) | (1 << (n - 1 - x.b));
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; i++) {
        out(i, i) = std::cos(x.theta);
        out(i ^ flip, i) = -kI * std::sin(x.theta);
    }
    return out;
}

Eigen::MatrixXcd circuit_unitary(const Circuit &c) {
    c.validate();
    const int dim = 1 << c.n_qubits;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto &g : c.gates) {
        u = gate_unitary(g, c.n_qubits) * u;
    }
    return u;
}

Circuit bell_prep_circuit() {
    Circuit c;
    c.n_qubits = 4;
    c.label = "bell_prep";
    // Rxx(pi/4)|00> = (|00> - i|11>)/sqrt2; Rz(pi/2) on the first qubit removes the -i.
    c.gates = {
        Rxx{0, 2, kFullyEntangling},
        Rz{0, std::numbers::pi / 2},
        Rxx{1, 3, kFullyEntangling},
        Rz{1, std::numbers::pi / 2},
    };
    return c;
}

std::vector<NativeGate> conjugate_gates(const std::vector<NativeGate> &gates) {
    std::vector<NativeGate> out;
    out.reserve(gates.size() + 2);
    for (const auto &g : gates) {
        if (const auto *r = std::get_if<Rphi>(&g)) {
            out.push_back(Rphi{r->q, -r->theta, -r->phi});
        } else if (const auto *r = std::get_if<Rz>(&g)) {
            out.push_back(Rz{r->q, -r->theta});
        } else {
            // conj(exp(-i t XX)) = exp(-i (pi/2 - t) XX) * (i XX), and X = i Rphi(pi, 0).
            const auto &x = std::get<Rxx>(g);
            out.push_back(Rphi{x.a, std::numbers::pi, 0.0});
            out.push_back(Rphi{x.b, std::numbers::pi, 0.0});
            out.push_back(Rxx{x.a, x.b, std::numbers::pi / 2 - x.theta});
        }
    }
    return out;
}

AnsatzTemplate AnsatzTemplate::from_name(const std::string &name) {
    if (name == "one_rxx" || name == "OneRxx" || name == "1rxx") {
        return one_rxx();
    }
    if (name == "two_rxx" || name == "TwoRxx" || name == "2rxx") {
        return two_rxx();
    }
    throw DomainError("unknown ansatz template: " + name);
}

std::string AnsatzTemplate::name() const {
    return kind_ == AnsatzKind::OneRxx ? "one_rxx" : "two_rxx";
}

size_t AnsatzTemplate::parameter_count() const {
    return kind_ == AnsatzKind::OneRxx ? 8 : 18;
}

int AnsatzTemplate::entangling_gates() const {
    return kind_ == AnsatzKind::OneRxx ? 1 : 2;
}

std::vector<NativeGate> AnsatzTemplate::gates(std::span<const double> p, int qa, int qb) const {
    if (p.size() != parameter_count()) {
        throw DomainError(name() + " expects " + std::to_string(parameter_count()) + " parameters, got " +
                          std::to_string(p.size()));
    }
    std::vector<NativeGate> out;
    if (kind_ == AnsatzKind::OneRxx) {
        out = {
            Rphi{qa, p[0], p[1]},
            Rphi{qb, p[2], p[3]},
            Rxx{qa, qb, kFullyEntangling},
            Rphi{qa, p[4], p[5]},
            Rphi{qb, p[6], p[7]},
        };
        return out;
    }
    for (int layer = 0; layer < 3; layer++) {
        if (layer > 0) {
            out.push_back(Rxx{qa, qb, kFullyEntangling});
        }
        const double *a = &p[6 * layer];
        const double *b = a + 3;
        out.push_back(Rphi{qa, a[0], a[1]});
        out.push_back(Rz{qa, a[2]});
        out.push_back(Rphi{qb, b[0], b[1]});
        out.push_back(Rz{qb, b[2]});
    }
    return out;
}

Mat4 ansatz_unitary(const AnsatzTemplate &t, std::span<const double> p) {
    if (p.size() != t.parameter_count()) {
        throw DomainError(t.name() + " expects " + std::to_string(t.parameter_count()) + " parameters, got " +
                          std::to_string(p.size()));
    }
    static const Mat4 rxx = rxx_matrix(kFullyEntangling);
    auto kron = [](const Mat2 &a, const Mat2 &b) {
        Mat4 m;
        for (int i = 0; i < 2; i++) {
            for (int j = 0; j < 2; j++) {
                m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
            }
        }
        return m;
    };
    if (t.kind() == AnsatzKind::OneRxx) {
        Mat4 pre = kron(rphi_matrix(p[0], p[1]), rphi_matrix(p[2], p[3]));
        Mat4 post = kron(rphi_matrix(p[4], p[5]), rphi_matrix(p[6], p[7]));
        return post * rxx * pre;
    }
    auto layer = [&](int k) {
        const double *a = &p[6 * k];
        const double *b = a + 3;
        return kron(rz_matrix(a[2]) * rphi_matrix(a[0], a[1]), rz_matrix(b[2]) * rphi_matrix(b[0], b[1]));
    };
    return layer(2) * rxx * layer(1) * rxx * layer(0);
}

namespace {

double fit_objective(const Mat4 &a, const Mat4 &target) {
    cdouble overlap = (target.adjoint() * a).trace();
    cdouble phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cdouble(1, 0);
    return (a - phase * target).squaredNorm();
}

}  // namespace

FitResult fit_unitary(const Mat4 &target, const AnsatzTemplate &t, int restarts, uint64_t seed) {
    if (!(unitarity_error(target) < 1e-10)) {
        throw DomainError("fit target is not unitary");
    }
    const size_t np = t.parameter_count();
    Objective f = [&](std::span<const double> x) { return fit_objective(ansatz_unitary(t, x), target); };
    MinimizeOptions opt;
    opt.max_iterations = 3000;
    opt.gradient_tolerance = 1e-12;
    opt.target = 1e-26;
    GradientFn g = [&](std::span<const double> x, std::span<double> out) { fd_gradient(f, x, out, opt.fd_step); };

    auto ms = multi_start(static_cast<size_t>(std::max(1, restarts)), seed, [&](Rng &rng) {
        std::vector<double> x0(np);
        for (auto &v : x0) {
            v = rng.uniform(-std::numbers::pi, std::numbers::pi);
        }
        return bfgs(f, g, std::move(x0), opt);
    });
    FitResult r;
    r.params = ms.best.x;
    r.distance = phase_distance(ansatz_unitary(t, r.params), target);
    return r;
}

namespace {

/// 1 - omega for the conjugate protocol. Vertex questions always win, each
/// directed edge question (x, y) loses sum_a |(U_x U_y^dag)_aa|^2 / 4, and
/// both directions of an edge lose the same amount.
class GameLoss {
   public:
    GameLoss(const ColoringGame &game, const AnsatzTemplate &t) : game_(game), t_(t), np_(t.parameter_count()) {
        const int n = game.graph.n();
        incident_.resize(n);
        for (size_t e = 0; e < game.graph.edges().size(); e++) {
            auto [u, v] = game.graph.edges()[e];
            incident_[u].push_back(e);
            incident_[v].push_back(e);
        }
        scale_ = 2.0 / (4.0 * static_cast<double>(game.questions.size()));
    }

    static double edge_term(const Mat4 &a, const Mat4 &b) {
        double s = 0;
        for (int k = 0; k < 4; k++) {
            s += std::norm(a.row(k).dot(b.row(k)));  // dot conjugates its first argument
        }
        return s;
    }

    std::vector<Mat4> unitaries(std::span<const double> x) const {
        std::vector<Mat4> us(game_.graph.n());
        for (int v = 0; v < game_.graph.n(); v++) {
            us[v] = ansatz_unitary(t_, x.subspan(v * np_, np_));
        }
        return us;
    }

    double operator()(std::span<const double> x) const {
        auto us = unitaries(x);
        double s = 0;
        for (auto [u, v] : game_.graph.edges()) {
            s += edge_term(us[u], us[v]);
        }
        return scale_ * s;
    }

    /// Central differences, recomputing only the edges touching the
    /// perturbed vertex.
    void gradient(std::span<const double> x, std::span<double> out, double h) const {
        auto us = unitaries(x);
        std::vector<double> local(np_);
        const auto &edges = game_.graph.edges();
        for (int v = 0; v < game_.graph.n(); v++) {
            std::copy_n(x.begin() + v * np_, np_, local.begin());
            for (size_t k = 0; k < np_; k++) {
                double orig = local[k];
                local[k] = orig + h;
                Mat4 up = ansatz_unitary(t_, local);
                local[k] = orig - h;
                Mat4 um = ansatz_unitary(t_, local);
                local[k] = orig;
                double sp = 0, sm = 0;
                for (size_t e : incident_[v]) {
                    int w = edges[e].first == v ? edges[e].second : edges[e].first;
                    sp += edge_term(up, us[w]);
                    sm += edge_term(um, us[w]);
                }
                out[v * np_ + k] = scale_ * (sp - sm) / (2 * h);
            }
        }
    }

   private:
    const ColoringGame &game_;
    const AnsatzTemplate &t_;
    size_t np_;
    double scale_;
    std::vector<std::vector<size_t>> incident_;
};

}  // namespace

GameAnsatzResult optimize_game_ansatz(const ColoringGame &game, const AnsatzTemplate &t, int restarts, uint64_t seed,
                                      const GameAnsatzOptions &options) {
    if (game.colors != 4) {
        throw DomainError("ansatz strategies answer with 4 colors");
    }
    const size_t np = t.parameter_count();
    const size_t total = np * game.graph.n();
    GameLoss loss(game, t);
    Objective f = [&](std::span<const double> x) { return loss(x); };
    GradientFn g = [&](std::span<const double> x, std::span<double> out) { loss.gradient(x, out, options.fd_step); };
    MinimizeOptions opt;
    opt.max_iterations = options.max_iterations;
    opt.gradient_tolerance = options.gradient_tolerance;
    opt.fd_step = options.fd_step;
    opt.target = 1e-24;

    auto ms = multi_start(static_cast<size_t>(std::max(1, restarts)), seed, [&](Rng &rng) {
        std::vector<double> x0(total);
        for (auto &v : x0) {
            v = rng.uniform(-std::numbers::pi, std::numbers::pi);
        }
        return bfgs(f, g, std::move(x0), opt);
    });

    GameAnsatzResult r;
    for (int v = 0; v < game.graph.n(); v++) {
        r.params.emplace_back(ms.best.x.begin() + v * np, ms.best.x.begin() + (v + 1) * np);
    }
    r.value = quantum_value(strategy_from_params(t, r.params), game);
    r.best_restart = ms.best_restart;
    r.restart_values = ms.restart_values;
    return r;
}

Strategy strategy_from_params(const AnsatzTemplate &t, const std::vector<std::vector<double>> &params) {
    std::vector<Mat4> us;
    us.reserve(params.size());
    for (const auto &p : params) {
        us.push_back(ansatz_unitary(t, p));
    }
    return Strategy(std::move(us));
}

std::vector<Circuit> game_circuits(const AnsatzTemplate &t, const std::vector<std::vector<double>> &params,
                                   const ColoringGame &game) {
    const int n = game.graph.n();
    if (static_cast<int>(params.size()) != n) {
        throw DomainError("parameters given for " + std::to_string(params.size()) + " of " + std::to_string(n) +
                          " vertices");
    }
    for (int v = 0; v < n; v++) {
        if (params[v].size() != t.parameter_count()) {
            throw DomainError("missing or malformed parameters for vertex " + std::to_string(v));
        }
    }
    auto make = [&](int x, int y, std::string label) {
        Circuit c = bell_prep_circuit();
        c.label = std::move(label);
        for (auto &g : t.gates(params[x], 0, 1)) {
            c.gates.push_back(g);
        }
        for (auto &g : conjugate_gates(t.gates(params[y], 2, 3))) {
            c.gates.push_back(g);
        }
        return c;
    };
    std::vector<Circuit> out;
    for (int v = 0; v < n; v++) {
        out.push_back(make(v, v, "v" + std::to_string(v)));
    }
    for (auto [u, v] : game.graph.edges()) {
        out.push_back(make(u, v, "e" + std::to_string(u) + "_" + std::to_string(v)));
    }
    return out;
}

nlohmann::json circuit_to_json(const Circuit &c) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &g : c.gates) {
        if (const auto *r = std::get_if<Rphi>(&g)) {
            gates.push_back({{"g", "rphi"}, {"q", {r->q}}, {"theta", r->theta}, {"phi", r->phi}});
        } else if (const auto *r = std::get_if<Rz>(&g)) {
            gates.push_back({{"g", "rz"}, {"q", {r->q}}, {"theta", r->theta}});
        } else {
            const auto &x = std::get<Rxx>(g);
            gates.push_back({{"g", "rxx"}, {"q", {x.a, x.b}}, {"theta", x.theta}});
        }
    }
    return {{"label", c.label}, {"n_qubits", c.n_qubits}, {"gates", gates}};
}

Circuit circuit_from_json(const nlohmann::json &j) {
    Circuit c;
    try {
        c.label = j.at("label").get<std::string>();
        c.n_qubits = j.at("n_qubits").get<int>();
        for (const auto &g : j.at("gates")) {
            auto kind = g.at("g").get<std::string>();
            const auto &q = g.at("q");
            double theta = g.at("theta").get<double>();
            if (kind == "rphi") {
                c.gates.push_back(Rphi{q.at(0).get<int>(), theta, g.at("phi").get<double>()});
            } else if (kind == "rz") {
                c.gates.push_back(Rz{q.at(0).get<int>(), theta});
            } else if (kind == "rxx") {
                c.gates.push_back(Rxx{q.at(0).get<int>(), q.at(1).get<int>(), theta});
            } else {
                throw DataError("unknown gate kind " + kind);
            }
        }
    } catch (const nlohmann::json::exception &ex) {
        throw DataError(std::string("bad circuit json: ") + ex.what());
    }
    c.validate();
    return c;
}

nlohmann::json params_to_json(const AnsatzTemplate &t, const std::vector<std::vector<double>> &params, double value) {
    return {{"template", t.name()}, {"value", value}, {"params", params}};
}

std::pair<AnsatzTemplate, std::vector<std::vector<double>>> params_from_json(const nlohmann::json &j) {
    try {
        auto t = AnsatzTemplate::from_name(j.at("template").get<std::string>());
        auto p = j.at("params").get<std::vector<std::vector<double>>>();
        return {t, std::move(p)};
    } catch (const nlohmann::json::exception &ex) {
        throw DataError(std::string("bad parameter json: ") + ex.what());
    }
}

}  // namespace nlg
