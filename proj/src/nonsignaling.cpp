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

#include "nlg/nonsignaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "nlg/errors.hpp"
#include "nlg/parallel.hpp"
#include "nlg/random.hpp"

namespace nlg {

std::vector<LinearEquality> ns_constraints(const std::vector<std::pair<int, int>> &support, int outcomes_a,
                                           int outcomes_b) {
    if (support.empty()) {
        throw DomainError("empty question support");
    }
    const size_t cells = static_cast<size_t>(outcomes_a) * outcomes_b;
    std::map<int, std::vector<size_t>> by_x, by_y;
    for (size_t q = 0; q < support.size(); q++) {
        by_x[support[q].first].push_back(q);
        by_y[support[q].second].push_back(q);
    }
    std::vector<LinearEquality> out;
    // Alice: sum_b P(a,b|x,y0) - sum_b P(a,b|x,y) = 0 for each further y.
    for (const auto &[x, qs] : by_x) {
        for (size_t k = 1; k < qs.size(); k++) {
            for (int a = 0; a < outcomes_a; a++) {
                LinearEquality e;
                for (int b = 0; b < outcomes_b; b++) {
                    e.terms.emplace_back(qs[0] * cells + a * outcomes_b + b, 1.0);
                    e.terms.emplace_back(qs[k] * cells + a * outcomes_b + b, -1.0);
                }
                out.push_back(std::move(e));
            }
        }
    }
    for (const auto &[y, qs] : by_y) {
        for (size_t k = 1; k < qs.size(); k++) {
            for (int b = 0; b < outcomes_b; b++) {
                LinearEquality e;
                for (int a = 0; a < outcomes_a; a++) {
                    e.terms.emplace_back(qs[0] * cells + a * outcomes_b + b, 1.0);
                    e.terms.emplace_back(qs[k] * cells + a * outcomes_b + b, -1.0);
                }
                out.push_back(std::move(e));
            }
        }
    }
    for (size_t q = 0; q < support.size(); q++) {
        LinearEquality e;
        e.rhs = 1;
        for (size_t c = 0; c < cells; c++) {
            e.terms.emplace_back(q * cells + c, 1.0);
        }
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

double residual_of(const std::vector<double> &x, const std::vector<LinearEquality> &cons) {
    double worst = 0;
    for (const auto &e : cons) {
        double s = -e.rhs;
        for (auto [i, c] : e.terms) {
            s += c * x[i];
        }
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

std::vector<double> flatten(const BehaviorTable &t) {
    std::vector<double> x;
    x.reserve(t.freqs.size() * t.cells());
    for (const auto &row : t.freqs) {
        if (row.size() != t.cells()) {
            throw DomainError("behavior row has the wrong number of cells");
        }
        x.insert(x.end(), row.begin(), row.end());
    }
    return x;
}

struct RowSpace {
    std::vector<size_t> rows;  ///< a maximal independent subset of the equalities
    Eigen::MatrixXd basis;     ///< orthonormal basis of the span of the rows
};

RowSpace row_space(const std::vector<LinearEquality> &cons, size_t vars) {
    Eigen::MatrixXd at = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vars), static_cast<Eigen::Index>(cons.size()));
    for (size_t r = 0; r < cons.size(); r++) {
        for (auto [i, c] : cons[r].terms) {
            at(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) += c;
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
    qr.setThreshold(1e-10);
    RowSpace rs;
    const Eigen::Index rank = qr.rank();
    for (Eigen::Index k = 0; k < rank; k++) {
        rs.rows.push_back(static_cast<size_t>(qr.colsPermutation().indices()[k]));
    }
    std::sort(rs.rows.begin(), rs.rows.end());
    rs.basis = qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(vars), rank);
    return rs;
}

}  // namespace

double ns_residual(const BehaviorTable &t, const std::vector<LinearEquality> &constraints) {
    return residual_of(flatten(t), constraints);
}

// Log-barrier interior point: minimize t F(x) - sum log x subject to A x = b,
// F(x) = -sum f log x, with equality-constrained Newton steps and t *= 10
// between centerings. The uniform table is a strictly feasible start, and
// every step is projected onto the null space of A so feasibility is kept
// to round-off.
NSProjection kl_projection(const BehaviorTable &table, const KlOptions &opt) {
    if (table.support.size() != table.freqs.size() || table.support.empty()) {
        throw DomainError("behavior table support and rows disagree");
    }
    const std::vector<double> f = flatten(table);
    for (double v : f) {
        if (!std::isfinite(v) || v < 0) {
            throw DomainError("behavior frequencies must be finite and non-negative");
        }
    }
    if (table.normalization_error() > 1e-9) {
        throw DomainError("behavior rows must sum to 1");
    }
    const size_t n = f.size();
    const auto N = static_cast<Eigen::Index>(n);
    const size_t cells = table.cells();
    const auto all = ns_constraints(table.support, table.outcomes_a, table.outcomes_b);
    const RowSpace rs = row_space(all, n);

    std::vector<Eigen::Triplet<double>> trip;
    for (size_t r = 0; r < rs.rows.size(); r++) {
        for (auto [i, c] : all[rs.rows[r]].terms) {
            trip.emplace_back(static_cast<int>(r), static_cast<int>(i), c);
        }
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(rs.rows.size()), N);
    A.setFromTriplets(trip.begin(), trip.end());

    double entropy = 0;  // sum f log f
    for (double v : f) {
        if (v > 0) {
            entropy += v * std::log(v);
        }
    }
    auto kl_at = [&](const Eigen::VectorXd &p) {
        double s = entropy;
        for (size_t i = 0; i < n; i++) {
            if (f[i] > 0) {
                s -= f[i] * std::log(p[i]);
            }
        }
        return s;
    };

    NSProjection out;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    bool analyzed = false;
    Eigen::VectorXd x = Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(cells));
    Eigen::VectorXd g(N), hinv(N);

    // Newton iterations at fixed t; false when round-off stops progress first.
    auto center = [&](double t) {
        for (int it = 0; it < opt.max_newton; it++) {
            for (size_t i = 0; i < n; i++) {
                g[i] = -(t * f[i] + 1) / x[i];
                hinv[i] = x[i] * x[i] / (t * f[i] + 1);
            }
            Eigen::SparseMatrix<double> S = A * hinv.asDiagonal() * A.transpose();
            // Cells with f = 0 sit near 1/t at high t and make S nearly singular; a tiny
            // shift keeps the factorization alive, and the null-space projection below
            // restores exact feasibility of the step.
            const double shift = 1e-13 * S.diagonal().maxCoeff();
            for (Eigen::Index r = 0; r < S.rows(); r++) {
                S.coeffRef(r, r) += shift;
            }
            if (!analyzed) {
                solver.analyzePattern(S);
                analyzed = true;
            }
            solver.factorize(S);
            if (solver.info() != Eigen::Success) {
                return false;
            }
            Eigen::VectorXd w = solver.solve(-(A * hinv.cwiseProduct(g)));
            Eigen::VectorXd dx = -hinv.cwiseProduct(g + A.transpose() * w);
            dx -= rs.basis * (rs.basis.transpose() * dx);
            if (!dx.allFinite()) {
                return false;
            }
            out.iterations++;
            const double slope = g.dot(dx);
            // The decrement's round-off floor grows with t; 1e-14 t keeps the
            // objective error from inexact centering near machine precision.
            if (-slope / 2 < std::max(1e-10, 1e-14 * t)) {
                return true;
            }
            double step = 1;
            for (size_t i = 0; i < n; i++) {
                if (dx[i] < 0) {
                    step = std::min(step, -0.99 * x[i] / dx[i]);
                }
            }
            // Barrier change evaluated directly; the barrier itself is too large at high t.
            auto delta_phi = [&](double st) {
                double d = 0;
                for (size_t i = 0; i < n; i++) {
                    d -= (t * f[i] + 1) * std::log1p(st * dx[i] / x[i]);
                }
                return d;
            };
            int backtracks = 0;
            while (!(delta_phi(step) <= 0.25 * step * slope)) {
                if (++backtracks > 50) {
                    return false;
                }
                step *= 0.5;
            }
            x += step * dx;
        }
        return false;
    };

    double t = 1;
    Eigen::VectorXd last = x;
    double gap = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < opt.max_outer; outer++) {
        if (!center(t)) {
            break;
        }
        last = x;
        gap = static_cast<double>(n) / t;
        out.objective_history.push_back(kl_at(x));
        if (gap < opt.gap_tolerance) {
            break;
        }
        t *= 10;
    }
    x = last;
    std::vector<double> xs(x.data(), x.data() + n);
    out.constraint_residual = residual_of(xs, all);
    out.gap_bound = gap;
    if (!(gap <= opt.acceptable_gap)) {
        throw NumericError("kl_projection: stalled with optimality gap bound " + std::to_string(gap),
                           out.constraint_residual);
    }
    if (!(out.constraint_residual < 1e-8)) {
        throw NumericError("kl_projection: constraint residual too large", out.constraint_residual);
    }
    out.kl = std::max(0.0, kl_at(x));
    out.p_star = table;
    for (size_t q = 0; q < table.freqs.size(); q++) {
        std::copy_n(xs.begin() + q * cells, cells, out.p_star.freqs[q].begin());
    }
    return out;
}

PbrFold pbr_test(const BehaviorTable &train, const NSProjection &projection, const std::vector<Shot> &test) {
    PbrFold r;
    r.kl = projection.kl;
    double log_t = 0;
    for (const auto &s : test) {
        if (s.question < 0 || static_cast<size_t>(s.question) >= train.freqs.size() || s.a < 0 ||
            s.a >= train.outcomes_a || s.b < 0 || s.b >= train.outcomes_b) {
            throw DomainError("test shot outside the training support");
        }
        double ft = train.at(s.question, s.a, s.b);
        double ps = projection.p_star.at(s.question, s.a, s.b);
        if (ft <= 0) {
            log_t = -std::numeric_limits<double>::infinity();
            break;
        }
        if (ps <= 0) {
            log_t = std::numeric_limits<double>::infinity();
            continue;
        }
        log_t += std::log(ft / ps);
    }
    r.t_log = log_t;
    r.p_u = std::min(1.0, std::exp(-log_t));
    return r;
}

PbrFold pbr_test(const BehaviorTable &train, const std::vector<Shot> &test) {
    return pbr_test(train, kl_projection(train), test);
}

std::vector<Shot> shots_from_counts(const CountsDataset &d, const ColoringGame &game) {
    d.validate();
    std::vector<Shot> shots;
    for (const auto &r : d.records) {
        auto lab = parse_label(r.label);
        int forward = game.question_index(lab.x, lab.y);
        int backward = game.question_index(lab.y, lab.x);
        if (forward < 0 || backward < 0) {
            throw DataError("record " + r.label + " is not a question of the game");
        }
        int64_t index = 0;
        for (const auto &[bits, count] : r.counts) {
            int o = parse_outcome(bits);
            for (int64_t k = 0; k < count; k++, index++) {
                if (lab.kind == RecordKind::Edge && index % 2 == 1) {
                    shots.push_back({backward, bob_color(o), alice_color(o)});
                } else {
                    shots.push_back({forward, alice_color(o), bob_color(o)});
                }
            }
        }
    }
    return shots;
}

BehaviorTable table_from_shots(const std::vector<Shot> &shots, const std::vector<std::pair<int, int>> &support,
                               int outcomes_a, int outcomes_b, double pseudo_count) {
    BehaviorTable t;
    t.outcomes_a = outcomes_a;
    t.outcomes_b = outcomes_b;
    t.support = support;
    t.freqs.assign(support.size(), std::vector<double>(t.cells(), pseudo_count));
    t.shots.assign(support.size(), 0);
    for (const auto &s : shots) {
        if (s.question < 0 || static_cast<size_t>(s.question) >= support.size()) {
            throw DomainError("shot question outside the support");
        }
        t.freqs[s.question][static_cast<size_t>(s.a) * outcomes_b + s.b] += 1;
        t.shots[s.question] += 1;
    }
    for (size_t q = 0; q < support.size(); q++) {
        if (t.shots[q] == 0) {
            throw DomainError("insufficient shots: question (" + std::to_string(support[q].first) + ", " +
                              std::to_string(support[q].second) + ") has none");
        }
        double total = t.shots[q] + pseudo_count * static_cast<double>(t.cells());
        for (auto &v : t.freqs[q]) {
            v /= total;
        }
    }
    return t;
}

PbrResult kfold_pbr(const std::vector<Shot> &shots, const std::vector<std::pair<int, int>> &support,
                    int outcomes_a, int outcomes_b, const PbrOptions &options) {
    const int k = options.folds;
    if (k < 2) {
        throw DomainError("k-fold PBR needs at least 2 folds");
    }
    std::vector<std::vector<size_t>> per_question(support.size());
    for (size_t i = 0; i < shots.size(); i++) {
        per_question.at(shots[i].question).push_back(i);
    }
    std::vector<int> fold_of(shots.size());
    for (size_t q = 0; q < support.size(); q++) {
        auto &idx = per_question[q];
        if (idx.size() < static_cast<size_t>(k)) {
            throw DomainError("insufficient shots for a " + std::to_string(k) + "-fold split of question " +
                              std::to_string(q));
        }
        Rng rng(mix_seed(options.seed, q));
        for (size_t i = idx.size() - 1; i > 0; i--) {
            std::swap(idx[i], idx[rng.below(i + 1)]);
        }
        for (size_t pos = 0; pos < idx.size(); pos++) {
            fold_of[idx[pos]] = static_cast<int>(pos % k);
        }
    }

    PbrResult res;
    res.options = options;
    res.per_fold.resize(k);
    parallel_for(static_cast<size_t>(k), [&](size_t fold) {
        std::vector<Shot> train, test;
        for (size_t i = 0; i < shots.size(); i++) {
            (fold_of[i] == static_cast<int>(fold) ? test : train).push_back(shots[i]);
        }
        auto table = table_from_shots(train, support, outcomes_a, outcomes_b, options.pseudo_count);
        res.per_fold[fold] = pbr_test(table, kl_projection(table, options.kl), test);
    });
    for (const auto &f : res.per_fold) {
        res.max_kl = std::max(res.max_kl, f.kl);
        res.min_p_u = std::min(res.min_p_u, f.p_u);
    }
    return res;
}

PbrResult kfold_pbr(const CountsDataset &d, const ColoringGame &game, const PbrOptions &options) {
    std::vector<std::pair<int, int>> support;
    for (const auto &q : game.questions) {
        support.emplace_back(q.x, q.y);
    }
    return kfold_pbr(shots_from_counts(d, game), support, game.colors, game.colors, options);
}

nlohmann::ordered_json pbr_to_json(const PbrResult &r) {
    nlohmann::ordered_json j;
    j["folds"] = r.options.folds;
    j["seed"] = r.options.seed;
    nlohmann::ordered_json per = nlohmann::ordered_json::array();
    for (const auto &f : r.per_fold) {
        nlohmann::ordered_json e;
        if (std::isfinite(f.t_log)) {
            e["t_log"] = f.t_log;
        } else {
            e["t_log"] = f.t_log < 0 ? "-inf" : "inf";
        }
        e["p_u"] = f.p_u;
        e["kl"] = f.kl;
        per.push_back(e);
    }
    j["per_fold"] = per;
    j["max_kl"] = r.max_kl;
    j["min_p_u"] = r.min_p_u;
    j["alpha"] = r.options.alpha;
    j["decision"] = r.rejected() ? "reject non-signaling null" : "null not rejected";
    if (r.options.pseudo_count > 0) {
        j["pseudo_count"] = r.options.pseudo_count;
        j["inferential"] = false;
    }
    j["caveat"] = "p_U = min(1/t, 1) as a Markov bound; E[R] <= 1 is not separately enforced";
    return j;
}

}  // namespace nlg
