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

#include "nlg/optimize.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "nlg/parallel.hpp"

namespace nlg {

void fd_gradient(const Objective &f, std::span<const double> x, std::span<double> grad, double step) {
    std::vector<double> xp(x.begin(), x.end());
    for (size_t i = 0; i < x.size(); i++) {
        double orig = xp[i];
        xp[i] = orig + step;
        double fp = f(xp);
        xp[i] = orig - step;
        double fm = f(xp);
        xp[i] = orig;
        grad[i] = (fp - fm) / (2 * step);
    }
}

MinimizeResult bfgs(const Objective &f, const GradientFn &grad, std::vector<double> x0, const MinimizeOptions &options) {
    const size_t n = x0.size();
    using Vec = Eigen::VectorXd;
    Eigen::Map<Vec> x(x0.data(), static_cast<Eigen::Index>(n));

    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    Vec g(n), g_new(n), x_new(n), dir(n);
    std::vector<double> buf(n);

    double fx = f(x0);
    grad(x0, std::span<double>(g.data(), n));

    MinimizeResult result;
    bool scaled = false;
    int stalls = 0;
    int it = 0;
    for (; it < options.max_iterations; it++) {
        double gnorm = g.norm();
        if (gnorm < options.gradient_tolerance || fx <= options.target) {
            result.converged = true;
            break;
        }
        dir = -h * g;
        double slope = g.dot(dir);
        if (slope >= 0) {
            h.setIdentity();
            dir = -g;
            slope = -gnorm * gnorm;
        }

        double t = 1.0;
        double f_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ls++) {
            x_new = x + t * dir;
            Eigen::Map<Vec>(buf.data(), n) = x_new;
            f_new = f(buf);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (h.isIdentity()) {
                break;
            }
            // Curvature model went stale; retry with steepest descent.
            h.setIdentity();
            continue;
        }

        grad(buf, std::span<double>(g_new.data(), n));
        Vec s = x_new - x;
        Vec y = g_new - g;
        double sy = s.dot(y);
        if (sy > 1e-300) {
            if (!scaled) {
                h *= sy / y.squaredNorm();
                scaled = true;
            }
            double rho = 1.0 / sy;
            Vec hy = h * y;
            double yhy = y.dot(hy);
            h += ((1 + rho * yhy) * rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
        }

        double drop = fx - f_new;
        stalls = drop <= 1e-16 * std::max(1.0, std::abs(fx)) ? stalls + 1 : 0;
        x = x_new;
        g = g_new;
        fx = f_new;
        if (stalls >= 8) {
            break;
        }
    }

    result.x = std::move(x0);
    result.value = fx;
    result.gradient_norm = g.norm();
    result.iterations = it;
    result.converged = result.converged || result.gradient_norm < options.gradient_tolerance || fx <= options.target;
    return result;
}

MultiStartResult multi_start(size_t restarts, uint64_t seed, const std::function<MinimizeResult(Rng &)> &solve) {
    std::vector<MinimizeResult> runs(restarts);
    parallel_for(restarts, [&](size_t r) {
        Rng rng(mix_seed(seed, r));
        runs[r] = solve(rng);
    });
    MultiStartResult out;
    for (size_t r = 0; r < restarts; r++) {
        out.restart_values.push_back(runs[r].value);
        if (r == 0 || runs[r].value < runs[out.best_restart].value) {
            out.best_restart = r;
        }
    }
    if (restarts > 0) {
        out.best = std::move(runs[out.best_restart]);
    }
    return out;
}

}  // namespace nlg
