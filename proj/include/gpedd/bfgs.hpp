// Copyright 2026 The gpedd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file bfgs.hpp
 * Dense BFGS with a strong-Wolfe line search (cubic interpolation zoom).
 * The inverse Hessian approximation starts at the identity and is updated
 * with the standard rank-two formula whenever the curvature y's is positive.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace gpedd {

using RVector = std::vector<double>;

struct OptimizerConfig {
    int max_iters = 100;
    double grad_tol = 1e-20;
    double c1 = 1e-4; ///< sufficient decrease
    double c2 = 0.9;  ///< curvature
    double objective_change_tol = 0.0; ///< 0 disables the test
    int max_line_search_evals = 40;
};

enum class Termination { gradient_tol, max_iters, objective_change, line_search_failure };

inline std::string to_string(Termination t) {
    switch (t) {
    case Termination::gradient_tol:
        return "gradient_tol";
    case Termination::max_iters:
        return "max_iters";
    case Termination::objective_change:
        return "objective_change";
    case Termination::line_search_failure:
        return "line_search_failure";
    }
    return "unknown";
}

struct IterationRecord {
    int iteration = 0; ///< 1-based accepted iteration
    double objective = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

struct OptimizeResult {
    RVector theta_final;
    double objective_final = 0.0;
    int iterations_run = 0;
    int evaluations = 0;
    std::vector<IterationRecord> history;
    Termination termination_reason = Termination::max_iters;
};

/// Objective returns (value, gradient) at a point.
using Objective = std::function<std::pair<double, RVector>(std::span<const double>)>;

/// Called once per accepted iterate with the new point.
using IterationCallback =
    std::function<void(const IterationRecord &, std::span<const double>)>;

inline void validate(const OptimizerConfig &cfg) {
    if (!(cfg.c1 > 0.0 && cfg.c1 < cfg.c2 && cfg.c2 < 1.0)) {
        throw ConfigError("optimizer requires 0 < c1 < c2 < 1");
    }
    if (cfg.max_iters < 1) {
        throw ConfigError("optimizer requires max_iters >= 1");
    }
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

struct LinePoint {
    double alpha = 0.0;
    double phi = 0.0;
    double dphi = 0.0;
    RVector x;
    RVector grad;
};

class WolfeSearch {
  public:
    WolfeSearch(const Objective &f, std::span<const double> x, std::span<const double> dir,
                double phi0, double dphi0, const OptimizerConfig &cfg)
        : f_(f), x_(x), dir_(dir), phi0_(phi0), dphi0_(dphi0), cfg_(cfg) {}

    std::optional<LinePoint> run(double alpha_init) {
        LinePoint prev{0.0, phi0_, dphi0_, {}, {}};
        double alpha = alpha_init;
        for (int i = 0; evals_ < cfg_.max_line_search_evals; ++i) {
            LinePoint cur = eval(alpha);
            if (cur.phi > phi0_ + cfg_.c1 * alpha * dphi0_ || (i > 0 && cur.phi >= prev.phi)) {
                return zoom(std::move(prev), std::move(cur));
            }
            if (std::abs(cur.dphi) <= -cfg_.c2 * dphi0_) {
                return cur;
            }
            if (cur.dphi >= 0.0) {
                return zoom(std::move(cur), std::move(prev));
            }
            prev = std::move(cur);
            alpha *= 2.0;
        }
        return std::nullopt;
    }

    [[nodiscard]] int evaluations() const { return evals_; }

  private:
    LinePoint eval(double alpha) {
        LinePoint p;
        p.alpha = alpha;
        p.x.resize(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) {
            p.x[i] = x_[i] + alpha * dir_[i];
        }
        auto [val, grad] = f_(p.x);
        ++evals_;
        if (!std::isfinite(val) || !all_finite(grad)) {
            throw NumericalError("objective or gradient is not finite during line search");
        }
        p.phi = val;
        p.grad = std::move(grad);
        p.dphi = dot(p.grad, dir_);
        return p;
    }

    // Minimizer of the cubic Hermite interpolant on [lo, hi], if it lies
    // safely inside the bracket.
    static std::optional<double> cubic_step(const LinePoint &lo, const LinePoint &hi) {
        const double d1 = lo.dphi + hi.dphi - 3.0 * (lo.phi - hi.phi) / (lo.alpha - hi.alpha);
        const double disc = d1 * d1 - lo.dphi * hi.dphi;
        if (disc < 0.0) {
            return std::nullopt;
        }
        const double d2 = std::copysign(std::sqrt(disc), hi.alpha - lo.alpha);
        const double denom = hi.dphi - lo.dphi + 2.0 * d2;
        if (denom == 0.0) {
            return std::nullopt;
        }
        const double a = hi.alpha - (hi.alpha - lo.alpha) * (hi.dphi + d2 - d1) / denom;
        const double a_min = std::min(lo.alpha, hi.alpha);
        const double width = std::abs(hi.alpha - lo.alpha);
        if (!std::isfinite(a) || a < a_min + 0.1 * width || a > a_min + 0.9 * width) {
            return std::nullopt;
        }
        return a;
    }

    std::optional<LinePoint> zoom(LinePoint lo, LinePoint hi) {
        while (evals_ < cfg_.max_line_search_evals) {
            if (std::abs(hi.alpha - lo.alpha) <=
                std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo.alpha))) {
                return std::nullopt;
            }
            const double a = cubic_step(lo, hi).value_or(0.5 * (lo.alpha + hi.alpha));
            LinePoint cur = eval(a);
            if (cur.phi > phi0_ + cfg_.c1 * a * dphi0_ || cur.phi >= lo.phi) {
                hi = std::move(cur);
                continue;
            }
            if (std::abs(cur.dphi) <= -cfg_.c2 * dphi0_) {
                return cur;
            }
            if (cur.dphi * (hi.alpha - lo.alpha) >= 0.0) {
                hi = std::move(lo);
            }
            lo = std::move(cur);
        }
        return std::nullopt;
    }

    const Objective &f_;
    std::span<const double> x_;
    std::span<const double> dir_;
    double phi0_;
    double dphi0_;
    const OptimizerConfig &cfg_;
    int evals_ = 0;
};

} // namespace detail

/**
 * @brief Minimize a smooth objective with BFGS.
 *
 * An "iteration" is one accepted outer step. Accepted objective values
 * strictly decrease (sufficient-decrease condition); a failed line search
 * ends the run at the last accepted point.
 */
inline OptimizeResult minimize(const Objective &objective, std::span<const double> theta0,
                               const OptimizerConfig &cfg,
                               const IterationCallback &on_iteration = {}) {
    validate(cfg);
    const std::size_t m = theta0.size();
    OptimizeResult res;
    RVector x(theta0.begin(), theta0.end());
    auto [f, g] = objective(x);
    res.evaluations = 1;
    if (!std::isfinite(f) || !detail::all_finite(g)) {
        throw NumericalError("objective or gradient is not finite at the starting point");
    }
    detail::require_dim(g.size() == m, "objective gradient has the wrong length");

    auto finish = [&](Termination why) {
        res.theta_final = x;
        res.objective_final = f;
        res.termination_reason = why;
        return res;
    };

    if (m == 0 || detail::norm2(g) <= cfg.grad_tol) {
        return finish(Termination::gradient_tol);
    }

    // Row-major dense inverse Hessian approximation.
    RVector H(m * m, 0.0);
    auto reset_identity = [&] {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            H[i * m + i] = 1.0;
        }
    };
    reset_identity();

    double f_prev = f + 0.5 * detail::norm2(g);
    RVector dir(m);
    RVector Hy(m);

    for (int k = 0; k < cfg.max_iters; ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            dir[i] = -detail::dot(std::span(H).subspan(i * m, m), g);
        }
        double dphi0 = detail::dot(g, dir);
        if (!(dphi0 < 0.0)) {
            reset_identity();
            for (std::size_t i = 0; i < m; ++i) {
                dir[i] = -g[i];
            }
            dphi0 = detail::dot(g, dir);
        }

        double alpha_init = 1.0;
        const double guess = 1.01 * 2.0 * (f - f_prev) / dphi0;
        if (std::isfinite(guess) && guess > 0.0) {
            alpha_init = std::min(1.0, guess);
        }

        detail::WolfeSearch search(objective, x, dir, f, dphi0, cfg);
        auto accepted = search.run(alpha_init);
        res.evaluations += search.evaluations();
        if (!accepted) {
            return finish(Termination::line_search_failure);
        }

        RVector s(m);
        RVector y(m);
        for (std::size_t i = 0; i < m; ++i) {
            s[i] = accepted->x[i] - x[i];
            y[i] = accepted->grad[i] - g[i];
        }
        f_prev = f;
        x = std::move(accepted->x);
        f = accepted->phi;
        g = std::move(accepted->grad);

        IterationRecord rec{k + 1, f, detail::norm2(g), accepted->alpha};
        res.history.push_back(rec);
        res.iterations_run = k + 1;
        if (on_iteration) {
            on_iteration(rec, x);
        }

        const double ys = detail::dot(y, s);
        if (ys > 0.0 && std::isfinite(ys)) {
            const double rho = 1.0 / ys;
            for (std::size_t i = 0; i < m; ++i) {
                Hy[i] = detail::dot(std::span(H).subspan(i * m, m), y);
            }
            const double yHy = detail::dot(y, Hy);
            const double coef = rho * (1.0 + rho * yHy);
            for (std::size_t i = 0; i < m; ++i) {
                double *row = H.data() + i * m;
                const double si = s[i];
                const double hyi = Hy[i];
                for (std::size_t j = 0; j < m; ++j) {
                    row[j] += coef * si * s[j] - rho * (hyi * s[j] + si * Hy[j]);
                }
            }
        }

        if (rec.grad_norm <= cfg.grad_tol) {
            return finish(Termination::gradient_tol);
        }
        if (cfg.objective_change_tol > 0.0 && std::abs(f_prev - f) <= cfg.objective_change_tol) {
            return finish(Termination::objective_change);
        }
    }
    return finish(Termination::max_iters);
}

} // namespace gpedd
