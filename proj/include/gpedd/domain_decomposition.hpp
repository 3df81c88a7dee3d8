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
 * @file domain_decomposition.hpp
 * Three overlapping circular subdomains of 2^(n-1) points each, the
 * mass-preserving embedding of a local state into the global grid function,
 * and sequential sweeps over the subdomains, either through an (n-1)-qubit
 * ansatz or directly over the physical values of the subdomain.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bfgs.hpp"
#include "spectral_grid.hpp"
#include "statevector.hpp"
#include "trace.hpp"

namespace gpedd {

inline constexpr int kNumSubdomains = 3;

/// One circular run of consecutive grid indices.
struct Subdomain {
    std::size_t start = 0;
    std::vector<std::size_t> indices; ///< run order, wraps modulo N

    [[nodiscard]] std::size_t size() const { return indices.size(); }
    [[nodiscard]] std::size_t first() const { return indices.front(); }
    [[nodiscard]] std::size_t last() const { return indices.back(); }
    /// Interior run positions are 1 .. size()-2.
    [[nodiscard]] std::span<const std::size_t> interior() const {
        return std::span(indices).subspan(1, indices.size() - 2);
    }
};

struct SubdomainLayout {
    int n = 0;
    std::size_t N = 0;
    std::array<Subdomain, kNumSubdomains> parts;
    /// |I1 n I2|, |I2 n I3|, |I3 n I1|
    std::array<std::size_t, kNumSubdomains> overlaps{};

    /// Subdomains are numbered 1..3.
    [[nodiscard]] const Subdomain &sub(int k) const {
        if (k < 1 || k > kNumSubdomains) {
            throw DimensionError("subdomain index must be 1, 2 or 3");
        }
        return parts[static_cast<std::size_t>(k - 1)];
    }
};

/**
 * @brief Build the three-subdomain layout for a 2^n grid.
 *
 * Overlaps n1 = n2 = (2^(n-1) + (-1)^n) / 3 and n3 = n1 + (-1)^(n-1),
 * which sum to 2^(n-1). I1 starts at 0, I2 at 2^(n-1) - n1 and I3 at
 * 2^n - n1 - n2; I3 wraps past N-1 into I1.
 */
inline SubdomainLayout build_layout(int n) {
    if (n < 3 || n > 20) {
        throw ConfigError("domain decomposition needs 3 <= n <= 20, got " + std::to_string(n));
    }
    SubdomainLayout lay;
    lay.n = n;
    lay.N = std::size_t{1} << n;
    const long half = 1L << (n - 1);
    const long sign = (n % 2 == 0) ? 1 : -1;
    const long n12 = (half + sign) / 3;
    const long n3 = n12 - sign;
    lay.overlaps = {static_cast<std::size_t>(n12), static_cast<std::size_t>(n12),
                    static_cast<std::size_t>(n3)};
    const std::array<long, kNumSubdomains> starts{0, half - n12,
                                                  static_cast<long>(lay.N) - 2 * n12};
    for (std::size_t k = 0; k < kNumSubdomains; ++k) {
        Subdomain &s = lay.parts[k];
        s.start = static_cast<std::size_t>(starts[k]);
        s.indices.resize(static_cast<std::size_t>(half));
        for (std::size_t p = 0; p < s.indices.size(); ++p) {
            s.indices[p] = (s.start + p) % lay.N;
        }
    }
    return lay;
}

namespace detail {

struct InteriorMass {
    double old_mass = 0.0;
    double local_mass = 0.0;
};

inline InteriorMass interior_mass(std::span<const Complex> psi_old,
                                  std::span<const Complex> phi, const Subdomain &sub) {
    InteriorMass m;
    for (std::size_t p = 1; p + 1 < sub.size(); ++p) {
        m.old_mass += std::norm(psi_old[sub.indices[p]]);
        m.local_mass += std::norm(phi[p]);
    }
    return m;
}

inline void check_embed_args(std::span<const Complex> psi_old, std::span<const Complex> phi,
                             const SubdomainLayout &layout, const Subdomain &sub) {
    require_dim(psi_old.size() == layout.N, "embed: global state length mismatch");
    require_dim(phi.size() == sub.size(), "embed: local state length mismatch");
}

} // namespace detail

/**
 * @brief Splice a local state into subdomain k.
 *
 * Interior values become alpha * phi with
 * alpha = sqrt(sum_int |psi_old|^2 / sum_int |phi|^2); the boundary pair and
 * everything outside the run keep their old values, so dx * sum |psi|^2 is
 * unchanged.
 */
inline Wavefunction embed(std::span<const Complex> psi_old, std::span<const Complex> phi_k,
                          const SubdomainLayout &layout, int k) {
    const Subdomain &sub = layout.sub(k);
    detail::check_embed_args(psi_old, phi_k, layout, sub);
    const auto mass = detail::interior_mass(psi_old, phi_k, sub);
    if (mass.local_mass <= 0.0) {
        throw DegenerateStateError("embed: local state has no interior mass");
    }
    if (mass.old_mass <= 0.0) {
        throw DegenerateStateError("embed: global state has no mass on the subdomain interior");
    }
    const double alpha = std::sqrt(mass.old_mass / mass.local_mass);
    Wavefunction out(psi_old.begin(), psi_old.end());
    for (std::size_t p = 1; p + 1 < sub.size(); ++p) {
        out[sub.indices[p]] = alpha * phi_k[p];
    }
    return out;
}

/**
 * @brief Pull a global Wirtinger gradient back through embed.
 *
 * Given g = 2 dE/dpsi_new* at psi_new = embed(psi_old, phi, k), returns
 * 2 dE/dphi*. Boundary entries of phi do not influence psi_new and get 0.
 */
inline CVector embed_pullback(std::span<const Complex> psi_old, std::span<const Complex> phi_k,
                              std::span<const Complex> g_new, const SubdomainLayout &layout,
                              int k) {
    const Subdomain &sub = layout.sub(k);
    detail::check_embed_args(psi_old, phi_k, layout, sub);
    const auto mass = detail::interior_mass(psi_old, phi_k, sub);
    if (mass.local_mass <= 0.0 || mass.old_mass <= 0.0) {
        throw DegenerateStateError("embed_pullback: zero interior mass");
    }
    const double s = std::sqrt(mass.local_mass);
    const double scale = std::sqrt(mass.old_mass) / s;
    double radial = 0.0; // Re <g_int, u>
    for (std::size_t p = 1; p + 1 < sub.size(); ++p) {
        radial += std::real(std::conj(g_new[sub.indices[p]]) * phi_k[p]);
    }
    CVector out(phi_k.size(), Complex{0.0, 0.0});
    for (std::size_t p = 1; p + 1 < sub.size(); ++p) {
        out[p] = scale * (g_new[sub.indices[p]] - (radial / mass.local_mass) * phi_k[p]);
    }
    return out;
}

/// Local ansatz on n-1 qubits with the given depth.
inline AnsatzSpec local_ansatz(const SubdomainLayout &layout, int d_local) {
    return AnsatzSpec{layout.n - 1, d_local};
}

inline double local_cost(std::span<const double> theta_k, std::span<const Complex> psi_current,
                         const SubdomainLayout &layout, int k, const ProblemSpec &prob,
                         const AnsatzSpec &local_spec) {
    const StateVector phi = ansatz_state(local_spec, theta_k);
    return energy(embed(psi_current, phi, layout, k), prob);
}

inline std::pair<double, RVector>
local_cost_and_gradient(std::span<const double> theta_k, std::span<const Complex> psi_current,
                        const SubdomainLayout &layout, int k, const ProblemSpec &prob,
                        const AnsatzSpec &local_spec) {
    const StateVector phi = ansatz_state(local_spec, theta_k);
    const Wavefunction psi_new = embed(psi_current, phi, layout, k);
    const double value = energy(psi_new, prob);
    const CVector g_new = energy_gradient(psi_new, prob);
    const CVector g_phi = embed_pullback(psi_current, phi, g_new, layout, k);
    return {value, cost_gradient_through_circuit(local_spec, theta_k, g_phi)};
}

// ---------------------------------------------------------------------------
// Sweeps

inline constexpr int kConvergeIterationCap = 5000;
inline constexpr double kConvergeGradTol = 1e-20;

struct DdSchedule {
    int sweeps = 16;
    /// BFGS iterations per subdomain update; nullopt solves to convergence.
    std::optional<int> local_budget = 50;
};

/// Observes every intermediate global state (sweep, subdomain, psi).
using StateObserver = std::function<void(int, int, std::span<const Complex>)>;

struct DdResult {
    Wavefunction psi;
    TrainingTrace trace;
    std::vector<double> sweep_energies; ///< energy after each completed sweep
    double initial_energy = 0.0;
    long local_iterations = 0;
    std::vector<Termination> terminations; ///< one per subdomain update
    std::array<RVector, kNumSubdomains> thetas; ///< last local parameters
};

struct DdProblem {
    ProblemSpec prob;
    std::optional<Reference> reference;
};

namespace detail {

inline OptimizerConfig local_optimizer_config(const DdSchedule &schedule) {
    OptimizerConfig cfg;
    cfg.grad_tol = kConvergeGradTol;
    cfg.max_iters = schedule.local_budget.value_or(kConvergeIterationCap);
    return cfg;
}

inline void check_schedule(const DdSchedule &schedule) {
    if (schedule.sweeps < 0) {
        throw ConfigError("sweep count must be nonnegative");
    }
    if (schedule.local_budget && *schedule.local_budget < 0) {
        throw ConfigError("local budget must be nonnegative");
    }
}

/// Runs the sweep loop over subdomains 1, 2, 3; `update` performs one subdomain update.
template <class Update>
DdResult sweep_driver(const DdProblem &problem, const SubdomainLayout &layout,
                      const DdSchedule &schedule, const StateObserver &observer,
                      Update &&update) {
    validate(problem.prob);
    check_schedule(schedule);
    if (layout.n != problem.prob.grid.n) {
        throw ConfigError("layout and grid qubit counts differ");
    }
    DdResult res;
    res.psi = constant_state(problem.prob.grid);
    res.initial_energy = energy(res.psi, problem.prob);
    TraceRecorder rec(problem.reference);
    double previous = res.initial_energy;
    const bool active = !schedule.local_budget || *schedule.local_budget > 0;

    for (int s = 0; s < schedule.sweeps; ++s) {
        for (int k = 1; k <= kNumSubdomains; ++k) {
            if (!active) {
                continue;
            }
            auto on_state = [&](double e, double gnorm, std::span<const Complex> psi) {
                TraceRow row;
                row.sweep = s;
                row.subdomain = k;
                row.energy = e;
                row.grad_norm = gnorm;
                rec.add(row, psi, previous);
                previous = e;
                if (observer) {
                    observer(s, k, psi);
                }
            };
            auto [psi_next, opt] = update(res.psi, k, on_state);
            res.psi = std::move(psi_next);
            res.local_iterations += opt.iterations_run;
            res.terminations.push_back(opt.termination_reason);
            if (observer) {
                observer(s, k, res.psi);
            }
        }
        res.sweep_energies.push_back(energy(res.psi, problem.prob));
    }
    res.trace = rec.take();
    return res;
}

} // namespace detail

/**
 * @brief Sequential subdomain sweeps with an (n-1)-qubit ansatz per subdomain.
 *
 * Starts from the constant state; each subdomain's parameters start at all
 * ones, and with warm_start they carry over from the previous sweep.
 */
inline DdResult run_dd(const DdProblem &problem, const SubdomainLayout &layout,
                       const AnsatzSpec &local_spec, const DdSchedule &schedule, bool warm_start,
                       const StateObserver &observer = {}) {
    validate(local_spec);
    if (local_spec.n != layout.n - 1) {
        throw ConfigError("local ansatz must use n-1 qubits");
    }
    const OptimizerConfig cfg = detail::local_optimizer_config(schedule);
    std::array<RVector, kNumSubdomains> thetas;
    for (auto &t : thetas) {
        t = ones_parameters(local_spec);
    }
    const ProblemSpec &prob = problem.prob;

    auto update = [&](const Wavefunction &psi, int k, auto &on_state) {
        RVector &theta = thetas[static_cast<std::size_t>(k - 1)];
        if (!warm_start) {
            theta = ones_parameters(local_spec);
        }
        auto objective = [&](std::span<const double> th) {
            return local_cost_and_gradient(th, psi, layout, k, prob, local_spec);
        };
        auto on_iter = [&](const IterationRecord &it, std::span<const double> th) {
            on_state(it.objective, it.grad_norm,
                     embed(psi, ansatz_state(local_spec, th), layout, k));
        };
        OptimizeResult opt = minimize(objective, theta, cfg, on_iter);
        theta = opt.theta_final;
        Wavefunction next = embed(psi, ansatz_state(local_spec, theta), layout, k);
        return std::pair{std::move(next), std::move(opt)};
    };

    DdResult res = detail::sweep_driver(problem, layout, schedule, observer, update);
    res.thetas = std::move(thetas);
    return res;
}

namespace detail {

/// Run vector as (Re, Im) pairs.
inline RVector pack_complex(std::span<const Complex> v) {
    RVector out(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[2 * i] = v[i].real();
        out[2 * i + 1] = v[i].imag();
    }
    return out;
}

inline CVector unpack_complex(std::span<const double> r) {
    CVector out(r.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = Complex{r[2 * i], r[2 * i + 1]};
    }
    return out;
}

inline CVector normalized(CVector v) {
    double s = 0.0;
    for (const auto &a : v) {
        s += std::norm(a);
    }
    if (s <= 0.0) {
        throw DegenerateStateError("cannot normalize a zero vector");
    }
    const double inv = 1.0 / std::sqrt(s);
    for (auto &a : v) {
        a *= inv;
    }
    return v;
}

} // namespace detail

/// Classical update: embed(psi, v / ||v||) for a raw complex run vector v.
inline double classical_local_cost(std::span<const double> packed, std::span<const Complex> psi,
                                   const SubdomainLayout &layout, int k, const ProblemSpec &prob) {
    const CVector phi = detail::normalized(detail::unpack_complex(packed));
    return energy(embed(psi, phi, layout, k), prob);
}

inline std::pair<double, RVector>
classical_local_cost_and_gradient(std::span<const double> packed, std::span<const Complex> psi,
                                  const SubdomainLayout &layout, int k, const ProblemSpec &prob) {
    const CVector v = detail::unpack_complex(packed);
    double r2 = 0.0;
    for (const auto &a : v) {
        r2 += std::norm(a);
    }
    const CVector phi = detail::normalized(v);
    const Wavefunction psi_new = embed(psi, phi, layout, k);
    const double value = energy(psi_new, prob);
    const CVector g_phi = embed_pullback(psi, phi, energy_gradient(psi_new, prob), layout, k);
    // phi = v / r  =>  g_v = g_phi / r - Re<g_phi, v> v / r^3
    const double r = std::sqrt(r2);
    double radial = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        radial += std::real(std::conj(g_phi[i]) * v[i]);
    }
    RVector grad(packed.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex gv = g_phi[i] / r - (radial / (r2 * r)) * v[i];
        grad[2 * i] = gv.real();
        grad[2 * i + 1] = gv.imag();
    }
    return {value, grad};
}

/**
 * @brief Classical baseline: same sweep protocol, optimizing the subdomain's
 * physical values directly, started from the current values.
 */
inline DdResult run_classical_dd(const DdProblem &problem, const SubdomainLayout &layout,
                                 const DdSchedule &schedule,
                                 const StateObserver &observer = {}) {
    const OptimizerConfig cfg = detail::local_optimizer_config(schedule);
    const ProblemSpec &prob = problem.prob;

    auto update = [&](const Wavefunction &psi, int k, auto &on_state) {
        const Subdomain &sub = layout.sub(k);
        CVector run(sub.size());
        for (std::size_t p = 0; p < sub.size(); ++p) {
            run[p] = psi[sub.indices[p]];
        }
        auto objective = [&](std::span<const double> packed) {
            return classical_local_cost_and_gradient(packed, psi, layout, k, prob);
        };
        auto on_iter = [&](const IterationRecord &it, std::span<const double> packed) {
            on_state(it.objective, it.grad_norm,
                     embed(psi, detail::normalized(detail::unpack_complex(packed)), layout, k));
        };
        OptimizeResult opt = minimize(objective, detail::pack_complex(run), cfg, on_iter);
        Wavefunction next =
            opt.iterations_run > 0
                ? embed(psi, detail::normalized(detail::unpack_complex(opt.theta_final)), layout, k)
                : psi;
        return std::pair{std::move(next), std::move(opt)};
    };

    return detail::sweep_driver(problem, layout, schedule, observer, update);
}

} // namespace gpedd
