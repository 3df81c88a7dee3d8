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
 * @file vqa_global.hpp
 * Full-domain variational problem: the circuit state phi(theta) on n qubits
 * is read as the grid function psi = phi / sqrt(dx), and the cost is the
 * discrete energy of psi.
 */
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>

#include "bfgs.hpp"
#include "spectral_grid.hpp"
#include "statevector.hpp"
#include "trace.hpp"

namespace gpedd {

struct GlobalVqaProblem {
    ProblemSpec prob;
    AnsatzSpec spec;
    std::optional<Reference> reference;
};

inline void validate(const GlobalVqaProblem &p) {
    validate(p.prob);
    validate(p.spec);
    if (p.spec.n != p.prob.grid.n) {
        throw ConfigError("ansatz qubit count must equal the grid qubit count");
    }
}

/// psi = phi / sqrt(dx)
inline Wavefunction circuit_wavefunction(const GlobalVqaProblem &p,
                                         std::span<const double> theta) {
    Wavefunction psi = ansatz_state(p.spec, theta);
    const double inv = 1.0 / std::sqrt(p.prob.grid.dx);
    for (auto &v : psi) {
        v *= inv;
    }
    return psi;
}

inline double global_cost(const GlobalVqaProblem &p, std::span<const double> theta) {
    validate(p);
    return energy(circuit_wavefunction(p, theta), p.prob);
}

/// Value and gradient in one pass.
inline std::pair<double, RVector> global_cost_and_gradient(const GlobalVqaProblem &p,
                                                           std::span<const double> theta) {
    validate(p);
    const Wavefunction psi = circuit_wavefunction(p, theta);
    const double value = energy(psi, p.prob);
    CVector g = energy_gradient(psi, p.prob);
    // dpsi = dphi / sqrt(dx), hence g_phi = g_psi / sqrt(dx).
    const double inv = 1.0 / std::sqrt(p.prob.grid.dx);
    for (auto &v : g) {
        v *= inv;
    }
    return {value, cost_gradient_through_circuit(p.spec, theta, g)};
}

inline RVector global_cost_gradient(const GlobalVqaProblem &p, std::span<const double> theta) {
    return global_cost_and_gradient(p, theta).second;
}

struct FullDomainResult {
    OptimizeResult opt;
    TrainingTrace trace;
    Wavefunction psi_final;
    double initial_energy = 0.0;
};

/// BFGS on the global cost, one trace row per accepted iteration.
inline FullDomainResult train_full_domain(const GlobalVqaProblem &p,
                                          std::span<const double> theta0,
                                          const OptimizerConfig &cfg) {
    validate(p);
    detail::require_dim(theta0.size() == p.spec.num_params(),
                        "train_full_domain: initial parameter length");
    FullDomainResult out;
    out.initial_energy = global_cost(p, theta0);
    detail::TraceRecorder rec(p.reference);
    double previous = out.initial_energy;

    auto objective = [&p](std::span<const double> th) { return global_cost_and_gradient(p, th); };
    auto on_iter = [&](const IterationRecord &it, std::span<const double> th) {
        TraceRow row;
        row.energy = it.objective;
        row.grad_norm = it.grad_norm;
        rec.add(row, circuit_wavefunction(p, th), previous);
        previous = it.objective;
    };
    out.opt = minimize(objective, theta0, cfg, on_iter);
    out.trace = rec.take();
    out.psi_final = circuit_wavefunction(p, out.opt.theta_final);
    return out;
}

} // namespace gpedd
