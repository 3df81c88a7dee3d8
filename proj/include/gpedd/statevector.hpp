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
 * @file statevector.hpp
 * State-vector simulation of the hardware-efficient ansatz: layers of
 * Rx, Rz on every qubit followed by a CNOT ring, closed by a final
 * rotation-only layer. Gradients are accumulated with a single adjoint
 * (reverse) sweep.
 *
 * Qubit q is bit q (LSB first) of the amplitude index.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"

namespace gpedd {

using StateVector = CVector;

struct AnsatzSpec {
    int n = 1; ///< qubits
    int d = 0; ///< entangling layers

    [[nodiscard]] std::size_t num_params() const {
        return 2 * static_cast<std::size_t>(n) * static_cast<std::size_t>(d + 1);
    }
    [[nodiscard]] std::size_t dim() const { return std::size_t{1} << n; }

    /// Offset of theta_x for (layer, qubit); theta_z follows it.
    [[nodiscard]] std::size_t param_index(int layer, int qubit) const {
        return 2 * (static_cast<std::size_t>(layer) * n + qubit);
    }
};

inline void validate(const AnsatzSpec &spec) {
    if (spec.n < 1 || spec.n > 20 || spec.d < 0) {
        throw ConfigError("ansatz needs 1 <= n <= 20 and d >= 0");
    }
}

namespace detail {

inline void check_qubit(std::size_t dim, int qubit) {
    if (qubit < 0 || qubit >= 62 || (std::size_t{1} << qubit) >= dim) {
        throw DimensionError("qubit index " + std::to_string(qubit) +
                             " out of range");
    }
}

inline void rx_inplace(std::span<Complex> s, int qubit, double angle) {
    const std::size_t bit = std::size_t{1} << qubit;
    const double c = std::cos(0.5 * angle);
    const double sn = std::sin(0.5 * angle);
    const Complex mis{0.0, -sn};
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i & bit) {
            continue;
        }
        const Complex a0 = s[i];
        const Complex a1 = s[i | bit];
        s[i] = c * a0 + mis * a1;
        s[i | bit] = mis * a0 + c * a1;
    }
}

inline void rz_inplace(std::span<Complex> s, int qubit, double angle) {
    const std::size_t bit = std::size_t{1} << qubit;
    const Complex e0 = std::polar(1.0, -0.5 * angle);
    const Complex e1 = std::conj(e0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] *= (i & bit) ? e1 : e0;
    }
}

inline void cnot_inplace(std::span<Complex> s, int control, int target) {
    const std::size_t cb = std::size_t{1} << control;
    const std::size_t tb = std::size_t{1} << target;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((i & cb) && !(i & tb)) {
            std::swap(s[i], s[i | tb]);
        }
    }
}

/// Im <lam, X_q s>
inline double im_overlap_x(std::span<const Complex> lam,
                           std::span<const Complex> s, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += std::imag(std::conj(lam[i]) * s[i ^ bit]);
    }
    return acc;
}

/// Im <lam, Z_q s>
inline double im_overlap_z(std::span<const Complex> lam,
                           std::span<const Complex> s, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = std::imag(std::conj(lam[i]) * s[i]);
        acc += (i & bit) ? -v : v;
    }
    return acc;
}

/// CNOT pairs of one entangling ring, in application order.
inline std::vector<std::pair<int, int>> ring_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    if (n < 2) {
        return pairs;
    }
    for (int q = 0; q + 1 < n; ++q) {
        pairs.emplace_back(q, q + 1);
    }
    pairs.emplace_back(n - 1, 0);
    return pairs;
}

} // namespace detail

/// exp(-i angle X / 2) on one qubit.
inline StateVector apply_rx(StateVector state, int qubit, double angle) {
    detail::check_qubit(state.size(), qubit);
    detail::rx_inplace(state, qubit, angle);
    return state;
}

/// exp(-i angle Z / 2) on one qubit.
inline StateVector apply_rz(StateVector state, int qubit, double angle) {
    detail::check_qubit(state.size(), qubit);
    detail::rz_inplace(state, qubit, angle);
    return state;
}

inline StateVector apply_cnot(StateVector state, int control, int target) {
    detail::check_qubit(state.size(), control);
    detail::check_qubit(state.size(), target);
    if (control == target) {
        throw DimensionError("CNOT control and target coincide");
    }
    detail::cnot_inplace(state, control, target);
    return state;
}

/// theta_i = 1 for every parameter.
inline RVector ones_parameters(const AnsatzSpec &spec) { return RVector(spec.num_params(), 1.0); }

/// |0...0> on n qubits.
inline StateVector zero_state(int n) {
    StateVector s(std::size_t{1} << n, Complex{0.0, 0.0});
    s[0] = 1.0;
    return s;
}

inline StateVector ansatz_state(const AnsatzSpec &spec,
                                std::span<const double> theta) {
    validate(spec);
    detail::require_dim(theta.size() == spec.num_params(),
                        "ansatz_state: expected " +
                            std::to_string(spec.num_params()) +
                            " parameters, got " + std::to_string(theta.size()));
    StateVector s = zero_state(spec.n);
    const auto ring = detail::ring_pairs(spec.n);
    for (int layer = 0; layer <= spec.d; ++layer) {
        for (int q = 0; q < spec.n; ++q) {
            const std::size_t p = spec.param_index(layer, q);
            detail::rx_inplace(s, q, theta[p]);
            detail::rz_inplace(s, q, theta[p + 1]);
        }
        if (layer < spec.d) {
            for (auto [c, t] : ring) {
                detail::cnot_inplace(s, c, t);
            }
        }
    }
    return s;
}

/**
 * @brief Reverse-mode gradient of a real cost C(phi(theta)).
 *
 * @param state_cost_gradient 2 dC/dphi* at phi = ansatz_state(spec, theta).
 * @return dC/dtheta_i for every parameter.
 *
 * Walks the gate list backwards carrying the state and the adjoint vector;
 * each rotation contributes Re <lam, (-i G/2) s> = Im <lam, G s> / 2.
 */
inline RVector cost_gradient_through_circuit(
    const AnsatzSpec &spec, std::span<const double> theta,
    std::span<const Complex> state_cost_gradient) {
    validate(spec);
    detail::require_dim(theta.size() == spec.num_params(),
                        "cost_gradient_through_circuit: parameter length");
    detail::require_dim(state_cost_gradient.size() == spec.dim(),
                        "cost_gradient_through_circuit: state gradient length");

    StateVector s = ansatz_state(spec, theta);
    CVector lam(state_cost_gradient.begin(), state_cost_gradient.end());
    RVector grad(theta.size(), 0.0);
    const auto ring = detail::ring_pairs(spec.n);

    for (int layer = spec.d; layer >= 0; --layer) {
        if (layer < spec.d) {
            for (auto it = ring.rbegin(); it != ring.rend(); ++it) {
                detail::cnot_inplace(s, it->first, it->second);
                detail::cnot_inplace(lam, it->first, it->second);
            }
        }
        for (int q = spec.n - 1; q >= 0; --q) {
            const std::size_t p = spec.param_index(layer, q);
            grad[p + 1] = 0.5 * detail::im_overlap_z(lam, s, q);
            detail::rz_inplace(s, q, -theta[p + 1]);
            detail::rz_inplace(lam, q, -theta[p + 1]);
            grad[p] = 0.5 * detail::im_overlap_x(lam, s, q);
            detail::rx_inplace(s, q, -theta[p]);
            detail::rx_inplace(lam, q, -theta[p]);
        }
    }
    return grad;
}

} // namespace gpedd
