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
 * @file spectral_grid.hpp
 * Periodic grid on [0, 2pi), Fourier pseudo-spectral kinetic operator and
 * the discrete Gross-Pitaevskii energy
 *
 *   E(psi) = pi * sum_l l^2 |psihat_l|^2
 *          + dx * sum_j V_j |psi_j|^2
 *          + (kappa dx / 2) * sum_j |psi_j|^4,
 *
 * with psihat_l = (1/N) sum_j psi_j exp(-i l x_j).
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"

namespace gpedd {

/// Grid values psi_j = psi(x_j). Physically normalized when dx * sum |psi_j|^2 = 1.
using Wavefunction = CVector;

struct GridSpec {
    int n = 0;          ///< qubit count
    std::size_t N = 0;  ///< 2^n grid points
    double dx = 0.0;    ///< 2 pi / N
    RVector nodes;      ///< x_j = j dx
    std::vector<long> freqs; ///< frequency of FFT bin k (Nyquist bin -> +N/2)
};

struct ProblemSpec {
    GridSpec grid;
    RVector potential; ///< V(x_j)
    double kappa = 1.0;
};

inline constexpr int kMinGridQubits = 2;
inline constexpr int kMaxGridQubits = 14;

inline GridSpec make_grid(int n) {
    if (n < kMinGridQubits || n > kMaxGridQubits) {
        throw ConfigError("grid qubit count must lie in [2, 14], got " +
                          std::to_string(n));
    }
    GridSpec g;
    g.n = n;
    g.N = std::size_t{1} << n;
    g.dx = 2.0 * std::numbers::pi / static_cast<double>(g.N);
    g.nodes.resize(g.N);
    g.freqs.resize(g.N);
    const auto half = static_cast<long>(g.N / 2);
    for (std::size_t j = 0; j < g.N; ++j) {
        g.nodes[j] = static_cast<double>(j) * g.dx;
        const auto k = static_cast<long>(j);
        g.freqs[j] = k <= half ? k : k - static_cast<long>(g.N);
    }
    return g;
}

/// V(x) = 1 - cos(x) sampled on the grid nodes.
inline RVector sample_default_potential(const GridSpec &grid) {
    RVector v(grid.N);
    for (std::size_t j = 0; j < grid.N; ++j) {
        v[j] = 1.0 - std::cos(grid.nodes[j]);
    }
    return v;
}

inline ProblemSpec make_problem(int n, double kappa) {
    ProblemSpec p;
    p.grid = make_grid(n);
    p.potential = sample_default_potential(p.grid);
    p.kappa = kappa;
    return p;
}

inline void validate(const ProblemSpec &prob) {
    detail::require_dim(prob.potential.size() == prob.grid.N,
                         "potential length does not match the grid");
    for (double v : prob.potential) {
        if (!std::isfinite(v)) {
            throw ConfigError("potential samples must be finite");
        }
    }
}

/// DFT coefficients psihat_l = (1/N) sum_j psi_j exp(-i l x_j), FFT bin order.
inline CVector fourier_coefficients(std::span<const Complex> psi) {
    CVector c = fft(psi);
    const double scale = 1.0 / static_cast<double>(psi.size());
    for (auto &v : c) {
        v *= scale;
    }
    return c;
}

/// Spectral -1/2 d^2/dx^2 applied to grid values.
inline CVector apply_kinetic(const GridSpec &grid, std::span<const Complex> psi) {
    detail::require_dim(psi.size() == grid.N, "kinetic: length mismatch");
    CVector c = fft(psi);
    for (std::size_t k = 0; k < grid.N; ++k) {
        const auto l = static_cast<double>(grid.freqs[k]);
        c[k] *= 0.5 * l * l;
    }
    return ifft(c);
}

inline double kinetic_energy(const GridSpec &grid, std::span<const Complex> psi) {
    detail::require_dim(psi.size() == grid.N, "kinetic: length mismatch");
    const CVector c = fourier_coefficients(psi);
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.N; ++k) {
        const auto l = static_cast<double>(grid.freqs[k]);
        sum += l * l * std::norm(c[k]);
    }
    return std::numbers::pi * sum;
}

struct EnergyParts {
    double kinetic = 0.0;
    double potential = 0.0;
    double interaction = 0.0;
    [[nodiscard]] double total() const { return kinetic + potential + interaction; }
};

inline EnergyParts energy_parts(std::span<const Complex> psi,
                                const ProblemSpec &prob) {
    detail::require_dim(psi.size() == prob.grid.N, "energy: length mismatch");
    detail::require_dim(prob.potential.size() == prob.grid.N,
                        "energy: potential length mismatch");
    EnergyParts e;
    e.kinetic = kinetic_energy(prob.grid, psi);
    double pot = 0.0;
    double quart = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double rho = std::norm(psi[j]);
        pot += prob.potential[j] * rho;
        quart += rho * rho;
    }
    e.potential = prob.grid.dx * pot;
    e.interaction = 0.5 * prob.kappa * prob.grid.dx * quart;
    return e;
}

/// Discrete energy; psi is evaluated as given, normalized or not.
inline double energy(std::span<const Complex> psi, const ProblemSpec &prob) {
    return energy_parts(psi, prob).total();
}

/**
 * @brief Wirtinger gradient g = 2 dE/dpsi*.
 *
 * For a perturbation psi + t*delta the directional derivative at t = 0 is
 * Re sum_j conj(g_j) delta_j. The kinetic part is 2 dx (K psi) with K the
 * spectral operator of apply_kinetic.
 */
inline CVector energy_gradient(std::span<const Complex> psi,
                               const ProblemSpec &prob) {
    detail::require_dim(psi.size() == prob.grid.N,
                        "energy_gradient: length mismatch");
    const double dx = prob.grid.dx;
    CVector g = apply_kinetic(prob.grid, psi);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double rho = std::norm(psi[j]);
        g[j] = 2.0 * dx *
               (g[j] + (prob.potential[j] + prob.kappa * rho) * psi[j]);
    }
    return g;
}

/// dx * sum |psi_j|^2
inline double physical_norm2(std::span<const Complex> psi, double dx) {
    double s = 0.0;
    for (const auto &v : psi) {
        s += std::norm(v);
    }
    return dx * s;
}

/// min over gamma of ||psi - exp(i gamma) ref||_2 on raw grid values.
inline double l2_error(std::span<const Complex> psi,
                       std::span<const Complex> ref) {
    detail::require_dim(psi.size() == ref.size(), "l2_error: length mismatch");
    Complex overlap{0.0, 0.0};
    for (std::size_t j = 0; j < psi.size(); ++j) {
        overlap += std::conj(ref[j]) * psi[j];
    }
    // The optimal phase aligns ref with psi: gamma = arg <ref, psi>.
    const double mag = std::abs(overlap);
    const Complex phase = mag > 0.0 ? overlap / mag : Complex{1.0, 0.0};
    double d2 = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        d2 += std::norm(psi[j] - phase * ref[j]);
    }
    return std::sqrt(d2);
}

/// psi_j = 1/sqrt(2 pi) for all j.
inline Wavefunction constant_state(const GridSpec &grid) {
    return Wavefunction(grid.N, Complex{1.0 / std::sqrt(2.0 * std::numbers::pi), 0.0});
}

} // namespace gpedd
