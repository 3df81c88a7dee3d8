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
 * @file reference_newton.hpp
 * Classical ground-state reference. Newton's method on the real augmented
 * system
 *
 *   H psi + kappa psi^3 - lambda psi = 0,   dx * psi.psi - 1 = 0,
 *
 * where H is the spectral kinetic operator plus diag(V), and a dense
 * symmetric eigensolve of H for the linear (kappa = 0) case.
 */
#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "spectral_grid.hpp"

namespace gpedd {

struct NewtonResult {
    Wavefunction psi_ref; ///< real valued, sum psi_j > 0
    double lambda = 0.0;
    double energy = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
    std::vector<double> residual_history; ///< residual at each iterate, starting guess first
};

inline constexpr int kMaxNewtonHalvings = 30;

/// Dense matrix of the kinetic operator plus diag(V), built column by column.
inline Eigen::MatrixXd linear_hamiltonian_matrix(const ProblemSpec &prob) {
    validate(prob);
    const std::size_t N = prob.grid.N;
    Eigen::MatrixXd H(N, N);
    CVector e(N, Complex{0.0, 0.0});
    for (std::size_t j = 0; j < N; ++j) {
        e[j] = 1.0;
        const CVector col = apply_kinetic(prob.grid, e);
        for (std::size_t i = 0; i < N; ++i) {
            H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i].real();
        }
        H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += prob.potential[j];
        e[j] = 0.0;
    }
    return H;
}

namespace detail {

struct NewtonState {
    Eigen::VectorXd psi;
    double lambda = 0.0;
};

/// (H psi + kappa psi^3 - lambda psi, dx psi.psi - 1) and its discrete L2 norm.
inline std::pair<Eigen::VectorXd, double> newton_residual(const Eigen::MatrixXd &H,
                                                          const NewtonState &st, double kappa,
                                                          double dx) {
    const Eigen::Index N = st.psi.size();
    Eigen::VectorXd F(N + 1);
    F.head(N) = H * st.psi + kappa * st.psi.array().cube().matrix() - st.lambda * st.psi;
    F(N) = dx * st.psi.squaredNorm() - 1.0;
    const double norm = std::sqrt(dx * F.head(N).squaredNorm() + F(N) * F(N));
    return {std::move(F), norm};
}

inline Wavefunction to_wavefunction(const Eigen::VectorXd &v) {
    Wavefunction w(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        w[static_cast<std::size_t>(i)] = Complex{v(i), 0.0};
    }
    return w;
}

} // namespace detail

/**
 * @brief Newton's method for the discrete GPE eigenproblem.
 *
 * Starts from the constant state with lambda set to its Rayleigh quotient.
 * Steps are halved (at most 30 times) whenever the full step does not
 * reduce the residual. The residual is measured in the grid L2 norm
 * sqrt(dx |F_psi|^2 + F_norm^2).
 */
inline NewtonResult newton_ground_state(const ProblemSpec &prob, double tol = 1e-12,
                                        int max_iters = 100) {
    validate(prob);
    if (!(tol >= 1e-13)) {
        throw ConfigError("Newton tolerance must be at least 1e-13");
    }
    const double dx = prob.grid.dx;
    const double kappa = prob.kappa;
    const Eigen::MatrixXd H = linear_hamiltonian_matrix(prob);
    const Eigen::Index N = H.rows();

    detail::NewtonState st;
    st.psi = Eigen::VectorXd::Constant(N, 1.0 / std::sqrt(2.0 * std::numbers::pi));
    {
        const Eigen::VectorXd Hpsi = H * st.psi + kappa * st.psi.array().cube().matrix();
        st.lambda = st.psi.dot(Hpsi) / st.psi.squaredNorm();
    }

    NewtonResult res;
    auto [F, rnorm] = detail::newton_residual(H, st, kappa, dx);
    res.residual_history.push_back(rnorm);
    int it = 0;
    while (rnorm >= tol) {
        if (it >= max_iters) {
            throw NumericalError("Newton did not converge in " + std::to_string(max_iters) +
                                 " iterations; last residual " + std::to_string(rnorm));
        }
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N + 1, N + 1);
        J.topLeftCorner(N, N) = H;
        J.topLeftCorner(N, N).diagonal().array() +=
            3.0 * kappa * st.psi.array().square() - st.lambda;
        J.topRightCorner(N, 1) = -st.psi;
        J.bottomLeftCorner(1, N) = 2.0 * dx * st.psi.transpose();

        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible()) {
            throw NumericalError("Newton Jacobian is singular");
        }
        const Eigen::VectorXd delta = lu.solve(-F);
        if (!delta.allFinite()) {
            throw NumericalError("Newton step is not finite");
        }

        double t = 1.0;
        bool improved = false;
        for (int h = 0; h <= kMaxNewtonHalvings; ++h, t *= 0.5) {
            detail::NewtonState trial{st.psi + t * delta.head(N), st.lambda + t * delta(N)};
            auto [Ft, rt] = detail::newton_residual(H, trial, kappa, dx);
            if (rt < rnorm) {
                st = std::move(trial);
                F = std::move(Ft);
                rnorm = rt;
                improved = true;
                break;
            }
        }
        ++it;
        res.residual_history.push_back(rnorm);
        if (!improved) {
            throw NumericalError("Newton stalled at residual " + std::to_string(rnorm));
        }
    }

    if (st.psi.sum() < 0.0) {
        st.psi = -st.psi;
    }
    res.psi_ref = detail::to_wavefunction(st.psi);
    res.lambda = st.lambda;
    res.energy = energy(res.psi_ref, prob);
    res.residual_norm = rnorm;
    res.iterations = it;
    return res;
}

struct LinearGroundState {
    double energy = 0.0;
    Wavefunction psi; ///< dx * sum psi^2 = 1, sum psi > 0
};

/// Lowest eigenpair of the dense linear Hamiltonian (kappa must be 0).
inline LinearGroundState dense_linear_ground_state(const ProblemSpec &prob) {
    if (prob.kappa != 0.0) {
        throw ConfigError("dense linear ground state requires kappa = 0");
    }
    if (prob.grid.n > 10) {
        throw ConfigError("dense linear ground state is limited to n <= 10");
    }
    const Eigen::MatrixXd H = linear_hamiltonian_matrix(prob);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("dense eigensolver failed");
    }
    Eigen::VectorXd v = eig.eigenvectors().col(0);
    v /= std::sqrt(prob.grid.dx * v.squaredNorm());
    if (v.sum() < 0.0) {
        v = -v;
    }
    LinearGroundState out;
    out.psi = detail::to_wavefunction(v);
    out.energy = eig.eigenvalues()(0);
    return out;
}

} // namespace gpedd
