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

#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gpedd/spectral_grid.hpp"
#include "gpedd/statevector.hpp"
#include "test_util.hpp"

using namespace gpedd;
using gpedd::testing::C;

namespace {

constexpr double kPi = std::numbers::pi;
using Mat = Eigen::MatrixXcd;

// exp(A) by Taylor series; fine for the small-norm 2x2 generators used here.
Mat expm_series(const Mat &a) {
    Mat term = Mat::Identity(a.rows(), a.cols());
    Mat sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

Mat pauli(char p) {
    Mat m(2, 2);
    switch (p) {
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Z':
        m << 1, 0, 0, -1;
        break;
    default:
        m << 1, 0, 0, 1;
    }
    return m;
}

Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Single-qubit operator on `qubit` of an n-qubit register, qubit 0 least significant.
Mat embed_1q(const Mat &u, int qubit, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) {
        out = kron(out, q == qubit ? u : pauli('I'));
    }
    return out;
}

Mat cnot_matrix(int control, int target, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Mat m = Mat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Eigen::Index j = ((i >> control) & 1) ? (i ^ (Eigen::Index{1} << target)) : i;
        m(j, i) = 1.0;
    }
    return m;
}

Mat rotation(char axis, double angle) { return expm_series(C{0.0, -0.5 * angle} * pauli(axis)); }

// Dense-matrix construction of the whole ansatz unitary applied to |0>.
Eigen::VectorXcd dense_ansatz(int n, int d, std::span<const double> theta) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(dim);
    s(0) = 1.0;
    std::size_t p = 0;
    for (int layer = 0; layer <= d; ++layer) {
        for (int q = 0; q < n; ++q) {
            s = embed_1q(rotation('X', theta[p++]), q, n) * s;
            s = embed_1q(rotation('Z', theta[p++]), q, n) * s;
        }
        if (layer < d && n > 1) {
            for (int q = 0; q + 1 < n; ++q) {
                s = cnot_matrix(q, q + 1, n) * s;
            }
            s = cnot_matrix(n - 1, 0, n) * s;
        }
    }
    return s;
}

double norm_of(const StateVector &s) {
    double t = 0.0;
    for (const auto &v : s) {
        t += std::norm(v);
    }
    return std::sqrt(t);
}

} // namespace

TEST(Gates, RxExamples) {
    const StateVector zero = zero_state(1);
    EXPECT_EQ(apply_rx(zero, 0, 0.0), zero);
    const StateVector pi = apply_rx(zero, 0, kPi);
    EXPECT_NEAR(std::abs(pi[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(pi[1] - C{0.0, -1.0}), 0.0, 1e-15);
    const StateVector half = apply_rx(zero, 0, kPi / 2);
    const Mat u = rotation('X', kPi / 2);
    EXPECT_NEAR(std::abs(half[0] - u(0, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(half[1] - u(1, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(half[1] - C{0.0, -1.0 / std::sqrt(2.0)}), 0.0, 1e-15);
}

TEST(Gates, RzExamples) {
    const StateVector zero = zero_state(1);
    EXPECT_EQ(apply_rz(zero, 0, 0.0), zero);
    const double g = 0.83;
    EXPECT_NEAR(std::abs(apply_rz(zero, 0, g)[0] - std::polar(1.0, -0.5 * g)), 0.0, 1e-15);
    const double r = 1.0 / std::sqrt(2.0);
    const StateVector out = apply_rz(StateVector{r, r}, 0, kPi);
    EXPECT_NEAR(std::abs(out[0] - C{0.0, -r}), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out[1] - C{0.0, r}), 0.0, 1e-15);
}

TEST(Gates, CnotExamples) {
    const StateVector s00 = zero_state(2);
    EXPECT_EQ(apply_cnot(s00, 0, 1), s00);
    StateVector s10(4, C{});
    s10[1] = 1.0; // qubit 0 set
    const StateVector out = apply_cnot(s10, 0, 1);
    EXPECT_EQ(out[3], C(1.0));
    std::mt19937_64 rng(1);
    const auto v = gpedd::testing::random_complex(8, rng);
    EXPECT_EQ(apply_cnot(apply_cnot(v, 2, 0), 2, 0), v);
}

TEST(Gates, IndexErrors) {
    const StateVector s = zero_state(2);
    EXPECT_THROW(apply_rx(s, 2, 0.1), DimensionError);
    EXPECT_THROW(apply_rz(s, -1, 0.1), DimensionError);
    EXPECT_THROW(apply_cnot(s, 1, 1), DimensionError);
    EXPECT_THROW(apply_cnot(s, 0, 5), DimensionError);
}

TEST(Ansatz, ZeroParametersGiveZeroState) {
    const AnsatzSpec spec{4, 3};
    EXPECT_EQ(ansatz_state(spec, RVector(spec.num_params(), 0.0)), zero_state(4));
}

TEST(Ansatz, SingleQubitRx) {
    const StateVector s = ansatz_state(AnsatzSpec{1, 0}, RVector{kPi, 0.0});
    EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[1] - C{0.0, -1.0}), 0.0, 1e-15);
}

TEST(Ansatz, ParameterCountAndLengthCheck) {
    const AnsatzSpec spec{5, 3};
    EXPECT_EQ(spec.num_params(), 40U);
    EXPECT_NO_THROW(ansatz_state(spec, RVector(40, 0.3)));
    EXPECT_THROW(ansatz_state(spec, RVector(39, 0.3)), DimensionError);
    EXPECT_EQ((AnsatzSpec{7, 100}.num_params()), 1414U);
}

TEST(Ansatz, GateCounts) {
    EXPECT_TRUE(detail::ring_pairs(1).empty());
    for (int n = 2; n <= 8; ++n) {
        const auto ring = detail::ring_pairs(n);
        ASSERT_EQ(ring.size(), static_cast<std::size_t>(n));
        EXPECT_EQ(ring.back(), std::make_pair(n - 1, 0));
    }
}

TEST(Ansatz, MatchesDenseMatrixConstruction) {
    std::mt19937_64 rng(5);
    for (auto [n, d] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{3, 2}, std::pair{4, 1}}) {
        const AnsatzSpec spec{n, d};
        const RVector theta = gpedd::testing::random_real(spec.num_params(), rng, 0.0, 2 * kPi);
        const StateVector s = ansatz_state(spec, theta);
        const Eigen::VectorXcd ref = dense_ansatz(n, d, theta);
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_NEAR(std::abs(s[i] - ref(static_cast<Eigen::Index>(i))), 0.0, 1e-12);
        }
    }
}

TEST(Ansatz, NormPreservationProperty) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 7;
        const AnsatzSpec spec{n, 1 + trial % 4};
        const RVector theta = gpedd::testing::random_real(spec.num_params(), rng, 0.0, 2 * kPi);
        EXPECT_NEAR(norm_of(ansatz_state(spec, theta)), 1.0, 1e-12);
    }
}

TEST(Ansatz, Deterministic) {
    const AnsatzSpec spec{5, 4};
    std::mt19937_64 rng(2);
    const RVector theta = gpedd::testing::random_real(spec.num_params(), rng);
    EXPECT_EQ(ansatz_state(spec, theta), ansatz_state(spec, theta));
    const CVector g(spec.dim(), C{0.3, -0.1});
    EXPECT_EQ(cost_gradient_through_circuit(spec, theta, g),
              cost_gradient_through_circuit(spec, theta, g));
}

TEST(CircuitGradient, ZeroStateGradientGivesZero) {
    const AnsatzSpec spec{3, 2};
    const RVector g = cost_gradient_through_circuit(spec, RVector(spec.num_params(), 0.4),
                                                    CVector(spec.dim(), C{}));
    for (double v : g) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(CircuitGradient, OverlapCostAtZeroMatchesSingleGateDerivatives) {
    // C = Re <phi0 | phi(theta)>, so 2 dC/dphi* = phi0. At theta = 0 every
    // rotation is the identity, so d phi / d theta for a gate in layer L on
    // qubit q is (-i/2) R^{d-L} G_q |0>, with R the ring permutation.
    const int n = 3;
    const int d = 2;
    const AnsatzSpec spec{n, d};
    std::mt19937_64 rng(4);
    const auto phi0 = gpedd::testing::random_complex(spec.dim(), rng);
    const RVector grad =
        cost_gradient_through_circuit(spec, RVector(spec.num_params(), 0.0), phi0);
    const Mat ring = cnot_matrix(n - 1, 0, n) * cnot_matrix(1, 2, n) * cnot_matrix(0, 1, n);
    for (int layer = 0; layer <= d; ++layer) {
        Mat after = Mat::Identity(8, 8);
        for (int r = layer; r < d; ++r) {
            after = ring * after;
        }
        for (int q = 0; q < n; ++q) {
            for (char axis : {'X', 'Z'}) {
                Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(8);
                e0(0) = 1.0;
                const Eigen::VectorXcd dv = after * (C{0.0, -0.5} * embed_1q(pauli(axis), q, n) * e0);
                double expect = 0.0;
                for (Eigen::Index j = 0; j < 8; ++j) {
                    expect += std::real(std::conj(phi0[static_cast<std::size_t>(j)]) * dv(j));
                }
                const std::size_t idx = spec.param_index(layer, q) + (axis == 'Z' ? 1 : 0);
                EXPECT_NEAR(grad[idx], expect, 1e-14) << "layer " << layer << " q " << q << axis;
            }
        }
    }
}

TEST(CircuitGradient, EnergyCompositeMatchesFiniteDifferences) {
    std::mt19937_64 rng(13);
    const std::vector<std::pair<int, int>> shapes{{3, 2}, {3, 1}, {3, 3}, {4, 1}, {4, 3}};
    for (auto [n, d] : shapes) {
        const ProblemSpec prob = make_problem(n, 1.0);
        const AnsatzSpec spec{n, d};
        const double inv = 1.0 / std::sqrt(prob.grid.dx);
        auto cost = [&](std::span<const double> th) {
            StateVector s = ansatz_state(spec, th);
            for (auto &v : s) {
                v *= inv;
            }
            return energy(s, prob);
        };
        const int trials = (n == 3 && d == 2) ? 10 : 3;
        for (int t = 0; t < trials; ++t) {
            const RVector theta = gpedd::testing::random_real(spec.num_params(), rng, 0.0, 2 * kPi);
            StateVector psi = ansatz_state(spec, theta);
            for (auto &v : psi) {
                v *= inv;
            }
            CVector g = energy_gradient(psi, prob);
            for (auto &v : g) {
                v *= inv;
            }
            const RVector analytic = cost_gradient_through_circuit(spec, theta, g);
            const RVector fd = gpedd::testing::fd_gradient(cost, theta, 1e-6);
            EXPECT_LT(gpedd::testing::rel_error(analytic, fd), 1e-6) << "n=" << n << " d=" << d;
        }
    }
}
