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
 * @file dla.hpp
 * Pauli strings in symplectic form, CNOT conjugation, the dynamical Lie
 * algebra of the ansatz generators, and a Monte-Carlo cost variance probe.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "spectral_grid.hpp"
#include "statevector.hpp"
#include "vqa_global.hpp"

namespace gpedd {

inline constexpr int kMaxPauliQubits = 32;

/// prod_j X^{x_j} Z^{z_j}, global phase dropped. Bit j is qubit j.
struct PauliString {
    int n = 0;
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    [[nodiscard]] bool is_identity() const { return x == 0 && z == 0; }
    auto operator<=>(const PauliString &) const = default;

    static PauliString single(int n, int qubit, char op) {
        if (qubit < 0 || qubit >= n) {
            throw DimensionError("Pauli qubit out of range");
        }
        PauliString p{n, 0, 0};
        const std::uint64_t b = std::uint64_t{1} << qubit;
        switch (op) {
        case 'X':
            p.x = b;
            break;
        case 'Y':
            p.x = b;
            p.z = b;
            break;
        case 'Z':
            p.z = b;
            break;
        case 'I':
            break;
        default:
            throw ConfigError(std::string("unknown Pauli label ") + op);
        }
        return p;
    }

    /// Labels in qubit order, e.g. "XIZ" is X on qubit 0 and Z on qubit 2.
    static PauliString parse(std::string_view s) {
        PauliString p{static_cast<int>(s.size()), 0, 0};
        for (int q = 0; q < p.n; ++q) {
            const PauliString one = single(p.n, q, s[static_cast<std::size_t>(q)]);
            p.x |= one.x;
            p.z |= one.z;
        }
        return p;
    }

    [[nodiscard]] std::string str() const {
        std::string out;
        for (int q = 0; q < n; ++q) {
            const bool bx = (x >> q) & 1U;
            const bool bz = (z >> q) & 1U;
            out += bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
        }
        return out;
    }
};

/// True when the symplectic form x_p.z_q + z_p.x_q is odd.
inline bool anticommute(const PauliString &p, const PauliString &q) {
    detail::require_dim(p.n == q.n, "Pauli strings act on different qubit counts");
    return (std::popcount((p.x & q.z) ^ (p.z & q.x)) & 1) != 0;
}

/// [p, q] up to phase; nullopt when they commute.
inline std::optional<PauliString> pauli_commutator(const PauliString &p, const PauliString &q) {
    if (!anticommute(p, q)) {
        return std::nullopt;
    }
    return PauliString{p.n, p.x ^ q.x, p.z ^ q.z};
}

/// CX p CX^dagger up to sign for CNOT(control -> target).
inline PauliString cnot_conjugate(PauliString p, int control, int target) {
    if (control == target) {
        throw DimensionError("CNOT control and target coincide");
    }
    if (control < 0 || target < 0 || control >= p.n || target >= p.n) {
        throw DimensionError("CNOT index out of range");
    }
    const std::uint64_t xc = (p.x >> control) & 1U;
    const std::uint64_t zt = (p.z >> target) & 1U;
    p.x ^= xc << target;
    p.z ^= zt << control;
    return p;
}

/// Conjugate through one CNOT ring of the ansatz, in circuit order.
inline PauliString ring_conjugate(PauliString p) {
    for (auto [c, t] : detail::ring_pairs(p.n)) {
        p = cnot_conjugate(p, c, t);
    }
    return p;
}

/// {X_j, Z_j} and their images under the entangling ring, deduplicated.
inline std::vector<PauliString> ansatz_generators(int n) {
    if (n < 2 || n > kMaxPauliQubits) {
        throw ConfigError("ansatz generators need 2 <= n <= 32");
    }
    std::set<PauliString> gens;
    for (int j = 0; j < n; ++j) {
        for (char op : {'X', 'Z'}) {
            const PauliString p = PauliString::single(n, j, op);
            gens.insert(p);
            gens.insert(ring_conjugate(p));
        }
    }
    return {gens.begin(), gens.end()};
}

struct DlaReport {
    int n = 0;
    std::size_t generator_count = 0;
    std::size_t closure_dimension = 0;
    int closed_after_rounds = 0; ///< commutator generations until no new string
};

/**
 * @brief Lie closure of a set of Pauli strings under commutation.
 *
 * Distinct Pauli strings are linearly independent, so the dimension is the
 * number of distinct non-identity strings reached. Each round commutes the
 * strings found in the previous round against everything found so far.
 */
inline DlaReport lie_closure(std::span<const PauliString> generators) {
    if (generators.empty()) {
        throw ConfigError("lie_closure needs at least one generator");
    }
    const int n = generators.front().n;
    std::set<PauliString> seen;
    std::vector<PauliString> all;
    std::vector<PauliString> frontier;
    for (const auto &g : generators) {
        detail::require_dim(g.n == n, "generators act on different qubit counts");
        if (!g.is_identity() && seen.insert(g).second) {
            all.push_back(g);
            frontier.push_back(g);
        }
    }
    DlaReport rep;
    rep.n = n;
    rep.generator_count = all.size();
    while (!frontier.empty()) {
        std::vector<PauliString> next;
        for (const auto &a : frontier) {
            // `all` grows inside the loop; new entries are also in `next`.
            const std::size_t limit = all.size();
            for (std::size_t i = 0; i < limit; ++i) {
                if (auto c = pauli_commutator(a, all[i]); c && seen.insert(*c).second) {
                    all.push_back(*c);
                    next.push_back(*c);
                }
            }
        }
        if (!next.empty()) {
            ++rep.closed_after_rounds;
        }
        frontier = std::move(next);
    }
    rep.closure_dimension = all.size();
    return rep;
}

inline DlaReport ansatz_dla(int n) {
    const auto gens = ansatz_generators(n);
    return lie_closure(gens);
}

/// dim g_n / dim g_{n-1} for the ansatz on n and n-1 qubits.
inline double subdomain_dla_ratio(int n) {
    if (n < 3 || n > 6) {
        throw ConfigError("subdomain DLA ratio is computed for 3 <= n <= 6");
    }
    const auto full = ansatz_dla(n);
    const auto sub = ansatz_dla(n - 1);
    return static_cast<double>(full.closure_dimension) /
           static_cast<double>(sub.closure_dimension);
}

// ---------------------------------------------------------------------------
// Cost variance

struct VarianceEstimate {
    double mean = 0.0;
    double variance = 0.0; ///< unbiased
    std::size_t samples = 0;
};

/// Uniform [0, 2pi)^m parameters for one sample, fixed by (seed, index).
inline RVector sample_parameters(std::size_t m, std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 gen(seq);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
    RVector theta(m);
    for (auto &t : theta) {
        t = dist(gen);
    }
    return theta;
}

/// Sample mean and unbiased variance of a list of values (two-pass).
inline VarianceEstimate summarize_samples(std::span<const double> values) {
    if (values.size() < 2) {
        throw ConfigError("variance needs at least two samples");
    }
    VarianceEstimate est;
    est.samples = values.size();
    for (double v : values) {
        est.mean += v;
    }
    est.mean /= static_cast<double>(values.size());
    for (double v : values) {
        est.variance += (v - est.mean) * (v - est.mean);
    }
    est.variance /= static_cast<double>(values.size() - 1);
    return est;
}

/**
 * @brief Monte-Carlo mean and variance of the global cost over uniform
 * random parameters.
 *
 * Sample i uses parameters drawn from (seed, i) alone, so the result does
 * not depend on `threads`.
 */
inline VarianceEstimate sample_cost_variance(int n, int d, std::size_t num_samples,
                                             std::uint64_t seed, const ProblemSpec &prob,
                                             unsigned threads = 1) {
    if (num_samples < 2) {
        throw ConfigError("variance needs at least two samples");
    }
    const GlobalVqaProblem p{prob, AnsatzSpec{n, d}, std::nullopt};
    validate(p);
    std::vector<double> values(num_samples);
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < num_samples; i += step) {
            values[i] = global_cost(p, sample_parameters(p.spec.num_params(), seed, i));
        }
    };
    threads = std::max(1U, threads);
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t, threads);
        }
    }
    return summarize_samples(values);
}

} // namespace gpedd
