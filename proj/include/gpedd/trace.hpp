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
 * @file trace.hpp
 * Per-iteration training records shared by the full-domain and
 * domain-decomposed drivers.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "spectral_grid.hpp"

namespace gpedd {

struct TraceRow {
    long step = 0;
    int sweep = -1;     ///< -1 for full-domain training
    int subdomain = -1; ///< -1 for full-domain training, 1..3 otherwise
    double energy = 0.0;
    double energy_error = std::numeric_limits<double>::quiet_NaN();
    double l2_error = std::numeric_limits<double>::quiet_NaN();
    double rel_energy_change = 0.0;
    double grad_norm = 0.0;
    double wall_time_s = 0.0;

    bool operator==(const TraceRow &) const = default;
};

using TrainingTrace = std::vector<TraceRow>;

/// Ground-state reference used for error columns.
struct Reference {
    double energy = 0.0;
    Wavefunction psi; ///< empty: no L2 error column
};

/// |E_t - E_{t-1}| / |E_{t-1}|
inline double relative_change(double current, double previous) {
    return std::abs(current - previous) / std::abs(previous);
}

namespace detail {

class TraceRecorder {
  public:
    explicit TraceRecorder(const std::optional<Reference> &ref) : ref_(ref) {}

    void add(TraceRow row, std::span<const Complex> psi, double previous_energy) {
        row.step = ++step_;
        row.rel_energy_change = relative_change(row.energy, previous_energy);
        if (ref_) {
            row.energy_error = std::abs(row.energy - ref_->energy);
            if (!ref_->psi.empty()) {
                row.l2_error = l2_error(psi, ref_->psi);
            }
        }
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        rows_.push_back(row);
    }

    [[nodiscard]] long steps() const { return step_; }
    TrainingTrace take() { return std::move(rows_); }

  private:
    std::optional<Reference> ref_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
    long step_ = 0;
    TrainingTrace rows_;
};

} // namespace detail

} // namespace gpedd
