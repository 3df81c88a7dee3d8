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
 * @file fft.hpp
 * Thin RAII layer over FFTW for the complex 1-D transforms used by the
 * spectral kinetic operator.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include <fftw3.h>

namespace gpedd {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

namespace detail {

// The FFTW planner is not re-entrant; execution of an existing plan is.
inline std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

class FftPlan {
  public:
    explicit FftPlan(std::size_t n) : n_(n) {
        buf_ = fftw_alloc_complex(n);
        std::lock_guard lock(fftw_planner_mutex());
        // ESTIMATE keeps the chosen algorithm (and thus rounding) reproducible.
        fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD,
                                FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    FftPlan(const FftPlan &) = delete;
    FftPlan &operator=(const FftPlan &) = delete;
    ~FftPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }

    /// Unnormalized transform: out_k = sum_j in_j exp(sign * 2 pi i jk/N).
    void run(std::span<const Complex> in, std::span<Complex> out,
             bool forward) {
        auto *raw = reinterpret_cast<Complex *>(buf_);
        std::copy(in.begin(), in.end(), raw);
        fftw_execute(forward ? fwd_ : bwd_);
        std::copy(raw, raw + n_, out.begin());
    }

  private:
    std::size_t n_;
    fftw_complex *buf_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

inline FftPlan &plan_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<FftPlan>>
        cache;
    auto &slot = cache[n];
    if (!slot) {
        slot = std::make_unique<FftPlan>(n);
    }
    return *slot;
}

} // namespace detail

/// Forward DFT without normalization (exponent sign -1).
inline CVector fft(std::span<const Complex> in) {
    CVector out(in.size());
    detail::plan_for(in.size()).run(in, out, true);
    return out;
}

/// Inverse DFT including the 1/N factor, so ifft(fft(x)) == x.
inline CVector ifft(std::span<const Complex> in) {
    CVector out(in.size());
    detail::plan_for(in.size()).run(in, out, false);
    const double scale = 1.0 / static_cast<double>(in.size());
    for (auto &v : out) {
        v *= scale;
    }
    return out;
}

} // namespace gpedd
