// Copyright 2026 The prc Authors.
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

#pragma once

// Model of a limited-resolution optical weighting element. //

#include "prc/readout.hpp"
#include "prc/rng.hpp"

#include <cstddef>
#include <vector>

namespace prc {

/// Amplitude levels are uniform on [1/E, 1]; phase levels uniform on [0, 2pi).
/// Drift noise has standard deviation noise_level * (grid step) on each axis.
struct quantization_spec {
    std::size_t amp_levels = 8;
    std::size_t phase_levels = 8;
    double extinction_ratio = 10.0;
    double noise_level = 0.0;

    /// Throws std::invalid_argument unless amp_levels >= 2, phase_levels >= 1,
    /// extinction_ratio > 1 and noise_level >= 0.
    void validate() const;

    /// Lowest transmittable amplitude, 1/E.
    double min_amplitude() const noexcept { return 1.0 / extinction_ratio; }
    /// (1 - w_min) / (N_a - 1).
    double amp_step() const noexcept;
    /// 2pi / N_phi.
    double phase_step() const noexcept;
    /// Amplitude level j; level N_a - 1 is exactly 1.
    double amp_level(std::size_t j) const noexcept;
    double phase_level(std::size_t k) const noexcept;

    friend bool operator==(const quantization_spec&, const quantization_spec&) = default;
};

std::vector<double> amp_grid(const quantization_spec& spec);
std::vector<double> phase_grid(const quantization_spec& spec);

/// Nearest amplitude level, ties to the higher level. Anything below w_min
/// lands on w_min. Throws std::invalid_argument for a outside [0, 1].
double quantize_amplitude(double a, const quantization_spec& spec);

/// Wraps phi into [0, 2pi) and returns the circularly nearest level; a tie
/// goes to the level counter-clockwise of phi.
double quantize_phase(double phi, const quantization_spec& spec);

/// Element-wise quantize_amplitude / quantize_phase.
readout_weights direct_quantize(const readout_weights& weights, const quantization_spec& spec);

/// True when every amplitude and phase is exactly a grid level.
bool is_on_grid(const readout_weights& weights, const quantization_spec& spec);

/// Adds N(0, (eta dw)^2) to each amplitude (clamped to [0, 1]) and
/// N(0, (eta dphi)^2) to each phase (wrapped).
readout_weights apply_drift_noise(const readout_weights& weights, const quantization_spec& spec, rng_engine& rng);

}  // namespace prc
