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

#include "prc/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace prc {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

void quantization_spec::validate() const
{
    if (amp_levels < 2) throw std::invalid_argument("quantization_spec: amp_levels must be >= 2");
    if (phase_levels < 1) throw std::invalid_argument("quantization_spec: phase_levels must be >= 1");
    if (!(extinction_ratio > 1.0)) throw std::invalid_argument("quantization_spec: extinction_ratio must be > 1");
    if (!(noise_level >= 0.0)) throw std::invalid_argument("quantization_spec: noise_level must be >= 0");
}

double quantization_spec::amp_step() const noexcept
{
    return (1.0 - min_amplitude()) / static_cast<double>(amp_levels - 1);
}

double quantization_spec::phase_step() const noexcept
{
    return two_pi / static_cast<double>(phase_levels);
}

double quantization_spec::amp_level(std::size_t j) const noexcept
{
    if (j + 1 >= amp_levels) return 1.0;
    return min_amplitude() + static_cast<double>(j) * amp_step();
}

double quantization_spec::phase_level(std::size_t k) const noexcept
{
    return static_cast<double>(k) * phase_step();
}

std::vector<double> amp_grid(const quantization_spec& spec)
{
    spec.validate();
    std::vector<double> g(spec.amp_levels);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = spec.amp_level(j);
    return g;
}

std::vector<double> phase_grid(const quantization_spec& spec)
{
    spec.validate();
    std::vector<double> g(spec.phase_levels);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = spec.phase_level(k);
    return g;
}

double quantize_amplitude(double a, const quantization_spec& spec)
{
    spec.validate();
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("quantize_amplitude: amplitude outside [0, 1]");
    const auto last = static_cast<long>(spec.amp_levels - 1);
    const long guess = std::clamp(static_cast<long>(std::floor((a - spec.min_amplitude()) / spec.amp_step() + 0.5)), 0L, last);
    // The closed-form index can be off by one next to a tie; settle it on
    // the actual distances.
    double best = spec.amp_level(static_cast<std::size_t>(guess));
    double best_dist = std::abs(a - best);
    for (long j : {guess - 1, guess + 1}) {
        if (j < 0 || j > last) continue;
        const double level = spec.amp_level(static_cast<std::size_t>(j));
        const double dist = std::abs(a - level);
        if (dist < best_dist || (dist == best_dist && level > best)) {
            best = level;
            best_dist = dist;
        }
    }
    return best;
}

double quantize_phase(double phi, const quantization_spec& spec)
{
    spec.validate();
    if (!std::isfinite(phi)) throw std::invalid_argument("quantize_phase: non-finite phase");
    const double r = wrap_phase(phi);
    const double step = spec.phase_step();
    const auto n = static_cast<long>(spec.phase_levels);
    const long guess = static_cast<long>(std::floor(r / step));
    // Candidates: the levels either side of r, plus one more each way.
    long best_k = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    bool best_ahead = false;
    for (long k = guess - 1; k <= guess + 2; ++k) {
        const long kk = ((k % n) + n) % n;
        const double level = spec.phase_level(static_cast<std::size_t>(kk));
        const double diff = std::abs(r - level);
        const double dist = std::min(diff, two_pi - diff);
        // Counter-clockwise of r means the signed offset (level - r) wrapped to (-pi, pi] is positive.
        double signed_offset = std::remainder(level - r, two_pi);
        const bool ahead = signed_offset > 0.0;
        if (dist < best_dist || (dist == best_dist && ahead && !best_ahead)) {
            best_k = kk;
            best_dist = dist;
            best_ahead = ahead;
        }
    }
    return spec.phase_level(static_cast<std::size_t>(best_k));
}

readout_weights direct_quantize(const readout_weights& weights, const quantization_spec& spec)
{
    readout_weights out = weights;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        out.amplitudes[k] = quantize_amplitude(weights.amplitudes[k], spec);
        out.phases[k] = quantize_phase(weights.phases[k], spec);
    }
    return out;
}

bool is_on_grid(const readout_weights& weights, const quantization_spec& spec)
{
    const auto ag = amp_grid(spec);
    const auto pg = phase_grid(spec);
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (std::find(ag.begin(), ag.end(), weights.amplitudes[k]) == ag.end()) return false;
        if (std::find(pg.begin(), pg.end(), weights.phases[k]) == pg.end()) return false;
    }
    return true;
}

readout_weights apply_drift_noise(const readout_weights& weights, const quantization_spec& spec, rng_engine& rng)
{
    spec.validate();
    readout_weights out = weights;
    if (spec.noise_level == 0.0) return out;
    const double sigma_a = spec.noise_level * spec.amp_step();
    const double sigma_p = spec.noise_level * spec.phase_step();
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out.amplitudes[k] = std::clamp(out.amplitudes[k] + sigma_a * normal(rng), 0.0, 1.0);
        out.phases[k] = wrap_phase(out.phases[k] + sigma_p * normal(rng));
    }
    return out;
}

}  // namespace prc
