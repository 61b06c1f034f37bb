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

#include "prc/signals.hpp"

#include "prc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prc {

bit_sequence::bit_sequence(std::vector<std::uint8_t> bits)
  : bits_(std::move(bits))
{
    if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; }))
        throw std::invalid_argument("bit_sequence: elements must be 0 or 1");
}

bit_sequence::bit_sequence(std::initializer_list<int> bits)
{
    bits_.reserve(bits.size());
    for (int b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("bit_sequence: elements must be 0 or 1");
        bits_.push_back(static_cast<std::uint8_t>(b));
    }
}

std::size_t bit_sequence::count_ones() const noexcept
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bit_sequence generate_bits(std::size_t n_bits, std::uint64_t seed)
{
    if (n_bits == 0) throw std::invalid_argument("generate_bits: n_bits must be >= 1");
    rng_engine rng(derive_seed(seed, {stream::bits}));
    std::vector<std::uint8_t> bits(n_bits);
    // One engine draw per bit, top bit only; independent of distribution implementations.
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
    return bit_sequence(std::move(bits));
}

optical_signal modulate(const bit_sequence& bits, std::size_t samples_per_bit, double smoothing_alpha, double power)
{
    if (samples_per_bit == 0) throw std::invalid_argument("modulate: samples_per_bit must be >= 1");
    if (!(smoothing_alpha >= 0.0 && smoothing_alpha < 1.0))
        throw std::invalid_argument("modulate: smoothing_alpha must be in [0, 1)");
    if (!(power > 0.0)) throw std::invalid_argument("modulate: power must be positive");

    optical_signal out;
    out.samples_per_bit = samples_per_bit;
    out.samples.reserve(bits.size() * samples_per_bit);
    const double on = std::sqrt(power);
    double y = 0.0;
    for (std::uint8_t b : bits) {
        const double x = b ? on : 0.0;
        for (std::size_t s = 0; s < samples_per_bit; ++s) {
            y = smoothing_alpha == 0.0 ? x : (1.0 - smoothing_alpha) * x + smoothing_alpha * y;
            out.samples.emplace_back(y, 0.0);
        }
    }
    return out;
}

bit_sequence header_target(const bit_sequence& bits, const bit_sequence& pattern)
{
    if (pattern.empty()) throw std::invalid_argument("header_target: empty pattern");
    if (pattern.size() > bits.size()) throw std::invalid_argument("header_target: pattern longer than stream");
    const std::size_t len = pattern.size();
    std::vector<std::uint8_t> target(bits.size(), 0);
    for (std::size_t t = len - 1; t < bits.size(); ++t)
        target[t] = std::equal(pattern.begin(), pattern.end(), bits.begin() + static_cast<std::ptrdiff_t>(t + 1 - len));
    return bit_sequence(std::move(target));
}

bit_sequence xor_target(const bit_sequence& bits, std::size_t delay)
{
    if (delay == 0) throw std::invalid_argument("xor_target: delay must be >= 1");
    if (delay >= bits.size()) throw std::invalid_argument("xor_target: delay must be shorter than the stream");
    std::vector<std::uint8_t> target(bits.size(), 0);
    for (std::size_t t = delay; t < bits.size(); ++t) target[t] = bits[t] ^ bits[t - delay];
    return bit_sequence(std::move(target));
}

std::vector<double> expand_to_samples(std::span<const std::uint8_t> bits, std::size_t samples_per_bit)
{
    std::vector<double> out;
    out.reserve(bits.size() * samples_per_bit);
    for (std::uint8_t b : bits) out.insert(out.end(), samples_per_bit, static_cast<double>(b));
    return out;
}

}  // namespace prc
