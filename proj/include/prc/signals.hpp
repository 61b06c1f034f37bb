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

// Bit streams, intensity modulation and task targets. //

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace prc {

/// Non-empty stream of binary symbols.
class bit_sequence {
public:
    bit_sequence() = default;
    /// Throws std::invalid_argument if any element is not 0 or 1.
    explicit bit_sequence(std::vector<std::uint8_t> bits);
    bit_sequence(std::initializer_list<int> bits);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    auto begin() const noexcept { return bits_.begin(); }
    auto end() const noexcept { return bits_.end(); }

    /// Number of ones.
    std::size_t count_ones() const noexcept;

    friend bool operator==(const bit_sequence&, const bit_sequence&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Complex field samples of the modulated input, `samples_per_bit` per symbol.
struct optical_signal {
    std::vector<std::complex<double>> samples;
    std::size_t samples_per_bit = 20;
};

/// Uniform i.i.d. bits, deterministic per seed.
bit_sequence generate_bits(std::size_t n_bits, std::uint64_t seed);

/// NRZ intensity modulation: bit b becomes field sqrt(power * b), held for
/// `samples_per_bit` samples, then smoothed by y[t] = (1 - alpha) x[t] + alpha y[t-1].
optical_signal modulate(const bit_sequence& bits, std::size_t samples_per_bit, double smoothing_alpha,
                        double power = 1.0);

/// target[t] = 1 iff the window bits[t-L+1 .. t] equals `pattern`.
bit_sequence header_target(const bit_sequence& bits, const bit_sequence& pattern);

/// target[t] = bits[t] XOR bits[t-delay], zero before the delay is filled.
bit_sequence xor_target(const bit_sequence& bits, std::size_t delay);

/// Per-sample target: each bit value repeated `samples_per_bit` times.
std::vector<double> expand_to_samples(std::span<const std::uint8_t> bits, std::size_t samples_per_bit);

}  // namespace prc
