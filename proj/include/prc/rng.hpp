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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace prc {

using rng_engine = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for the substream identified by `tags` under `base`. Order matters.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept
{
    std::uint64_t s = mix_seed(base);
    for (std::uint64_t t : tags) s = mix_seed(s ^ mix_seed(t + 0x632be59bd9b4e019ULL));
    return s;
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(rng_engine& rng) noexcept
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Stream tags, so that unrelated consumers of one seed never share a substream.
namespace stream {
inline constexpr std::uint64_t bits = 1;
inline constexpr std::uint64_t topology = 2;
inline constexpr std::uint64_t weights_init = 3;
inline constexpr std::uint64_t partitions = 4;
inline constexpr std::uint64_t drift = 5;
}  // namespace stream

}  // namespace prc
