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

// File formats: weights CSV, binary dataset, topology TOML, small CSV logs. //

#include "prc/experiments.hpp"
#include "prc/readout.hpp"
#include "prc/reservoir.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace prc {

/// Header `node_index,amplitude,phase`, one row per node, shortest
/// round-trip decimal formatting.
void save_weights(const std::filesystem::path& path, const readout_weights& weights);
/// Rows must cover node indices 0..N-1 exactly once, in any order.
readout_weights load_weights(const std::filesystem::path& path);

/// Little-endian binary: magic "PRCDATA1", samples_per_bit, bit count, node
/// count, the input bits, then T x N (re, im) doubles row by row.
void save_dataset(const std::filesystem::path& path, const dataset& data);
dataset load_dataset(const std::filesystem::path& path);

std::string topology_to_toml(const swirl_topology& topology);
swirl_topology topology_from_toml(std::string_view text);
void save_topology(const std::filesystem::path& path, const swirl_topology& topology);
swirl_topology load_topology(const std::filesystem::path& path);

/// Writes `header` and one line per row; fields are joined with commas.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace prc
