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

// SVG line plots of sweep results. //

#include "prc/experiments.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace prc {

/// One rendered panel: the file name it is written to and its SVG text.
struct plot_panel {
    std::string file_name;
    std::string svg;
};

/// Groups rows into panels. When a fixed resolution has several noise levels
/// the x axis is the noise level, one panel per (task, N_a, N_phi, E);
/// otherwise the x axis is the amplitude resolution, one panel per
/// (task, N_phi coupling, E, noise level). Curves are seed means with min/max
/// bands; BER 0 is drawn at the row's ber_floor and marked.
/// Throws std::invalid_argument for empty rows.
std::vector<plot_panel> render_plots(std::span<const sweep_row> rows);

/// Writes every panel into `output_dir` (created if missing) and returns
/// the paths.
std::vector<std::filesystem::path> emit_plots(std::span<const sweep_row> rows, const std::filesystem::path& output_dir);

}  // namespace prc
