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

// TOML experiment configuration. //

#include "prc/experiments.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace prc {

/// Parses a configuration document. Keys not present keep their defaults;
/// unknown keys, wrong types and invalid values throw config_error.
experiment_config parse_config(std::string_view toml_text, std::string_view source_name = "config");

/// Reads and parses a file; an unreadable file throws io_error.
experiment_config load_config(const std::filesystem::path& path);

/// Serializes every field; parse_config(to_toml(c)) reproduces c.
std::string to_toml(const experiment_config& config);

}  // namespace prc
