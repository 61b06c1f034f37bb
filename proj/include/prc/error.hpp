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

#include <stdexcept>
#include <string>

namespace prc {

/// Malformed or inconsistent configuration (CLI exit code 1).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written (CLI exit code 2).
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A NaN or Inf appeared in a computation (CLI exit code 3).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace prc
