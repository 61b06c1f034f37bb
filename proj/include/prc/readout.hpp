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

// Integrated optical readout: per-node amplitude/phase weights, coherent
// combination, photodiode detection. //

#include "prc/reservoir.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace prc {

/// N (amplitude, phase) pairs. Amplitudes lie in [0, 1]; phases are kept
/// wrapped into [0, 2pi).
struct readout_weights {
    std::vector<double> amplitudes;
    std::vector<double> phases;

    readout_weights() = default;
    /// Throws std::invalid_argument on size mismatch or amplitude outside [0, 1].
    /// Phases are wrapped.
    readout_weights(std::vector<double> amplitudes, std::vector<double> phases);

    std::size_t size() const noexcept { return amplitudes.size(); }
    /// w_k = a_k exp(i phi_k).
    Eigen::VectorXcd complex_weights() const;

    friend bool operator==(const readout_weights&, const readout_weights&) = default;
};

/// Wraps into [0, 2pi).
double wrap_phase(double phi) noexcept;

/// z = sum_k w_k x_k for one time step.
cplx combine_field(const Eigen::Ref<const Eigen::RowVectorXcd>& states_at_t, const readout_weights& weights);

/// z[t] for every time step.
Eigen::VectorXcd combine_field(const state_matrix& states, const readout_weights& weights);

/// Photodiode output y[t] = |z[t]|^2.
Eigen::VectorXd forward(const state_matrix& states, const readout_weights& weights);

}  // namespace prc
