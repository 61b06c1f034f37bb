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

#include "prc/readout.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prc {

double wrap_phase(double phi) noexcept
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    // fmod of a tiny negative number can land exactly on 2pi after the shift.
    if (r >= two_pi) r = 0.0;
    return r;
}

readout_weights::readout_weights(std::vector<double> amps, std::vector<double> phis)
  : amplitudes(std::move(amps))
  , phases(std::move(phis))
{
    if (amplitudes.size() != phases.size()) throw std::invalid_argument("readout_weights: size mismatch");
    for (double a : amplitudes)
        if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("readout_weights: amplitude outside [0, 1]");
    for (double& p : phases) {
        if (!std::isfinite(p)) throw std::invalid_argument("readout_weights: non-finite phase");
        p = wrap_phase(p);
    }
}

Eigen::VectorXcd readout_weights::complex_weights() const
{
    Eigen::VectorXcd w(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) w(static_cast<Eigen::Index>(k)) = std::polar(amplitudes[k], phases[k]);
    return w;
}

static void check_dims(std::size_t n_nodes, const readout_weights& weights)
{
    if (weights.size() != n_nodes) throw std::invalid_argument("readout: weight count does not match node count");
}

cplx combine_field(const Eigen::Ref<const Eigen::RowVectorXcd>& states_at_t, const readout_weights& weights)
{
    check_dims(static_cast<std::size_t>(states_at_t.size()), weights);
    return (states_at_t * weights.complex_weights())(0);
}

Eigen::VectorXcd combine_field(const state_matrix& states, const readout_weights& weights)
{
    check_dims(states.n_nodes(), weights);
    return states.values() * weights.complex_weights();
}

Eigen::VectorXd forward(const state_matrix& states, const readout_weights& weights)
{
    return combine_field(states, weights).cwiseAbs2();
}

}  // namespace prc
