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

// Passive swirl reservoir built from 2x2 coupler nodes, simulated as a
// discrete-time coherent linear circuit. //

#include "prc/signals.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace prc {

using cplx = std::complex<double>;

/// Construction parameters of a swirl reservoir.
struct swirl_params {
    std::size_t rows = 4;
    std::size_t cols = 4;
    std::size_t delay_samples = 10;
    double waveguide_loss = 0.1;  ///< power loss per hop, in [0, 1)
    /// Power fraction coupled in by the input tap on nodes whose two coupler
    /// inputs are both occupied by reservoir waveguides. 0 drives only the
    /// free input ports.
    double input_tap = 0.0;
    /// Nodes that receive the input signal; empty means all nodes.
    std::vector<bool> input_mask;
    std::uint64_t seed = 1;
};

/// Waveguide from output port `src_port` of node `src` to input port
/// `dst_port` of node `dst`.
struct swirl_edge {
    std::size_t src = 0;
    std::size_t src_port = 0;
    std::size_t dst = 0;
    std::size_t dst_port = 0;
    std::size_t delay_samples = 1;
    double transmission = 1.0;  ///< field amplitude, sqrt(1 - loss)
    double phase = 0.0;         ///< propagation phase in [0, 2pi)

    friend bool operator==(const swirl_edge&, const swirl_edge&) = default;
};

/// Every node is a lossless 50:50 coupler with two input and two output
/// ports; node k's readout field is its output port 0. Input ports not fed
/// by a waveguide receive the external signal directly, occupied ones through
/// a tap coupler with through amplitude `port_through`. Unconnected output
/// ports radiate off-chip.
struct swirl_topology {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<swirl_edge> edges;
    /// Share of the external field offered to each input port; the squared
    /// magnitudes sum to 1 over the receiving ports.
    std::vector<std::array<cplx, 2>> input_share;
    /// Amplitude passed from the arriving waveguide to each input port. 1 for
    /// an untapped waveguide, 0 for a free port.
    std::vector<std::array<double, 2>> port_through;

    /// Field amplitude delivered to input port `port` of `node` per unit input.
    cplx input_coupling(std::size_t node, std::size_t port) const;

    std::size_t n_nodes() const noexcept { return rows * cols; }
    std::size_t max_delay() const noexcept;
    std::size_t out_degree(std::size_t node) const noexcept;
    std::size_t in_degree(std::size_t node) const noexcept;
    /// Sum over outgoing edges of transmission^2.
    double outgoing_power(std::size_t node) const noexcept;

    friend bool operator==(const swirl_topology&, const swirl_topology&) = default;
};

/// Transfer matrix of every node: out = coupler * in.
inline const std::array<std::array<cplx, 2>, 2>& node_coupler()
{
    static const double h = 1.0 / std::sqrt(2.0);
    static const std::array<std::array<cplx, 2>, 2> m{{{cplx{h, 0}, cplx{0, h}}, {cplx{0, h}, cplx{h, 0}}}};
    return m;
}

/// Directed swirl on a rows x cols grid: every 2x2 cell of neighbouring nodes
/// circulates, clockwise and counter-clockwise alternating in a checkerboard,
/// which makes the direction of every shared link consistent. Edge phases and
/// input phases are i.i.d. uniform from `seed`.
swirl_topology build_swirl(const swirl_params& params);

/// T x N complex node fields.
class state_matrix {
public:
    state_matrix() = default;
    state_matrix(Eigen::MatrixXcd values, std::size_t samples_per_bit);

    const Eigen::MatrixXcd& values() const noexcept { return values_; }
    std::size_t n_samples() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t n_nodes() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    std::size_t samples_per_bit() const noexcept { return samples_per_bit_; }
    std::size_t n_bits() const noexcept { return samples_per_bit_ ? n_samples() / samples_per_bit_ : 0; }

    /// Rows belonging to bits [first_bit, first_bit + n_bits).
    state_matrix bit_range(std::size_t first_bit, std::size_t n_bits) const;

    friend bool operator==(const state_matrix& a, const state_matrix& b)
    {
        return a.samples_per_bit_ == b.samples_per_bit_ && a.values_.rows() == b.values_.rows()
            && a.values_.cols() == b.values_.cols() && a.values_ == b.values_;
    }

private:
    Eigen::MatrixXcd values_;
    std::size_t samples_per_bit_ = 1;
};

/// Power bookkeeping of one simulation. After any number of steps
/// injected == radiated + absorbed + in_flight up to rounding.
struct energy_ledger {
    double injected = 0.0;   ///< external power offered to the input ports
    double radiated = 0.0;   ///< left through open outputs and tap drop ports
    double absorbed = 0.0;   ///< waveguide loss
    double in_flight = 0.0;  ///< stored in delay lines at the end
};

/// s[t] of every node for the given input; fields before t = 0 are zero.
state_matrix simulate(const swirl_topology& topology, const optical_signal& input, energy_ledger* ledger = nullptr);

}  // namespace prc
