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

#include "prc/reservoir.hpp"

#include "prc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace prc {

std::size_t swirl_topology::max_delay() const noexcept
{
    std::size_t d = 0;
    for (const auto& e : edges) d = std::max(d, e.delay_samples);
    return d;
}

std::size_t swirl_topology::out_degree(std::size_t node) const noexcept
{
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const swirl_edge& e) { return e.src == node; }));
}

std::size_t swirl_topology::in_degree(std::size_t node) const noexcept
{
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const swirl_edge& e) { return e.dst == node; }));
}

double swirl_topology::outgoing_power(std::size_t node) const noexcept
{
    double p = 0.0;
    for (const auto& e : edges)
        if (e.src == node) p += e.transmission * e.transmission;
    return p;
}

cplx swirl_topology::input_coupling(std::size_t node, std::size_t port) const
{
    const double th = port_through.at(node).at(port);
    return std::sqrt(std::max(0.0, 1.0 - th * th)) * input_share.at(node).at(port);
}

swirl_topology build_swirl(const swirl_params& p)
{
    if (p.rows < 2 || p.cols < 2) throw std::invalid_argument("build_swirl: grid must be at least 2x2");
    if (p.delay_samples < 1) throw std::invalid_argument("build_swirl: delay_samples must be >= 1");
    if (!(p.waveguide_loss >= 0.0 && p.waveguide_loss < 1.0))
        throw std::invalid_argument("build_swirl: waveguide_loss must be in [0, 1)");
    if (!(p.input_tap >= 0.0 && p.input_tap <= 1.0)) throw std::invalid_argument("build_swirl: input_tap must be in [0, 1]");
    const std::size_t n = p.rows * p.cols;
    if (!p.input_mask.empty() && p.input_mask.size() != n)
        throw std::invalid_argument("build_swirl: input_mask must have one entry per node");

    const auto id = [&](std::size_t r, std::size_t c) { return r * p.cols + c; };

    // Directed links keyed by (src, dst); the checkerboard orientation must
    // never ask for both directions of one link.
    std::map<std::pair<std::size_t, std::size_t>, int> links;
    for (std::size_t r = 0; r + 1 < p.rows; ++r) {
        for (std::size_t c = 0; c + 1 < p.cols; ++c) {
            std::array<std::size_t, 4> cycle{id(r, c), id(r, c + 1), id(r + 1, c + 1), id(r + 1, c)};
            if ((r + c) % 2 == 1) std::reverse(cycle.begin(), cycle.end());
            for (std::size_t i = 0; i < 4; ++i) {
                const auto a = cycle[i];
                const auto b = cycle[(i + 1) % 4];
                if (links.contains({b, a})) throw std::logic_error("build_swirl: inconsistent link orientation");
                links[{a, b}] = 1;
            }
        }
    }

    swirl_topology topo;
    topo.rows = p.rows;
    topo.cols = p.cols;
    std::vector<std::size_t> used_out(n, 0), used_in(n, 0);
    const double transmission = std::sqrt(1.0 - p.waveguide_loss);
    for (const auto& [key, _] : links) {
        swirl_edge e;
        e.src = key.first;
        e.dst = key.second;
        e.src_port = used_out[e.src]++;
        e.delay_samples = p.delay_samples;
        e.transmission = transmission;
        topo.edges.push_back(e);
    }
    // Input ports are assigned in order of increasing source node.
    std::vector<std::size_t> order(topo.edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(topo.edges[a].dst, topo.edges[a].src) < std::pair(topo.edges[b].dst, topo.edges[b].src);
    });
    for (std::size_t i : order) topo.edges[i].dst_port = used_in[topo.edges[i].dst]++;
    for (std::size_t k = 0; k < n; ++k)
        if (used_in[k] > 2 || used_out[k] > 2) throw std::logic_error("build_swirl: node exceeds two coupler ports");

    rng_engine rng(derive_seed(p.seed, {stream::topology}));
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (auto& e : topo.edges) e.phase = two_pi * uniform01(rng);

    topo.port_through.assign(n, {0.0, 0.0});
    topo.input_share.assign(n, {cplx{}, cplx{}});
    std::vector<std::pair<std::size_t, std::size_t>> receiving;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t q = 0; q < used_in[k]; ++q) topo.port_through[k][q] = 1.0;
        if (!p.input_mask.empty() && !p.input_mask[k]) continue;
        if (used_in[k] < 2) {
            for (std::size_t q = used_in[k]; q < 2; ++q) receiving.emplace_back(k, q);
        } else if (p.input_tap > 0.0) {
            topo.port_through[k][0] = std::sqrt(1.0 - p.input_tap);
            receiving.emplace_back(k, 0);
        }
    }
    if (!receiving.empty()) {
        const double amp = 1.0 / std::sqrt(static_cast<double>(receiving.size()));
        for (const auto& [k, q] : receiving) topo.input_share[k][q] = std::polar(amp, two_pi * uniform01(rng));
    }
    return topo;
}

state_matrix::state_matrix(Eigen::MatrixXcd values, std::size_t samples_per_bit)
  : values_(std::move(values))
  , samples_per_bit_(samples_per_bit)
{
    if (samples_per_bit_ == 0) throw std::invalid_argument("state_matrix: samples_per_bit must be >= 1");
    if (!values_.allFinite()) throw std::invalid_argument("state_matrix: non-finite entries");
}

state_matrix state_matrix::bit_range(std::size_t first_bit, std::size_t n_bits) const
{
    if ((first_bit + n_bits) * samples_per_bit_ > n_samples())
        throw std::out_of_range("state_matrix::bit_range: range exceeds the stored samples");
    const auto first = static_cast<Eigen::Index>(first_bit * samples_per_bit_);
    const auto count = static_cast<Eigen::Index>(n_bits * samples_per_bit_);
    return state_matrix(values_.middleRows(first, count), samples_per_bit_);
}

state_matrix simulate(const swirl_topology& topo, const optical_signal& input, energy_ledger* ledger)
{
    if (input.samples.empty()) throw std::invalid_argument("simulate: empty input");
    const std::size_t n = topo.n_nodes();
    const std::size_t T = input.samples.size();
    const std::size_t n_ports = 2 * n;

    // Per input port: arriving edge (if any) and precomputed couplings.
    struct port_feed {
        bool has_edge = false;
        std::size_t src_slot = 0;  // src * 2 + src_port
        std::size_t delay = 0;
        cplx hop;                  // transmission * exp(i phase)
        double through = 0.0;
        double tap = 0.0;          // sqrt(1 - through^2)
        cplx share;
    };
    std::vector<port_feed> feed(n_ports);
    std::vector<bool> out_connected(n_ports, false);
    std::vector<double> slot_loss(n_ports, 0.0);
    double offered_share = 0.0;
    for (const auto& e : topo.edges) {
        auto& f = feed[e.dst * 2 + e.dst_port];
        f.has_edge = true;
        f.src_slot = e.src * 2 + e.src_port;
        f.delay = e.delay_samples;
        f.hop = std::polar(e.transmission, e.phase);
        out_connected[f.src_slot] = true;
        slot_loss[f.src_slot] = 1.0 - e.transmission * e.transmission;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t q = 0; q < 2; ++q) {
            auto& f = feed[k * 2 + q];
            f.through = topo.port_through[k][q];
            f.tap = std::sqrt(std::max(0.0, 1.0 - f.through * f.through));
            f.share = topo.input_share[k][q];
            offered_share += std::norm(f.share);
        }
    }

    // Ring buffer of emitted output-port fields.
    const std::size_t depth = topo.max_delay() + 1;
    std::vector<cplx> history(depth * n_ports, cplx{});
    const auto& U = node_coupler();

    Eigen::MatrixXcd states(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(n));
    energy_ledger acc;
    std::vector<cplx> ports(n_ports);
    for (std::size_t t = 0; t < T; ++t) {
        const cplx u = input.samples[t];
        const double u_pow = std::norm(u);
        acc.injected += u_pow * offered_share;
        for (std::size_t s = 0; s < n_ports; ++s) {
            const auto& f = feed[s];
            cplx arriving{};
            if (f.has_edge && t >= f.delay) arriving = f.hop * history[((t - f.delay) % depth) * n_ports + f.src_slot];
            const cplx ext = f.share * u;
            ports[s] = f.through * arriving + f.tap * ext;
            if (ledger && f.has_edge && f.tap > 0.0) acc.radiated += std::norm(-f.tap * arriving + f.through * ext);
        }
        cplx* out = &history[(t % depth) * n_ports];
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = ports[2 * k];
            const cplx b = ports[2 * k + 1];
            out[2 * k] = U[0][0] * a + U[0][1] * b;
            out[2 * k + 1] = U[1][0] * a + U[1][1] * b;
            states(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = out[2 * k];
        }
        if (ledger) {
            for (std::size_t s = 0; s < n_ports; ++s) {
                if (out_connected[s])
                    acc.absorbed += slot_loss[s] * std::norm(out[s]);
                else
                    acc.radiated += std::norm(out[s]);
            }
        }
    }

    if (ledger) {
        for (const auto& e : topo.edges) {
            const std::size_t slot = e.src * 2 + e.src_port;
            const double keep = e.transmission * e.transmission;
            const std::size_t first = T > e.delay_samples ? T - e.delay_samples : 0;
            for (std::size_t t = first; t < T; ++t) acc.in_flight += keep * std::norm(history[(t % depth) * n_ports + slot]);
        }
        *ledger = acc;
    }
    return state_matrix(std::move(states), input.samples_per_bit);
}

}  // namespace prc
