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
#include "prc/signals.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace prc;

namespace {

optical_signal random_signal(std::size_t n_samples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    optical_signal s;
    s.samples_per_bit = 1;
    for (std::size_t i = 0; i < n_samples; ++i) s.samples.emplace_back(g(rng), g(rng));
    return s;
}

/// Straight transcription of the port equations with the full output history.
Eigen::MatrixXcd reference_simulation(const swirl_topology& topo, const optical_signal& in)
{
    const std::size_t n = topo.n_nodes(), T = in.samples.size();
    std::vector<std::vector<cplx>> out(T, std::vector<cplx>(2 * n));
    Eigen::MatrixXcd states(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(n));
    const double h = 1.0 / std::sqrt(2.0);
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<cplx> arriving(2 * n);
        for (const auto& e : topo.edges)
            if (t >= e.delay_samples)
                arriving[2 * e.dst + e.dst_port] +=
                    e.transmission * std::exp(cplx{0.0, e.phase}) * out[t - e.delay_samples][2 * e.src + e.src_port];
        for (std::size_t k = 0; k < n; ++k) {
            cplx p[2];
            for (std::size_t q = 0; q < 2; ++q)
                p[q] = topo.port_through[k][q] * arriving[2 * k + q] + topo.input_coupling(k, q) * in.samples[t];
            out[t][2 * k] = h * p[0] + cplx{0.0, h} * p[1];
            out[t][2 * k + 1] = cplx{0.0, h} * p[0] + h * p[1];
            states(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = out[t][2 * k];
        }
    }
    return states;
}

swirl_params params_4x4()
{
    swirl_params p;
    p.rows = 4;
    p.cols = 4;
    p.delay_samples = 10;
    p.waveguide_loss = 0.1;
    p.seed = 1;
    return p;
}

}  // namespace

TEST_CASE("build_swirl structure")
{
    const auto topo = build_swirl(params_4x4());
    CHECK(topo.n_nodes() == 16);
    REQUIRE(topo.input_share.size() == 16);

    std::set<std::pair<std::size_t, std::size_t>> links;
    std::set<std::pair<std::size_t, std::size_t>> out_ports, in_ports;
    for (const auto& e : topo.edges) {
        CHECK(e.delay_samples >= 1);
        CHECK(e.transmission * e.transmission == doctest::Approx(0.9).epsilon(1e-15));
        CHECK(e.phase >= 0.0);
        CHECK(e.phase < 2.0 * std::numbers::pi);
        CHECK(e.src_port < 2);
        CHECK(e.dst_port < 2);
        CHECK(out_ports.insert({e.src, e.src_port}).second);
        CHECK(in_ports.insert({e.dst, e.dst_port}).second);
        // Neighbouring grid nodes only, each link used in one direction.
        const auto dr = std::abs(static_cast<long>(e.src / 4) - static_cast<long>(e.dst / 4));
        const auto dc = std::abs(static_cast<long>(e.src % 4) - static_cast<long>(e.dst % 4));
        CHECK(dr + dc == 1);
        CHECK(links.insert({e.src, e.dst}).second);
        CHECK(!links.count({e.dst, e.src}));
    }
    for (std::size_t k = 0; k < 16; ++k) {
        CHECK(topo.out_degree(k) >= 1);
        CHECK(topo.out_degree(k) <= 2);
        CHECK(topo.in_degree(k) <= 2);
        // Each output waveguide carries at most the node's power times (1 - loss).
        CHECK(topo.outgoing_power(k) == doctest::Approx(0.9 * static_cast<double>(topo.out_degree(k))));
    }

    SUBCASE("every cell circulates")
    {
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) {
                const std::size_t a = r * 4 + c, b = a + 1, d = a + 5, e = a + 4;
                const bool cw = links.count({a, b}) && links.count({b, d}) && links.count({d, e}) && links.count({e, a});
                const bool ccw = links.count({b, a}) && links.count({d, b}) && links.count({e, d}) && links.count({a, e});
                CHECK((cw || ccw));
                CHECK(cw == ((r + c) % 2 == 0));
            }
    }
    SUBCASE("input split is passive")
    {
        double total = 0.0;
        for (std::size_t k = 0; k < 16; ++k)
            for (std::size_t q = 0; q < 2; ++q) total += std::norm(topo.input_coupling(k, q));
        CHECK(total <= 1.0 + 1e-12);
        CHECK(total > 0.0);
    }
}

TEST_CASE("build_swirl determinism and validation")
{
    CHECK(build_swirl(params_4x4()) == build_swirl(params_4x4()));
    auto other = params_4x4();
    other.seed = 2;
    CHECK(!(build_swirl(other) == build_swirl(params_4x4())));
    auto bad = params_4x4();
    bad.rows = 1;
    CHECK_THROWS_AS(build_swirl(bad), std::invalid_argument);
    bad = params_4x4();
    bad.delay_samples = 0;
    CHECK_THROWS_AS(build_swirl(bad), std::invalid_argument);
    bad = params_4x4();
    bad.waveguide_loss = 1.0;
    CHECK_THROWS_AS(build_swirl(bad), std::invalid_argument);
    bad = params_4x4();
    bad.input_mask = {true, false};
    CHECK_THROWS_AS(build_swirl(bad), std::invalid_argument);
}

TEST_CASE("input mask and tap")
{
    auto p = params_4x4();
    p.input_mask.assign(16, false);
    p.input_mask[0] = true;
    const auto topo = build_swirl(p);
    for (std::size_t k = 1; k < 16; ++k)
        for (std::size_t q = 0; q < 2; ++q) CHECK(topo.input_coupling(k, q) == cplx{});
    double total = std::norm(topo.input_coupling(0, 0)) + std::norm(topo.input_coupling(0, 1));
    CHECK(total == doctest::Approx(1.0));

    auto no_tap = params_4x4();
    no_tap.input_tap = 0.0;
    const auto t0 = build_swirl(no_tap);
    for (std::size_t k = 0; k < 16; ++k)
        for (std::size_t q = 0; q < 2; ++q)
            if (q < t0.in_degree(k)) CHECK(t0.input_coupling(k, q) == cplx{});
}

TEST_CASE("simulate matches a direct transcription")
{
    for (std::uint64_t seed : {1, 2, 3}) {
        auto p = params_4x4();
        p.seed = seed;
        p.delay_samples = 3 + seed;
        const auto topo = build_swirl(p);
        const auto in = random_signal(120, seed);
        const auto got = simulate(topo, in).values();
        const auto want = reference_simulation(topo, in);
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + want.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("simulate is linear")
{
    const auto topo = build_swirl(params_4x4());
    SUBCASE("zero input")
    {
        optical_signal zero;
        zero.samples.assign(200, cplx{});
        CHECK(simulate(topo, zero).values().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("superposition")
    {
        const auto u = random_signal(300, 5), v = random_signal(300, 6);
        const cplx alpha{0.3, -1.2}, beta{-0.7, 0.4};
        optical_signal mix;
        mix.samples_per_bit = 1;
        for (std::size_t i = 0; i < u.samples.size(); ++i) mix.samples.push_back(alpha * u.samples[i] + beta * v.samples[i]);
        const Eigen::MatrixXcd lhs = simulate(topo, mix).values();
        const Eigen::MatrixXcd rhs = alpha * simulate(topo, u).values() + beta * simulate(topo, v).values();
        CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }
    SUBCASE("complex scaling")
    {
        const auto u = random_signal(150, 9);
        optical_signal scaled = u;
        const cplx c{0.0, 2.5};
        for (auto& s : scaled.samples) s *= c;
        const Eigen::MatrixXcd a = simulate(topo, scaled).values();
        const Eigen::MatrixXcd b = c * simulate(topo, u).values();
        CHECK((a - b).norm() <= 1e-12 * b.norm());
    }
    SUBCASE("deterministic") { CHECK(simulate(topo, random_signal(80, 1)) == simulate(topo, random_signal(80, 1))); }
    SUBCASE("empty input") { CHECK_THROWS_AS(simulate(topo, optical_signal{}), std::invalid_argument); }
}

TEST_CASE("energy bookkeeping")
{
    SUBCASE("ledger balances for random drive")
    {
        for (double loss : {0.0, 0.1, 0.5}) {
            auto p = params_4x4();
            p.waveguide_loss = loss;
            const auto topo = build_swirl(p);
            energy_ledger l;
            simulate(topo, random_signal(500, 3), &l);
            CHECK(l.injected > 0.0);
            CHECK(l.radiated + l.absorbed + l.in_flight == doctest::Approx(l.injected).epsilon(1e-10));
            if (loss == 0.0) CHECK(l.absorbed == 0.0);
        }
    }
    SUBCASE("lossless impulse response keeps all energy; lossy one drains it")
    {
        swirl_params p;
        p.rows = 2;
        p.cols = 2;
        p.delay_samples = 1;
        p.waveguide_loss = 0.0;
        optical_signal impulse;
        impulse.samples_per_bit = 1;
        impulse.samples.assign(200, cplx{});
        impulse.samples[0] = 1.0;
        energy_ledger l;
        simulate(build_swirl(p), impulse, &l);
        CHECK(l.injected == doctest::Approx(1.0));
        CHECK(l.radiated + l.in_flight == doctest::Approx(1.0).epsilon(1e-12));

        p.waveguide_loss = 0.1;
        simulate(build_swirl(p), impulse, &l);
        CHECK(l.radiated + l.absorbed >= 0.99 * l.injected);
    }
    SUBCASE("stored energy decays once the input stops")
    {
        const auto topo = build_swirl(params_4x4());
        auto in = random_signal(100, 4);
        double previous = INFINITY;
        for (std::size_t extra = 0; extra <= 1000; extra += 20) {
            auto padded = in;
            padded.samples.resize(100 + extra, cplx{});
            energy_ledger l;
            simulate(topo, padded, &l);
            CHECK(l.in_flight <= previous * (1.0 + 1e-12));
            previous = l.in_flight;
        }
        CHECK(previous < 1e-6);
    }
}

TEST_CASE("state_matrix")
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(40, 3);
    m(25, 1) = cplx{1.0, 2.0};
    const state_matrix s(m, 10);
    CHECK(s.n_bits() == 4);
    const auto r = s.bit_range(2, 2);
    CHECK(r.n_samples() == 20);
    CHECK(r.values()(5, 1) == cplx{1.0, 2.0});
    CHECK_THROWS_AS(s.bit_range(3, 2), std::out_of_range);
    m(0, 0) = cplx{NAN, 0.0};
    CHECK_THROWS_AS(state_matrix(m, 10), std::invalid_argument);
}
