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

#include <doctest.h>

#include <numbers>
#include <random>

using namespace prc;

namespace {

state_matrix random_states(std::size_t T, std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cplx{g(rng), g(rng)};
    return state_matrix(m, 1);
}

readout_weights random_readout(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> a(n), p(n);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = u(rng);
        p[k] = 2.0 * std::numbers::pi * u(rng);
    }
    return readout_weights(a, p);
}

}  // namespace

TEST_CASE("readout_weights validation")
{
    CHECK_THROWS_AS(readout_weights({0.5}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(readout_weights({1.5}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(readout_weights({-0.1}, {0.0}), std::invalid_argument);
    const readout_weights w({0.5}, {-std::numbers::pi / 2});
    CHECK(w.phases[0] == doctest::Approx(1.5 * std::numbers::pi));
    CHECK(wrap_phase(2.0 * std::numbers::pi) == 0.0);
    CHECK(wrap_phase(-1e-300) < 2.0 * std::numbers::pi);
}

TEST_CASE("forward examples")
{
    Eigen::MatrixXcd one(1, 1);
    one(0, 0) = 1.0;
    CHECK(forward(state_matrix(one, 1), readout_weights({1.0}, {0.0}))(0) == 1.0);

    Eigen::MatrixXcd two(1, 2);
    two << cplx{1.0, 0.0}, cplx{1.0, 0.0};
    CHECK(std::abs(forward(state_matrix(two, 1), readout_weights({1.0, 1.0}, {0.0, std::numbers::pi}))(0)) < 1e-30);

    const auto s = random_states(30, 4, 1);
    CHECK(forward(s, readout_weights({0, 0, 0, 0}, {1, 2, 3, 4})).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXcd syn(1, 2);
    syn << cplx{2.0, 0.0}, cplx{5.0, 1.0};
    CHECK(combine_field(state_matrix(syn, 1), readout_weights({0.5, 0.0}, {0.0, 0.0}))(0) == cplx{1.0, 0.0});

    CHECK_THROWS_AS(forward(s, readout_weights({1.0}, {0.0})), std::invalid_argument);
}

TEST_CASE("combine_field picks a single node")
{
    const auto s = random_states(25, 5, 2);
    const auto z = combine_field(s, readout_weights({0, 0, 1, 0, 0}, {0, 0, 0, 0, 0}));
    for (Eigen::Index t = 0; t < 25; ++t) CHECK(z(t) == s.values()(t, 2));
    CHECK(combine_field(s.values().row(3), readout_weights({0, 0, 1, 0, 0}, {0, 0, 0, 0, 0})) == s.values()(3, 2));
}

TEST_CASE("readout invariants")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto s = random_states(50, 16, seed);
        const auto w = random_readout(16, seed + 50);
        const Eigen::VectorXd y = forward(s, w);
        CHECK(y.minCoeff() >= 0.0);

        auto shifted = w;
        for (auto& p : shifted.phases) p = wrap_phase(p + 0.7 * static_cast<double>(seed));
        CHECK((forward(s, shifted) - y).cwiseAbs().maxCoeff() <= 1e-12 * y.cwiseAbs().maxCoeff());

        const auto z = combine_field(s, w);
        const auto zs = combine_field(s, shifted);
        const cplx rot = std::exp(cplx{0.0, 0.7 * static_cast<double>(seed)});
        CHECK((zs - rot * z).cwiseAbs().maxCoeff() <= 1e-12 * z.cwiseAbs().maxCoeff());

        auto half = w;
        for (auto& a : half.amplitudes) a *= 0.5;
        CHECK((forward(s, half) - 0.25 * y).cwiseAbs().maxCoeff() <= 1e-14 * y.cwiseAbs().maxCoeff());
    }
}
