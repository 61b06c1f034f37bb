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

// Explorative partition retraining of quantized readout weights. //

#include "prc/quantization.hpp"
#include "prc/readout.hpp"
#include "prc/reservoir.hpp"
#include "prc/training.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace prc {

struct explorative_config {
    double initial_fixed_ratio = 0.5;
    std::size_t n_partitions = 20;
    std::size_t n_iterations = 4;
    /// The free fraction is divided by this factor after every iteration.
    double ratio_growth = 2.0;
    /// Adam epochs of each candidate retrain; 0 uses train_config::epochs.
    std::size_t retrain_epochs = 0;
    /// Worker threads for candidate evaluation; results do not depend on it.
    std::size_t jobs = 1;
    std::uint64_t seed = 1;

    void validate() const;
    /// Free fraction of iteration i (0-based): (1 - initial_fixed_ratio) / ratio_growth^i.
    double free_fraction(std::size_t iteration) const;
};

/// One labelled segment of reservoir output.
struct labelled_states {
    const state_matrix& states;
    std::span<const std::uint8_t> bits;
};

struct candidate_score {
    double ber = 0.0;
    double mse = 0.0;

    /// Lower BER first, then lower MSE.
    friend bool operator<(const candidate_score& a, const candidate_score& b)
    {
        return a.ber < b.ber || (a.ber == b.ber && a.mse < b.mse);
    }
    friend bool operator==(const candidate_score&, const candidate_score&) = default;
};

/// Noiseless validation score; the decision threshold is re-fitted on the
/// training statistics of the candidate.
candidate_score score_candidate(const labelled_states& train, const labelled_states& validation,
                                const readout_weights& candidate);

/// One line of the search audit log. candidate == -1 is the incumbent.
struct explorative_event {
    std::size_t iteration = 0;
    long candidate = 0;
    std::size_t n_free = 0;
    double val_ber = 0.0;
    double val_mse = 0.0;
    bool selected = false;
};

using explorative_observer = std::function<void(const explorative_event&)>;

/// Starting from `start` (usually the full-precision fit), quantizes and
/// then, per iteration, retrains n_partitions random subsets of
/// ceil(free_fraction * N) weight pairs in full precision with the others
/// frozen on-grid, requantizes them and keeps the best-scoring candidate. The
/// incumbent competes in every round, so the validation score never gets
/// worse. The result lies exactly on the grid of `spec`.
readout_weights explorative_retrain(const quartic_moments& train_moments, const labelled_states& train,
                                    const labelled_states& validation, const readout_weights& start,
                                    const quantization_spec& spec, const train_config& train_cfg,
                                    const explorative_config& ex_cfg, const explorative_observer& observer = {});

/// Convenience overload that builds the moments and starts from a fresh
/// full-precision fit.
readout_weights explorative_retrain(const labelled_states& train, const labelled_states& validation,
                                    const quantization_spec& spec, const train_config& train_cfg,
                                    const explorative_config& ex_cfg, const explorative_observer& observer = {});

/// Uniformly random set of `n_free` distinct indices out of n, as a mask.
partition_mask random_partition(std::size_t n, std::size_t n_free, std::uint64_t seed);

}  // namespace prc
