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

// Readout training through the photodiode nonlinearity (full-batch Adam on
// MSE + L2) and bit-error-rate evaluation. //

#include "prc/readout.hpp"
#include "prc/reservoir.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace prc {

struct train_config {
    double learning_rate = 0.01;
    std::size_t epochs = 6000;
    double l2_lambda = 0.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 1;
    /// Independent random initializations tried by fit_from_scratch; the
    /// lowest final training loss wins.
    std::size_t restarts = 4;

    void validate() const;
};

/// free[k] == true: the (amplitude, phase) pair of node k is trained.
struct partition_mask {
    std::vector<bool> free;

    static partition_mask all(std::size_t n) { return {std::vector<bool>(n, true)}; }
    std::size_t count_free() const noexcept;
};

struct eval_report {
    double ber = 0.0;
    double mse = 0.0;
    double threshold = 0.0;
    std::size_t n_bits_evaluated = 0;
    std::size_t errors = 0;
};

struct weight_gradient {
    std::vector<double> amplitudes;
    std::vector<double> phases;
};

/// (1/T) sum_t (|z[t]|^2 - d[t])^2 + l2 sum_k a_k^2, evaluated sample by sample.
double loss(const state_matrix& states, const readout_weights& weights, std::span<const double> target_samples,
            double l2_lambda);

/// Analytic gradient of `loss` with respect to every amplitude and phase,
/// evaluated sample by sample.
weight_gradient gradient(const state_matrix& states, const readout_weights& weights,
                         std::span<const double> target_samples, double l2_lambda);

/// Compressed, exact form of the training loss. With z = sum_i w_i x_i, the
/// quartic term mean|z|^4 equals v^T G conj(v) where v holds the products
/// w_i w_k over unordered pairs (doubled off the diagonal) and G is the mean
/// outer product of the matching state products; the cross term is
/// w^T C conj(w) with C = mean(d x x^H). Building G costs one pass over the
/// data; each loss/gradient evaluation afterwards is independent of T.
class quartic_moments {
public:
    quartic_moments(const state_matrix& states, std::span<const double> target_samples);

    std::size_t n_nodes() const noexcept { return n_; }
    std::size_t n_samples() const noexcept { return n_samples_; }

    double loss(const readout_weights& weights, double l2_lambda) const;
    /// Returns the loss and writes d loss / d(a, phi) into `grad`.
    double loss_and_gradient(const readout_weights& weights, double l2_lambda, weight_gradient& grad) const;

private:
    std::size_t n_ = 0;
    std::size_t n_samples_ = 0;
    std::vector<std::size_t> pair_i_, pair_k_;
    Eigen::MatrixXi pair_index_;
    Eigen::MatrixXcd pair_gram_;
    Eigen::MatrixXcd target_cross_;
    double target_power_ = 0.0;
};

/// Called after every epoch with the loss evaluated before that epoch's update.
using loss_observer = std::function<void(std::size_t epoch, double loss)>;

/// Full-batch Adam on the free weights. Amplitudes are projected onto [0, 1]
/// and phases wrapped after each step; frozen entries are returned untouched.
readout_weights train(const quartic_moments& moments, const readout_weights& init, const partition_mask& mask,
                      const train_config& config, const loss_observer& observer = {});

readout_weights train(const state_matrix& states, std::span<const double> target_samples, const readout_weights& init,
                      const partition_mask& mask, const train_config& config, const loss_observer& observer = {});

/// Amplitudes uniform in [0.1, 0.9], phases uniform in [0, 2pi).
readout_weights random_weights(std::size_t n, std::uint64_t seed);

/// Loss curve observer tagged with the restart index.
using restart_observer = std::function<void(std::size_t restart, std::size_t epoch, double loss)>;

/// `config.restarts` trainings from random_weights, all weights free; the
/// lowest final loss wins (ties to the earliest restart).
readout_weights fit_from_scratch(const quartic_moments& moments, const train_config& config,
                                 const restart_observer& observer = {});

/// Mean detected intensity over each bit's samples.
std::vector<double> bit_statistics(const state_matrix& states, const readout_weights& weights);

/// Scans every midpoint between adjacent distinct sorted statistics, plus
/// one threshold below and one above all of them, and returns the one with
/// the fewest errors under "predict 1 iff statistic > threshold". Ties go to
/// the lowest threshold.
double fit_threshold(std::span<const double> statistics, std::span<const std::uint8_t> bits);

std::size_t count_errors(std::span<const double> statistics, std::span<const std::uint8_t> bits, double threshold);

/// BER/MSE of `weights` on the given set with a fixed threshold.
eval_report evaluate(const state_matrix& states, const readout_weights& weights, std::span<const std::uint8_t> target_bits,
                     double threshold);

/// Fits the threshold on the training set, then evaluates on the given set.
eval_report evaluate(const state_matrix& states, const readout_weights& weights, std::span<const std::uint8_t> target_bits,
                     const state_matrix& train_states, std::span<const std::uint8_t> train_bits);

}  // namespace prc
