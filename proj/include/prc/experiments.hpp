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

// End-to-end experiments: dataset preparation, the three readout methods,
// Monte Carlo drift evaluation and resumable parameter sweeps. //

#include "prc/explorative.hpp"
#include "prc/quantization.hpp"
#include "prc/readout.hpp"
#include "prc/reservoir.hpp"
#include "prc/signals.hpp"
#include "prc/training.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prc {

enum class task_kind { header, xor_task };
enum class readout_method { full, naive, explorative };

std::string_view to_string(task_kind t) noexcept;
std::string_view to_string(readout_method m) noexcept;
/// Throws config_error on an unknown name.
task_kind parse_task(std::string_view name);
readout_method parse_method(std::string_view name);

struct experiment_config {
    task_kind task = task_kind::header;
    bit_sequence header_pattern{1, 1, 0, 1};
    std::size_t xor_delay = 4;

    /// Leading bits that are simulated but never trained on or scored.
    std::size_t n_warmup_bits = 50;
    std::size_t n_train_bits = 6000;
    std::size_t n_val_bits = 2000;
    std::size_t n_test_bits = 2000;

    std::size_t samples_per_bit = 20;
    double smoothing_alpha = 0.1;
    double input_power = 16.0;

    std::vector<std::size_t> amp_levels{8, 16, 32};
    /// Empty couples the phase resolution to the amplitude resolution.
    std::vector<std::size_t> phase_levels;
    std::vector<double> extinction_ratio{2.0, 5.0, 10.0};
    std::vector<double> noise_level{0.001, 0.00316227766016838, 0.01, 0.0316227766016838, 0.1, 0.316227766016838, 1.0};
    std::size_t mc_draws = 200;
    std::vector<std::uint64_t> seeds{1};
    std::vector<readout_method> methods{readout_method::full, readout_method::naive, readout_method::explorative};

    /// Candidate L2 strengths, chosen per seed on the validation set. Empty
    /// uses train.l2_lambda as is.
    std::vector<double> l2_grid{1e-6, 1e-5, 1e-4, 1e-3, 1e-2};

    train_config train;
    explorative_config explorative;
    swirl_params reservoir;

    /// Throws config_error describing the first violated constraint.
    void validate() const;

    /// ceil(delay / samples_per_bit) + task memory; n_warmup_bits may be larger
    /// to let the start-up transient die out as well.
    std::size_t min_warmup_bits() const noexcept;
    std::size_t total_bits() const noexcept { return n_warmup_bits + n_train_bits + n_val_bits + n_test_bits; }
    /// (N_a, N_phi) pairs of the sweep, coupled when phase_levels is empty.
    std::vector<std::pair<std::size_t, std::size_t>> resolutions() const;
};

/// Task targets for a whole input stream.
bit_sequence task_targets(const experiment_config& config, const bit_sequence& input_bits);

/// Simulated input stream: input bits and the node fields of every sample.
struct dataset {
    bit_sequence input_bits;
    state_matrix states;
};

/// Generates bits and topology from `seed` and simulates the whole stream.
dataset simulate_dataset(const experiment_config& config, std::uint64_t seed);

/// Contiguous train / validation / test slices after the warm-up.
struct split_data {
    state_matrix train_states, val_states, test_states;
    std::vector<std::uint8_t> train_bits, val_bits, test_bits;

    labelled_states train() const { return {train_states, train_bits}; }
    labelled_states validation() const { return {val_states, val_bits}; }
};

/// Throws config_error if `data` does not hold config.total_bits() bits.
split_data split_dataset(const experiment_config& config, const dataset& data);

struct full_precision_fit {
    readout_weights weights;
    double l2_lambda = 0.0;
    eval_report validation;
};

/// Training curve observer: (l2_lambda, restart, epoch, loss).
using fit_observer = std::function<void(double, std::size_t, std::size_t, double)>;

/// Trains once per l2_grid entry (with restarts) and keeps the lowest
/// validation (BER, MSE); the earlier grid entry wins ties.
full_precision_fit fit_full_precision(const quartic_moments& moments, const split_data& split,
                                      const experiment_config& config, std::uint64_t seed,
                                      const fit_observer& observer = {});

struct mc_result {
    double ber_mean = 0.0;
    double ber_std = 0.0;  ///< population standard deviation over draws
    double mse_mean = 0.0;
};

/// Applies drift `mc_draws` times and evaluates each draw with the fixed
/// `threshold`. With noise_level == 0 every draw is identical and a single
/// evaluation is made.
mc_result monte_carlo_ber(const state_matrix& test_states, const readout_weights& weights, const quantization_spec& spec,
                          std::span<const std::uint8_t> target_bits, std::size_t mc_draws, std::uint64_t seed,
                          double threshold);

/// Threshold fitted on the noiseless training statistics of `weights`.
double training_threshold(const split_data& split, const readout_weights& weights);

struct sweep_row {
    task_kind task = task_kind::header;
    readout_method method = readout_method::full;
    std::size_t amp_levels = 0;
    std::size_t phase_levels = 0;
    double extinction_ratio = 0.0;
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    double ber_mean = 0.0;
    double ber_std = 0.0;
    double ber_floor = 0.0;
    double mse_mean = 0.0;

    friend bool operator==(const sweep_row&, const sweep_row&) = default;
};

/// Identity of a sweep cell, the columns before the results.
struct cell_key {
    task_kind task;
    readout_method method;
    std::size_t amp_levels;
    std::size_t phase_levels;
    double extinction_ratio;
    double noise_level;
    std::uint64_t seed;

    friend auto operator<=>(const cell_key&, const cell_key&) = default;
};

cell_key key_of(const sweep_row& row) noexcept;

/// Canonical row order: task, method (full, naive, explorative), amp_levels,
/// phase_levels, extinction_ratio, noise_level, seed.
void sort_rows(std::vector<sweep_row>& rows);

std::string sweep_header();
std::string format_row(const sweep_row& row);
/// Reads a results file; throws io_error on a malformed file.
std::vector<sweep_row> read_sweep_csv(const std::filesystem::path& path);
/// Writes header and rows in the given order.
void write_sweep_csv(const std::filesystem::path& path, std::span<const sweep_row> rows);

struct sweep_options {
    std::size_t jobs = 1;
    /// Called with each finished row (from the writer, serialized).
    std::function<void(const sweep_row&)> on_row;
};

/// Runs every missing cell of the Cartesian product, appending rows to
/// `csv_path` as they finish, then rewrites the file in canonical order and
/// returns all rows. Cells already present in the file are not recomputed.
std::vector<sweep_row> run_sweep(const experiment_config& config, const std::filesystem::path& csv_path,
                                 const sweep_options& options = {});

/// All rows of one seed, computed in memory without any file.
std::vector<sweep_row> run_seed(const experiment_config& config, std::uint64_t seed);

/// A chosen subset of one seed's grid, sharing a single full-precision fit.
/// Every cell must belong to the grid of `config` and carry `seed`.
std::vector<sweep_row> run_cells(const experiment_config& config, std::uint64_t seed, std::span<const cell_key> cells);

}  // namespace prc
