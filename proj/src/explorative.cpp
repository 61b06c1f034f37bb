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

#include "prc/explorative.hpp"

#include "prc/rng.hpp"
#include "prc/signals.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace prc {

void explorative_config::validate() const
{
    if (!(initial_fixed_ratio > 0.0 && initial_fixed_ratio < 1.0))
        throw std::invalid_argument("explorative_config: initial_fixed_ratio must be in (0, 1)");
    if (n_partitions < 1) throw std::invalid_argument("explorative_config: n_partitions must be >= 1");
    if (n_iterations < 1) throw std::invalid_argument("explorative_config: n_iterations must be >= 1");
    if (!(ratio_growth >= 1.0)) throw std::invalid_argument("explorative_config: ratio_growth must be >= 1");
    if (jobs < 1) throw std::invalid_argument("explorative_config: jobs must be >= 1");
}

double explorative_config::free_fraction(std::size_t iteration) const
{
    return (1.0 - initial_fixed_ratio) / std::pow(ratio_growth, static_cast<double>(iteration));
}

candidate_score score_candidate(const labelled_states& train, const labelled_states& validation,
                                const readout_weights& candidate)
{
    const auto report = evaluate(validation.states, candidate, validation.bits, train.states, train.bits);
    return {report.ber, report.mse};
}

partition_mask random_partition(std::size_t n, std::size_t n_free, std::uint64_t seed)
{
    if (n_free > n) throw std::invalid_argument("random_partition: more free entries than weights");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng_engine rng(seed);
    // Partial Fisher-Yates: the first n_free slots become a uniform subset.
    for (std::size_t i = 0; i < n_free; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    partition_mask mask{std::vector<bool>(n, false)};
    for (std::size_t i = 0; i < n_free; ++i) mask.free[idx[i]] = true;
    return mask;
}

namespace {

struct candidate_result {
    readout_weights weights;
    candidate_score score;
    std::size_t n_free = 0;
};

template <typename Fn>
void run_indexed(std::size_t count, std::size_t jobs, Fn&& fn)
{
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    const std::size_t n_workers = std::min(jobs, count);
    std::vector<std::exception_ptr> errors(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    workers.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

readout_weights explorative_retrain(const quartic_moments& train_moments, const labelled_states& train,
                                    const labelled_states& validation, const readout_weights& start,
                                    const quantization_spec& spec, const train_config& train_cfg,
                                    const explorative_config& ex_cfg, const explorative_observer& observer)
{
    spec.validate();
    train_cfg.validate();
    ex_cfg.validate();
    const std::size_t n = start.size();
    if (n != train_moments.n_nodes()) throw std::invalid_argument("explorative_retrain: weight count does not match node count");

    train_config retrain_cfg = train_cfg;
    if (ex_cfg.retrain_epochs > 0) retrain_cfg.epochs = ex_cfg.retrain_epochs;

    readout_weights incumbent = direct_quantize(start, spec);
    candidate_score incumbent_score = score_candidate(train, validation, incumbent);

    for (std::size_t it = 0; it < ex_cfg.n_iterations; ++it) {
        const auto n_free = static_cast<std::size_t>(std::ceil(ex_cfg.free_fraction(it) * static_cast<double>(n) - 1e-9));
        if (n_free == 0) continue;
        const std::size_t n_free_clamped = std::min(n_free, n);

        std::vector<candidate_result> results(ex_cfg.n_partitions);
        run_indexed(ex_cfg.n_partitions, ex_cfg.jobs, [&](std::size_t c) {
            const auto mask = random_partition(n, n_free_clamped, derive_seed(ex_cfg.seed, {stream::partitions, it, c}));
            readout_weights w = prc::train(train_moments, incumbent, mask, retrain_cfg);
            for (std::size_t k = 0; k < n; ++k) {
                if (!mask.free[k]) continue;
                w.amplitudes[k] = quantize_amplitude(w.amplitudes[k], spec);
                w.phases[k] = quantize_phase(w.phases[k], spec);
            }
            results[c].score = score_candidate(train, validation, w);
            results[c].weights = std::move(w);
            results[c].n_free = n_free_clamped;
        });

        // Strict improvement over the incumbent; among candidates the lowest index wins ties.
        long chosen = -1;
        candidate_score best = incumbent_score;
        for (std::size_t c = 0; c < results.size(); ++c) {
            if (results[c].score < best) {
                best = results[c].score;
                chosen = static_cast<long>(c);
            }
        }
        if (observer) {
            observer({it, -1, 0, incumbent_score.ber, incumbent_score.mse, chosen == -1});
            for (std::size_t c = 0; c < results.size(); ++c)
                observer({it, static_cast<long>(c), results[c].n_free, results[c].score.ber, results[c].score.mse,
                          chosen == static_cast<long>(c)});
        }
        if (chosen >= 0) {
            incumbent = std::move(results[static_cast<std::size_t>(chosen)].weights);
            incumbent_score = best;
        }
    }
    return incumbent;
}

readout_weights explorative_retrain(const labelled_states& train, const labelled_states& validation,
                                    const quantization_spec& spec, const train_config& train_cfg,
                                    const explorative_config& ex_cfg, const explorative_observer& observer)
{
    const auto targets = expand_to_samples(train.bits, train.states.samples_per_bit());
    const quartic_moments moments(train.states, targets);
    const auto full = fit_from_scratch(moments, train_cfg);
    return explorative_retrain(moments, train, validation, full, spec, train_cfg, ex_cfg, observer);
}

}  // namespace prc
