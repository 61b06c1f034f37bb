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

#include "prc/training.hpp"

#include "prc/error.hpp"
#include "prc/rng.hpp"
#include "prc/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace prc {

void train_config::validate() const
{
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train_config: learning_rate must be positive");
    if (!(l2_lambda >= 0.0)) throw std::invalid_argument("train_config: l2_lambda must be >= 0");
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) throw std::invalid_argument("train_config: adam_beta1 must be in (0, 1)");
    if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) throw std::invalid_argument("train_config: adam_beta2 must be in (0, 1)");
    if (!(adam_epsilon > 0.0)) throw std::invalid_argument("train_config: adam_epsilon must be positive");
    if (restarts < 1) throw std::invalid_argument("train_config: restarts must be >= 1");
}

std::size_t partition_mask::count_free() const noexcept
{
    return static_cast<std::size_t>(std::count(free.begin(), free.end(), true));
}

namespace {

void check_alignment(const state_matrix& states, const readout_weights& weights, std::span<const double> targets)
{
    if (weights.size() != states.n_nodes()) throw std::invalid_argument("training: weight count does not match node count");
    if (targets.size() != states.n_samples()) throw std::invalid_argument("training: target length does not match states");
    if (targets.empty()) throw std::invalid_argument("training: empty training set");
}

double l2_term(const readout_weights& w, double l2_lambda)
{
    double s = 0.0;
    for (double a : w.amplitudes) s += a * a;
    return l2_lambda * s;
}

}  // namespace

double loss(const state_matrix& states, const readout_weights& weights, std::span<const double> target_samples,
            double l2_lambda)
{
    check_alignment(states, weights, target_samples);
    const Eigen::VectorXd y = forward(states, weights);
    const Eigen::Map<const Eigen::VectorXd> d(target_samples.data(), static_cast<Eigen::Index>(target_samples.size()));
    return (y - d).squaredNorm() / static_cast<double>(y.size()) + l2_term(weights, l2_lambda);
}

weight_gradient gradient(const state_matrix& states, const readout_weights& weights,
                         std::span<const double> target_samples, double l2_lambda)
{
    check_alignment(states, weights, target_samples);
    const Eigen::VectorXcd w = weights.complex_weights();
    const Eigen::VectorXcd z = states.values() * w;
    const Eigen::Map<const Eigen::VectorXd> d(target_samples.data(), static_cast<Eigen::Index>(target_samples.size()));
    const Eigen::VectorXd r = z.cwiseAbs2() - d;
    // dL/dy[t] = 2 r[t] / T; dy/da_k = 2 Re(conj(z) e^{i phi_k} x_k); dy/dphi_k = 2 Re(conj(z) i w_k x_k).
    const Eigen::VectorXcd weighted = r.cast<cplx>().cwiseProduct(z.conjugate());
    const Eigen::VectorXcd g = states.values().transpose() * weighted;
    const double scale = 4.0 / static_cast<double>(z.size());

    weight_gradient out;
    out.amplitudes.resize(weights.size());
    out.phases.resize(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const cplx unit = std::polar(1.0, weights.phases[k]);
        out.amplitudes[k] = scale * std::real(unit * g(kk)) + 2.0 * l2_lambda * weights.amplitudes[k];
        out.phases[k] = scale * std::real(cplx{0.0, 1.0} * w(kk) * g(kk));
    }
    return out;
}

quartic_moments::quartic_moments(const state_matrix& states, std::span<const double> target_samples)
  : n_(states.n_nodes())
  , n_samples_(states.n_samples())
{
    if (target_samples.size() != n_samples_) throw std::invalid_argument("quartic_moments: target length does not match states");
    if (n_samples_ == 0 || n_ == 0) throw std::invalid_argument("quartic_moments: empty training set");

    pair_index_.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = i; k < n_; ++k) {
            pair_index_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = static_cast<int>(pair_i_.size());
            pair_index_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = static_cast<int>(pair_i_.size());
            pair_i_.push_back(i);
            pair_k_.push_back(k);
        }
    }
    const auto n_pairs = static_cast<Eigen::Index>(pair_i_.size());
    const auto& X = states.values();
    const Eigen::Map<const Eigen::VectorXd> d(target_samples.data(), static_cast<Eigen::Index>(n_samples_));

    pair_gram_ = Eigen::MatrixXcd::Zero(n_pairs, n_pairs);
    constexpr Eigen::Index chunk = 2048;
    Eigen::MatrixXcd products(chunk, n_pairs);
    for (Eigen::Index start = 0; start < X.rows(); start += chunk) {
        const Eigen::Index len = std::min(chunk, X.rows() - start);
        for (Eigen::Index p = 0; p < n_pairs; ++p) {
            const auto i = static_cast<Eigen::Index>(pair_i_[static_cast<std::size_t>(p)]);
            const auto k = static_cast<Eigen::Index>(pair_k_[static_cast<std::size_t>(p)]);
            products.col(p).head(len) = X.col(i).segment(start, len).cwiseProduct(X.col(k).segment(start, len));
        }
        // G += P^T conj(P): G_ab = sum_t p_a[t] conj(p_b[t]).
        pair_gram_.selfadjointView<Eigen::Lower>().rankUpdate(products.topRows(len).transpose());
    }
    pair_gram_.triangularView<Eigen::StrictlyUpper>() = pair_gram_.adjoint();
    pair_gram_ /= static_cast<double>(n_samples_);

    // C_ij = mean_t d[t] x_i[t] conj(x_j[t]).
    target_cross_ = (X.transpose() * d.cast<cplx>().asDiagonal() * X.conjugate()) / static_cast<double>(n_samples_);
    target_power_ = d.squaredNorm() / static_cast<double>(n_samples_);

    if (!pair_gram_.allFinite() || !target_cross_.allFinite()) throw numerical_error("quartic_moments: non-finite moments");
}

double quartic_moments::loss(const readout_weights& weights, double l2_lambda) const
{
    weight_gradient unused;
    return loss_and_gradient(weights, l2_lambda, unused);
}

double quartic_moments::loss_and_gradient(const readout_weights& weights, double l2_lambda, weight_gradient& grad) const
{
    if (weights.size() != n_) throw std::invalid_argument("quartic_moments: weight count does not match node count");
    const Eigen::VectorXcd w = weights.complex_weights();
    const auto n_pairs = static_cast<Eigen::Index>(pair_i_.size());

    Eigen::VectorXcd v(n_pairs);
    for (Eigen::Index p = 0; p < n_pairs; ++p) {
        const auto i = static_cast<Eigen::Index>(pair_i_[static_cast<std::size_t>(p)]);
        const auto k = static_cast<Eigen::Index>(pair_k_[static_cast<std::size_t>(p)]);
        v(p) = (i == k ? 1.0 : 2.0) * w(i) * w(k);
    }
    const Eigen::VectorXcd h = pair_gram_ * v.conjugate();
    const Eigen::VectorXcd cw = target_cross_ * w.conjugate();
    const double quartic = std::real(v.dot(h.conjugate()));  // v^T h
    const double cross = std::real(w.dot(cw.conjugate()));   // w^T C conj(w)
    const double value = quartic - 2.0 * cross + target_power_ + l2_term(weights, l2_lambda);

    // Wirtinger derivative dL/dw_i = 2 sum_k w_k h_(i,k) - 2 (C conj w)_i.
    grad.amplitudes.resize(n_);
    grad.phases.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        cplx hw{};
        for (std::size_t k = 0; k < n_; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            hw += w(kk) * h(pair_index_(ii, kk));
        }
        const cplx dw = 2.0 * hw - 2.0 * cw(ii);
        const cplx unit = std::polar(1.0, weights.phases[i]);
        grad.amplitudes[i] = 2.0 * std::real(dw * unit) + 2.0 * l2_lambda * weights.amplitudes[i];
        grad.phases[i] = 2.0 * std::real(dw * cplx{0.0, 1.0} * w(ii));
    }
    return value;
}

readout_weights train(const quartic_moments& moments, const readout_weights& init, const partition_mask& mask,
                      const train_config& config, const loss_observer& observer)
{
    config.validate();
    const std::size_t n = init.size();
    if (n != moments.n_nodes()) throw std::invalid_argument("train: weight count does not match node count");
    if (mask.free.size() != n) throw std::invalid_argument("train: mask size does not match weight count");
    if (mask.count_free() == 0) throw std::invalid_argument("train: mask has no free weights");

    readout_weights w = init;
    std::vector<double> m(2 * n, 0.0), v(2 * n, 0.0);
    weight_gradient g;
    double b1t = 1.0, b2t = 1.0;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const double value = moments.loss_and_gradient(w, config.l2_lambda, g);
        if (!std::isfinite(value)) throw numerical_error("train: loss is not finite");
        if (observer) observer(epoch, value);
        b1t *= config.adam_beta1;
        b2t *= config.adam_beta2;
        for (std::size_t k = 0; k < n; ++k) {
            if (!mask.free[k]) continue;
            for (std::size_t axis = 0; axis < 2; ++axis) {
                const std::size_t j = axis * n + k;
                const double gj = axis == 0 ? g.amplitudes[k] : g.phases[k];
                m[j] = config.adam_beta1 * m[j] + (1.0 - config.adam_beta1) * gj;
                v[j] = config.adam_beta2 * v[j] + (1.0 - config.adam_beta2) * gj * gj;
                const double step = config.learning_rate * (m[j] / (1.0 - b1t)) / (std::sqrt(v[j] / (1.0 - b2t)) + config.adam_epsilon);
                if (axis == 0)
                    w.amplitudes[k] = std::clamp(w.amplitudes[k] - step, 0.0, 1.0);
                else
                    w.phases[k] = wrap_phase(w.phases[k] - step);
            }
        }
    }
    return w;
}

readout_weights train(const state_matrix& states, std::span<const double> target_samples, const readout_weights& init,
                      const partition_mask& mask, const train_config& config, const loss_observer& observer)
{
    check_alignment(states, init, target_samples);
    if (config.epochs == 0) return init;
    return train(quartic_moments(states, target_samples), init, mask, config, observer);
}

readout_weights random_weights(std::size_t n, std::uint64_t seed)
{
    rng_engine rng(derive_seed(seed, {stream::weights_init}));
    std::vector<double> a(n), p(n);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = 0.1 + 0.8 * uniform01(rng);
        p[k] = 2.0 * std::numbers::pi * uniform01(rng);
    }
    return readout_weights(std::move(a), std::move(p));
}

readout_weights fit_from_scratch(const quartic_moments& moments, const train_config& config,
                                 const restart_observer& observer)
{
    config.validate();
    const auto mask = partition_mask::all(moments.n_nodes());
    readout_weights best;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < config.restarts; ++r) {
        loss_observer curve;
        if (observer) curve = [&](std::size_t epoch, double value) { observer(r, epoch, value); };
        auto w = train(moments, random_weights(moments.n_nodes(), derive_seed(config.seed, {r})), mask, config, curve);
        const double value = moments.loss(w, config.l2_lambda);
        if (value < best_loss) {
            best_loss = value;
            best = std::move(w);
        }
    }
    return best;
}

std::vector<double> bit_statistics(const state_matrix& states, const readout_weights& weights)
{
    const Eigen::VectorXd y = forward(states, weights);
    const std::size_t spb = states.samples_per_bit();
    std::vector<double> stats(states.n_bits());
    for (std::size_t b = 0; b < stats.size(); ++b)
        stats[b] = y.segment(static_cast<Eigen::Index>(b * spb), static_cast<Eigen::Index>(spb)).mean();
    return stats;
}

double fit_threshold(std::span<const double> statistics, std::span<const std::uint8_t> bits)
{
    if (statistics.size() != bits.size()) throw std::invalid_argument("fit_threshold: size mismatch");
    if (statistics.empty()) throw std::invalid_argument("fit_threshold: empty set");
    std::vector<std::size_t> order(statistics.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return statistics[a] < statistics[b]; });

    // With the first i sorted entries predicted 0: errors = ones among them + zeros among the rest.
    std::size_t zeros_total = 0;
    for (auto b : bits) zeros_total += b == 0;
    std::size_t ones_below = 0, zeros_below = 0;
    std::size_t best_errors = zeros_total;  // threshold below everything
    double best = statistics[order.front()] - 1.0;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        const std::size_t idx = order[i - 1];
        (bits[idx] ? ones_below : zeros_below) += 1;
        const bool boundary = i == order.size() || statistics[order[i]] > statistics[idx];
        if (!boundary) continue;
        const std::size_t errors = ones_below + (zeros_total - zeros_below);
        if (errors < best_errors) {
            best_errors = errors;
            best = i == order.size() ? statistics[idx] + 1.0 : 0.5 * (statistics[idx] + statistics[order[i]]);
        }
    }
    return best;
}

std::size_t count_errors(std::span<const double> statistics, std::span<const std::uint8_t> bits, double threshold)
{
    if (statistics.size() != bits.size()) throw std::invalid_argument("count_errors: size mismatch");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) errors += (statistics[i] > threshold) != (bits[i] == 1);
    return errors;
}

eval_report evaluate(const state_matrix& states, const readout_weights& weights, std::span<const std::uint8_t> target_bits,
                     double threshold)
{
    if (target_bits.empty()) throw std::invalid_argument("evaluate: empty evaluation set");
    if (target_bits.size() != states.n_bits()) throw std::invalid_argument("evaluate: target length does not match states");
    const Eigen::VectorXd y = forward(states, weights);
    const std::size_t spb = states.samples_per_bit();
    std::vector<double> stats(target_bits.size());
    double sq = 0.0;
    for (std::size_t b = 0; b < stats.size(); ++b) {
        const auto seg = y.segment(static_cast<Eigen::Index>(b * spb), static_cast<Eigen::Index>(spb));
        stats[b] = seg.mean();
        sq += (seg.array() - static_cast<double>(target_bits[b])).square().sum();
    }
    eval_report r;
    r.threshold = threshold;
    r.n_bits_evaluated = target_bits.size();
    r.errors = count_errors(stats, target_bits, threshold);
    r.ber = static_cast<double>(r.errors) / static_cast<double>(r.n_bits_evaluated);
    r.mse = sq / static_cast<double>(y.size());
    if (!std::isfinite(r.mse)) throw numerical_error("evaluate: non-finite output");
    return r;
}

eval_report evaluate(const state_matrix& states, const readout_weights& weights, std::span<const std::uint8_t> target_bits,
                     const state_matrix& train_states, std::span<const std::uint8_t> train_bits)
{
    const auto train_stats = bit_statistics(train_states, weights);
    return evaluate(states, weights, target_bits, fit_threshold(train_stats, train_bits));
}

}  // namespace prc
