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

#include "prc/experiments.hpp"

#include "prc/error.hpp"
#include "prc/io.hpp"
#include "prc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace prc {

std::string_view to_string(task_kind t) noexcept
{
    return t == task_kind::header ? "header" : "xor";
}

std::string_view to_string(readout_method m) noexcept
{
    switch (m) {
    case readout_method::full: return "full";
    case readout_method::naive: return "naive";
    case readout_method::explorative: return "explorative";
    }
    return "?";
}

task_kind parse_task(std::string_view name)
{
    if (name == "header") return task_kind::header;
    if (name == "xor") return task_kind::xor_task;
    throw config_error("unknown task '" + std::string(name) + "' (expected header or xor)");
}

readout_method parse_method(std::string_view name)
{
    if (name == "full") return readout_method::full;
    if (name == "naive") return readout_method::naive;
    if (name == "explorative") return readout_method::explorative;
    throw config_error("unknown method '" + std::string(name) + "' (expected full, naive or explorative)");
}

std::size_t experiment_config::min_warmup_bits() const noexcept
{
    const std::size_t memory = task == task_kind::header ? header_pattern.size() - 1 : xor_delay;
    const std::size_t spb = std::max<std::size_t>(samples_per_bit, 1);
    return (reservoir.delay_samples + spb - 1) / spb + memory;
}

void experiment_config::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) throw config_error(what);
    };
    require(!header_pattern.empty(), "header_pattern must not be empty");
    require(xor_delay >= 1, "xor_delay must be >= 1");
    require(n_train_bits > 0 && n_val_bits > 0 && n_test_bits > 0, "bit counts must be positive");
    require(samples_per_bit >= 1, "samples_per_bit must be >= 1");
    require(n_warmup_bits >= min_warmup_bits(), "n_warmup_bits must cover the reservoir delay plus the task memory");
    require(smoothing_alpha >= 0.0 && smoothing_alpha < 1.0, "smoothing_alpha must be in [0, 1)");
    require(input_power > 0.0 && std::isfinite(input_power), "input_power must be positive");
    require(!amp_levels.empty() && !extinction_ratio.empty() && !noise_level.empty(), "sweep lists must not be empty");
    require(!seeds.empty(), "seeds must not be empty");
    require(!methods.empty(), "methods must not be empty");
    require(mc_draws >= 1, "mc_draws must be >= 1");
    for (double l : l2_grid) require(l >= 0.0 && std::isfinite(l), "l2_grid entries must be >= 0");
    auto spec_ok = [&](auto&& fn) {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
    };
    for (auto [na, np] : resolutions())
        for (double e : extinction_ratio)
            for (double eta : noise_level) spec_ok([&] { quantization_spec{na, np, e, eta}.validate(); });
    spec_ok([&] { train.validate(); });
    spec_ok([&] { explorative.validate(); });
    require(reservoir.rows >= 1 && reservoir.cols >= 1, "reservoir rows and cols must be >= 1");
    require(reservoir.delay_samples >= 1, "reservoir delay_samples must be >= 1");
    require(reservoir.waveguide_loss >= 0.0 && reservoir.waveguide_loss < 1.0, "reservoir waveguide_loss must be in [0, 1)");
    require(reservoir.input_tap >= 0.0 && reservoir.input_tap <= 1.0, "reservoir input_tap must be in [0, 1]");
}

std::vector<std::pair<std::size_t, std::size_t>> experiment_config::resolutions() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (phase_levels.empty()) {
        for (auto n : amp_levels) out.emplace_back(n, n);
    } else {
        for (auto na : amp_levels)
            for (auto np : phase_levels) out.emplace_back(na, np);
    }
    return out;
}

bit_sequence task_targets(const experiment_config& config, const bit_sequence& input_bits)
{
    return config.task == task_kind::header ? header_target(input_bits, config.header_pattern)
                                            : xor_target(input_bits, config.xor_delay);
}

dataset simulate_dataset(const experiment_config& config, std::uint64_t seed)
{
    swirl_params params = config.reservoir;
    params.seed = derive_seed(seed, {stream::topology});
    const auto topology = build_swirl(params);
    auto bits = generate_bits(config.total_bits(), derive_seed(seed, {stream::bits}));
    const auto signal = modulate(bits, config.samples_per_bit, config.smoothing_alpha, config.input_power);
    return {std::move(bits), simulate(topology, signal)};
}

split_data split_dataset(const experiment_config& config, const dataset& data)
{
    if (data.input_bits.size() != config.total_bits() || data.states.n_bits() != config.total_bits()
        || data.states.samples_per_bit() != config.samples_per_bit)
        throw config_error("dataset does not match the configured stream length");
    const auto targets = task_targets(config, data.input_bits);
    const auto t = targets.bits();
    split_data s;
    std::size_t at = config.n_warmup_bits;
    auto take = [&](std::size_t n, state_matrix& st, std::vector<std::uint8_t>& b) {
        st = data.states.bit_range(at, n);
        b.assign(t.begin() + static_cast<std::ptrdiff_t>(at), t.begin() + static_cast<std::ptrdiff_t>(at + n));
        at += n;
    };
    take(config.n_train_bits, s.train_states, s.train_bits);
    take(config.n_val_bits, s.val_states, s.val_bits);
    take(config.n_test_bits, s.test_states, s.test_bits);
    return s;
}

full_precision_fit fit_full_precision(const quartic_moments& moments, const split_data& split,
                                      const experiment_config& config, std::uint64_t seed,
                                      const fit_observer& observer)
{
    train_config cfg = config.train;
    cfg.seed = derive_seed(seed, {stream::weights_init});
    std::vector<double> grid = config.l2_grid;
    if (grid.empty()) grid.push_back(config.train.l2_lambda);

    std::optional<full_precision_fit> best;
    for (double lambda : grid) {
        cfg.l2_lambda = lambda;
        restart_observer curve;
        if (observer)
            curve = [&](std::size_t r, std::size_t epoch, double value) { observer(lambda, r, epoch, value); };
        auto w = fit_from_scratch(moments, cfg, curve);
        const auto report = evaluate(split.val_states, w, split.val_bits, split.train_states, split.train_bits);
        const bool better = !best || report.ber < best->validation.ber
                         || (report.ber == best->validation.ber && report.mse < best->validation.mse);
        if (better) best = full_precision_fit{std::move(w), lambda, report};
    }
    return *best;
}

double training_threshold(const split_data& split, const readout_weights& weights)
{
    return fit_threshold(bit_statistics(split.train_states, weights), split.train_bits);
}

mc_result monte_carlo_ber(const state_matrix& test_states, const readout_weights& weights, const quantization_spec& spec,
                          std::span<const std::uint8_t> target_bits, std::size_t mc_draws, std::uint64_t seed,
                          double threshold)
{
    spec.validate();
    if (mc_draws < 1) throw std::invalid_argument("monte_carlo_ber: mc_draws must be >= 1");
    if (spec.noise_level == 0.0) {
        const auto r = evaluate(test_states, weights, target_bits, threshold);
        return {r.ber, 0.0, r.mse};
    }
    rng_engine rng(seed);
    double sum = 0.0, sum_sq = 0.0, mse = 0.0;
    for (std::size_t d = 0; d < mc_draws; ++d) {
        const auto noisy = apply_drift_noise(weights, spec, rng);
        const auto r = evaluate(test_states, noisy, target_bits, threshold);
        sum += r.ber;
        sum_sq += r.ber * r.ber;
        mse += r.mse;
    }
    const double n = static_cast<double>(mc_draws);
    const double mean = sum / n;
    return {mean, std::sqrt(std::max(0.0, sum_sq / n - mean * mean)), mse / n};
}

cell_key key_of(const sweep_row& r) noexcept
{
    return {r.task, r.method, r.amp_levels, r.phase_levels, r.extinction_ratio, r.noise_level, r.seed};
}

void sort_rows(std::vector<sweep_row>& rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const sweep_row& a, const sweep_row& b) { return key_of(a) < key_of(b); });
}

// Sweep CSV ---------------------------------------------------------------

namespace {

const char* const csv_columns =
    "task,method,amp_levels,phase_levels,extinction_ratio,noise_level,seed,ber_mean,ber_std,ber_floor,mse_mean";

template <typename T>
T parse_number(std::string_view field, const std::filesystem::path& path, std::size_t line)
{
    T v{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw io_error(path.string() + ":" + std::to_string(line) + ": bad number '" + std::string(field) + "'");
    return v;
}

std::vector<std::string_view> split_commas(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(',', start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::string sweep_header()
{
    return csv_columns;
}

std::string format_row(const sweep_row& r)
{
    std::string s;
    s += to_string(r.task);
    s += ',';
    s += to_string(r.method);
    s += ',' + std::to_string(r.amp_levels);
    s += ',' + std::to_string(r.phase_levels);
    s += ',' + format_double(r.extinction_ratio);
    s += ',' + format_double(r.noise_level);
    s += ',' + std::to_string(r.seed);
    s += ',' + format_double(r.ber_mean);
    s += ',' + format_double(r.ber_std);
    s += ',' + format_double(r.ber_floor);
    s += ',' + format_double(r.mse_mean);
    return s;
}

std::vector<sweep_row> read_sweep_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<sweep_row> rows;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        // A final line without newline is a write cut short by an interruption.
        if (nl == std::string::npos) break;
        const std::string_view line(text.data() + pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line_no == 1) {
            if (line != csv_columns) throw io_error(path.string() + ": not a sweep results file (header mismatch)");
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_commas(line);
        if (f.size() != 11) throw io_error(path.string() + ":" + std::to_string(line_no) + ": expected 11 fields");
        sweep_row r;
        try {
            r.task = parse_task(f[0]);
            r.method = parse_method(f[1]);
        } catch (const config_error& e) {
            throw io_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        r.amp_levels = parse_number<std::size_t>(f[2], path, line_no);
        r.phase_levels = parse_number<std::size_t>(f[3], path, line_no);
        r.extinction_ratio = parse_number<double>(f[4], path, line_no);
        r.noise_level = parse_number<double>(f[5], path, line_no);
        r.seed = parse_number<std::uint64_t>(f[6], path, line_no);
        r.ber_mean = parse_number<double>(f[7], path, line_no);
        r.ber_std = parse_number<double>(f[8], path, line_no);
        r.ber_floor = parse_number<double>(f[9], path, line_no);
        r.mse_mean = parse_number<double>(f[10], path, line_no);
        rows.push_back(r);
    }
    return rows;
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const sweep_row> rows)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + path.string());
    out << csv_columns << '\n';
    for (const auto& r : rows) out << format_row(r) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

// Sweep execution ----------------------------------------------------------

namespace {

std::uint64_t drift_seed(std::uint64_t seed, const cell_key& k)
{
    return derive_seed(seed, {stream::drift, static_cast<std::uint64_t>(k.task), static_cast<std::uint64_t>(k.method),
                              k.amp_levels, k.phase_levels, std::bit_cast<std::uint64_t>(k.extinction_ratio),
                              std::bit_cast<std::uint64_t>(k.noise_level)});
}

std::vector<cell_key> cells_of_seed(const experiment_config& config, std::uint64_t seed)
{
    std::vector<cell_key> cells;
    for (auto m : config.methods)
        for (auto [na, np] : config.resolutions())
            for (double e : config.extinction_ratio)
                for (double eta : config.noise_level) cells.push_back({config.task, m, na, np, e, eta, seed});
    return cells;
}

/// Computes the listed cells of one seed, calling `emit` per finished row.
void compute_seed(const experiment_config& config, std::uint64_t seed, const std::set<cell_key>& wanted,
                  std::size_t inner_jobs, const std::function<void(const sweep_row&)>& emit)
{
    if (wanted.empty()) return;
    const auto data = simulate_dataset(config, seed);
    const auto split = split_dataset(config, data);
    const auto targets = expand_to_samples(split.train_bits, config.samples_per_bit);
    const quartic_moments moments(split.train_states, targets);
    const auto fit = fit_full_precision(moments, split, config, seed);
    const double floor = 1.0 / static_cast<double>(config.n_test_bits);

    train_config retrain_cfg = config.train;
    retrain_cfg.l2_lambda = fit.l2_lambda;
    explorative_config ex_cfg = config.explorative;
    ex_cfg.seed = derive_seed(seed, {stream::partitions});
    ex_cfg.jobs = inner_jobs;

    for (auto m : config.methods) {
        for (auto [na, np] : config.resolutions()) {
            for (double e : config.extinction_ratio) {
                std::vector<cell_key> todo;
                for (double eta : config.noise_level) {
                    cell_key k{config.task, m, na, np, e, eta, seed};
                    if (wanted.count(k)) todo.push_back(k);
                }
                if (todo.empty()) continue;
                const quantization_spec grid{na, np, e, 0.0};
                readout_weights w;
                switch (m) {
                case readout_method::full: w = fit.weights; break;
                case readout_method::naive: w = direct_quantize(fit.weights, grid); break;
                case readout_method::explorative:
                    w = explorative_retrain(moments, split.train(), split.validation(), fit.weights, grid, retrain_cfg,
                                            ex_cfg);
                    break;
                }
                const double threshold = training_threshold(split, w);
                for (const auto& k : todo) {
                    const quantization_spec spec{na, np, e, k.noise_level};
                    const auto mc = monte_carlo_ber(split.test_states, w, spec, split.test_bits, config.mc_draws,
                                                    drift_seed(seed, k), threshold);
                    emit({k.task, k.method, na, np, e, k.noise_level, seed, mc.ber_mean, mc.ber_std, floor, mc.mse_mean});
                }
            }
        }
    }
}

}  // namespace

std::vector<sweep_row> run_cells(const experiment_config& config, std::uint64_t seed, std::span<const cell_key> cells)
{
    config.validate();
    const auto grid = cells_of_seed(config, seed);
    const std::set<cell_key> known(grid.begin(), grid.end());
    for (const auto& k : cells)
        if (!known.count(k)) throw std::invalid_argument("run_cells: cell outside the configured grid");
    std::vector<sweep_row> rows;
    compute_seed(config, seed, {cells.begin(), cells.end()}, std::max<std::size_t>(1, config.explorative.jobs),
                 [&](const sweep_row& r) { rows.push_back(r); });
    sort_rows(rows);
    return rows;
}

std::vector<sweep_row> run_seed(const experiment_config& config, std::uint64_t seed)
{
    config.validate();
    const auto cells = cells_of_seed(config, seed);
    std::vector<sweep_row> rows;
    compute_seed(config, seed, {cells.begin(), cells.end()}, std::max<std::size_t>(1, config.explorative.jobs),
                 [&](const sweep_row& r) { rows.push_back(r); });
    sort_rows(rows);
    return rows;
}

std::vector<sweep_row> run_sweep(const experiment_config& config, const std::filesystem::path& csv_path,
                                 const sweep_options& options)
{
    config.validate();
    if (options.jobs < 1) throw config_error("jobs must be >= 1");

    std::vector<sweep_row> existing;
    std::error_code ec;
    const bool have_file = std::filesystem::exists(csv_path, ec) && std::filesystem::file_size(csv_path, ec) > 0;
    if (have_file) existing = read_sweep_csv(csv_path);

    // Rewrite what was readable so that a truncated tail is dropped, and
    // check the path is writable before any compute.
    {
        std::vector<sweep_row> keep = existing;
        write_sweep_csv(csv_path, keep);
    }

    std::set<cell_key> done;
    for (const auto& r : existing) done.insert(key_of(r));

    std::vector<std::pair<std::uint64_t, std::set<cell_key>>> work;
    for (auto seed : config.seeds) {
        std::set<cell_key> wanted;
        for (const auto& k : cells_of_seed(config, seed))
            if (!done.count(k)) wanted.insert(k);
        if (!wanted.empty()) work.emplace_back(seed, std::move(wanted));
    }

    std::vector<sweep_row> rows = existing;
    std::mutex writer_mutex;
    std::ofstream out(csv_path, std::ios::binary | std::ios::app);
    if (!out) throw io_error("cannot append to " + csv_path.string());

    auto emit = [&](const sweep_row& r) {
        std::lock_guard lock(writer_mutex);
        if (done.count(key_of(r))) return;  // duplicate seeds in the config
        done.insert(key_of(r));
        out << format_row(r) << '\n';
        out.flush();
        if (!out) throw io_error("write failed: " + csv_path.string());
        rows.push_back(r);
        if (options.on_row) options.on_row(r);
    };

    const std::size_t workers = std::min(options.jobs, work.size());
    const std::size_t inner = workers == 0 ? 1 : std::max<std::size_t>(1, options.jobs / workers);
    if (workers <= 1) {
        for (const auto& [seed, wanted] : work) compute_seed(config, seed, wanted, inner, emit);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = next++; i < work.size(); i = next++)
                            compute_seed(config, work[i].first, work[i].second, inner, emit);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    out.close();

    sort_rows(rows);
    const auto tmp = std::filesystem::path(csv_path.string() + ".tmp");
    write_sweep_csv(tmp, rows);
    std::filesystem::rename(tmp, csv_path, ec);
    if (ec) throw io_error("cannot replace " + csv_path.string() + ": " + ec.message());
    return rows;
}

}  // namespace prc
