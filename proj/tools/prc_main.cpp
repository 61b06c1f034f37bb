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

// prc: photonic reservoir readout experiments from the command line.

#include "prc/config.hpp"
#include "prc/error.hpp"
#include "prc/experiments.hpp"
#include "prc/explorative.hpp"
#include "prc/io.hpp"
#include "prc/plot.hpp"
#include "prc/rng.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace prc;

namespace {

struct common_options {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    bool verbose = false;
};

void add_common(CLI::App& cmd, common_options& o)
{
    cmd.add_option("--config", o.config, "TOML experiment configuration");
    cmd.add_option("--out", o.out, "Output directory");
    cmd.add_option("--seed", o.seed, "Seed (replaces the configured seed list)");
    cmd.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd.add_flag("--verbose", o.verbose, "Progress on stderr plus training/search logs");
}

experiment_config load(const common_options& o)
{
    experiment_config c = o.config.empty() ? experiment_config{} : load_config(o.config);
    if (o.seed) c.seeds = {*o.seed};
    c.explorative.jobs = o.jobs;
    c.validate();
    return c;
}

fs::path out_dir(const common_options& o)
{
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec) throw io_error("cannot create " + o.out + ": " + ec.message());
    return o.out;
}

void note(const common_options& o, const std::string& msg)
{
    if (o.verbose) std::cerr << msg << '\n';
}

/// Spec taken from the first entry of each sweep axis unless overridden.
struct spec_options {
    std::optional<std::size_t> amp_levels, phase_levels;
    std::optional<double> extinction_ratio;

    void add(CLI::App& cmd)
    {
        cmd.add_option("--amp-levels", amp_levels, "Amplitude levels N_a");
        cmd.add_option("--phase-levels", phase_levels, "Phase levels N_phi (default: N_a)");
        cmd.add_option("--extinction-ratio", extinction_ratio, "Extinction ratio E");
    }

    quantization_spec resolve(const experiment_config& c) const
    {
        quantization_spec s;
        s.amp_levels = amp_levels.value_or(c.amp_levels.front());
        s.phase_levels = phase_levels.value_or(c.phase_levels.empty() ? s.amp_levels : c.phase_levels.front());
        s.extinction_ratio = extinction_ratio.value_or(c.extinction_ratio.front());
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
        return s;
    }
};

struct prepared {
    split_data split;
    quartic_moments moments;
};

prepared prepare(const experiment_config& c, const std::string& dataset_path)
{
    const auto data = load_dataset(dataset_path);
    auto split = split_dataset(c, data);
    const auto targets = expand_to_samples(split.train_bits, c.samples_per_bit);
    quartic_moments moments(split.train_states, targets);
    return {std::move(split), std::move(moments)};
}

int cmd_simulate(const common_options& o)
{
    const auto c = load(o);
    const auto dir = out_dir(o);
    const auto seed = c.seeds.front();
    swirl_params params = c.reservoir;
    params.seed = derive_seed(seed, {stream::topology});
    save_topology(dir / "topology.toml", build_swirl(params));
    const auto data = simulate_dataset(c, seed);
    save_dataset(dir / "dataset.bin", data);
    note(o, "simulated " + std::to_string(data.input_bits.size()) + " bits on " + std::to_string(data.states.n_nodes())
                + " nodes");
    return 0;
}

int cmd_train(const common_options& o, const std::string& dataset_path)
{
    const auto c = load(o);
    const auto dir = out_dir(o);
    const auto p = prepare(c, dataset_path);
    std::vector<std::vector<std::string>> curve;
    fit_observer obs;
    if (o.verbose)
        obs = [&](double l2, std::size_t r, std::size_t epoch, double loss) {
            curve.push_back({format_double(l2), std::to_string(r), std::to_string(epoch), format_double(loss)});
        };
    const auto fit = fit_full_precision(p.moments, p.split, c, c.seeds.front(), obs);
    save_weights(dir / "weights.csv", fit.weights);
    if (o.verbose) {
        write_csv(dir / "training_curve.csv", "l2_lambda,restart,epoch,loss", curve);
        note(o, "l2_lambda " + format_double(fit.l2_lambda) + ", validation BER " + format_double(fit.validation.ber));
    }
    return 0;
}

int cmd_quantize(const common_options& o, const spec_options& so, const std::string& weights_path)
{
    const auto c = load(o);
    const auto dir = out_dir(o);
    const auto spec = so.resolve(c);
    save_weights(dir / "weights_quantized.csv", direct_quantize(load_weights(weights_path), spec));
    return 0;
}

int cmd_retrain(const common_options& o, const spec_options& so, const std::string& dataset_path,
                const std::string& weights_path)
{
    const auto c = load(o);
    const auto dir = out_dir(o);
    const auto spec = so.resolve(c);
    const auto p = prepare(c, dataset_path);
    const auto seed = c.seeds.front();

    train_config retrain_cfg = c.train;
    readout_weights start;
    if (weights_path.empty()) {
        const auto fit = fit_full_precision(p.moments, p.split, c, seed);
        start = fit.weights;
        retrain_cfg.l2_lambda = fit.l2_lambda;
    } else {
        start = load_weights(weights_path);
    }
    explorative_config ex = c.explorative;
    ex.seed = derive_seed(seed, {stream::partitions});

    std::vector<std::vector<std::string>> log;
    explorative_observer obs;
    if (o.verbose)
        obs = [&](const explorative_event& e) {
            log.push_back({std::to_string(e.iteration), std::to_string(e.candidate), std::to_string(e.n_free),
                           format_double(e.val_ber), format_double(e.val_mse), e.selected ? "1" : "0"});
        };
    const auto w = explorative_retrain(p.moments, p.split.train(), p.split.validation(), start, spec, retrain_cfg, ex, obs);
    save_weights(dir / "weights_explorative.csv", w);
    if (o.verbose) write_csv(dir / "explorative_progress.csv", "iteration,candidate,n_free,val_ber,val_mse,selected", log);
    return 0;
}

int cmd_sweep(const common_options& o)
{
    const auto c = load(o);
    const auto dir = out_dir(o);
    sweep_options so;
    so.jobs = o.jobs;
    if (o.verbose)
        so.on_row = [](const sweep_row& r) { std::cerr << format_row(r) << '\n'; };
    const auto rows = run_sweep(c, dir / "sweep.csv", so);
    note(o, std::to_string(rows.size()) + " rows in " + (dir / "sweep.csv").string());
    return 0;
}

int cmd_plot(const common_options& o, const std::string& rows_path)
{
    const auto rows = read_sweep_csv(rows_path);
    if (rows.empty()) throw config_error("no rows in " + rows_path);
    for (const auto& p : emit_plots(rows, out_dir(o))) note(o, p.string());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Photonic reservoir computing with a quantized optical readout"};
    app.require_subcommand(1);

    common_options o;
    spec_options so;
    std::string dataset_path, weights_path, rows_path;

    auto* simulate = app.add_subcommand("simulate", "Build the reservoir and simulate the input stream");
    add_common(*simulate, o);

    auto* train = app.add_subcommand("train", "Full-precision readout training");
    add_common(*train, o);
    train->add_option("--dataset", dataset_path, "Dataset file from simulate")->required();

    auto* quantize = app.add_subcommand("quantize", "Snap weights onto the quantization grid");
    add_common(*quantize, o);
    so.add(*quantize);
    quantize->add_option("--weights", weights_path, "Weights CSV")->required();

    auto* retrain = app.add_subcommand("retrain", "Explorative partition retraining");
    add_common(*retrain, o);
    so.add(*retrain);
    retrain->add_option("--dataset", dataset_path, "Dataset file from simulate")->required();
    retrain->add_option("--weights", weights_path, "Starting full-precision weights (default: train first)");

    auto* sweep = app.add_subcommand("sweep", "Full resumable parameter sweep");
    add_common(*sweep, o);

    auto* plot = app.add_subcommand("plot", "Render sweep rows as SVG panels");
    add_common(*plot, o);
    plot->add_option("--rows", rows_path, "Sweep CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*simulate) return cmd_simulate(o);
        if (*train) return cmd_train(o, dataset_path);
        if (*quantize) return cmd_quantize(o, so, weights_path);
        if (*retrain) return cmd_retrain(o, so, dataset_path, weights_path);
        if (*sweep) return cmd_sweep(o);
        if (*plot) return cmd_plot(o, rows_path);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const io_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
