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

#include "prc/config.hpp"

#include "prc/error.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace prc {

namespace {

class reader {
public:
    reader(const toml::table& table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

    /// Rejects any key that was never asked for.
    void finish() const
    {
        for (auto&& [key, node] : table_) {
            (void)node;
            if (!seen_.count(std::string(key.str())))
                throw config_error("unknown key '" + prefix_ + std::string(key.str()) + "'");
        }
    }

    template <typename T>
    void get(std::string_view key, T& out)
    {
        const toml::node* node = mark(key);
        if (node) out = convert<T>(*node, key);
    }

    template <typename T>
    void get_list(std::string_view key, std::vector<T>& out)
    {
        const toml::node* node = mark(key);
        if (!node) return;
        const auto* arr = node->as_array();
        if (!arr) throw config_error("'" + prefix_ + std::string(key) + "' must be an array");
        std::vector<T> values;
        for (const auto& item : *arr) values.push_back(convert<T>(item, key));
        out = std::move(values);
    }

    const toml::table* sub(std::string_view key)
    {
        const toml::node* node = mark(key);
        if (!node) return nullptr;
        const auto* t = node->as_table();
        if (!t) throw config_error("'" + prefix_ + std::string(key) + "' must be a table");
        return t;
    }

private:
    const toml::node* mark(std::string_view key)
    {
        seen_.insert(std::string(key));
        return table_.get(key);
    }

    template <typename T>
    T convert(const toml::node& node, std::string_view key) const
    {
        const std::string name = prefix_ + std::string(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (auto v = node.value_exact<bool>()) return *v;
            throw config_error("'" + name + "' must be a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (auto v = node.value_exact<std::string>()) return *v;
            throw config_error("'" + name + "' must be a string");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (auto v = node.value_exact<double>()) return *v;
            if (auto v = node.value_exact<std::int64_t>()) return static_cast<double>(*v);
            throw config_error("'" + name + "' must be a number");
        } else {
            const auto v = node.value_exact<std::int64_t>();
            if (!v) throw config_error("'" + name + "' must be an integer");
            if (*v < 0) throw config_error("'" + name + "' must be non-negative");
            return static_cast<T>(*v);
        }
    }

    const toml::table& table_;
    std::string prefix_;
    std::set<std::string> seen_;
};

bit_sequence parse_pattern(const std::string& s)
{
    std::vector<std::uint8_t> bits;
    for (char c : s) {
        if (c != '0' && c != '1') throw config_error("header_pattern must consist of 0 and 1");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (bits.empty()) throw config_error("header_pattern must not be empty");
    return bit_sequence(std::move(bits));
}

void read_train(reader& r, train_config& t)
{
    r.get("learning_rate", t.learning_rate);
    r.get("epochs", t.epochs);
    r.get("l2_lambda", t.l2_lambda);
    r.get("adam_beta1", t.adam_beta1);
    r.get("adam_beta2", t.adam_beta2);
    r.get("adam_epsilon", t.adam_epsilon);
    r.get("restarts", t.restarts);
}

void read_explorative(reader& r, explorative_config& e)
{
    r.get("initial_fixed_ratio", e.initial_fixed_ratio);
    r.get("n_partitions", e.n_partitions);
    r.get("n_iterations", e.n_iterations);
    r.get("ratio_growth", e.ratio_growth);
    r.get("retrain_epochs", e.retrain_epochs);
}

void read_reservoir(reader& r, swirl_params& p)
{
    r.get("rows", p.rows);
    r.get("cols", p.cols);
    r.get("delay_samples", p.delay_samples);
    r.get("waveguide_loss", p.waveguide_loss);
    r.get("input_tap", p.input_tap);
    r.get_list("input_mask", p.input_mask);
}

}  // namespace

experiment_config parse_config(std::string_view toml_text, std::string_view source_name)
{
    toml::table root;
    try {
        root = toml::parse(toml_text, source_name);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << source_name << ":" << e.source().begin.line << ": " << e.description();
        throw config_error(msg.str());
    }

    experiment_config c;
    {
        reader r(root, "");
        std::string task, pattern;
        r.get("task", task);
        if (!task.empty()) c.task = parse_task(task);
        r.get("header_pattern", pattern);
        if (root.contains("header_pattern")) c.header_pattern = parse_pattern(pattern);
        r.get("xor_delay", c.xor_delay);
        r.get("n_warmup_bits", c.n_warmup_bits);
        r.get("n_train_bits", c.n_train_bits);
        r.get("n_val_bits", c.n_val_bits);
        r.get("n_test_bits", c.n_test_bits);
        r.get("samples_per_bit", c.samples_per_bit);
        r.get("smoothing_alpha", c.smoothing_alpha);
        r.get("input_power", c.input_power);
        r.get_list("amp_levels", c.amp_levels);
        r.get_list("phase_levels", c.phase_levels);
        r.get_list("extinction_ratio", c.extinction_ratio);
        r.get_list("noise_level", c.noise_level);
        r.get("mc_draws", c.mc_draws);
        r.get_list("seeds", c.seeds);
        std::vector<std::string> methods;
        r.get_list("methods", methods);
        if (root.contains("methods")) {
            c.methods.clear();
            for (const auto& m : methods) c.methods.push_back(parse_method(m));
        }
        r.get_list("l2_grid", c.l2_grid);
        if (const auto* t = r.sub("train")) {
            reader sub(*t, "train.");
            read_train(sub, c.train);
            sub.finish();
        }
        if (const auto* t = r.sub("explorative")) {
            reader sub(*t, "explorative.");
            read_explorative(sub, c.explorative);
            sub.finish();
        }
        if (const auto* t = r.sub("reservoir")) {
            reader sub(*t, "reservoir.");
            read_reservoir(sub, c.reservoir);
            sub.finish();
        }
        r.finish();
    }
    c.validate();
    return c;
}

experiment_config load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string to_toml(const experiment_config& c)
{
    auto arr = [](const auto& values) {
        using value_type = typename std::decay_t<decltype(values)>::value_type;
        toml::array a;
        for (auto v : values) {
            if constexpr (std::is_floating_point_v<value_type>)
                a.push_back(static_cast<double>(v));
            else if constexpr (std::is_same_v<value_type, bool>)
                a.push_back(static_cast<bool>(v));
            else
                a.push_back(static_cast<std::int64_t>(v));
        }
        return a;
    };
    auto i64 = [](auto v) { return static_cast<std::int64_t>(v); };

    std::string pattern;
    for (auto b : c.header_pattern) pattern += static_cast<char>('0' + b);
    toml::array methods;
    for (auto m : c.methods) methods.push_back(std::string(to_string(m)));

    toml::table root{
        {"task", std::string(to_string(c.task))},
        {"header_pattern", pattern},
        {"xor_delay", i64(c.xor_delay)},
        {"n_warmup_bits", i64(c.n_warmup_bits)},
        {"n_train_bits", i64(c.n_train_bits)},
        {"n_val_bits", i64(c.n_val_bits)},
        {"n_test_bits", i64(c.n_test_bits)},
        {"samples_per_bit", i64(c.samples_per_bit)},
        {"smoothing_alpha", c.smoothing_alpha},
        {"input_power", c.input_power},
        {"amp_levels", arr(c.amp_levels)},
        {"phase_levels", arr(c.phase_levels)},
        {"extinction_ratio", arr(c.extinction_ratio)},
        {"noise_level", arr(c.noise_level)},
        {"mc_draws", i64(c.mc_draws)},
        {"seeds", arr(c.seeds)},
        {"methods", methods},
        {"l2_grid", arr(c.l2_grid)},
        {"train",
         toml::table{{"learning_rate", c.train.learning_rate},
                     {"epochs", i64(c.train.epochs)},
                     {"l2_lambda", c.train.l2_lambda},
                     {"adam_beta1", c.train.adam_beta1},
                     {"adam_beta2", c.train.adam_beta2},
                     {"adam_epsilon", c.train.adam_epsilon},
                     {"restarts", i64(c.train.restarts)}}},
        {"explorative",
         toml::table{{"initial_fixed_ratio", c.explorative.initial_fixed_ratio},
                     {"n_partitions", i64(c.explorative.n_partitions)},
                     {"n_iterations", i64(c.explorative.n_iterations)},
                     {"ratio_growth", c.explorative.ratio_growth},
                     {"retrain_epochs", i64(c.explorative.retrain_epochs)}}},
        {"reservoir",
         toml::table{{"rows", i64(c.reservoir.rows)},
                     {"cols", i64(c.reservoir.cols)},
                     {"delay_samples", i64(c.reservoir.delay_samples)},
                     {"waveguide_loss", c.reservoir.waveguide_loss},
                     {"input_tap", c.reservoir.input_tap},
                     {"input_mask", arr(c.reservoir.input_mask)}}},
    };
    std::ostringstream out;
    out << root << '\n';
    return out.str();
}

}  // namespace prc
