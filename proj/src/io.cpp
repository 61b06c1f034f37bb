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

#include "prc/io.hpp"

#include "prc/error.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace prc {

static_assert(std::endian::native == std::endian::little, "binary dataset format assumes a little-endian host");

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + path.string());
    return out;
}

double parse_double(std::string_view s, const std::string& where)
{
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw io_error(where + ": bad number '" + std::string(s) + "'");
    return v;
}

constexpr char dataset_magic[8] = {'P', 'R', 'C', 'D', 'A', 'T', 'A', '1'};

template <typename T>
void put(std::ostream& out, const T& v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::istream& in, const std::filesystem::path& path)
{
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw io_error(path.string() + ": truncated dataset file");
    return v;
}

}  // namespace

void save_weights(const std::filesystem::path& path, const readout_weights& weights)
{
    auto out = open_out(path);
    out << "node_index,amplitude,phase\n";
    for (std::size_t k = 0; k < weights.size(); ++k)
        out << k << ',' << format_double(weights.amplitudes[k]) << ',' << format_double(weights.phases[k]) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

readout_weights load_weights(const std::filesystem::path& path)
{
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line != "node_index,amplitude,phase")
        throw io_error(path.string() + ": expected header node_index,amplitude,phase");
    std::vector<std::pair<std::size_t, std::pair<double, double>>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw io_error(where + ": expected 3 fields");
        const std::string_view sv(line);
        std::size_t idx = 0;
        const auto res = std::from_chars(line.data(), line.data() + c1, idx);
        if (res.ec != std::errc{} || res.ptr != line.data() + c1) throw io_error(where + ": bad node index");
        rows.push_back({idx, {parse_double(sv.substr(c1 + 1, c2 - c1 - 1), where), parse_double(sv.substr(c2 + 1), where)}});
    }
    const std::size_t n = rows.size();
    std::vector<double> a(n), p(n);
    std::vector<bool> seen(n, false);
    for (const auto& [idx, ap] : rows) {
        if (idx >= n || seen[idx]) throw io_error(path.string() + ": node indices must be 0..N-1, each once");
        seen[idx] = true;
        a[idx] = ap.first;
        p[idx] = ap.second;
    }
    try {
        return readout_weights(std::move(a), std::move(p));
    } catch (const std::invalid_argument& e) {
        throw io_error(path.string() + ": " + e.what());
    }
}

void save_dataset(const std::filesystem::path& path, const dataset& data)
{
    const auto& v = data.states.values();
    if (data.states.n_bits() != data.input_bits.size()) throw std::invalid_argument("save_dataset: states and bits disagree");
    auto out = open_out(path);
    out.write(dataset_magic, sizeof dataset_magic);
    put<std::uint64_t>(out, data.states.samples_per_bit());
    put<std::uint64_t>(out, data.input_bits.size());
    put<std::uint64_t>(out, data.states.n_nodes());
    out.write(reinterpret_cast<const char*>(data.input_bits.bits().data()), static_cast<std::streamsize>(data.input_bits.size()));
    for (Eigen::Index t = 0; t < v.rows(); ++t)
        for (Eigen::Index k = 0; k < v.cols(); ++k) {
            put(out, v(t, k).real());
            put(out, v(t, k).imag());
        }
    if (!out) throw io_error("write failed: " + path.string());
}

dataset load_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, dataset_magic, sizeof magic) != 0)
        throw io_error(path.string() + ": not a dataset file");
    const auto spb = take<std::uint64_t>(in, path);
    const auto n_bits = take<std::uint64_t>(in, path);
    const auto n_nodes = take<std::uint64_t>(in, path);
    if (spb == 0 || n_bits == 0 || n_nodes == 0 || n_bits > (1ULL << 32) || n_nodes > (1ULL << 16) || spb > (1ULL << 16))
        throw io_error(path.string() + ": implausible dataset dimensions");
    std::vector<std::uint8_t> bits(n_bits);
    if (!in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(n_bits)))
        throw io_error(path.string() + ": truncated dataset file");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n_bits * spb), static_cast<Eigen::Index>(n_nodes));
    for (Eigen::Index t = 0; t < m.rows(); ++t)
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            const double re = take<double>(in, path);
            const double im = take<double>(in, path);
            m(t, k) = cplx{re, im};
        }
    try {
        return {bit_sequence(std::move(bits)), state_matrix(std::move(m), spb)};
    } catch (const std::invalid_argument& e) {
        throw io_error(path.string() + ": " + e.what());
    }
}

std::string topology_to_toml(const swirl_topology& topo)
{
    toml::array edges;
    for (const auto& e : topo.edges) {
        edges.push_back(toml::table{{"src", static_cast<std::int64_t>(e.src)},
                                    {"src_port", static_cast<std::int64_t>(e.src_port)},
                                    {"dst", static_cast<std::int64_t>(e.dst)},
                                    {"dst_port", static_cast<std::int64_t>(e.dst_port)},
                                    {"delay_samples", static_cast<std::int64_t>(e.delay_samples)},
                                    {"transmission", e.transmission},
                                    {"phase", e.phase}});
    }
    toml::array nodes;
    for (std::size_t k = 0; k < topo.n_nodes(); ++k) {
        const auto& s = topo.input_share[k];
        const auto& th = topo.port_through[k];
        nodes.push_back(toml::table{{"input_share_re", toml::array{s[0].real(), s[1].real()}},
                                    {"input_share_im", toml::array{s[0].imag(), s[1].imag()}},
                                    {"port_through", toml::array{th[0], th[1]}}});
    }
    toml::table root{{"rows", static_cast<std::int64_t>(topo.rows)},
                     {"cols", static_cast<std::int64_t>(topo.cols)},
                     {"edges", edges},
                     {"nodes", nodes}};
    std::ostringstream out;
    out << root << '\n';
    return out.str();
}

swirl_topology topology_from_toml(std::string_view text)
{
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        throw io_error(std::string("topology: ") + std::string(e.description()));
    }
    auto need_int = [](const toml::node_view<const toml::node>& n, const char* what) {
        const auto v = n.value_exact<std::int64_t>();
        if (!v || *v < 0) throw io_error(std::string("topology: missing or invalid ") + what);
        return static_cast<std::size_t>(*v);
    };
    auto need_double = [](const toml::node_view<const toml::node>& n, const char* what) {
        const auto v = n.value<double>();
        if (!v) throw io_error(std::string("topology: missing or invalid ") + what);
        return *v;
    };
    const toml::table& croot = root;
    swirl_topology topo;
    topo.rows = need_int(croot["rows"], "rows");
    topo.cols = need_int(croot["cols"], "cols");
    const auto* edges = croot["edges"].as_array();
    const auto* nodes = croot["nodes"].as_array();
    if (!edges || !nodes) throw io_error("topology: missing edges or nodes");
    if (nodes->size() != topo.n_nodes()) throw io_error("topology: node count does not match rows * cols");
    for (const auto& item : *edges) {
        const auto* t = item.as_table();
        if (!t) throw io_error("topology: edge entries must be tables");
        const toml::node_view<const toml::node> e{t};
        swirl_edge edge;
        edge.src = need_int(e["src"], "edge src");
        edge.src_port = need_int(e["src_port"], "edge src_port");
        edge.dst = need_int(e["dst"], "edge dst");
        edge.dst_port = need_int(e["dst_port"], "edge dst_port");
        edge.delay_samples = need_int(e["delay_samples"], "edge delay_samples");
        edge.transmission = need_double(e["transmission"], "edge transmission");
        edge.phase = need_double(e["phase"], "edge phase");
        if (edge.src >= topo.n_nodes() || edge.dst >= topo.n_nodes() || edge.src_port > 1 || edge.dst_port > 1
            || edge.delay_samples == 0 || !(edge.transmission >= 0.0 && edge.transmission <= 1.0))
            throw io_error("topology: edge out of range");
        topo.edges.push_back(edge);
    }
    for (const auto& item : *nodes) {
        const auto* t = item.as_table();
        if (!t) throw io_error("topology: node entries must be tables");
        const toml::node_view<const toml::node> n{t};
        std::array<cplx, 2> share{};
        std::array<double, 2> through{};
        for (std::size_t p = 0; p < 2; ++p) {
            share[p] = cplx{need_double(n["input_share_re"][p], "input_share_re"),
                            need_double(n["input_share_im"][p], "input_share_im")};
            through[p] = need_double(n["port_through"][p], "port_through");
        }
        topo.input_share.push_back(share);
        topo.port_through.push_back(through);
    }
    return topo;
}

void save_topology(const std::filesystem::path& path, const swirl_topology& topology)
{
    auto out = open_out(path);
    out << topology_to_toml(topology);
    if (!out) throw io_error("write failed: " + path.string());
}

swirl_topology load_topology(const std::filesystem::path& path)
{
    return topology_from_toml(read_text(path));
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows)
{
    auto out = open_out(path);
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace prc
