// Copyright 2026 The bfbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "bfbench/errors.hpp"
#include "bfbench/exact.hpp"
#include "bfbench/format.hpp"
#include "bfbench/generators.hpp"
#include "bfbench/metrics.hpp"
#include "bfbench/model.hpp"
#include "bfbench/reduce.hpp"
#include "bfbench/sample_set.hpp"

namespace bfbench::io {

inline constexpr int kInstanceFormatVersion = 1;

/// Contents of an instance file.
///
///     [meta]
///     format_version = 1
///     class = clique_ising
///     num_variables = 3
///     seed = 7
///     [linear]
///     0 0.5
///     [quadratic]
///     0 1 -1.25
///     [cubic]
///     0 1 2 2
///     [aux]
///     3 0 1
///
/// Indices are 0-based, coefficients carry 17 significant digits and `#`
/// starts a comment line. Keys written canonically (sorted, i < j < k).
struct InstanceFile {
    int format_version = kInstanceFormatVersion;
    std::string class_tag = "custom";
    PolynomialModel model;
    std::map<std::string, std::string> meta;  // everything else in [meta]
    std::vector<AuxDef> aux_defs;

    friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line, line_no);
        pos = end + 1;
    }
}

}  // namespace detail

inline std::string format_instance(const InstanceFile& inst) {
    std::ostringstream out;
    out << "# bfbench instance\n[meta]\n";
    out << "format_version = " << inst.format_version << '\n';
    out << "class = " << inst.class_tag << '\n';
    out << "num_variables = " << inst.model.num_variables() << '\n';
    for (const auto& [k, v] : inst.meta) out << k << " = " << v << '\n';
    out << "[linear]\n";
    for (const auto& t : inst.model.linear()) out << t.u << ' ' << format_g17(t.bias) << '\n';
    out << "[quadratic]\n";
    for (const auto& t : inst.model.quadratic()) {
        out << t.u << ' ' << t.v << ' ' << format_g17(t.bias) << '\n';
    }
    out << "[cubic]\n";
    for (const auto& t : inst.model.cubic()) {
        out << t.u << ' ' << t.v << ' ' << t.w << ' ' << format_g17(t.bias) << '\n';
    }
    if (!inst.aux_defs.empty()) {
        out << "[aux]\n";
        for (const auto& d : inst.aux_defs) out << d.aux << ' ' << d.u << ' ' << d.v << '\n';
    }
    return out.str();
}

inline InstanceFile parse_instance(std::string_view text) {
    enum class Section { none, meta, linear, quadratic, cubic, aux };
    Section section = Section::none;
    InstanceFile inst;
    std::optional<index_type> n;
    bool have_version = false;

    std::map<index_type, std::pair<double, std::size_t>> linear;
    std::map<std::pair<index_type, index_type>, std::pair<double, std::size_t>> quadratic;
    std::map<std::tuple<index_type, index_type, index_type>, std::pair<double, std::size_t>> cubic;
    std::set<index_type> seen_aux;

    detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') return;
        if (line.front() == '[') {
            if (line == "[meta]") section = Section::meta;
            else if (line == "[linear]") section = Section::linear;
            else if (line == "[quadratic]") section = Section::quadratic;
            else if (line == "[cubic]") section = Section::cubic;
            else if (line == "[aux]") section = Section::aux;
            else throw ParseError("unknown section " + std::string(line), line_no);
            if (section != Section::meta && !n) {
                throw ParseError("num_variables must be set in [meta] before term sections",
                                 line_no);
            }
            return;
        }
        if (section == Section::none) throw ParseError("content before the first section", line_no);
        if (section == Section::meta) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
            const auto key = std::string(detail::trim(line.substr(0, eq)));
            const auto value = std::string(detail::trim(line.substr(eq + 1)));
            if (key.empty()) throw ParseError("empty meta key", line_no);
            if (key == "format_version") {
                inst.format_version = parse_int<int>(value, line_no);
                if (inst.format_version != kInstanceFormatVersion) {
                    throw ParseError("unsupported format_version " + value, line_no);
                }
                have_version = true;
            } else if (key == "class") {
                inst.class_tag = value;
            } else if (key == "num_variables") {
                n = parse_int<index_type>(value, line_no);
                if (*n < 0) throw ParseError("num_variables must be >= 0", line_no);
            } else if (!inst.meta.emplace(key, value).second) {
                throw ParseError("duplicate meta key '" + key + "'", line_no);
            }
            return;
        }

        const auto tok = detail::split_ws(line);
        auto idx = [&](std::string_view t) {
            const auto i = parse_int<index_type>(t, line_no);
            if (i < 0 || i >= *n) {
                throw ParseError("index " + std::to_string(i) + " out of range [0, " +
                                 std::to_string(*n) + ")", line_no);
            }
            return i;
        };
        auto expect = [&](std::size_t count) {
            if (tok.size() != count) {
                throw ParseError("expected " + std::to_string(count) + " fields, got " +
                                 std::to_string(tok.size()), line_no);
            }
        };
        switch (section) {
            case Section::linear: {
                expect(2);
                const auto i = idx(tok[0]);
                if (!linear.emplace(i, std::pair(parse_double(tok[1], line_no), line_no)).second) {
                    throw ParseError("duplicate linear key " + std::to_string(i), line_no);
                }
                break;
            }
            case Section::quadratic: {
                expect(3);
                auto i = idx(tok[0]);
                auto j = idx(tok[1]);
                if (i == j) throw ParseError("quadratic term repeats a variable", line_no);
                if (i > j) std::swap(i, j);
                if (!quadratic.emplace(std::pair(i, j), std::pair(parse_double(tok[2], line_no), line_no))
                             .second) {
                    throw ParseError("duplicate quadratic key (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")", line_no);
                }
                break;
            }
            case Section::cubic: {
                expect(4);
                std::array<index_type, 3> k{idx(tok[0]), idx(tok[1]), idx(tok[2])};
                std::sort(k.begin(), k.end());
                if (k[0] == k[1] || k[1] == k[2]) {
                    throw ParseError("cubic term repeats a variable", line_no);
                }
                if (!cubic.emplace(std::tuple(k[0], k[1], k[2]),
                                   std::pair(parse_double(tok[3], line_no), line_no))
                             .second) {
                    throw ParseError("duplicate cubic key (" + std::to_string(k[0]) + ", " +
                                     std::to_string(k[1]) + ", " + std::to_string(k[2]) + ")",
                                     line_no);
                }
                break;
            }
            case Section::aux: {
                expect(3);
                AuxDef d{idx(tok[0]), idx(tok[1]), idx(tok[2])};
                if (d.u > d.v) std::swap(d.u, d.v);
                if (d.u == d.v) throw ParseError("aux definition repeats a variable", line_no);
                if (!seen_aux.insert(d.aux).second) {
                    throw ParseError("duplicate aux index " + std::to_string(d.aux), line_no);
                }
                inst.aux_defs.push_back(d);
                break;
            }
            default:
                break;
        }
    });

    if (!have_version) throw ParseError("missing format_version in [meta]");
    if (!n) throw ParseError("missing num_variables in [meta]");

    std::vector<LinearTerm> lin;
    std::vector<QuadraticTerm> quad;
    std::vector<CubicTerm> cub;
    for (const auto& [k, v] : linear) lin.push_back({k, v.first});
    for (const auto& [k, v] : quadratic) quad.push_back({k.first, k.second, v.first});
    for (const auto& [k, v] : cubic) {
        cub.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), v.first});
    }
    inst.model = PolynomialModel(*n, std::move(lin), std::move(quad), std::move(cub));
    return inst;
}

inline void write_instance(const std::filesystem::path& path, const InstanceFile& inst) {
    detail::write_file(path, format_instance(inst));
}

inline InstanceFile read_instance(const std::filesystem::path& path) {
    try {
        return parse_instance(detail::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

/// Stores a reduction as an instance: the reduced model, [aux] products and
/// the gadget parameters in [meta].
inline InstanceFile reduction_to_instance(const ReductionMap& rmap, std::string class_tag,
                                          std::map<std::string, std::string> meta = {}) {
    InstanceFile inst;
    inst.class_tag = std::move(class_tag);
    inst.model = rmap.reduced_model;
    inst.aux_defs = rmap.aux_defs;
    inst.meta = std::move(meta);
    inst.meta["reduction.original_n"] = std::to_string(rmap.original_n);
    inst.meta["reduction.penalty"] = format_g17(rmap.penalty);
    inst.meta["reduction.gadget"] = to_string(rmap.gadget);
    inst.meta["reduction.offset"] = format_g17(rmap.offset);
    return inst;
}

inline ReductionMap reduction_from_instance(const InstanceFile& inst) {
    auto get = [&](const std::string& key) -> const std::string& {
        const auto it = inst.meta.find(key);
        if (it == inst.meta.end()) throw ValidationError("instance has no '" + key + "' entry");
        return it->second;
    };
    ReductionMap rmap;
    rmap.reduced_model = inst.model;
    rmap.aux_defs = inst.aux_defs;
    rmap.original_n = parse_int<index_type>(get("reduction.original_n"));
    rmap.penalty = parse_double(get("reduction.penalty"));
    rmap.gadget = gadget_from_string(get("reduction.gadget"));
    rmap.offset = parse_double(get("reduction.offset"));
    return rmap;
}

// ---------------------------------------------------------------------------
// sample files

/// CSV with a `# key=value` metadata block:
///
///     # solver=bfnull
///     assignment,energy,block_id
///     +-+,-1.5,0
inline std::string format_samples(const SampleSet& samples) {
    std::ostringstream out;
    for (const auto& [k, v] : samples.metadata) out << "# " << k << '=' << v << '\n';
    out << "assignment,energy,block_id\n";
    for (const auto& r : samples.records) {
        out << r.assignment.to_string() << ',' << format_g17(r.energy) << ',' << r.block_id
            << '\n';
    }
    return out.str();
}

inline void write_samples(const std::filesystem::path& path, const SampleSet& samples) {
    detail::write_file(path, format_samples(samples));
}

struct SampleLoad {
    SampleSet samples;
    std::vector<std::size_t> corrected_lines;  // rows whose stored energy was off
};

/// Relative tolerance for stored energies of ingested samples.
inline constexpr double kIngestEnergyTolerance = 1e-6;

/// Parses a sample file against `model`. Energies are always recomputed;
/// rows whose stored value differs by more than 1e-6 (relative, floored at
/// 1) are listed in `corrected_lines`.
inline SampleLoad parse_samples(std::string_view text, const PolynomialModel& model) {
    SampleLoad load;
    bool header_seen = false;
    detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
        const auto line = detail::trim(raw);
        if (line.empty()) return;
        if (line.front() == '#') {
            if (header_seen) return;
            const auto body = detail::trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) return;  // free comment
            load.samples.metadata[std::string(detail::trim(body.substr(0, eq)))] =
                    std::string(detail::trim(body.substr(eq + 1)));
            return;
        }
        if (!header_seen) {
            if (line != "assignment,energy,block_id") {
                throw ParseError("expected header 'assignment,energy,block_id'", line_no);
            }
            header_seen = true;
            return;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
            throw ParseError("expected three comma-separated fields", line_no);
        }
        SampleRecord rec;
        try {
            rec.assignment = SpinAssignment::from_string(detail::trim(line.substr(0, c1)));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (rec.assignment.size() != static_cast<std::size_t>(model.num_variables())) {
            throw ParseError("assignment has " + std::to_string(rec.assignment.size()) +
                             " spins, instance has " + std::to_string(model.num_variables()),
                             line_no);
        }
        const double stored = parse_double(detail::trim(line.substr(c1 + 1, c2 - c1 - 1)), line_no);
        rec.block_id = parse_int<int>(detail::trim(line.substr(c2 + 1)), line_no);
        rec.energy = model.energy(rec.assignment);
        if (!(std::abs(stored - rec.energy) <=
              kIngestEnergyTolerance * std::max(1.0, std::abs(rec.energy)))) {
            load.corrected_lines.push_back(line_no);
        }
        load.samples.records.push_back(std::move(rec));
    });
    if (!header_seen) throw ParseError("missing 'assignment,energy,block_id' header");
    return load;
}

inline SampleLoad read_samples(const std::filesystem::path& path, const PolynomialModel& model) {
    try {
        return parse_samples(detail::read_file(path), model);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// ground states

struct GroundStateFile {
    GroundState ground_state;
    std::string method;
    std::optional<int> induced_width;
};

inline std::string format_ground_state(const GroundStateFile& g) {
    std::ostringstream out;
    out << "# bfbench ground state\n";
    out << "method = " << g.method << '\n';
    out << "num_variables = " << g.ground_state.assignment.size() << '\n';
    out << "energy = " << format_g17(g.ground_state.energy) << '\n';
    out << "degenerate = " << (g.ground_state.degenerate ? "true" : "false") << '\n';
    if (g.induced_width) out << "induced_width = " << *g.induced_width << '\n';
    out << "assignment = " << g.ground_state.assignment.to_string() << '\n';
    return out.str();
}

inline GroundStateFile parse_ground_state(std::string_view text) {
    std::map<std::string, std::pair<std::string, std::size_t>> kv;
    detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') return;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        kv[std::string(detail::trim(line.substr(0, eq)))] = {
                std::string(detail::trim(line.substr(eq + 1))), line_no};
    });
    auto get = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ParseError("ground-state file lacks '" + key + "'");
        return it->second;
    };
    GroundStateFile g;
    g.method = kv.contains("method") ? kv["method"].first : "unknown";
    const auto& e = get("energy");
    g.ground_state.energy = parse_double(e.first, e.second);
    g.ground_state.degenerate = kv.contains("degenerate") && kv["degenerate"].first == "true";
    if (kv.contains("assignment")) {
        g.ground_state.assignment = SpinAssignment::from_string(kv["assignment"].first);
    }
    if (kv.contains("induced_width")) {
        g.induced_width = parse_int<int>(kv["induced_width"].first, kv["induced_width"].second);
    }
    return g;
}

inline void write_ground_state(const std::filesystem::path& path, const GroundStateFile& g) {
    detail::write_file(path, format_ground_state(g));
}

inline GroundStateFile read_ground_state(const std::filesystem::path& path) {
    return parse_ground_state(detail::read_file(path));
}

// ---------------------------------------------------------------------------
// edge lists

/// `i j` per line, 0-based, `#` comments. The node count is the largest index
/// plus one unless `num_nodes` is given.
inline HeavyHexGraph parse_edge_list(std::string_view text,
                                     std::optional<index_type> num_nodes = std::nullopt) {
    std::vector<HeavyHexGraph::Edge> edges;
    index_type max_index = -1;
    detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
        auto line = raw.substr(0, raw.find('#'));
        line = detail::trim(line);
        if (line.empty()) return;
        const auto tok = detail::split_ws(line);
        if (tok.size() != 2) throw ParseError("expected 'i j'", line_no);
        const auto u = parse_int<index_type>(tok[0], line_no);
        const auto v = parse_int<index_type>(tok[1], line_no);
        if (u < 0 || v < 0) throw ParseError("negative node index", line_no);
        max_index = std::max({max_index, u, v});
        edges.emplace_back(u, v);
    });
    return HeavyHexGraph::from_edges(num_nodes.value_or(max_index + 1), std::move(edges));
}

inline HeavyHexGraph read_edge_list(const std::filesystem::path& path,
                                    std::optional<index_type> num_nodes = std::nullopt) {
    return parse_edge_list(detail::read_file(path), num_nodes);
}

inline std::string format_edge_list(const HeavyHexGraph& g) {
    std::ostringstream out;
    out << "# " << g.num_nodes << " nodes, " << g.edges.size() << " edges\n";
    for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// quality reports

/// A report CSV: `# key=value` summary rows, then one row per bin.
struct ReportTable {
    std::map<std::string, std::string> header;
    std::vector<HistogramBin> bins;
};

inline ReportTable make_report_table(const QualityReport& report,
                                     std::map<std::string, std::string> header = {}) {
    ReportTable t;
    t.header = std::move(header);
    t.header["reads"] = std::to_string(report.relative_errors.size());
    t.header["e_gs"] = format_g17(report.e_gs);
    t.header["p_gs"] = format_g17(report.p_gs);
    t.header["mean_re"] = format_g17(report.mean_re);
    t.header["min_re"] = format_g17(report.min_re);
    t.header["max_re"] = format_g17(report.max_re);
    t.bins = report.histogram;
    return t;
}

inline std::string format_report(const ReportTable& table) {
    std::ostringstream out;
    for (const auto& [k, v] : table.header) out << "# " << k << '=' << v << '\n';
    out << "bin_low,bin_high,count\n";
    for (const auto& b : table.bins) {
        out << format_g17(b.low) << ',' << format_g17(b.high) << ',' << b.count << '\n';
    }
    return out.str();
}

inline ReportTable parse_report(std::string_view text) {
    ReportTable table;
    bool header_seen = false;
    detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
        const auto line = detail::trim(raw);
        if (line.empty()) return;
        if (line.front() == '#') {
            const auto body = detail::trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) return;
            table.header[std::string(detail::trim(body.substr(0, eq)))] =
                    std::string(detail::trim(body.substr(eq + 1)));
            return;
        }
        if (!header_seen) {
            if (line != "bin_low,bin_high,count") {
                throw ParseError("expected header 'bin_low,bin_high,count'", line_no);
            }
            header_seen = true;
            return;
        }
        std::vector<std::string_view> f;
        std::size_t pos = 0;
        while (true) {
            const auto c = line.find(',', pos);
            f.push_back(line.substr(pos, c == std::string_view::npos ? std::string_view::npos
                                                                      : c - pos));
            if (c == std::string_view::npos) break;
            pos = c + 1;
        }
        if (f.size() != 3) throw ParseError("expected three comma-separated fields", line_no);
        table.bins.push_back({parse_double(f[0], line_no), parse_double(f[1], line_no),
                              parse_int<std::size_t>(f[2], line_no)});
    });
    if (!header_seen) throw ParseError("missing 'bin_low,bin_high,count' header");
    return table;
}

inline ReportTable read_report(const std::filesystem::path& path) {
    try {
        return parse_report(detail::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace bfbench::io
