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

#include "cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bfbench/bfbench.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace bfbench::cli {

std::string sha256_file(const std::string& path) {
    const auto data = io::detail::read_file(path);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr const char* kWorkersEnv = "BFBENCH_WORKERS";

int default_workers() {
    if (const char* env = std::getenv(kWorkersEnv)) {
        try {
            return std::max(1, std::stoi(env));
        } catch (...) {
            throw UsageError(std::string(kWorkersEnv) + " must be a positive integer");
        }
    }
    return 1;
}

std::string absolute(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

/// Collects what a run read and wrote; written next to the outputs.
class Manifest {
 public:
    Manifest(std::string subcommand, fs::path root)
            : subcommand_(std::move(subcommand)), root_(std::move(root)) {}

    void replay_args(std::vector<std::string> args) { args_ = std::move(args); }
    json& parameters() { return parameters_; }
    void seed(std::uint64_t s) { seed_ = s; }
    void input(const std::string& path) { inputs_.push_back(absolute(path)); }
    void output(const fs::path& path) { outputs_.push_back(path); }
    void wall_clock(double seconds) { wall_ = seconds; }

    void write(const fs::path& file) const {
        json j;
        j["tool"] = "bfbench";
        j["version"] = kVersion;
        j["subcommand"] = subcommand_;
        j["argv"] = args_;
        j["parameters"] = parameters_;
        if (seed_) j["seed"] = *seed_;
        j["inputs"] = json::array();
        for (const auto& p : inputs_) {
            j["inputs"].push_back({{"path", p}, {"sha256", sha256_file(p)}});
        }
        j["outputs"] = json::array();
        for (const auto& p : outputs_) {
            j["outputs"].push_back({{"path", fs::relative(p, root_).generic_string()},
                                    {"sha256", sha256_file(p.string())}});
        }
        j["wall_clock_seconds"] = wall_;
        io::detail::write_file(file, j.dump(2) + "\n");
    }

 private:
    std::string subcommand_;
    fs::path root_;
    std::vector<std::string> args_;
    json parameters_ = json::object();
    std::optional<std::uint64_t> seed_;
    std::vector<std::string> inputs_;
    std::vector<fs::path> outputs_;
    double wall_ = 0;
};

void prepare_out_dir(const fs::path& dir, bool force) {
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) {
            throw ValidationError("output path '" + dir.string() + "' is not a directory");
        }
        if (!fs::is_empty(dir) && !force) {
            throw ValidationError("output directory '" + dir.string() +
                                  "' is not empty (use --force to overwrite)");
        }
    }
    fs::create_directories(dir);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string zero_pad(std::size_t value, std::size_t width) {
    auto s = std::to_string(value);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return s;
}

// ---------------------------------------------------------------------------

struct GenerateOptions {
    std::string kind;
    int n = 0;
    bool default_layout = false;
    int cells_x = 0, cells_y = 0, row_tail = 0;
    std::string edges;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    std::string out;
    bool force = false;
};

int cmd_generate(const GenerateOptions& o, int workers, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    EnsembleSpec spec;
    spec.count = o.count;
    spec.base_seed = o.seed;
    if (o.count < 1) throw ValidationError("--count must be >= 1");

    Manifest manifest("generate", o.out);
    std::vector<std::string> args{"generate", o.kind};
    std::map<std::string, std::string> meta;
    json& params = manifest.parameters();

    if (o.kind == "clique") {
        if (o.n < 1) throw UsageError("generate clique needs --n >= 1");
        spec.class_tag = EnsembleClass::clique_ising;
        spec.n_or_graph = o.n;
        args.insert(args.end(), {"--n", std::to_string(o.n)});
        params["n"] = o.n;
    } else if (o.kind == "heavyhex") {
        spec.class_tag = EnsembleClass::heavy_hex_hising;
        const int sources = (o.default_layout ? 1 : 0) + (o.cells_x > 0 ? 1 : 0) +
                            (o.edges.empty() ? 0 : 1);
        if (sources != 1) {
            throw UsageError("generate heavyhex needs exactly one of --default, "
                             "--cells-x/--cells-y or --edges");
        }
        HeavyHexGraph g;
        if (!o.edges.empty()) {
            g = io::read_edge_list(o.edges);
            manifest.input(o.edges);
            args.insert(args.end(), {"--edges", absolute(o.edges)});
            meta["graph"] = "explicit";
            params["edges"] = absolute(o.edges);
        } else {
            const auto layout = o.default_layout
                                        ? kDefaultHeavyHexLayout
                                        : HeavyHexLayout{o.cells_x, o.cells_y, o.row_tail};
            g = gen_heavy_hex(layout);
            if (o.default_layout) {
                args.emplace_back("--default");
            } else {
                args.insert(args.end(), {"--cells-x", std::to_string(o.cells_x), "--cells-y",
                                         std::to_string(o.cells_y), "--row-tail",
                                         std::to_string(o.row_tail)});
            }
            meta["graph"] = "heavy_hex " + std::to_string(layout.cells_x) + "x" +
                            std::to_string(layout.cells_y) + "+" +
                            std::to_string(layout.row_tail);
            params["layout"] = {layout.cells_x, layout.cells_y, layout.row_tail};
        }
        params["nodes"] = g.num_nodes;
        spec.n_or_graph = std::move(g);
    } else {
        throw UsageError("unknown instance class '" + o.kind + "' (expected clique or heavyhex)");
    }
    args.insert(args.end(), {"--count", std::to_string(o.count), "--seed",
                             std::to_string(o.seed), "--out", absolute(o.out)});
    if (o.force) args.emplace_back("--force");

    prepare_out_dir(o.out, o.force);
    std::vector<fs::path> files(o.count);
    detail::parallel_for(o.count, workers, [&](std::size_t i) {
        io::InstanceFile inst;
        inst.class_tag = to_string(spec.class_tag);
        inst.model = spec.instance(i);
        inst.meta = meta;
        inst.meta["seed"] = std::to_string(spec.instance_seed(i));
        inst.meta["ensemble.index"] = std::to_string(i);
        inst.meta["ensemble.base_seed"] = std::to_string(o.seed);
        files[i] = fs::path(o.out) / ("instance_" + zero_pad(i, 4) + ".inst");
        io::write_instance(files[i], inst);
    });
    if (const auto* g = std::get_if<HeavyHexGraph>(&spec.n_or_graph)) {
        const auto edges = fs::path(o.out) / "graph.edges";
        io::detail::write_file(edges, io::format_edge_list(*g));
        manifest.output(edges);
    }
    json seeds = json::array();
    for (std::size_t i = 0; i < o.count; ++i) {
        manifest.output(files[i]);
        seeds.push_back(spec.instance_seed(i));
    }
    params["class"] = to_string(spec.class_tag);
    params["count"] = o.count;
    params["instance_seeds"] = seeds;
    params["workers"] = workers;
    manifest.seed(o.seed);
    manifest.replay_args(args);
    manifest.wall_clock(elapsed_since(t0));
    manifest.write(fs::path(o.out) / "manifest.json");
    out << "wrote " << o.count << " instance(s) to " << o.out << '\n';
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

struct BfNullOptions {
    std::vector<std::string> instances;
    int iterations = 10;
    int reads = 1000;
    double alpha = 0.02;
    std::optional<double> gamma;
    std::uint64_t seed = 0;
    std::string rank_by = "original";
    std::string out;
    bool force = false;
};

double default_gamma(const std::string& class_tag) {
    return class_tag == to_string(EnsembleClass::heavy_hex_hising) ? 2.0 : 3.0;
}

int cmd_bfnull(const BfNullOptions& o, int workers, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.instances.empty()) throw UsageError("bfnull needs at least one --instance");
    if (o.rank_by != "original" && o.rank_by != "biased") {
        throw UsageError("--rank-by must be 'original' or 'biased'");
    }
    prepare_out_dir(o.out, o.force);
    Manifest manifest("bfnull", o.out);

    std::vector<std::string> args{"bfnull"};
    for (const auto& p : o.instances) args.insert(args.end(), {"--instance", absolute(p)});
    args.insert(args.end(), {"--iterations", std::to_string(o.iterations), "--reads",
                             std::to_string(o.reads), "--alpha", format_g17(o.alpha), "--seed",
                             std::to_string(o.seed), "--rank-by", o.rank_by});
    if (o.gamma) args.insert(args.end(), {"--gamma", format_g17(*o.gamma)});
    args.insert(args.end(), {"--out", absolute(o.out)});
    if (o.force) args.emplace_back("--force");

    const auto width = std::max<std::size_t>(2, std::to_string(o.iterations).size());
    json runs = json::array();
    for (const auto& path : o.instances) {
        const auto inst = io::read_instance(path);
        manifest.input(path);
        BfConfig config;
        config.iterations = o.iterations;
        config.reads = o.reads;
        config.alpha = o.alpha;
        config.gamma = o.gamma.value_or(default_gamma(inst.class_tag));
        config.seed = o.seed;
        config.rank_by_biased = o.rank_by == "biased";
        config.workers = workers;
        const auto result = run_bf_null(inst.model, config);

        const auto dir = o.instances.size() == 1 ? fs::path(o.out)
                                                 : fs::path(o.out) / fs::path(path).stem();
        for (std::size_t it = 0; it < result.per_iteration.size(); ++it) {
            auto samples = result.per_iteration[it];
            samples.metadata["instance"] = fs::path(path).filename().string();
            const auto file = dir / ("iter_" + zero_pad(it + 1, width) + ".csv");
            io::write_samples(file, samples);
            manifest.output(file);
        }
        runs.push_back({{"instance", absolute(path)},
                        {"gamma", config.gamma},
                        {"wall_clock_seconds", result.wall_clock_seconds},
                        {"candidates_evaluated", result.stats.candidates}});
        out << fs::path(path).filename().string() << ": " << o.iterations << " iteration(s) x "
            << o.reads << " reads in " << result.wall_clock_seconds << " s\n";
    }
    auto& params = manifest.parameters();
    params["iterations"] = o.iterations;
    params["reads"] = o.reads;
    params["alpha"] = o.alpha;
    params["rank_by"] = o.rank_by;
    params["workers"] = workers;
    params["runs"] = runs;
    manifest.seed(o.seed);
    manifest.replay_args(args);
    manifest.wall_clock(elapsed_since(t0));
    manifest.write(fs::path(o.out) / "manifest.json");
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

int cmd_exact(const std::string& instance, const std::string& method, const std::string& out_path,
              std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto inst = io::read_instance(instance);
    io::GroundStateFile g;
    const auto& model = inst.model;
    if (method == "brute" || (method == "auto" && model.num_variables() <= kAutoBruteForceLimit)) {
        g.ground_state = brute_force(model);
        g.method = "brute";
    } else if (method == "elim" || method == "auto") {
        const auto order = min_fill_order(model);
        g.ground_state = elimination_solve(model, order);
        g.method = "elimination";
        g.induced_width = order.induced_width;
    } else {
        throw UsageError("--method must be auto, brute or elim");
    }
    io::write_ground_state(out_path, g);

    Manifest manifest("exact", fs::path(out_path).parent_path());
    manifest.input(instance);
    manifest.output(out_path);
    manifest.parameters()["method"] = method;
    manifest.parameters()["resolved_method"] = g.method;
    manifest.replay_args({"exact", "--instance", absolute(instance), "--method", method, "--out",
                          absolute(out_path)});
    manifest.wall_clock(elapsed_since(t0));
    manifest.write(out_path + ".manifest.json");
    out << "e_gs = " << format_g17(g.ground_state.energy) << " (" << g.method << ")\n";
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

int cmd_reduce(const std::string& instance, double penalty, const std::string& gadget,
               const std::string& out_path, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto inst = io::read_instance(instance);
    if (!inst.aux_defs.empty()) throw ValidationError("instance is already a reduction");
    const auto rmap = quadratize(inst.model, penalty, gadget_from_string(gadget));
    auto meta = inst.meta;
    meta["reduction.source"] = fs::path(instance).filename().string();
    io::write_instance(out_path, io::reduction_to_instance(rmap, inst.class_tag, meta));

    Manifest manifest("reduce", fs::path(out_path).parent_path());
    manifest.input(instance);
    manifest.output(out_path);
    manifest.parameters()["penalty"] = penalty;
    manifest.parameters()["gadget"] = to_string(rmap.gadget);
    manifest.parameters()["auxiliary_variables"] = rmap.num_auxiliary();
    manifest.replay_args({"reduce", "--instance", absolute(instance), "--penalty",
                          format_g17(penalty), "--gadget", to_string(rmap.gadget), "--out",
                          absolute(out_path)});
    manifest.wall_clock(elapsed_since(t0));
    manifest.write(out_path + ".manifest.json");
    out << "reduced " << inst.model.num_cubic() << " cubic term(s) with "
        << rmap.aux_defs.size() << " product(s), " << rmap.num_auxiliary()
        << " auxiliary variable(s)\n";
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

struct AnalyzeOptions {
    std::string instance;
    std::vector<std::string> samples;
    std::string ground_state;
    std::optional<double> e_gs;
    std::size_t block_size = 1;
    std::size_t bins = 20;
    std::optional<double> range_max;
    double tol = kGroundStateTolerance;
    std::string label;
    std::string out;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.samples.empty()) throw UsageError("analyze needs at least one --samples file");
    if (o.ground_state.empty() == !o.e_gs) {
        throw UsageError("analyze needs exactly one of --ground-state or --e-gs");
    }
    const auto inst = io::read_instance(o.instance);
    Manifest manifest("analyze", fs::path(o.out).parent_path());
    manifest.input(o.instance);
    std::vector<std::string> args{"analyze", "--instance", absolute(o.instance)};

    SampleSet pooled;
    std::size_t corrected = 0;
    for (const auto& path : o.samples) {
        auto load = io::read_samples(path, inst.model);
        manifest.input(path);
        args.insert(args.end(), {"--samples", absolute(path)});
        for (auto line : load.corrected_lines) {
            err << path << ":" << line << ": stored energy disagrees with the instance; "
                << "using the recomputed value\n";
        }
        corrected += load.corrected_lines.size();
        if (pooled.metadata.empty()) pooled.metadata = load.samples.metadata;
        pooled.records.insert(pooled.records.end(),
                              std::make_move_iterator(load.samples.records.begin()),
                              std::make_move_iterator(load.samples.records.end()));
    }
    double e_gs;
    if (o.e_gs) {
        e_gs = *o.e_gs;
        args.insert(args.end(), {"--e-gs", format_g17(e_gs)});
    } else {
        e_gs = io::read_ground_state(o.ground_state).ground_state.energy;
        manifest.input(o.ground_state);
        args.insert(args.end(), {"--ground-state", absolute(o.ground_state)});
    }
    if (o.block_size > 1) pooled = best_of_blocks(pooled, o.block_size);
    const auto report = summarize(pooled, e_gs, o.bins, o.tol, o.range_max);

    std::map<std::string, std::string> header;
    header["label"] = o.label.empty()
                              ? (pooled.metadata.contains("solver") ? pooled.metadata["solver"]
                                                                    : std::string("samples"))
                              : o.label;
    header["instance"] = fs::path(o.instance).filename().string();
    header["num_variables"] = std::to_string(inst.model.num_variables());
    header["block_size"] = std::to_string(o.block_size);
    header["corrected_rows"] = std::to_string(corrected);
    header["tolerance"] = format_g17(o.tol);
    io::detail::write_file(o.out, io::format_report(io::make_report_table(report, header)));

    args.insert(args.end(), {"--block-size", std::to_string(o.block_size), "--bins",
                             std::to_string(o.bins), "--tol", format_g17(o.tol)});
    if (o.range_max) args.insert(args.end(), {"--range-max", format_g17(*o.range_max)});
    if (!o.label.empty()) args.insert(args.end(), {"--label", o.label});
    args.insert(args.end(), {"--out", absolute(o.out)});
    manifest.output(o.out);
    manifest.parameters()["block_size"] = o.block_size;
    manifest.parameters()["bins"] = o.bins;
    manifest.parameters()["e_gs"] = e_gs;
    manifest.replay_args(args);
    manifest.wall_clock(elapsed_since(t0));
    manifest.write(o.out + ".manifest.json");
    out << "p_gs = " << report.p_gs << ", mean RE = " << report.mean_re << " over "
        << pooled.size() << " reads\n";
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

struct TimingOptions {
    std::string preset;
    AnnealerTiming annealer;
    GateModelTiming gate;
    std::string gate_flavor = "per_gate";
    std::optional<double> bfnull_seconds;
    bool measure = false;
    std::string measure_instance;
    std::string out;
};

double measure_bfnull(const PolynomialModel& model, long reads, double gamma) {
    BfConfig config;
    config.iterations = 1;
    config.reads = static_cast<int>(reads);
    config.gamma = gamma;
    return run_bf_null(model, config).wall_clock_seconds;
}

int cmd_timing(const TimingOptions& o, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Row {
        std::string experiment;
        AnnealerTiming annealer;
        GateModelTiming gate;
        std::optional<double> bfnull;
        std::optional<double> reference_bfnull;
        std::string measure_kind;  // clique:N or heavyhex
    };
    std::vector<Row> rows;
    auto from_preset = [&](const TimingPreset& p) {
        Row r{std::string(p.name), p.annealer, p.gate, std::nullopt, p.reference_bfnull_s, ""};
        r.measure_kind = p.name == "hising-fig4" ? "heavyhex"
                         : p.name == "ising-fig23" ? "clique:29"
                                                   : "clique:20";
        return r;
    };
    if (o.preset == "all") {
        for (const auto& p : kTimingPresets) rows.push_back(from_preset(p));
    } else if (!o.preset.empty()) {
        rows.push_back(from_preset(timing_preset(o.preset)));
    } else {
        GateModelTiming gate = o.gate;
        if (o.gate_flavor == "per_gate") {
            gate.flavor = GateFlavor::per_gate;
        } else if (o.gate_flavor == "ibm_workload") {
            gate.flavor = GateFlavor::ibm_workload;
        } else {
            throw UsageError("--gate-flavor must be per_gate or ibm_workload");
        }
        rows.push_back({"explicit", o.annealer, gate, std::nullopt, std::nullopt, ""});
    }

    Manifest manifest("timing", fs::path(o.out).parent_path());
    for (auto& r : rows) {
        if (o.bfnull_seconds) {
            r.bfnull = *o.bfnull_seconds;
        } else if (o.measure || !o.measure_instance.empty()) {
            if (!o.measure_instance.empty()) {
                const auto inst = io::read_instance(o.measure_instance);
                manifest.input(o.measure_instance);
                r.bfnull = measure_bfnull(inst.model, r.annealer.reads,
                                          default_gamma(inst.class_tag));
            } else if (r.measure_kind == "heavyhex") {
                r.bfnull = measure_bfnull(gen_heavy_hex_hising(default_heavy_hex(), 0),
                                          r.annealer.reads, 2.0);
            } else if (!r.measure_kind.empty()) {
                const int n = std::stoi(r.measure_kind.substr(7));
                r.bfnull = measure_bfnull(gen_clique_ising(n, 0), r.annealer.reads, 3.0);
            } else {
                throw UsageError("--measure with explicit parameters needs --measure-instance");
            }
        }
    }

    std::ostringstream csv;
    csv << "# runtime in seconds per experiment; gate-model values are lower-bound estimates\n";
    csv << "experiment,bfnull_s,annealer_s,gate_model_s,gate_model_flavor,gate_over_annealer\n";
    for (const auto& r : rows) {
        const double qa = qpu_access_time(r.annealer);
        const double gm = gate_model_time(r.gate);
        csv << r.experiment << ',' << (r.bfnull ? format_sig(*r.bfnull, 4) : std::string("NA"))
            << ',' << format_sig(qa) << ',' << format_sig(gm) << ',' << to_string(r.gate.flavor)
            << ',' << format_fixed(speedup_ratio(gm, qa), 1) << '\n';
    }
    io::detail::write_file(o.out, csv.str());
    out << csv.str();

    std::vector<std::string> args{"timing"};
    if (!o.preset.empty()) {
        args.insert(args.end(), {"--preset", o.preset});
    } else {
        args.insert(args.end(),
                    {"--programming-ms", format_g17(o.annealer.programming_ms), "--anneal-us",
                     format_g17(o.annealer.anneal_us), "--readout-us",
                     format_g17(o.annealer.readout_us), "--delay-us",
                     format_g17(o.annealer.delay_us), "--reads", std::to_string(o.annealer.reads),
                     "--gate-flavor", o.gate_flavor, "--per-gate-us",
                     format_g17(o.gate.per_gate_us), "--shots", std::to_string(o.gate.shots),
                     "--iterations", std::to_string(o.gate.iterations), "--depth",
                     std::to_string(o.gate.depth)});
    }
    // measured runtimes are not reproducible; replays use the recorded value
    if (rows.front().bfnull) {
        args.insert(args.end(), {"--bfnull-seconds", format_g17(*rows.front().bfnull)});
    }
    args.insert(args.end(), {"--out", absolute(o.out)});
    manifest.output(o.out);
    manifest.parameters()["rows"] = rows.size();
    manifest.replay_args(args);
    manifest.wall_clock(elapsed_since(t0));
    manifest.write(o.out + ".manifest.json");
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

struct ReportOptions {
    std::vector<std::string> inputs;
    std::string mode = "histogram";
    std::string title;
    std::string x_key = "num_variables";
    std::string y_key = "p_gs";
    std::string out;
};

int cmd_report(const ReportOptions& o, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.inputs.empty()) throw UsageError("report needs at least one --inputs file");
    Manifest manifest("report", fs::path(o.out).parent_path());
    std::vector<std::string> args{"report"};
    std::vector<std::pair<std::string, io::ReportTable>> tables;
    for (const auto& p : o.inputs) {
        auto table = io::read_report(p);
        manifest.input(p);
        args.insert(args.end(), {"--inputs", absolute(p)});
        auto label = table.header.contains("label") ? table.header["label"]
                                                    : fs::path(p).stem().string();
        tables.emplace_back(std::move(label), std::move(table));
    }

    std::string svg_text;
    svg::PlotOptions opt;
    opt.title = o.title;
    if (o.mode == "histogram") {
        std::vector<svg::HistogramSeries> series;
        for (auto& [label, table] : tables) series.push_back({label, table.bins});
        opt.x_label = "relative error";
        opt.y_label = "fraction of reads";
        svg_text = svg::render_histograms(series, opt);
    } else if (o.mode == "scatter") {
        std::vector<svg::ScatterSeries> series;
        std::map<std::string, std::size_t> index;
        for (auto& [label, table] : tables) {
            for (const auto& key : {o.x_key, o.y_key}) {
                if (!table.header.contains(key)) {
                    throw ValidationError("report for '" + label + "' has no '" + key + "' entry");
                }
            }
            const auto [it, fresh] = index.emplace(label, series.size());
            if (fresh) series.push_back({label, {}});
            series[it->second].points.emplace_back(parse_double(table.header[o.x_key]),
                                                   parse_double(table.header[o.y_key]));
        }
        opt.x_label = o.x_key;
        opt.y_label = o.y_key;
        svg_text = svg::render_scatter(series, opt);
    } else {
        throw UsageError("--mode must be histogram or scatter");
    }
    io::detail::write_file(o.out, svg_text);

    args.insert(args.end(), {"--mode", o.mode, "--x-key", o.x_key, "--y-key", o.y_key});
    if (!o.title.empty()) args.insert(args.end(), {"--title", o.title});
    args.insert(args.end(), {"--out", absolute(o.out)});
    manifest.output(o.out);
    manifest.parameters()["mode"] = o.mode;
    manifest.replay_args(args);
    manifest.wall_clock(elapsed_since(t0));
    manifest.write(o.out + ".manifest.json");
    out << "wrote " << o.out << '\n';
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

int cmd_replay(const std::string& manifest_path, const std::string& new_out, std::ostream& out,
               std::ostream& err) {
    json recorded;
    try {
        recorded = json::parse(io::detail::read_file(manifest_path));
    } catch (const json::exception& e) {
        throw ParseError(manifest_path + ": " + e.what());
    }
    auto args = recorded.at("argv").get<std::vector<std::string>>();
    auto it = std::find(args.begin(), args.end(), "--out");
    if (it == args.end() || std::next(it) == args.end()) {
        throw ValidationError("manifest argv has no --out");
    }
    *std::next(it) = absolute(new_out);

    std::ostringstream sink;
    const int code = run(args, sink, err);
    if (code != ExitCode::ok) return code;

    const bool dir_output = recorded.at("subcommand") == "generate" ||
                            recorded.at("subcommand") == "bfnull";
    const auto replay_manifest = dir_output ? (fs::path(new_out) / "manifest.json").string()
                                            : new_out + ".manifest.json";
    const auto fresh = json::parse(io::detail::read_file(replay_manifest));
    const auto& a = recorded.at("outputs");
    const auto& b = fresh.at("outputs");
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
        same = a[i].at("sha256") == b[i].at("sha256");
        if (!same) {
            err << "output " << a[i].at("path").get<std::string>() << " differs on replay\n";
        }
    }
    out << (same ? "replay reproduced " : "replay differs: ") << b.size() << " output(s)\n";
    return same ? ExitCode::ok : ExitCode::validation;
}

}  // namespace

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"bfbench: bias-field null-hypothesis benchmarking toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    bool json_errors = false;
    int workers = 0;
    app.add_flag("--json", json_errors, "Print errors as a JSON envelope on stderr");
    app.add_option("--workers", workers, "Worker threads (default: $BFBENCH_WORKERS or 1)")
            ->check(CLI::PositiveNumber);

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Write a seeded ensemble of instances");
    generate->add_option("class", gen.kind, "clique or heavyhex")->required();
    generate->add_option("--n", gen.n, "Clique size");
    generate->add_flag("--default", gen.default_layout, "156-node heavy-hex layout");
    generate->add_option("--cells-x", gen.cells_x, "Heavy-hex cells per row gap");
    generate->add_option("--cells-y", gen.cells_y, "Heavy-hex row gaps");
    generate->add_option("--row-tail", gen.row_tail, "Dangling nodes appended to each row");
    generate->add_option("--edges", gen.edges, "Explicit edge list instead of a lattice");
    generate->add_option("--count", gen.count, "Number of instances")->capture_default_str();
    generate->add_option("--seed", gen.seed, "Base seed; instance i uses seed + i")
            ->capture_default_str();
    generate->add_option("--out", gen.out, "Output directory")->required();
    generate->add_flag("--force", gen.force, "Allow a non-empty output directory");

    BfNullOptions bf;
    std::string gamma_text;
    auto* bfnull = app.add_subcommand("bfnull", "Run the bias-field null-hypothesis solver");
    bfnull->add_option("--instance", bf.instances, "Instance file(s)")->required();
    bfnull->add_option("--iterations", bf.iterations, "Bias-field iterations b")
            ->capture_default_str();
    bfnull->add_option("--reads", bf.reads, "Reads per iteration R")->capture_default_str();
    bfnull->add_option("--alpha", bf.alpha, "Fraction of best reads averaged")
            ->capture_default_str();
    bfnull->add_option("--gamma", gamma_text,
                       "Bias-field weight (default 3 for cliques, 2 for heavy-hex)");
    bfnull->add_option("--seed", bf.seed, "Seed")->capture_default_str();
    bfnull->add_option("--rank-by", bf.rank_by, "Rank best reads by 'original' or 'biased' energy")
            ->capture_default_str();
    bfnull->add_option("--out", bf.out, "Output directory")->required();
    bfnull->add_flag("--force", bf.force, "Allow a non-empty output directory");

    std::string exact_instance, exact_method = "auto", exact_out;
    auto* exact = app.add_subcommand("exact", "Compute an exact ground state");
    exact->add_option("--instance", exact_instance, "Instance file")->required();
    exact->add_option("--method", exact_method, "auto, brute or elim")->capture_default_str();
    exact->add_option("--out", exact_out, "Ground-state file")->required();

    std::string reduce_instance, reduce_out, reduce_gadget = "spin_product";
    double reduce_penalty = kDefaultPenalty;
    auto* reduce = app.add_subcommand("reduce", "Quadratize cubic terms");
    reduce->add_option("--instance", reduce_instance, "Instance file")->required();
    reduce->add_option("--penalty", reduce_penalty, "Gadget penalty strength")
            ->capture_default_str();
    reduce->add_option("--gadget", reduce_gadget, "spin_product or binary_and")
            ->capture_default_str();
    reduce->add_option("--out", reduce_out, "Reduced instance file")->required();

    AnalyzeOptions an;
    std::string egs_text, range_text;
    auto* analyze = app.add_subcommand("analyze", "Solution-quality report for sample files");
    analyze->add_option("--instance", an.instance, "Instance the samples belong to")->required();
    analyze->add_option("--samples", an.samples, "Sample file(s), pooled in order")->required();
    analyze->add_option("--ground-state", an.ground_state, "Ground-state file");
    analyze->add_option("--e-gs", egs_text, "Ground-state energy");
    analyze->add_option("--block-size", an.block_size, "Best-of-block aggregation size")
            ->capture_default_str();
    analyze->add_option("--bins", an.bins, "Histogram bins")->capture_default_str();
    analyze->add_option("--range-max", range_text, "Upper end of the histogram range");
    analyze->add_option("--tol", an.tol, "Relative ground-state tolerance")->capture_default_str();
    analyze->add_option("--label", an.label, "Series label");
    analyze->add_option("--out", an.out, "Report CSV")->required();

    TimingOptions tm;
    auto* timing = app.add_subcommand("timing", "Runtime table for the annealer and gate-model models");
    timing->add_option("--preset", tm.preset, "ising-fig1, ising-fig23, hising-fig4 or all");
    timing->add_option("--programming-ms", tm.annealer.programming_ms)->capture_default_str();
    timing->add_option("--anneal-us", tm.annealer.anneal_us)->capture_default_str();
    timing->add_option("--readout-us", tm.annealer.readout_us)->capture_default_str();
    timing->add_option("--delay-us", tm.annealer.delay_us)->capture_default_str();
    timing->add_option("--reads", tm.annealer.reads)->capture_default_str();
    timing->add_option("--gate-flavor", tm.gate_flavor, "per_gate or ibm_workload")
            ->capture_default_str();
    timing->add_option("--per-gate-us", tm.gate.per_gate_us)->capture_default_str();
    timing->add_option("--shots", tm.gate.shots)->capture_default_str();
    timing->add_option("--iterations", tm.gate.iterations)->capture_default_str();
    timing->add_option("--depth", tm.gate.depth)->capture_default_str();
    std::string bfnull_seconds_text;
    timing->add_option("--bfnull-seconds", bfnull_seconds_text, "Measured BF-Null runtime");
    timing->add_flag("--measure", tm.measure, "Time 1000 BF-Null reads on a preset-sized instance");
    timing->add_option("--measure-instance", tm.measure_instance, "Instance to time BF-Null on");
    timing->add_option("--out", tm.out, "Timing CSV")->required();

    ReportOptions rp;
    auto* report = app.add_subcommand("report", "Render report CSVs as SVG");
    report->add_option("--inputs", rp.inputs, "Report CSV file(s)")->required();
    report->add_option("--mode", rp.mode, "histogram or scatter")->capture_default_str();
    report->add_option("--title", rp.title, "Plot title");
    report->add_option("--x-key", rp.x_key, "Scatter x header key")->capture_default_str();
    report->add_option("--y-key", rp.y_key, "Scatter y header key")->capture_default_str();
    report->add_option("--out", rp.out, "SVG file")->required();

    std::string replay_manifest, replay_out;
    auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare checksums");
    replay->add_option("--manifest", replay_manifest, "Manifest JSON")->required();
    replay->add_option("--out", replay_out, "New output location")->required();

    auto fail = [&](int code, const std::string& category, const std::string& message) {
        if (json_errors) {
            json j = {{"error", {{"exit_code", code}, {"category", category}, {"message", message}}}};
            err << j.dump() << '\n';
        } else {
            err << "error: " << message << '\n';
        }
        return code;
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitCode::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitCode::ok;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return ExitCode::ok;
    } catch (const CLI::ParseError& e) {
        return fail(ExitCode::usage, "usage", e.what());
    }

    try {
        if (workers == 0) workers = default_workers();
        if (*generate) return cmd_generate(gen, workers, out);
        if (*bfnull) {
            if (!gamma_text.empty()) bf.gamma = parse_double(gamma_text);
            return cmd_bfnull(bf, workers, out);
        }
        if (*exact) return cmd_exact(exact_instance, exact_method, exact_out, out);
        if (*reduce) return cmd_reduce(reduce_instance, reduce_penalty, reduce_gadget, reduce_out, out);
        if (*analyze) {
            if (!egs_text.empty()) an.e_gs = parse_double(egs_text);
            if (!range_text.empty()) an.range_max = parse_double(range_text);
            return cmd_analyze(an, out, err);
        }
        if (*timing) {
            if (!bfnull_seconds_text.empty()) tm.bfnull_seconds = parse_double(bfnull_seconds_text);
            return cmd_timing(tm, out);
        }
        if (*report) return cmd_report(rp, out);
        if (*replay) return cmd_replay(replay_manifest, replay_out, out, err);
    } catch (const UsageError& e) {
        return fail(ExitCode::usage, "usage", e.what());
    } catch (const ResourceError& e) {
        return fail(ExitCode::resource, "resource", e.what());
    } catch (const ValidationError& e) {
        return fail(ExitCode::validation, "validation", e.what());
    } catch (const fs::filesystem_error& e) {
        return fail(ExitCode::validation, "validation", e.what());
    } catch (const std::exception& e) {
        return fail(ExitCode::internal, "internal", e.what());
    }
    return fail(ExitCode::usage, "usage", "no subcommand given");
}

}  // namespace bfbench::cli
