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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bfbench/bfbench.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace bfbench;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

bool rel_equal(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

double round_sig(double x, int digits) {
    const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(x))));
    return std::round(x * scale) / scale;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome timing_identities() {
    struct Check {
        const char* name;
        double got, want;
        bool ratio;
    };
    const Check checks[] = {
            {"qpu 0.693", qpu_access_time({35, 500, 98, 60, 1000}), 0.693, false},
            {"qpu 0.543", qpu_access_time({35, 350, 98, 60, 1000}), 0.543, false},
            {"ibm 2.35", ibm_workload_time(1000, 1), 2.35, false},
            {"ibm 23.5", ibm_workload_time(1000, 10), 23.5, false},
            {"ibm 55", ibm_workload_time(10000, 10), 55, false},
            {"gate 9.7", per_gate_time({GateFlavor::per_gate, 970, 1000, 10, 1}), 9.7, false},
            {"gate 97", per_gate_time({GateFlavor::per_gate, 970, 1000, 10, 10}), 97, false},
            {"ratio 14", speedup_ratio(9.7, 0.693), 14, true},
            {"ratio 43", speedup_ratio(23.5, 0.543), 43, true},
            {"ratio 101", speedup_ratio(55, 0.543), 101, true},
            {"ratio 140", speedup_ratio(97, 0.693), 140, true},
    };
    std::string failed;
    for (const auto& c : checks) {
        const bool ok = c.ratio ? round_sig(c.got, 2) == round_sig(c.want, 2)
                                : rel_equal(c.got, c.want, 1e-12);
        if (!ok) failed += fmt(" %s(got %.6g)", c.name, c.got);
    }
    return {failed.empty(), failed.empty() ? "11 values reproduced" : "mismatch:" + failed};
}

// ---------------------------------------------------------------------------

/// Gaussian hising model with 3..8 spins, random couplings and 1..6 cubic
/// terms on distinct random triples.
oracle::Terms random_small_hising(std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    oracle::Terms t;
    t.n = 3 + static_cast<int>(rng() % 6);
    for (int i = 0; i < t.n; ++i) t.h[i] = normal(rng);
    for (int i = 0; i < t.n; ++i) {
        for (int j = i + 1; j < t.n; ++j) {
            if (rng() % 2) t.J[{i, j}] = normal(rng);
        }
    }
    const int want = 1 + static_cast<int>(rng() % 6);
    for (int attempt = 0; attempt < 100 && static_cast<int>(t.K.size()) < want; ++attempt) {
        std::array<int, 3> k{static_cast<int>(rng() % t.n), static_cast<int>(rng() % t.n),
                             static_cast<int>(rng() % t.n)};
        std::sort(k.begin(), k.end());
        if (k[0] == k[1] || k[1] == k[2]) continue;
        t.K[{k[0], k[1], k[2]}] = normal(rng);
    }
    return t;
}

Outcome reduction_correctness() {
    std::mt19937_64 rng(1);
    int energy_ok = 0, consistent_ok = 0;
    std::string first_failure;
    for (int m = 0; m < 50; ++m) {
        const auto t = random_small_hising(rng);
        const auto rmap = quadratize(t.model(), 5.0);
        const auto reduced = oracle::terms_of(rmap.reduced_model);
        const auto orig = oracle::exhaustive_minimum(t);
        const auto red = oracle::exhaustive_minimum(reduced);
        const bool e_ok = rel_equal(red.energy - rmap.offset, orig.energy, 1e-9);
        bool c_ok = true;
        for (const auto& s : red.minimizers) {
            c_ok = c_ok && lift_solution(rmap, SpinAssignment(s)).consistent;
        }
        energy_ok += e_ok;
        consistent_ok += c_ok;
        if ((!e_ok || !c_ok) && first_failure.empty()) {
            double kmax = 0;
            for (auto [k, v] : t.K) kmax = std::max(kmax, std::abs(v));
            first_failure = fmt("; model %d fails (N=%d, %zu cubic, max|K|=%.3f, E_orig=%.6f, "
                                "E_red=%.6f)",
                                m, t.n, t.K.size(), kmax, orig.energy, red.energy - rmap.offset);
        }
    }
    return {energy_ok == 50 && consistent_ok == 50,
            fmt("ground energy equal %d/50, minimizers consistent %d/50", energy_ok,
                consistent_ok) +
                    first_failure};
}

// ---------------------------------------------------------------------------

Outcome exact_equivalence() {
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 2 + static_cast<int>(seed % 19);
        oracle::Terms t;
        if (seed % 3 == 0) {
            t = oracle::random_terms(n, seed, 1.0, 0.0);  // clique
        } else if (seed % 3 == 1) {
            t = oracle::random_terms(n, seed, 0.2, 0.0);
        } else {
            t = oracle::random_terms(n, seed, 0.2, 0.02);
        }
        const auto m = t.model();
        agree += rel_equal(elimination_solve(m).energy, brute_force(m).energy, 1e-9);
    }

    const auto model = gen_heavy_hex_hising(default_heavy_hex(), 2026);
    const auto t0 = std::chrono::steady_clock::now();
    const auto order = min_fill_order(model);
    const auto gs = elimination_solve(model, order);
    const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::mt19937 rng(5);
    int bounded = 0;
    for (int r = 0; r < 1000; ++r) {
        bounded += gs.energy <= model.energy(SpinAssignment(oracle::random_spins(156, rng)));
    }
    const bool pass = agree == 100 && seconds < 60 && bounded == 1000;
    return {pass, fmt("elimination == brute force on %d/100 models; 156-node instance solved in "
                      "%.3f s (width %d, e_gs %.4f), lower bound holds for %d/1000 random states",
                      agree, seconds, order.induced_width, gs.energy, bounded)};
}

// ---------------------------------------------------------------------------

Outcome bfnull_properties() {
    std::mt19937_64 rng(44);
    int monotone = 0, counted = 0;
    const int pairs = 10000;
    for (int p = 0; p < pairs; ++p) {
        const int n = 1 + static_cast<int>(rng() % 16);
        const auto m = p % 2 ? gen_clique_ising(n, rng())
                             : oracle::random_terms(n, rng(), 0.4, 0.1).model();
        auto r = make_rng(rng());
        const auto start = random_assignment(n, r);
        SweepStats stats;
        const auto out = sweep_subsolve(m, start, &stats);
        monotone += m.energy(out) <= m.energy(start);
        counted += stats.candidates == static_cast<std::size_t>(n) + 1;
    }

    int improved = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = gen_clique_ising(12, 12000 + seed);
        const double e_gs = brute_force(m).energy;
        BfConfig c;
        c.iterations = 10;
        c.reads = 1000;
        c.alpha = 0.02;
        c.gamma = 3;
        c.seed = seed;
        const auto r = run_bf_null(m, c);
        improved += summarize(r.per_iteration.back(), e_gs).mean_re <=
                    summarize(r.per_iteration.front(), e_gs).mean_re;
    }
    const bool pass = monotone == pairs && counted == pairs && improved >= 45;
    return {pass, fmt("(a) non-increasing %d/%d, (b) N+1 candidates %d/%d, (c) iteration 10 "
                      "mean RE <= iteration 1 in %d/50 runs",
                      monotone, pairs, counted, pairs, improved)};
}

// ---------------------------------------------------------------------------

Outcome fig1_trend() {
    const int sizes[] = {10, 14, 18};
    double mean[3], se[3], random_mean[3];
    int beats[3];
    for (int k = 0; k < 3; ++k) {
        const int n = sizes[k];
        std::vector<double> p_bf, p_rand;
        beats[k] = 0;
        for (std::uint64_t i = 0; i < 100; ++i) {
            const auto m = gen_clique_ising(n, 7000 + 1000 * n + i);
            const double e_gs = brute_force(m).energy;
            BfConfig c;
            c.seed = i;
            const auto r = run_bf_null(m, c);
            p_bf.push_back(ground_state_probability(r.final_samples(), e_gs));

            auto rng = make_rng(derive_seed(99, n, i));
            SampleSet uniform;
            uniform.records.reserve(10000);
            for (int s = 0; s < 10000; ++s) {
                auto a = random_assignment(n, rng);
                const double e = m.energy(a);
                uniform.records.push_back({std::move(a), e, 0});
            }
            p_rand.push_back(ground_state_probability(uniform, e_gs));
            beats[k] += p_bf.back() > p_rand.back();
        }
        double sum = 0, sum_sq = 0, rsum = 0;
        for (double v : p_bf) {
            sum += v;
            sum_sq += v * v;
        }
        for (double v : p_rand) rsum += v;
        mean[k] = sum / 100;
        se[k] = std::sqrt(std::max(0.0, sum_sq / 100 - mean[k] * mean[k]) / 99);
        random_mean[k] = rsum / 100;
    }
    bool above_random = true, non_increasing = true;
    for (int k = 0; k < 3; ++k) above_random = above_random && mean[k] > random_mean[k];
    for (int k = 0; k + 1 < 3; ++k) {
        const double slack = std::sqrt(se[k] * se[k] + se[k + 1] * se[k + 1]);
        non_increasing = non_increasing && mean[k + 1] <= mean[k] + slack;
    }
    std::string detail = "mean p_gs BF-Null vs uniform:";
    for (int k = 0; k < 3; ++k) {
        detail += fmt(" N=%d %.4f+-%.4f vs %.5f (per-instance wins %d/100);", sizes[k], mean[k],
                      se[k], random_mean[k], beats[k]);
    }
    detail += above_random ? " above random" : " NOT above random";
    detail += non_increasing ? ", non-increasing in N" : ", NOT non-increasing in N";
    return {above_random && non_increasing, detail};
}

// ---------------------------------------------------------------------------

Outcome best_of_blocks_law() {
    std::mt19937_64 rng(6);
    bool pass = true;
    std::string detail;
    for (double p : {0.02, 0.1, 0.3}) {
        for (std::size_t c : {2, 6, 27}) {
            const std::size_t blocks = 4000;
            std::bernoulli_distribution hit(p);
            SampleSet reads;
            reads.records.reserve(blocks * c);
            for (std::size_t r = 0; r < blocks * c; ++r) {
                reads.records.push_back({SpinAssignment{1}, hit(rng) ? -1.0 : 0.0, 0});
            }
            const double got = ground_state_probability(best_of_blocks(reads, c), -1.0);
            const double want = 1 - std::pow(1 - p, static_cast<double>(c));
            const double sigma = std::sqrt(want * (1 - want) / blocks);
            const bool ok = std::abs(got - want) <= 3 * sigma;
            pass = pass && ok;
            if (!ok) detail += fmt(" p=%.2f c=%zu got %.4f want %.4f;", p, c, got, want);
        }
    }
    return {pass, pass ? "9 (p, c) pairs within 3 sigma" : "outside 3 sigma:" + detail};
}

// ---------------------------------------------------------------------------

struct CliRun {
    int code;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

/// Runs the whole pipeline under `root` with the given worker count.
bool pipeline(const fs::path& root, const std::string& workers, std::string& error) {
    const auto s = [&](const fs::path& p) { return (root / p).string(); };
    const std::vector<std::vector<std::string>> steps = {
            {"--workers", workers, "generate", "clique", "--n", "14", "--count", "6", "--seed",
             "21", "--out", s("clique")},
            {"--workers", workers, "generate", "heavyhex", "--cells-x", "2", "--cells-y", "2",
             "--count", "2", "--seed", "5", "--out", s("hex")},
            {"--workers", workers, "bfnull", "--instance", s("clique/instance_0000.inst"),
             "--instance", s("clique/instance_0003.inst"), "--instance",
             s("clique/instance_0005.inst"), "--iterations", "4", "--reads", "500", "--seed",
             "8", "--out", s("bf")},
            {"--workers", workers, "bfnull", "--instance", s("hex/instance_0001.inst"),
             "--iterations", "3", "--reads", "400", "--seed", "2", "--out", s("bfhex")},
            {"exact", "--instance", s("clique/instance_0000.inst"), "--out", s("gs.txt")},
            {"exact", "--instance", s("hex/instance_0001.inst"), "--method", "elim", "--out",
             s("gshex.txt")},
            {"reduce", "--instance", s("hex/instance_0001.inst"), "--out", s("red.inst")},
            {"analyze", "--instance", s("clique/instance_0000.inst"), "--samples",
             s("bf/instance_0000/iter_04.csv"), "--ground-state", s("gs.txt"), "--label",
             "last", "--out", s("rep4.csv")},
            {"analyze", "--instance", s("clique/instance_0000.inst"), "--samples",
             s("bf/instance_0000/iter_01.csv"), "--ground-state", s("gs.txt"), "--label",
             "first", "--block-size", "5", "--out", s("rep1.csv")},
            {"timing", "--preset", "all", "--bfnull-seconds", "0.01", "--out", s("timing.csv")},
            {"report", "--inputs", s("rep1.csv"), "--inputs", s("rep4.csv"), "--title",
             "BF-Null", "--out", s("hist.svg")},
            {"report", "--mode", "scatter", "--inputs", s("rep1.csv"), "--inputs", s("rep4.csv"),
             "--out", s("scatter.svg")},
    };
    for (const auto& step : steps) {
        const auto r = cli(step);
        if (r.code != 0) {
            error = "step '" + step[step[0] == "--workers" ? 2 : 0] + "' exited " +
                    std::to_string(r.code) + ": " + r.err;
            return false;
        }
    }
    return true;
}

Outcome determinism() {
    const auto base = fs::temp_directory_path() / "bfbench_acceptance";
    fs::remove_all(base);
    std::string error;
    if (!pipeline(base / "serial", "1", error) || !pipeline(base / "parallel", "3", error)) {
        return {false, error};
    }
    std::size_t compared = 0;
    std::string differing;
    for (const auto& e : fs::recursive_directory_iterator(base / "serial")) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), base / "serial");
        // manifests hold wall-clock time, the worker count and absolute paths
        if (rel.filename().string().find("manifest.json") != std::string::npos) continue;
        ++compared;
        if (slurp(e.path()) != slurp(base / "parallel" / rel)) differing += " " + rel.string();
    }
    int replays = 0, replay_ok = 0;
    for (const auto& e : fs::recursive_directory_iterator(base / "serial")) {
        if (e.path().filename().string().find("manifest.json") == std::string::npos) continue;
        const bool dir_output = e.path().filename() == "manifest.json";
        const auto target = base / "replay" / std::to_string(replays++);
        const auto out = dir_output ? target : target / "out";
        fs::create_directories(target);
        replay_ok += cli({"replay", "--manifest", e.path().string(), "--out", out.string()}).code ==
                     0;
    }
    const bool pass = differing.empty() && compared > 0 && replay_ok == replays;
    return {pass, fmt("%zu artifacts byte-identical across workers 1 and 3, %d/%d manifests "
                      "replayed to identical checksums",
                      compared, replay_ok, replays) +
                          (differing.empty() ? "" : "; differing:" + differing)};
}

// ---------------------------------------------------------------------------

Outcome throughput() {
    const auto m = gen_clique_ising(29, 1);
    BfConfig c;
    c.iterations = 1;
    c.reads = 1000;
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
        c.seed = rep;
        best = std::min(best, run_bf_null(m, c).wall_clock_seconds);
    }
    return {best <= 1.0, fmt("1000 reads on N=29 in %.4f s (reference hardware class 0.008 s)",
                             best)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
            {1, "timing identities", timing_identities},
            {2, "reduction correctness", reduction_correctness},
            {3, "exact solver equivalence", exact_equivalence},
            {4, "BF-Null behavioural properties", bfnull_properties},
            {5, "p_gs trend over clique sizes", fig1_trend},
            {6, "best-of-blocks law", best_of_blocks_law},
            {7, "determinism", determinism},
            {8, "BF-Null throughput", throughput},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d (%s) [%.2f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    s, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
