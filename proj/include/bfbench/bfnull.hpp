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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "bfbench/errors.hpp"
#include "bfbench/format.hpp"
#include "bfbench/model.hpp"
#include "bfbench/random.hpp"
#include "bfbench/sample_set.hpp"

namespace bfbench {

/// Parameters of the bias-field null-hypothesis loop.
struct BfConfig {
    int iterations = 10;   // b, number of bias-field updates
    int reads = 1000;      // R
    double alpha = 0.02;   // fraction of best reads averaged into the bias
    double gamma = 3.0;    // bias-field weight
    std::uint64_t seed = 0;
    bool rank_by_biased = false;  // rank the alpha-best by E' instead of E
    int workers = 1;              // threads per iteration; does not change results

    /// ceil(alpha * R), never less than one read.
    std::size_t selection_size() const noexcept { return selection_size(alpha, reads); }

    static std::size_t selection_size(double alpha, std::size_t reads) noexcept {
        // shave a few ulps so that e.g. 0.02 * 100 selects 2, not 3
        const auto k = static_cast<std::size_t>(
                std::ceil(alpha * static_cast<double>(reads) * (1.0 - 1e-12)));
        return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(reads, 1));
    }

    void validate() const {
        if (iterations < 1) throw ValidationError("iterations must be >= 1");
        if (reads < 1) throw ValidationError("reads must be >= 1");
        if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
        if (!std::isfinite(gamma)) throw ValidationError("gamma must be finite");
        if (workers < 1) throw ValidationError("workers must be >= 1");
    }
};

struct SweepStats {
    std::size_t candidates = 0;  // states whose energy was compared, start state included
    std::size_t flips = 0;
};

inline SpinAssignment random_assignment(std::size_t n, Rng& rng) {
    SpinAssignment s(n);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) bits = rng();
        if (bits & 1) s.flip(i);
        bits >>= 1;
    }
    return s;
}

/// One zero-temperature sweep: visit variables in ascending order and flip
/// each one whose flip strictly lowers the energy. O(N + M + K).
inline SpinAssignment sweep_subsolve(const PolynomialModel& model, SpinAssignment s,
                                     SweepStats* stats = nullptr) {
    if (s.size() != static_cast<std::size_t>(model.num_variables())) {
        throw DimensionError("start state length does not match the model");
    }
    std::size_t flips = 0;
    for (index_type k = 0; k < model.num_variables(); ++k) {
        const double delta = -2.0 * s[k] * model.local_field(s, k);
        if (delta < 0.0) {
            s.flip(k);
            ++flips;
        }
    }
    if (stats) {
        stats->candidates += static_cast<std::size_t>(model.num_variables()) + 1;
        stats->flips += flips;
    }
    return s;
}

/// B = -<s>_alpha over records ranked by `scores` (lower is better, ties
/// broken by record order).
inline BiasField bias_update(std::span<const SampleRecord> records,
                             std::span<const double> scores, double alpha) {
    if (records.empty()) throw ValidationError("bias update needs at least one sample");
    if (scores.size() != records.size()) {
        throw DimensionError("one ranking score per record is required");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto k = BfConfig::selection_size(alpha, records.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                      order.end(), [&](std::size_t a, std::size_t b) {
                          return scores[a] < scores[b] || (scores[a] == scores[b] && a < b);
                      });

    const auto n = records[0].assignment.size();
    std::vector<double> sum(n, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
        const auto& s = records[order[r]].assignment;
        if (s.size() != n) throw DimensionError("samples have inconsistent lengths");
        for (std::size_t i = 0; i < n; ++i) sum[i] += s[i];
    }
    BiasField bias(n);
    for (std::size_t i = 0; i < n; ++i) bias.values[i] = -sum[i] / static_cast<double>(k);
    return bias;
}

/// Ranks by the stored record energies.
inline BiasField bias_update(const SampleSet& samples, double alpha) {
    if (samples.empty()) throw ValidationError("bias update needs at least one sample");
    const auto scores = samples.energies();
    return bias_update(samples.records, scores, alpha);
}

struct BfRunResult {
    std::vector<SampleSet> per_iteration;
    BiasField final_bias;
    double wall_clock_seconds = 0;
    SweepStats stats;

    const SampleSet& final_samples() const { return per_iteration.back(); }
};

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const auto w = static_cast<std::size_t>(std::max(1, workers));
    if (w == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> threads;
    const auto chunk = (count + w - 1) / w;
    for (std::size_t t = 0; t < w; ++t) {
        const auto begin = t * chunk;
        const auto end = std::min(count, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
}

}  // namespace detail

/// Runs the bias-field loop with the single-sweep subsolver.
///
/// Iteration i sweeps R uniform random starts under E' = E + gamma B.s and
/// records each result with its unbiased energy E. B starts at zero and is
/// replaced by -<s>_alpha after every iteration. Read r of iteration i draws
/// its start from derive_seed(seed, i, r), so results do not depend on the
/// worker count.
inline BfRunResult run_bf_null(const PolynomialModel& model, const BfConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto n = static_cast<std::size_t>(model.num_variables());
    const auto reads = static_cast<std::size_t>(config.reads);

    BfRunResult result;
    result.per_iteration.reserve(config.iterations);
    BiasField bias(n);

    for (int it = 0; it < config.iterations; ++it) {
        const auto biased = with_bias(model, bias, config.gamma);

        SampleSet samples;
        samples.records.resize(reads);
        std::vector<double> biased_energy(config.rank_by_biased ? reads : 0);
        std::vector<SweepStats> stats(reads);
        detail::parallel_for(reads, config.workers, [&](std::size_t r) {
            auto rng = make_rng(derive_seed(config.seed, it, r));
            auto s = sweep_subsolve(biased, random_assignment(n, rng), &stats[r]);
            if (config.rank_by_biased) biased_energy[r] = biased.energy(s);
            samples.records[r].energy = model.energy(s);
            samples.records[r].assignment = std::move(s);
        });
        for (const auto& st : stats) {
            result.stats.candidates += st.candidates;
            result.stats.flips += st.flips;
        }

        bias = config.rank_by_biased
                       ? bias_update(samples.records, biased_energy, config.alpha)
                       : bias_update(samples, config.alpha);

        samples.metadata = {
                {"solver", "bfnull"},
                {"iteration", std::to_string(it + 1)},
                {"iterations", std::to_string(config.iterations)},
                {"reads", std::to_string(config.reads)},
                {"alpha", format_short(config.alpha)},
                {"gamma", format_short(config.gamma)},
                {"seed", std::to_string(config.seed)},
                {"rank_by", config.rank_by_biased ? "biased" : "original"},
        };
        result.per_iteration.push_back(std::move(samples));
    }
    result.final_bias = std::move(bias);
    result.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace bfbench
