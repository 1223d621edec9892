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
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bfbench/errors.hpp"
#include "bfbench/sample_set.hpp"

namespace bfbench {

inline constexpr double kGroundStateTolerance = 1e-9;

/// Upper end of the histogram range; larger relative errors land in the last bin.
inline constexpr double kHistogramMaxRelativeError = 2.0;

/// (e - e_gs) / |e_gs|. Zero at optimality, one at e = 0 when e_gs < 0.
inline double relative_error(double e, double e_gs) {
    if (e_gs == 0.0) {
        throw ValidationError("relative error is undefined for a zero ground-state energy");
    }
    return (e - e_gs) / std::abs(e_gs);
}

/// Fraction of records with energy <= e_gs + tol |e_gs|.
inline double ground_state_probability(const SampleSet& samples, double e_gs,
                                       double tol = kGroundStateTolerance) {
    if (samples.empty()) throw ValidationError("ground-state probability of an empty sample set");
    if (!(tol >= 0.0)) throw ValidationError("tolerance must be >= 0");
    const double threshold = e_gs + tol * std::abs(e_gs);
    const auto hits = std::count_if(samples.records.begin(), samples.records.end(),
                                    [&](const SampleRecord& r) { return r.energy <= threshold; });
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

/// Keeps the lowest-energy record of every consecutive block of `block_size`
/// reads (first one on ties), i.e. the best of c parallel copies per read.
inline SampleSet best_of_blocks(const SampleSet& samples, std::size_t block_size) {
    if (block_size < 1) throw ValidationError("block size must be >= 1");
    if (samples.size() % block_size != 0) {
        throw DimensionError(std::to_string(samples.size()) +
                             " records do not split into blocks of " +
                             std::to_string(block_size));
    }
    SampleSet out;
    out.metadata = samples.metadata;
    out.metadata["block_size"] = std::to_string(block_size);
    const auto blocks = samples.size() / block_size;
    out.records.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const auto first = samples.records.begin() + static_cast<std::ptrdiff_t>(b * block_size);
        const auto best = std::min_element(
                first, first + static_cast<std::ptrdiff_t>(block_size),
                [](const SampleRecord& x, const SampleRecord& y) { return x.energy < y.energy; });
        out.records.push_back(*best);
        out.records.back().block_id = static_cast<int>(b);
    }
    return out;
}

struct HistogramBin {
    double low = 0;
    double high = 0;
    std::size_t count = 0;

    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

struct QualityReport {
    std::vector<double> relative_errors;
    double e_gs = 0;
    double p_gs = 0;
    double mean_re = 0;
    double min_re = 0;
    double max_re = 0;
    std::vector<HistogramBin> histogram;
};

/// Equal-width histogram of `values` over [0, high]; values below 0 go to the
/// first bin and values above `high` to the last.
inline std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins,
                                           double high) {
    if (bins < 1) throw ValidationError("histogram needs at least one bin");
    if (!(high > 0.0)) high = 1.0;
    std::vector<HistogramBin> out(bins);
    const double width = high / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].low = width * static_cast<double>(b);
        out[b].high = b + 1 == bins ? high : width * static_cast<double>(b + 1);
    }
    for (double v : values) {
        std::size_t b = 0;
        if (v > 0.0) {
            b = std::min(bins - 1, static_cast<std::size_t>(std::floor(v / width)));
        }
        ++out[b].count;
    }
    return out;
}

/// Relative errors, ground-state probability and an RE histogram over
/// [0, min(max RE, 2)]. Pass `range_high` to force a common range.
inline QualityReport summarize(const SampleSet& samples, double e_gs, std::size_t bins = 20,
                               double tol = kGroundStateTolerance,
                               std::optional<double> range_high = std::nullopt) {
    if (bins < 1) throw ValidationError("histogram needs at least one bin");
    if (samples.empty()) throw ValidationError("no samples to summarize");
    QualityReport report;
    report.e_gs = e_gs;
    report.p_gs = ground_state_probability(samples, e_gs, tol);
    report.relative_errors.reserve(samples.size());
    for (const auto& r : samples.records) {
        report.relative_errors.push_back(relative_error(r.energy, e_gs));
    }
    const auto& re = report.relative_errors;
    double sum = 0;
    for (double v : re) sum += v;
    report.mean_re = sum / static_cast<double>(re.size());
    report.min_re = *std::min_element(re.begin(), re.end());
    report.max_re = *std::max_element(re.begin(), re.end());
    const double high =
            range_high.value_or(std::min(report.max_re, kHistogramMaxRelativeError));
    report.histogram = histogram(re, bins, high);
    return report;
}

}  // namespace bfbench
