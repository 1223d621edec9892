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

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "bfbench/errors.hpp"

namespace bfbench {

// All results are in seconds.

/// Quantum-annealer access time: one programming plus per-read anneal,
/// readout and inter-read delay.
struct AnnealerTiming {
    double programming_ms = 35.0;
    double anneal_us = 500.0;
    double readout_us = 98.0;
    double delay_us = 60.0;
    long reads = 1000;
};

inline double qpu_access_time(const AnnealerTiming& t) {
    if (t.programming_ms < 0 || t.anneal_us < 0 || t.readout_us < 0 || t.delay_us < 0) {
        throw ValidationError("annealer times must be non-negative");
    }
    if (t.reads < 1) throw ValidationError("annealer reads must be >= 1");
    return t.programming_ms / 1e3 +
           static_cast<double>(t.reads) * (t.anneal_us + t.readout_us + t.delay_us) / 1e6;
}

/// Rule-of-thumb quantum time for IBM workloads: 2 s + 0.35 ms per
/// execution, repeated per iteration.
inline double ibm_workload_time(long reads, long iterations) {
    if (reads < 1 || iterations < 1) {
        throw ValidationError("reads and iterations must be >= 1");
    }
    return static_cast<double>(iterations) * (2.0 + 0.00035 * static_cast<double>(reads));
}

enum class GateFlavor { ibm_workload, per_gate };

inline std::string to_string(GateFlavor f) {
    return f == GateFlavor::per_gate ? "per_gate" : "ibm_workload";
}

struct GateModelTiming {
    GateFlavor flavor = GateFlavor::per_gate;
    double per_gate_us = 970.0;  // per_gate flavor only
    long shots = 1000;
    long iterations = 10;
    long depth = 10;  // per_gate flavor only
};

/// Per-gate estimate: gate time x shots x iterations x circuit depth.
inline double per_gate_time(const GateModelTiming& g) {
    if (g.flavor != GateFlavor::per_gate) {
        throw UsageError("per_gate_time needs a per_gate timing record");
    }
    if (!(g.per_gate_us > 0) || g.shots < 1 || g.iterations < 1 || g.depth < 1) {
        throw ValidationError("per-gate time, shots, iterations and depth must be positive");
    }
    return g.per_gate_us / 1e6 * static_cast<double>(g.shots) *
           static_cast<double>(g.iterations) * static_cast<double>(g.depth);
}

inline double gate_model_time(const GateModelTiming& g) {
    return g.flavor == GateFlavor::per_gate ? per_gate_time(g)
                                            : ibm_workload_time(g.shots, g.iterations);
}

inline double speedup_ratio(double t_other, double t_ref) {
    if (!(t_ref > 0.0)) throw ValidationError("reference time must be positive");
    return t_other / t_ref;
}

/// The three benchmark configurations with their reference BF-Null runtime
/// (seconds for 1000 reads on the original hardware; informational only).
struct TimingPreset {
    std::string_view name;
    std::string_view experiment;
    AnnealerTiming annealer;
    GateModelTiming gate;
    double reference_bfnull_s;
};

inline constexpr std::array<TimingPreset, 3> kTimingPresets{{
        {"ising-fig1", "Ising, clique ensembles N=10..20",
         {35.0, 500.0, 98.0, 60.0, 1000},
         {GateFlavor::per_gate, 970.0, 1000, 10, 10}, 0.008},
        {"ising-fig23", "Ising, N=29 clique, 39 iterations",
         {35.0, 500.0, 98.0, 60.0, 1000},
         {GateFlavor::per_gate, 970.0, 1000, 39, 10}, 0.067},
        {"hising-fig4", "Hising, 156-node heavy-hex",
         {35.0, 350.0, 98.0, 60.0, 1000},
         {GateFlavor::ibm_workload, 0.0, 1000, 10, 1}, 0.032},
}};

inline const TimingPreset& timing_preset(std::string_view name) {
    for (const auto& p : kTimingPresets) {
        if (p.name == name) return p;
    }
    throw UsageError("unknown timing preset '" + std::string(name) +
                     "' (expected ising-fig1, ising-fig23 or hising-fig4)");
}

}  // namespace bfbench
