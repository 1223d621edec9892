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

#include <map>
#include <string>
#include <vector>

#include "bfbench/model.hpp"

namespace bfbench {

struct SampleRecord {
    SpinAssignment assignment;
    double energy = 0;
    int block_id = 0;  // reads sharing a block are aggregated by best_of_blocks

    friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Ordered reads plus free-form run metadata (seed, solver, iteration, ...).
struct SampleSet {
    std::vector<SampleRecord> records;
    std::map<std::string, std::string> metadata;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }

    std::vector<double> energies() const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(r.energy);
        return out;
    }

    friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

}  // namespace bfbench
