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

// Generate a small heavy-hex instance, solve it exactly, run BF-Null and
// report how often the null model reaches the ground state.

#include <iostream>

#include "bfbench/bfbench.hpp"

int main() {
    using namespace bfbench;

    const auto graph = gen_heavy_hex(1, 1);
    const auto model = gen_heavy_hex_hising(graph, 7);
    const auto gs = solve_exact(model);

    BfConfig config;
    config.iterations = 5;
    config.reads = 200;
    config.gamma = 2;
    config.seed = 11;
    const auto result = run_bf_null(model, config);

    std::cout << "nodes " << model.num_variables() << ", cubic terms " << model.num_cubic()
              << ", e_gs " << gs.energy << '\n';
    for (std::size_t it = 0; it < result.per_iteration.size(); ++it) {
        const auto report = summarize(result.per_iteration[it], gs.energy);
        std::cout << "iteration " << it + 1 << ": p_gs " << report.p_gs << ", mean RE "
                  << report.mean_re << '\n';
    }

    const auto rmap = quadratize(model);
    std::cout << "quadratized with " << rmap.num_auxiliary() << " auxiliary variables\n";
    return 0;
}
