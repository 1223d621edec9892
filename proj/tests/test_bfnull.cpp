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

#include <random>

#include "bfbench/bfnull.hpp"
#include "bfbench/generators.hpp"
#include "catch_amalgamated.hpp"
#include "oracles.hpp"

using Catch::Approx;

namespace bfbench {

TEST_CASE("sweep_subsolve") {
    SECTION("single improving flip") {
        const auto m = ModelBuilder(1).add_linear(0, 1.0).build();
        CHECK(sweep_subsolve(m, SpinAssignment{1}) == SpinAssignment{-1});
    }
    SECTION("ties never flip") {
        const PolynomialModel empty(5, {}, {}, {});
        const auto s = SpinAssignment::from_string("+--+-");
        SweepStats stats;
        CHECK(sweep_subsolve(empty, s, &stats) == s);
        CHECK(stats.flips == 0);
    }
    SECTION("length mismatch") {
        CHECK_THROWS_AS(sweep_subsolve(PolynomialModel(2, {}, {}, {}), SpinAssignment{1}),
                        DimensionError);
    }
    SECTION("matches the full-recompute sweep and counts N+1 states") {
        std::mt19937 rng(1);
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto t = oracle::random_terms(10, seed, 0.5, 0.15);
            const auto m = t.model();
            const auto start = oracle::random_spins(10, rng);
            std::size_t evaluated = 0;
            const auto want = oracle::naive_sweep(t, start, &evaluated);
            SweepStats stats;
            const auto got = sweep_subsolve(m, SpinAssignment(start), &stats);
            CHECK(oracle::spins(got) == want);
            CHECK(stats.candidates == evaluated);
            CHECK(stats.candidates == 11);
            CHECK(oracle::energy(t, want) <= oracle::energy(t, start));
        }
    }
    SECTION("every flip was an improvement when it happened") {
        const auto m = gen_clique_ising(15, 2);
        std::mt19937 rng(2);
        for (int trial = 0; trial < 50; ++trial) {
            const SpinAssignment start(oracle::random_spins(15, rng));
            const auto out = sweep_subsolve(m, start);
            auto replay = start;
            for (index_type k = 0; k < 15; ++k) {
                if (replay[k] != out[k]) {
                    replay.flip(k);
                    // flipping k straight back must not lower the energy
                    CHECK(m.flip_delta(replay, k) > 0.0);
                } else {
                    CHECK(m.flip_delta(replay, k) >= 0.0);
                }
            }
            CHECK(replay == out);
        }
    }
}

TEST_CASE("bias_update") {
    auto make = [](std::vector<std::pair<std::string, double>> rows) {
        SampleSet s;
        for (auto& [a, e] : rows) s.records.push_back({SpinAssignment::from_string(a), e, 0});
        return s;
    };
    SECTION("unanimous best") {
        const auto s = make({{"+-", -3}, {"+-", -3}, {"--", 1}});
        CHECK(bias_update(s, 0.5).values == std::vector<double>{-1.0, 1.0});
    }
    SECTION("averaging two selected samples") {
        const auto s = make({{"++", -2}, {"-+", -1}, {"--", 5}, {"+-", 7}});
        CHECK(bias_update(s, 0.5).values == std::vector<double>{0.0, -1.0});
    }
    SECTION("ties at the boundary go to the earlier read") {
        // selects "++" and the first of the two reads at energy 1
        const auto s = make({{"--", 1}, {"++", 0}, {"+-", 1}});
        CHECK(bias_update(s, 0.5).values == std::vector<double>{0.0, 0.0});
        const auto t = make({{"+-", 1}, {"++", 0}, {"--", 1}});
        CHECK(bias_update(t, 0.5).values == std::vector<double>{-1.0, 0.0});
    }
    SECTION("selection size") {
        CHECK(BfConfig::selection_size(0.02, 100) == 2);
        CHECK(BfConfig::selection_size(0.02, 1000) == 20);
        CHECK(BfConfig::selection_size(0.02, 1) == 1);
        CHECK(BfConfig::selection_size(0.5, 3) == 2);
    }
    SECTION("components stay in [-1, 1]") {
        const auto m = gen_clique_ising(10, 3);
        BfConfig c;
        c.iterations = 3;
        c.reads = 50;
        c.alpha = 0.3;
        const auto r = run_bf_null(m, c);
        for (double v : r.final_bias.values) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
    SECTION("invalid input") {
        CHECK_THROWS_AS(bias_update(SampleSet{}, 0.1), ValidationError);
        CHECK_THROWS_AS(bias_update(make({{"+", 0}}), 0.0), ValidationError);
        CHECK_THROWS_AS(bias_update(make({{"+", 0}}), 1.0), ValidationError);
    }
}

TEST_CASE("run_bf_null") {
    const auto m = gen_clique_ising(12, 9);

    SECTION("shape and stored energies") {
        BfConfig c;
        c.iterations = 4;
        c.reads = 100;
        c.seed = 3;
        const auto r = run_bf_null(m, c);
        REQUIRE(r.per_iteration.size() == 4);
        for (const auto& s : r.per_iteration) {
            REQUIRE(s.size() == 100);
            for (const auto& rec : s.records) CHECK(rec.energy == m.energy(rec.assignment));
        }
        CHECK(r.final_samples() == r.per_iteration.back());
        CHECK(r.stats.candidates == 4u * 100u * 13u);
        CHECK(r.per_iteration[2].metadata.at("iteration") == "3");
    }
    SECTION("first iteration is plain sweeps from random starts") {
        BfConfig c;
        c.iterations = 1;
        c.reads = 64;
        c.seed = 17;
        const auto r = run_bf_null(m, c);
        for (int read = 0; read < c.reads; ++read) {
            auto rng = make_rng(derive_seed(c.seed, 0, read));
            const auto start = random_assignment(12, rng);
            CHECK(r.per_iteration[0].records[read].assignment == sweep_subsolve(m, start));
        }
    }
    SECTION("later iterations sweep the biased model") {
        BfConfig c;
        c.iterations = 2;
        c.reads = 40;
        c.seed = 5;
        const auto r = run_bf_null(m, c);
        const auto bias = bias_update(r.per_iteration[0], c.alpha);
        const auto biased = with_bias(m, bias, c.gamma);
        for (int read = 0; read < c.reads; ++read) {
            auto rng = make_rng(derive_seed(c.seed, 1, read));
            const auto start = random_assignment(12, rng);
            CHECK(r.per_iteration[1].records[read].assignment == sweep_subsolve(biased, start));
        }
    }
    SECTION("deterministic and independent of the worker count") {
        BfConfig c;
        c.iterations = 3;
        c.reads = 257;
        c.seed = 99;
        const auto a = run_bf_null(m, c);
        c.workers = 4;
        const auto b = run_bf_null(m, c);
        CHECK(a.per_iteration == b.per_iteration);
        CHECK(a.final_bias.values == b.final_bias.values);
    }
    SECTION("ranking by biased energy is selectable") {
        BfConfig c;
        c.iterations = 3;
        c.reads = 100;
        c.rank_by_biased = true;
        const auto r = run_bf_null(m, c);
        CHECK(r.per_iteration.back().metadata.at("rank_by") == "biased");
    }
    SECTION("invalid configuration") {
        BfConfig c;
        c.reads = 0;
        CHECK_THROWS_AS(run_bf_null(m, c), ValidationError);
        c = BfConfig{};
        c.alpha = 1.0;
        CHECK_THROWS_AS(run_bf_null(m, c), ValidationError);
        c = BfConfig{};
        c.iterations = 0;
        CHECK_THROWS_AS(run_bf_null(m, c), ValidationError);
    }
    SECTION("one read is a valid run") {
        BfConfig c;
        c.iterations = 2;
        c.reads = 1;
        CHECK(run_bf_null(m, c).per_iteration[1].size() == 1);
    }
}

TEST_CASE("bias field lowers the mean energy on small cliques") {
    int improved = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = gen_clique_ising(12, 1000 + seed);
        BfConfig c;
        c.seed = seed;
        const auto r = run_bf_null(m, c);
        auto mean = [](const SampleSet& s) {
            double sum = 0;
            for (const auto& rec : s.records) sum += rec.energy;
            return sum / s.size();
        };
        if (mean(r.per_iteration.back()) <= mean(r.per_iteration.front())) ++improved;
    }
    CHECK(improved >= 45);
}

}  // namespace bfbench
