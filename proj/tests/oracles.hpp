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

// Independent reference implementations used as test oracles. Everything here
// works on plain maps and full re-evaluation, never on the library's
// incidence index or incremental updates.

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "bfbench/model.hpp"

namespace oracle {

struct Terms {
    int n = 0;
    std::map<int, double> h;
    std::map<std::pair<int, int>, double> J;
    std::map<std::tuple<int, int, int>, double> K;

    bfbench::PolynomialModel model() const {
        bfbench::ModelBuilder b(n);
        for (auto [i, v] : h) b.add_linear(i, v);
        for (auto [k, v] : J) b.add_quadratic(k.first, k.second, v);
        for (auto [k, v] : K) b.add_cubic(std::get<0>(k), std::get<1>(k), std::get<2>(k), v);
        return b.build();
    }
};

inline Terms terms_of(const bfbench::PolynomialModel& m) {
    Terms t;
    t.n = m.num_variables();
    for (const auto& x : m.linear()) t.h[x.u] += x.bias;
    for (const auto& x : m.quadratic()) t.J[{x.u, x.v}] += x.bias;
    for (const auto& x : m.cubic()) t.K[{x.u, x.v, x.w}] += x.bias;
    return t;
}

inline double energy(const Terms& t, const std::vector<int>& s) {
    double e = 0;
    for (auto [i, v] : t.h) e += v * s[i];
    for (auto [k, v] : t.J) e += v * s[k.first] * s[k.second];
    for (auto [k, v] : t.K) e += v * s[std::get<0>(k)] * s[std::get<1>(k)] * s[std::get<2>(k)];
    return e;
}

inline std::vector<int> spins(const bfbench::SpinAssignment& a) {
    return std::vector<int>(a.values().begin(), a.values().end());
}

inline double energy(const Terms& t, const bfbench::SpinAssignment& a) {
    return energy(t, spins(a));
}

/// Assignment number `code`: bit i set means spin i is -1.
inline std::vector<int> decode(std::uint64_t code, int n) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = (code >> i) & 1 ? -1 : 1;
    return s;
}

struct Minimum {
    double energy = std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> minimizers;  // all within 1e-9 relative
};

template <class EnergyFn>
Minimum exhaustive_minimum(int n, EnergyFn&& f) {
    std::vector<double> all(std::size_t{1} << n);
    Minimum m;
    for (std::uint64_t c = 0; c < all.size(); ++c) {
        all[c] = f(decode(c, n));
        m.energy = std::min(m.energy, all[c]);
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(m.energy));
    for (std::uint64_t c = 0; c < all.size(); ++c) {
        if (all[c] <= m.energy + tol) m.minimizers.push_back(decode(c, n));
    }
    return m;
}

inline Minimum exhaustive_minimum(const Terms& t) {
    return exhaustive_minimum(t.n, [&](const std::vector<int>& s) { return energy(t, s); });
}

/// Single ascending sweep that evaluates the full energy before and after
/// every tentative flip.
inline std::vector<int> naive_sweep(const Terms& t, std::vector<int> s,
                                    std::size_t* states_evaluated = nullptr) {
    double current = energy(t, s);
    std::size_t evaluated = 1;
    for (int k = 0; k < t.n; ++k) {
        s[k] = -s[k];
        const double trial = energy(t, s);
        ++evaluated;
        if (trial < current) {
            current = trial;
        } else {
            s[k] = -s[k];
        }
    }
    if (states_evaluated) *states_evaluated = evaluated;
    return s;
}

/// Every 3-subset of nodes whose induced edges contain a path of length 2.
inline std::vector<std::array<int, 3>> brute_force_triples(
        int n, const std::vector<std::pair<int, int>>& edges) {
    std::set<std::pair<int, int>> e;
    for (auto [u, v] : edges) e.insert({std::min(u, v), std::max(u, v)});
    auto has = [&](int a, int b) { return e.count({std::min(a, b), std::max(a, b)}) > 0; };
    std::vector<std::array<int, 3>> out;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const int m = has(i, j) + has(i, k) + has(j, k);
                if (m >= 2) out.push_back({i, j, k});
            }
        }
    }
    return out;
}

/// Length of the shortest cycle, or max int for forests.
inline int girth(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    int best = std::numeric_limits<int>::max();
    for (int root = 0; root < n; ++root) {
        std::vector<int> dist(n, -1), parent(n, -1);
        std::queue<int> q;
        dist[root] = 0;
        q.push(root);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : adj[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    q.push(w);
                } else if (parent[u] != w) {
                    best = std::min(best, dist[u] + dist[w] + 1);
                }
            }
        }
    }
    return best;
}

/// Random model with Gaussian coefficients; each possible term is present with
/// the given probability.
inline Terms random_terms(int n, std::uint64_t seed, double p_quad = 0.5, double p_cubic = 0.0,
                          int max_cubic = std::numeric_limits<int>::max()) {
    std::mt19937 rng(static_cast<std::uint32_t>(seed * 2654435761u + 17));
    std::normal_distribution<double> normal;
    std::bernoulli_distribution quad(p_quad), cubic(p_cubic);
    Terms t;
    t.n = n;
    for (int i = 0; i < n; ++i) t.h[i] = normal(rng);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (quad(rng)) t.J[{i, j}] = normal(rng);
        }
    }
    int placed = 0;
    for (int i = 0; i < n && placed < max_cubic; ++i) {
        for (int j = i + 1; j < n && placed < max_cubic; ++j) {
            for (int k = j + 1; k < n && placed < max_cubic; ++k) {
                if (cubic(rng)) {
                    t.K[{i, j, k}] = normal(rng);
                    ++placed;
                }
            }
        }
    }
    return t;
}

inline std::vector<int> random_spins(int n, std::mt19937& rng) {
    std::vector<int> s(n);
    for (auto& v : s) v = (rng() & 1) ? 1 : -1;
    return s;
}

}  // namespace oracle
