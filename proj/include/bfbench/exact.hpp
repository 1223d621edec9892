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
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfbench/errors.hpp"
#include "bfbench/model.hpp"

namespace bfbench {

struct GroundState {
    double energy = 0;
    SpinAssignment assignment;
    bool degenerate = false;  // another assignment is known to attain `energy`
};

struct EliminationOrder {
    std::vector<index_type> order;
    int induced_width = 0;
};

inline constexpr index_type kBruteForceMaxVariables = 30;
inline constexpr int kEliminationMaxWidth = 28;

namespace detail {

inline bool energies_tie(double a, double b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace detail

/// Interaction graph over all quadratic and cubic supports (a cubic term
/// contributes a triangle). Sorted adjacency lists.
inline std::vector<std::vector<index_type>> interaction_graph(const PolynomialModel& model) {
    std::vector<std::vector<index_type>> adj(model.num_variables());
    auto link = [&](index_type a, index_type b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (const auto& t : model.quadratic()) link(t.u, t.v);
    for (const auto& t : model.cubic()) {
        link(t.u, t.v);
        link(t.u, t.w);
        link(t.v, t.w);
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return adj;
}

/// Exhaustive search over all 2^N assignments in Gray-code order.
///
/// Returns the minimum energy and the lexicographically smallest minimizer
/// (with -1 < +1); `degenerate` is set when two or more assignments tie
/// within relative 1e-12.
inline GroundState brute_force(const PolynomialModel& model,
                               index_type max_variables = kBruteForceMaxVariables) {
    const index_type n = model.num_variables();
    if (n > max_variables) {
        throw ResourceError("brute force is limited to " + std::to_string(max_variables) +
                            " variables, model has " + std::to_string(n));
    }
    SpinAssignment s(static_cast<std::size_t>(n));
    GroundState best;
    best.energy = std::numeric_limits<double>::infinity();
    std::size_t ties = 0;

    // The running energy is updated by flip deltas and resynchronized every
    // 1024 steps; candidates near the incumbent are re-evaluated exactly.
    double running = model.energy(s);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 0; i < total; ++i) {
        if (i > 0) {
            const auto k = static_cast<index_type>(std::countr_zero(i));
            running += -2.0 * s[k] * model.local_field(s, k);
            s.flip(k);
            if ((i & 1023) == 0) running = model.energy(s);
        }
        const double slack = 1e-7 * std::max(1.0, std::abs(best.energy));
        if (!(running <= best.energy + slack) && std::isfinite(best.energy)) continue;

        const double e = model.energy(s);
        if (!std::isfinite(best.energy) ||
            (e < best.energy && !detail::energies_tie(e, best.energy))) {
            best.energy = e;
            best.assignment = s;
            ties = 1;
        } else if (detail::energies_tie(e, best.energy)) {
            ++ties;
            if (s < best.assignment) best.assignment = s;
            best.energy = std::min(best.energy, e);
        }
    }
    best.degenerate = ties >= 2;
    return best;
}

namespace detail {

/// Simulates eliminating `order` on the interaction graph; returns the
/// induced width (largest neighbour set at elimination time).
inline int simulate_width(std::vector<std::vector<index_type>> adj,
                          const std::vector<index_type>& order) {
    int width = 0;
    std::vector<char> eliminated(adj.size(), 0);
    for (auto v : order) {
        std::vector<index_type> nb;
        for (auto u : adj[v]) {
            if (!eliminated[u]) nb.push_back(u);
        }
        width = std::max(width, static_cast<int>(nb.size()));
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                auto& la = adj[nb[a]];
                if (!std::binary_search(la.begin(), la.end(), nb[b])) {
                    la.insert(std::lower_bound(la.begin(), la.end(), nb[b]), nb[b]);
                    auto& lb = adj[nb[b]];
                    lb.insert(std::lower_bound(lb.begin(), lb.end(), nb[a]), nb[a]);
                }
            }
        }
        eliminated[v] = 1;
    }
    return width;
}

}  // namespace detail

/// Greedy min-fill elimination order, ties broken by lowest variable index.
inline EliminationOrder min_fill_order(const PolynomialModel& model) {
    const index_type n = model.num_variables();
    auto adj = interaction_graph(model);  // holds only live vertices

    auto fill_of = [&](index_type v) {
        const auto& nb = adj[v];
        std::size_t fill = 0;
        for (std::size_t a = 0; a < nb.size(); ++a) {
            const auto& la = adj[nb[a]];
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                if (!std::binary_search(la.begin(), la.end(), nb[b])) ++fill;
            }
        }
        return fill;
    };

    std::vector<std::size_t> fill(n);
    for (index_type v = 0; v < n; ++v) fill[v] = fill_of(v);
    std::vector<char> eliminated(n, 0);

    EliminationOrder result;
    result.order.reserve(n);
    for (index_type step = 0; step < n; ++step) {
        index_type best = -1;
        for (index_type v = 0; v < n; ++v) {
            if (!eliminated[v] && (best < 0 || fill[v] < fill[best])) best = v;
        }
        const auto nb = adj[best];
        result.induced_width = std::max(result.induced_width, static_cast<int>(nb.size()));
        result.order.push_back(best);
        eliminated[best] = 1;

        for (auto u : nb) {
            auto& lu = adj[u];
            lu.erase(std::lower_bound(lu.begin(), lu.end(), best));
        }
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                auto& la = adj[nb[a]];
                if (!std::binary_search(la.begin(), la.end(), nb[b])) {
                    la.insert(std::lower_bound(la.begin(), la.end(), nb[b]), nb[b]);
                    auto& lb = adj[nb[b]];
                    lb.insert(std::lower_bound(lb.begin(), lb.end(), nb[a]), nb[a]);
                }
            }
        }
        adj[best].clear();

        // only vertices within distance two of `best` can change fill
        std::vector<index_type> touched(nb.begin(), nb.end());
        for (auto u : nb) touched.insert(touched.end(), adj[u].begin(), adj[u].end());
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (auto u : touched) fill[u] = fill_of(u);
    }
    return result;
}

/// Exact minimization by bucket elimination along `order`.
///
/// Every term is a factor over its own variables (cubic terms are 3-ary
/// factors). Eliminating v min-marginalizes the sum of the factors in v's
/// bucket into a new factor over the remaining variables; the assignment is
/// recovered by back-substitution in reverse order, preferring +1 on ties.
/// Memory is 2^width doubles for the largest table.
inline GroundState elimination_solve(const PolynomialModel& model,
                                     const EliminationOrder& order) {
    const index_type n = model.num_variables();
    if (order.order.size() != static_cast<std::size_t>(n)) {
        throw ValidationError("elimination order must list every variable once");
    }
    std::vector<index_type> position(n, -1);
    for (std::size_t p = 0; p < order.order.size(); ++p) {
        const auto v = order.order[p];
        if (v < 0 || v >= n || position[v] >= 0) {
            throw ValidationError("elimination order is not a permutation of the variables");
        }
        position[v] = static_cast<index_type>(p);
    }
    const int width = detail::simulate_width(interaction_graph(model), order.order);
    if (width > kEliminationMaxWidth) {
        throw ResourceError("elimination order has induced width " + std::to_string(width) +
                            ", above the limit of " + std::to_string(kEliminationMaxWidth));
    }

    // Local bit t of a table index is scope[t]; bit value 1 means spin -1.
    struct Factor {
        std::vector<index_type> scope;
        std::vector<double> table;
    };
    std::vector<Factor> factors;
    std::vector<std::vector<std::size_t>> bucket(n);
    std::vector<double> constants;

    auto place = [&](Factor f) {
        if (f.scope.empty()) {
            constants.push_back(f.table[0]);
            return;
        }
        const auto first = *std::min_element(
                f.scope.begin(), f.scope.end(),
                [&](index_type a, index_type b) { return position[a] < position[b]; });
        bucket[first].push_back(factors.size());
        factors.push_back(std::move(f));
    };
    auto parity_factor = [](std::vector<index_type> scope, double bias) {
        Factor f{std::move(scope), {}};
        f.table.resize(std::size_t{1} << f.scope.size());
        for (std::size_t x = 0; x < f.table.size(); ++x) {
            f.table[x] = (std::popcount(x) % 2) ? -bias : bias;
        }
        return f;
    };
    for (const auto& t : model.linear()) place(parity_factor({t.u}, t.bias));
    for (const auto& t : model.quadratic()) place(parity_factor({t.u, t.v}, t.bias));
    for (const auto& t : model.cubic()) place(parity_factor({t.u, t.v, t.w}, t.bias));

    for (const auto v : order.order) {
        const auto ids = bucket[v];  // copy: place() may grow other buckets
        if (ids.empty()) continue;

        // union scope with v in bit 0
        std::vector<index_type> scope{v};
        for (auto id : ids) {
            for (auto u : factors[id].scope) {
                if (u != v) scope.push_back(u);
            }
        }
        std::sort(scope.begin() + 1, scope.end());
        scope.erase(std::unique(scope.begin() + 1, scope.end()), scope.end());
        const auto bits = scope.size();

        // per factor, the index change when the joint counter moves from
        // x to x + 1 with ctz(x + 1) == t
        std::vector<std::vector<std::int64_t>> step(ids.size(),
                                                    std::vector<std::int64_t>(bits, 0));
        for (std::size_t f = 0; f < ids.size(); ++f) {
            const auto& fs = factors[ids[f]].scope;
            std::vector<std::int64_t> weight(bits, 0);
            for (std::size_t t = 0; t < fs.size(); ++t) {
                const auto p = static_cast<std::size_t>(
                        std::find(scope.begin(), scope.end(), fs[t]) - scope.begin());
                weight[p] = std::int64_t{1} << t;
            }
            std::int64_t prefix = 0;
            for (std::size_t p = 0; p < bits; ++p) {
                step[f][p] = weight[p] - prefix;
                prefix += weight[p];
            }
        }

        Factor out{std::vector<index_type>(scope.begin() + 1, scope.end()), {}};
        out.table.assign(std::size_t{1} << (bits - 1), 0.0);
        std::vector<std::int64_t> idx(ids.size(), 0);
        const std::uint64_t total = std::uint64_t{1} << bits;
        for (std::uint64_t x = 0; x < total; ++x) {
            if (x > 0) {
                const auto t = static_cast<std::size_t>(std::countr_zero(x));
                for (std::size_t f = 0; f < ids.size(); ++f) idx[f] += step[f][t];
            }
            double sum = 0;
            for (std::size_t f = 0; f < ids.size(); ++f) {
                sum += factors[ids[f]].table[static_cast<std::size_t>(idx[f])];
            }
            auto& slot = out.table[x >> 1];
            slot = (x & 1) ? std::min(slot, sum) : sum;
        }
        place(std::move(out));
    }

    // back-substitution
    std::vector<std::uint8_t> bit(n, 0);
    bool degenerate = false;
    for (auto it = order.order.rbegin(); it != order.order.rend(); ++it) {
        const auto v = *it;
        double value[2] = {0.0, 0.0};
        for (int b = 0; b < 2; ++b) {
            bit[v] = static_cast<std::uint8_t>(b);
            for (auto id : bucket[v]) {
                const auto& f = factors[id];
                std::size_t x = 0;
                for (std::size_t t = 0; t < f.scope.size(); ++t) {
                    x |= std::size_t{bit[f.scope[t]]} << t;
                }
                value[b] += f.table[x];
            }
        }
        if (detail::energies_tie(value[0], value[1])) {
            degenerate = true;
            bit[v] = 0;
        } else {
            bit[v] = value[1] < value[0] ? 1 : 0;
        }
    }

    GroundState gs;
    gs.assignment = SpinAssignment(static_cast<std::size_t>(n));
    for (index_type v = 0; v < n; ++v) {
        if (bit[v]) gs.assignment.flip(v);
    }
    gs.energy = model.energy(gs.assignment);
    gs.degenerate = degenerate;

    const double eliminated = std::accumulate(constants.begin(), constants.end(), 0.0);
    if (std::abs(eliminated - gs.energy) > 1e-9 * std::max(1.0, std::abs(gs.energy))) {
        throw std::logic_error("elimination minimum and recovered assignment disagree");
    }
    return gs;
}

inline GroundState elimination_solve(const PolynomialModel& model) {
    return elimination_solve(model, min_fill_order(model));
}

enum class ExactMethod { automatic, brute, elimination };

/// Largest N for which ExactMethod::automatic uses brute force.
inline constexpr index_type kAutoBruteForceLimit = 22;

inline GroundState solve_exact(const PolynomialModel& model,
                               ExactMethod method = ExactMethod::automatic) {
    switch (method) {
        case ExactMethod::brute:
            return brute_force(model);
        case ExactMethod::elimination:
            return elimination_solve(model);
        case ExactMethod::automatic:
            break;
    }
    return model.num_variables() <= kAutoBruteForceLimit ? brute_force(model)
                                                          : elimination_solve(model);
}

}  // namespace bfbench
