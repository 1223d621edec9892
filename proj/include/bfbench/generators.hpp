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
#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "bfbench/errors.hpp"
#include "bfbench/model.hpp"
#include "bfbench/random.hpp"

namespace bfbench {

/// Cell arrangement of a generated heavy-hex lattice.
///
/// The lattice is laid out the way IBM draws its devices: `cells_y + 1`
/// horizontal chains of qubits joined by degree-2 connector nodes. Between
/// chains r and r+1 there are `cells_x + 1` connectors spaced four columns
/// apart, and the connector columns shift by two on alternate gaps, so every
/// face is a hexagon whose six edges each carry one extra node (a 12-cycle).
/// `row_tail` appends dangling nodes to the end of every chain.
struct HeavyHexLayout {
    int cells_x = 1;
    int cells_y = 1;
    int row_tail = 0;

    friend bool operator==(const HeavyHexLayout&, const HeavyHexLayout&) = default;
};

/// The 156-node layout: 8 chains of 16 qubits and 7 x 4 connectors, the
/// arrangement of IBM's Heron r2 processors.
inline constexpr HeavyHexLayout kDefaultHeavyHexLayout{3, 7, 1};

struct HeavyHexGraph {
    using Edge = std::pair<index_type, index_type>;

    index_type num_nodes = 0;
    std::vector<Edge> edges;  // sorted, each with first < second
    std::optional<HeavyHexLayout> layout;  // empty for graphs loaded from an edge list

    bool is_explicit() const noexcept { return !layout.has_value(); }

    std::vector<std::vector<index_type>> adjacency() const {
        std::vector<std::vector<index_type>> adj(num_nodes);
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        for (auto& a : adj) std::sort(a.begin(), a.end());
        return adj;
    }

    int max_degree() const {
        std::vector<int> deg(num_nodes, 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    }

    bool is_connected() const {
        if (num_nodes == 0) return true;
        const auto adj = adjacency();
        std::vector<char> seen(num_nodes, 0);
        std::queue<index_type> queue;
        queue.push(0);
        seen[0] = 1;
        index_type count = 1;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop();
            for (auto v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    queue.push(v);
                }
            }
        }
        return count == num_nodes;
    }

    /// Validates a simple undirected graph and canonicalizes edge order.
    static HeavyHexGraph from_edges(index_type num_nodes, std::vector<Edge> edges) {
        if (num_nodes < 0) throw ValidationError("negative node count");
        for (auto& [u, v] : edges) {
            if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) {
                throw ValidationError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                      ") references a node outside [0, " +
                                      std::to_string(num_nodes) + ")");
            }
            if (u == v) throw ValidationError("self-loop on node " + std::to_string(u));
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
            throw ValidationError("duplicate edge in graph");
        }
        HeavyHexGraph g;
        g.num_nodes = num_nodes;
        g.edges = std::move(edges);
        return g;
    }
};

/// Builds the heavy-hex lattice for `layout`. See HeavyHexLayout.
inline HeavyHexGraph gen_heavy_hex(HeavyHexLayout layout) {
    if (layout.cells_x < 1 || layout.cells_y < 1) {
        throw ValidationError("heavy-hex layout needs cells_x >= 1 and cells_y >= 1");
    }
    if (layout.row_tail < 0) throw ValidationError("row_tail must be >= 0");

    const int rows = layout.cells_y + 1;
    const int width = 4 * layout.cells_x + 1 + (layout.cells_y >= 2 ? 2 : 0) + layout.row_tail;
    const int connectors = layout.cells_x + 1;

    // Node numbering follows the device convention: chain r, then the
    // connectors below it, then chain r + 1, ...
    std::vector<index_type> row_start(rows);
    index_type next = 0;
    std::vector<HeavyHexGraph::Edge> edges;
    std::vector<std::vector<index_type>> connector_ids(rows - 1);
    for (int r = 0; r < rows; ++r) {
        row_start[r] = next;
        for (int c = 0; c + 1 < width; ++c) edges.emplace_back(next + c, next + c + 1);
        next += width;
        if (r + 1 < rows) {
            for (int m = 0; m < connectors; ++m) connector_ids[r].push_back(next++);
        }
    }
    for (int g = 0; g + 1 < rows; ++g) {
        const int offset = 2 * (g % 2);
        for (int m = 0; m < connectors; ++m) {
            const int column = 4 * m + offset;
            const auto id = connector_ids[g][m];
            edges.emplace_back(row_start[g] + column, id);
            edges.emplace_back(row_start[g + 1] + column, id);
        }
    }

    auto graph = HeavyHexGraph::from_edges(next, std::move(edges));
    graph.layout = layout;
    return graph;
}

inline HeavyHexGraph gen_heavy_hex(int cells_x, int cells_y, int row_tail = 0) {
    return gen_heavy_hex(HeavyHexLayout{cells_x, cells_y, row_tail});
}

inline HeavyHexGraph default_heavy_hex() { return gen_heavy_hex(kDefaultHeavyHexLayout); }

using Triple = std::tuple<index_type, index_type, index_type>;

/// Every node set {i, j, k} that is a simple path of two edges in `g`,
/// canonicalized to i < j < k, sorted and listed once.
inline std::vector<Triple> enumerate_cubic_paths(const HeavyHexGraph& g) {
    const auto adj = g.adjacency();
    std::vector<Triple> out;
    for (index_type center = 0; center < g.num_nodes; ++center) {
        const auto& nb = adj[center];
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                std::array<index_type, 3> key{nb[a], nb[b], center};
                std::sort(key.begin(), key.end());
                out.emplace_back(key[0], key[1], key[2]);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Fully connected Ising model with i.i.d. standard normal h_i and J_ij.
/// Draw order: h_0..h_{n-1}, then J_ij in lexicographic (i, j) order.
inline PolynomialModel gen_clique_ising(index_type n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("clique instance needs n >= 1 (empty model requested)");
    auto rng = make_rng(seed);
    std::vector<LinearTerm> linear;
    std::vector<QuadraticTerm> quadratic;
    linear.reserve(n);
    quadratic.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (index_type i = 0; i < n; ++i) linear.push_back({i, standard_normal(rng)});
    for (index_type i = 0; i < n; ++i) {
        for (index_type j = i + 1; j < n; ++j) quadratic.push_back({i, j, standard_normal(rng)});
    }
    return PolynomialModel(n, std::move(linear), std::move(quadratic), {});
}

/// Cubic hising model on `g`: one standard normal term per node, per edge and
/// per two-edge path. Draw order: nodes, sorted edges, sorted triples.
inline PolynomialModel gen_heavy_hex_hising(const HeavyHexGraph& g, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::vector<LinearTerm> linear;
    std::vector<QuadraticTerm> quadratic;
    std::vector<CubicTerm> cubic;
    for (index_type i = 0; i < g.num_nodes; ++i) linear.push_back({i, standard_normal(rng)});
    for (auto [u, v] : g.edges) quadratic.push_back({u, v, standard_normal(rng)});
    for (auto [u, v, w] : enumerate_cubic_paths(g)) {
        cubic.push_back({u, v, w, standard_normal(rng)});
    }
    return PolynomialModel(g.num_nodes, std::move(linear), std::move(quadratic),
                           std::move(cubic));
}

enum class EnsembleClass { clique_ising, heavy_hex_hising };

inline std::string to_string(EnsembleClass c) {
    return c == EnsembleClass::clique_ising ? "clique_ising" : "heavy_hex_hising";
}

/// A seeded family of instances; instance i is drawn with seed base_seed + i.
struct EnsembleSpec {
    EnsembleClass class_tag = EnsembleClass::clique_ising;
    std::variant<index_type, HeavyHexGraph> n_or_graph = index_type{1};
    std::size_t count = 1;
    std::uint64_t base_seed = 0;

    std::uint64_t instance_seed(std::size_t i) const noexcept { return base_seed + i; }

    PolynomialModel instance(std::size_t i) const {
        if (class_tag == EnsembleClass::clique_ising) {
            const auto* n = std::get_if<index_type>(&n_or_graph);
            if (!n) throw UsageError("clique ensembles need a variable count");
            return gen_clique_ising(*n, instance_seed(i));
        }
        const auto* g = std::get_if<HeavyHexGraph>(&n_or_graph);
        if (!g) throw UsageError("heavy-hex ensembles need a graph");
        return gen_heavy_hex_hising(*g, instance_seed(i));
    }
};

inline std::vector<PolynomialModel> generate_ensemble(const EnsembleSpec& spec) {
    if (spec.count < 1) throw ValidationError("ensemble count must be >= 1");
    std::vector<PolynomialModel> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) out.push_back(spec.instance(i));
    return out;
}

}  // namespace bfbench
