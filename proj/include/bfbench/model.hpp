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
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "bfbench/errors.hpp"

namespace bfbench {

using index_type = int;

/// A full assignment of +1/-1 values to N spins.
class SpinAssignment {
 public:
    using value_type = std::int8_t;

    SpinAssignment() = default;

    /// All spins up.
    explicit SpinAssignment(std::size_t n) : values_(n, 1) {}

    template <class Int>
    explicit SpinAssignment(const std::vector<Int>& values) : values_(values.size()) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] != 1 && values[i] != -1) {
                throw ValidationError("spin values must be +1 or -1, got " +
                                      std::to_string(values[i]) + " at index " +
                                      std::to_string(i));
            }
            values_[i] = static_cast<value_type>(values[i]);
        }
    }

    SpinAssignment(std::initializer_list<int> values)
            : SpinAssignment(std::vector<int>(values)) {}

    /// Parse a "+-+-" string.
    static SpinAssignment from_string(std::string_view text) {
        SpinAssignment s;
        s.values_.reserve(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '+') {
                s.values_.push_back(1);
            } else if (text[i] == '-') {
                s.values_.push_back(-1);
            } else {
                throw ValidationError(std::string("invalid spin character '") + text[i] +
                                      "' at position " + std::to_string(i));
            }
        }
        return s;
    }

    std::string to_string() const {
        std::string out(values_.size(), '+');
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] < 0) out[i] = '-';
        }
        return out;
    }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    int operator[](std::size_t i) const noexcept { return values_[i]; }
    int at(std::size_t i) const {
        if (i >= values_.size()) throw DimensionError("spin index out of range");
        return values_[i];
    }

    void flip(std::size_t i) noexcept { values_[i] = static_cast<value_type>(-values_[i]); }
    void set(std::size_t i, int value) noexcept { values_[i] = value < 0 ? -1 : 1; }

    std::span<const value_type> values() const noexcept { return values_; }

    /// Lexicographic order with -1 < +1.
    friend auto operator<=>(const SpinAssignment&, const SpinAssignment&) = default;
    friend bool operator==(const SpinAssignment&, const SpinAssignment&) = default;

 private:
    std::vector<value_type> values_;
};

/// Per-variable linear bias vector B used by the bias-field loop.
struct BiasField {
    std::vector<double> values;

    BiasField() = default;
    explicit BiasField(std::size_t n) : values(n, 0.0) {}
    explicit BiasField(std::vector<double> v) : values(std::move(v)) {}

    std::size_t size() const noexcept { return values.size(); }
    friend bool operator==(const BiasField&, const BiasField&) = default;
};

struct LinearTerm {
    index_type u;
    double bias;
    friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

struct QuadraticTerm {
    index_type u, v;
    double bias;
    friend bool operator==(const QuadraticTerm&, const QuadraticTerm&) = default;
};

struct CubicTerm {
    index_type u, v, w;
    double bias;
    friend bool operator==(const CubicTerm&, const CubicTerm&) = default;
};

/// Energy split by term degree.
struct EnergyParts {
    double linear = 0;
    double quadratic = 0;
    double cubic = 0;

    double total() const noexcept { return linear + quadratic + cubic; }
};

/// Spin Hamiltonian with linear, quadratic and cubic terms,
///
///     E(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + sum_{i<j<k} K_ijk s_i s_j s_k.
///
/// Terms are stored in sorted key order with zero coefficients dropped. The
/// model is immutable; an incidence index from each variable to the terms
/// touching it is built on construction so single-spin flips cost
/// O(degree).
class PolynomialModel {
 public:
    PolynomialModel() = default;

    /// Builds from term lists. Keys must be in range and strictly increasing
    /// within a term; duplicate keys are summed.
    PolynomialModel(index_type num_variables, std::vector<LinearTerm> linear,
                    std::vector<QuadraticTerm> quadratic, std::vector<CubicTerm> cubic)
            : num_variables_(num_variables) {
        if (num_variables < 0) throw ValidationError("number of variables must be >= 0");
        auto check = [&](index_type i) {
            if (i < 0 || i >= num_variables_) {
                throw ValidationError("variable index " + std::to_string(i) +
                                      " out of range [0, " + std::to_string(num_variables_) +
                                      ")");
            }
        };
        for (const auto& t : linear) check(t.u);
        for (const auto& t : quadratic) {
            check(t.u);
            check(t.v);
            if (!(t.u < t.v)) throw ValidationError("quadratic key must satisfy i < j");
        }
        for (const auto& t : cubic) {
            check(t.u);
            check(t.v);
            check(t.w);
            if (!(t.u < t.v && t.v < t.w)) {
                throw ValidationError("cubic key must satisfy i < j < k");
            }
        }
        linear_ = canonicalize(std::move(linear), [](const LinearTerm& t) { return t.u; });
        quadratic_ = canonicalize(std::move(quadratic),
                                  [](const QuadraticTerm& t) { return std::pair(t.u, t.v); });
        cubic_ = canonicalize(std::move(cubic), [](const CubicTerm& t) {
            return std::tuple(t.u, t.v, t.w);
        });
        build_index();
    }

    index_type num_variables() const noexcept { return num_variables_; }
    std::size_t num_linear() const noexcept { return linear_.size(); }
    std::size_t num_quadratic() const noexcept { return quadratic_.size(); }
    std::size_t num_cubic() const noexcept { return cubic_.size(); }
    std::size_t num_terms() const noexcept {
        return linear_.size() + quadratic_.size() + cubic_.size();
    }

    const std::vector<LinearTerm>& linear() const noexcept { return linear_; }
    const std::vector<QuadraticTerm>& quadratic() const noexcept { return quadratic_; }
    const std::vector<CubicTerm>& cubic() const noexcept { return cubic_; }

    /// Linear bias of variable i (0 when absent).
    double linear_bias(index_type i) const {
        check_index(i);
        return field_[i];
    }

    EnergyParts energy_parts(const SpinAssignment& s) const {
        check_length(s);
        EnergyParts e;
        for (const auto& t : linear_) e.linear += t.bias * s[t.u];
        for (const auto& t : quadratic_) e.quadratic += t.bias * (s[t.u] * s[t.v]);
        for (const auto& t : cubic_) e.cubic += t.bias * (s[t.u] * s[t.v] * s[t.w]);
        return e;
    }

    /// Total energy, accumulated in key order (linear, quadratic, cubic).
    double energy(const SpinAssignment& s) const {
        check_length(s);
        double e = 0;
        for (const auto& t : linear_) e += t.bias * s[t.u];
        for (const auto& t : quadratic_) e += t.bias * (s[t.u] * s[t.v]);
        for (const auto& t : cubic_) e += t.bias * (s[t.u] * s[t.v] * s[t.w]);
        return e;
    }

    /// Local field at k: dE/ds_k = h_k + sum J_kj s_j + sum K_kab s_a s_b.
    double local_field(const SpinAssignment& s, index_type k) const noexcept {
        double f = field_[k];
        for (auto p = pair_begin_[k]; p < pair_begin_[k + 1]; ++p) {
            f += pair_adj_[p].bias * s[pair_adj_[p].other];
        }
        for (auto p = triple_begin_[k]; p < triple_begin_[k + 1]; ++p) {
            const auto& t = triple_adj_[p];
            f += t.bias * (s[t.a] * s[t.b]);
        }
        return f;
    }

    /// E(s with s_k negated) - E(s), touching only terms incident to k.
    double flip_delta(const SpinAssignment& s, index_type k) const {
        check_length(s);
        check_index(k);
        return -2.0 * s[k] * local_field(s, k);
    }

    /// Number of terms incident to k (linear included).
    std::size_t degree(index_type k) const {
        check_index(k);
        return (field_[k] != 0.0) + (pair_begin_[k + 1] - pair_begin_[k]) +
               (triple_begin_[k + 1] - triple_begin_[k]);
    }

    friend bool operator==(const PolynomialModel& a, const PolynomialModel& b) {
        return a.num_variables_ == b.num_variables_ && a.linear_ == b.linear_ &&
               a.quadratic_ == b.quadratic_ && a.cubic_ == b.cubic_;
    }

 private:
    struct PairAdj {
        index_type other;
        double bias;
    };
    struct TripleAdj {
        index_type a, b;
        double bias;
    };

    template <class Term, class Key>
    static std::vector<Term> canonicalize(std::vector<Term> terms, Key key) {
        std::stable_sort(terms.begin(), terms.end(),
                         [&](const Term& x, const Term& y) { return key(x) < key(y); });
        std::vector<Term> out;
        out.reserve(terms.size());
        for (const auto& t : terms) {
            if (!out.empty() && key(out.back()) == key(t)) {
                out.back().bias += t.bias;
            } else {
                out.push_back(t);
            }
        }
        std::erase_if(out, [](const Term& t) { return t.bias == 0.0; });
        return out;
    }

    void build_index() {
        const auto n = static_cast<std::size_t>(num_variables_);
        field_.assign(n, 0.0);
        for (const auto& t : linear_) field_[t.u] = t.bias;

        pair_begin_.assign(n + 1, 0);
        for (const auto& t : quadratic_) {
            ++pair_begin_[t.u + 1];
            ++pair_begin_[t.v + 1];
        }
        triple_begin_.assign(n + 1, 0);
        for (const auto& t : cubic_) {
            ++triple_begin_[t.u + 1];
            ++triple_begin_[t.v + 1];
            ++triple_begin_[t.w + 1];
        }
        for (std::size_t i = 0; i < n; ++i) {
            pair_begin_[i + 1] += pair_begin_[i];
            triple_begin_[i + 1] += triple_begin_[i];
        }

        pair_adj_.resize(pair_begin_[n]);
        triple_adj_.resize(triple_begin_[n]);
        auto pair_fill = std::vector<std::size_t>(pair_begin_.begin(), pair_begin_.end() - 1);
        auto triple_fill =
                std::vector<std::size_t>(triple_begin_.begin(), triple_begin_.end() - 1);
        for (const auto& t : quadratic_) {
            pair_adj_[pair_fill[t.u]++] = {t.v, t.bias};
            pair_adj_[pair_fill[t.v]++] = {t.u, t.bias};
        }
        for (const auto& t : cubic_) {
            triple_adj_[triple_fill[t.u]++] = {t.v, t.w, t.bias};
            triple_adj_[triple_fill[t.v]++] = {t.u, t.w, t.bias};
            triple_adj_[triple_fill[t.w]++] = {t.u, t.v, t.bias};
        }
    }

    void check_length(const SpinAssignment& s) const {
        if (s.size() != static_cast<std::size_t>(num_variables_)) {
            throw DimensionError("assignment has length " + std::to_string(s.size()) +
                                 " but the model has " + std::to_string(num_variables_) +
                                 " variables");
        }
    }

    void check_index(index_type k) const {
        if (k < 0 || k >= num_variables_) {
            throw DimensionError("variable index " + std::to_string(k) + " out of range");
        }
    }

    index_type num_variables_ = 0;
    std::vector<LinearTerm> linear_;
    std::vector<QuadraticTerm> quadratic_;
    std::vector<CubicTerm> cubic_;

    std::vector<double> field_;
    std::vector<std::size_t> pair_begin_ = {0};
    std::vector<PairAdj> pair_adj_;
    std::vector<std::size_t> triple_begin_ = {0};
    std::vector<TripleAdj> triple_adj_;
};

/// Accumulates terms with arbitrary index order and builds a canonical model.
class ModelBuilder {
 public:
    explicit ModelBuilder(index_type num_variables) : num_variables_(num_variables) {}

    ModelBuilder& add_linear(index_type i, double bias) {
        linear_.push_back({i, bias});
        return *this;
    }

    ModelBuilder& add_quadratic(index_type i, index_type j, double bias) {
        if (i == j) throw ValidationError("quadratic term needs two distinct variables");
        if (i > j) std::swap(i, j);
        quadratic_.push_back({i, j, bias});
        return *this;
    }

    ModelBuilder& add_cubic(index_type i, index_type j, index_type k, double bias) {
        std::array<index_type, 3> key{i, j, k};
        std::sort(key.begin(), key.end());
        if (key[0] == key[1] || key[1] == key[2]) {
            throw ValidationError("cubic term needs three distinct variables");
        }
        cubic_.push_back({key[0], key[1], key[2], bias});
        return *this;
    }

    PolynomialModel build() const {
        return PolynomialModel(num_variables_, linear_, quadratic_, cubic_);
    }

 private:
    index_type num_variables_;
    std::vector<LinearTerm> linear_;
    std::vector<QuadraticTerm> quadratic_;
    std::vector<CubicTerm> cubic_;
};

inline double energy(const PolynomialModel& model, const SpinAssignment& s) {
    return model.energy(s);
}

inline double flip_delta(const PolynomialModel& model, const SpinAssignment& s,
                         index_type k) {
    return model.flip_delta(s, k);
}

/// Returns a copy of `model` with h_i replaced by h_i + gamma * B_i.
inline PolynomialModel with_bias(const PolynomialModel& model, const BiasField& bias,
                                 double gamma) {
    if (bias.size() != static_cast<std::size_t>(model.num_variables())) {
        throw DimensionError("bias field has length " + std::to_string(bias.size()) +
                             " but the model has " + std::to_string(model.num_variables()) +
                             " variables");
    }
    std::vector<LinearTerm> linear;
    linear.reserve(model.num_variables());
    for (index_type i = 0; i < model.num_variables(); ++i) {
        const double h = model.linear_bias(i) + gamma * bias.values[i];
        if (h != 0.0) linear.push_back({i, h});
    }
    return PolynomialModel(model.num_variables(), std::move(linear), model.quadratic(),
                           model.cubic());
}

}  // namespace bfbench
