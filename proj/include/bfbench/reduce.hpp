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
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfbench/errors.hpp"
#include "bfbench/model.hpp"

namespace bfbench {

/// How a product of two spins is represented by auxiliary spins.
enum class Gadget {
    /// Product spin p = s_u s_v plus one helper spin. The cubic term becomes
    /// K p s_w exactly; a wrong p costs at least `penalty`. Two auxiliaries
    /// per new pair.
    spin_product,
    /// One auxiliary a with (1 + a)/2 = x_u x_v for x = (1 + s)/2, enforced by
    /// the usual AND penalty. One auxiliary per new pair, but a wrong a only
    /// costs `penalty` while it can gain 4|K|.
    binary_and,
};

inline std::string to_string(Gadget g) {
    return g == Gadget::spin_product ? "spin_product" : "binary_and";
}

inline Gadget gadget_from_string(const std::string& name) {
    if (name == "spin_product" || name == "spin") return Gadget::spin_product;
    if (name == "binary_and" || name == "binary") return Gadget::binary_and;
    throw UsageError("unknown gadget '" + name + "' (expected spin_product or binary_and)");
}

/// Auxiliary `aux` stands for the product of variables u < v.
struct AuxDef {
    index_type aux;
    index_type u, v;
    friend bool operator==(const AuxDef&, const AuxDef&) = default;
};

struct ReductionMap {
    index_type original_n = 0;
    PolynomialModel reduced_model;
    std::vector<AuxDef> aux_defs;  // one per product; spin_product helpers sit at aux + 1
    double penalty = 5.0;
    Gadget gadget = Gadget::spin_product;
    /// reduced energy - original energy whenever every auxiliary takes its
    /// consistent value
    double offset = 0.0;

    index_type num_auxiliary() const noexcept {
        return reduced_model.num_variables() - original_n;
    }
};

inline constexpr double kDefaultPenalty = 5.0;

namespace detail {

// Constant part of each gadget at its consistent minimum, per unit penalty.
inline double gadget_constant(Gadget g) { return g == Gadget::spin_product ? 2.0 : 0.75; }

}  // namespace detail

/// Rewrites every cubic term with an auxiliary spin for one of its pairs.
///
/// Cubic terms are visited in key order. For K s_i s_j s_k the pairs (i,j),
/// (i,k), (j,k) are tried in that order and the first one that already has a
/// product auxiliary is reused; otherwise a new auxiliary is created for
/// (i,j). Auxiliary indices start at the original N and are contiguous.
inline ReductionMap quadratize(const PolynomialModel& model, double penalty = kDefaultPenalty,
                               Gadget gadget = Gadget::spin_product) {
    if (!(penalty > 0.0) || !std::isfinite(penalty)) {
        throw ValidationError("penalty must be a positive finite number");
    }
    ReductionMap rmap;
    rmap.original_n = model.num_variables();
    rmap.penalty = penalty;
    rmap.gadget = gadget;

    std::vector<LinearTerm> linear = model.linear();
    std::vector<QuadraticTerm> quadratic = model.quadratic();
    std::map<std::pair<index_type, index_type>, index_type> product_of;
    index_type next = model.num_variables();

    auto add_q = [&](index_type a, index_type b, double bias) {
        if (a > b) std::swap(a, b);
        quadratic.push_back({a, b, bias});
    };

    auto make_product = [&](index_type u, index_type v) {
        const index_type p = next;
        const double P = penalty;
        if (gadget == Gadget::spin_product) {
            const index_type h = next + 1;
            next += 2;
            linear.push_back({u, -0.5 * P});
            linear.push_back({v, -0.5 * P});
            linear.push_back({p, -0.5 * P});
            linear.push_back({h, -1.0 * P});
            add_q(u, v, 0.5 * P);
            add_q(u, p, 0.5 * P);
            add_q(u, h, 1.0 * P);
            add_q(v, p, 0.5 * P);
            add_q(v, h, 1.0 * P);
            add_q(p, h, 1.0 * P);
        } else {
            next += 1;
            linear.push_back({u, -0.25 * P});
            linear.push_back({v, -0.25 * P});
            linear.push_back({p, 0.5 * P});
            add_q(u, v, 0.25 * P);
            add_q(u, p, -0.5 * P);
            add_q(v, p, -0.5 * P);
        }
        rmap.offset -= detail::gadget_constant(gadget) * P;
        rmap.aux_defs.push_back({p, u, v});
        product_of[{u, v}] = p;
        return p;
    };

    for (const auto& t : model.cubic()) {
        const std::pair<index_type, index_type> pairs[3] = {{t.u, t.v}, {t.u, t.w}, {t.v, t.w}};
        const index_type rest[3] = {t.w, t.v, t.u};
        int chosen = -1;
        for (int c = 0; c < 3 && chosen < 0; ++c) {
            if (product_of.contains(pairs[c])) chosen = c;
        }
        index_type p;
        if (chosen >= 0) {
            p = product_of.at(pairs[chosen]);
        } else {
            chosen = 0;
            p = make_product(t.u, t.v);
        }
        const auto [u, v] = pairs[chosen];
        const index_type w = rest[chosen];
        if (gadget == Gadget::spin_product) {
            add_q(p, w, t.bias);
        } else {
            // s_u s_v = 2a - s_u - s_v + 1 when a is consistent
            add_q(p, w, 2.0 * t.bias);
            add_q(u, w, -t.bias);
            add_q(v, w, -t.bias);
            linear.push_back({w, t.bias});
        }
    }

    rmap.reduced_model = PolynomialModel(next, std::move(linear), std::move(quadratic), {});
    return rmap;
}

/// Value every auxiliary takes when it agrees with the original spins.
inline SpinAssignment extend_assignment(const ReductionMap& rmap, const SpinAssignment& s) {
    if (s.size() != static_cast<std::size_t>(rmap.original_n)) {
        throw DimensionError("assignment length does not match the original model");
    }
    SpinAssignment out(static_cast<std::size_t>(rmap.reduced_model.num_variables()));
    for (std::size_t i = 0; i < s.size(); ++i) out.set(i, s[i]);
    for (const auto& d : rmap.aux_defs) {
        if (rmap.gadget == Gadget::spin_product) {
            out.set(d.aux, s[d.u] * s[d.v]);
            out.set(d.aux + 1, (s[d.u] > 0 && s[d.v] > 0) ? -1 : 1);
        } else {
            out.set(d.aux, (s[d.u] > 0 && s[d.v] > 0) ? 1 : -1);
        }
    }
    return out;
}

struct LiftedSolution {
    SpinAssignment assignment;
    bool consistent = true;
};

/// Restricts a reduced-space assignment to the original variables and checks
/// that every auxiliary (helpers included) holds its consistent value.
inline LiftedSolution lift_solution(const ReductionMap& rmap, const SpinAssignment& reduced) {
    if (reduced.size() != static_cast<std::size_t>(rmap.reduced_model.num_variables())) {
        throw DimensionError("assignment length does not match the reduced model");
    }
    std::vector<int> values(static_cast<std::size_t>(rmap.original_n));
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = reduced[i];
    LiftedSolution lifted{SpinAssignment(values), true};
    lifted.consistent = extend_assignment(rmap, lifted.assignment) == reduced;
    return lifted;
}

struct ReductionReport {
    bool ground_energy_equal = false;     // (a)
    bool minimizers_consistent = false;   // (b)
    bool marginals_match = false;         // (c)
    double original_minimum = 0;
    double reduced_minimum = 0;  // offset removed
    std::string counterexample;  // first failure, empty on success

    bool passed() const noexcept {
        return ground_energy_equal && minimizers_consistent && marginals_match;
    }
};

inline constexpr index_type kVerifyReductionMaxVariables = 26;

/// Exhaustive check of a reduction:
///  (a) min reduced energy - offset == min original energy,
///  (b) every reduced minimizer is auxiliary-consistent,
///  (c) for each original s, min over auxiliaries of the reduced energy
///      - offset == E(s).
/// Energies are compared with relative tolerance 1e-9 (floored at 1).
inline ReductionReport verify_reduction(const PolynomialModel& model, const ReductionMap& rmap) {
    const auto& reduced = rmap.reduced_model;
    if (reduced.num_variables() > kVerifyReductionMaxVariables) {
        throw ResourceError("verify_reduction is limited to " +
                            std::to_string(kVerifyReductionMaxVariables) +
                            " reduced variables, got " +
                            std::to_string(reduced.num_variables()));
    }
    if (model.num_variables() != rmap.original_n) {
        throw DimensionError("reduction map does not belong to this model");
    }
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    };

    const index_type n = rmap.original_n;
    const index_type aux = reduced.num_variables() - n;
    ReductionReport report;
    report.marginals_match = true;

    double best_original = std::numeric_limits<double>::infinity();
    double best_reduced = std::numeric_limits<double>::infinity();
    std::vector<double> reduced_energy;  // indexed by full reduced state
    reduced_energy.reserve(std::size_t{1} << reduced.num_variables());

    SpinAssignment s(static_cast<std::size_t>(n));
    SpinAssignment r(static_cast<std::size_t>(reduced.num_variables()));
    for (std::uint64_t xs = 0; xs < (std::uint64_t{1} << n); ++xs) {
        for (index_type i = 0; i < n; ++i) {
            const int v = ((xs >> i) & 1) ? -1 : 1;
            s.set(i, v);
            r.set(i, v);
        }
        const double e = model.energy(s);
        best_original = std::min(best_original, e);
        double marginal = std::numeric_limits<double>::infinity();
        for (std::uint64_t xa = 0; xa < (std::uint64_t{1} << aux); ++xa) {
            for (index_type a = 0; a < aux; ++a) r.set(n + a, ((xa >> a) & 1) ? -1 : 1);
            const double er = reduced.energy(r);
            reduced_energy.push_back(er);
            marginal = std::min(marginal, er);
        }
        best_reduced = std::min(best_reduced, marginal);
        if (report.marginals_match && !close(marginal - rmap.offset, e)) {
            report.marginals_match = false;
            if (report.counterexample.empty()) {
                report.counterexample = "(c) original state " + s.to_string() +
                                        ": min over auxiliaries gives " +
                                        std::to_string(marginal - rmap.offset) +
                                        ", original energy " + std::to_string(e);
            }
        }
    }
    report.original_minimum = best_original;
    report.reduced_minimum = best_reduced - rmap.offset;
    report.ground_energy_equal = close(report.reduced_minimum, best_original);
    if (!report.ground_energy_equal && report.counterexample.empty()) {
        report.counterexample = "(a) reduced minimum " + std::to_string(report.reduced_minimum) +
                                " differs from original minimum " +
                                std::to_string(best_original);
    }

    report.minimizers_consistent = true;
    std::size_t idx = 0;
    for (std::uint64_t xs = 0; xs < (std::uint64_t{1} << n); ++xs) {
        for (std::uint64_t xa = 0; xa < (std::uint64_t{1} << aux); ++xa, ++idx) {
            if (!close(reduced_energy[idx], best_reduced)) continue;
            for (index_type i = 0; i < n; ++i) r.set(i, ((xs >> i) & 1) ? -1 : 1);
            for (index_type a = 0; a < aux; ++a) r.set(n + a, ((xa >> a) & 1) ? -1 : 1);
            if (!lift_solution(rmap, r).consistent) {
                report.minimizers_consistent = false;
                if (report.counterexample.empty()) {
                    report.counterexample =
                            "(b) reduced minimizer " + r.to_string() + " is not consistent";
                }
            }
        }
    }
    return report;
}

}  // namespace bfbench
