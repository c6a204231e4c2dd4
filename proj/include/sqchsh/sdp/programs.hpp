// Copyright 2026 The sqchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Guessing-game programs for the pair (rho0, rho1) and their closed forms.
// Every program's optimal value is gamma^2 G; the Werner program fixes
// gamma^2 = 1/4.

#include <cmath>
#include <stdexcept>
#include <string>

#include "sqchsh/inputs.hpp"
#include "sqchsh/sdp/problem.hpp"

namespace sqchsh::sdp {

enum class Direction { Primal, Dual };

inline std::string to_string(Direction d) {
    return d == Direction::Primal ? "primal" : "dual";
}

namespace detail {

inline void check_gamma(double gamma, const char *where) {
    if (!(gamma > 0 && gamma <= 1)) {
        throw std::invalid_argument(std::string(where) + ": gamma must lie in (0, 1], got " + std::to_string(gamma));
    }
}

}  // namespace detail

/// Maximum guessing probability with general two-qubit measurements.
inline double closed_form_general(double gamma) {
    detail::check_gamma(gamma, "closed_form_general");
    if (gamma > 1 / std::sqrt(2.0)) {
        return 0.5 * (1 + 1 / (gamma * gamma * 2 * kSqrt2));
    }
    return 0.5 + 1 / (2 * kSqrt2);
}

/// Maximum guessing probability with PPT measurements, for every gamma.
inline double closed_form_ppt() {
    return 0.5 + 1 / (4 * kSqrt2);
}

/// S = 8 (G - 1/2).
inline double bell_from_guessing(double g) {
    return 8 * (g - 0.5);
}

inline double guessing_from_objective(double objective, double gamma) {
    return objective / (gamma * gamma);
}

namespace detail {

inline void add_completeness(SdpProblem &p, const std::vector<int> &dims, const std::vector<int> &blocks) {
    const auto id = HermitianOperator::identity(dims);
    for (const auto &e : hermitian_basis(dims)) {
        Constraint c;
        c.label = "completeness " + e.label;
        for (int b : blocks) {
            c.terms.push_back({b, e.op});
        }
        c.rhs = hs_inner(e.op, id);
        p.constraints.push_back(std::move(c));
    }
}

/// P = T(Pi) entrywise: Tr[E P] - Tr[T(E) Pi] = 0.
inline void add_ppt_links(SdpProblem &p, const std::vector<int> &dims, const std::vector<int> &subsystems,
                          int pi_block, int copy_block) {
    for (const auto &e : hermitian_basis(dims)) {
        Constraint c;
        c.label = "ppt " + p.blocks[static_cast<std::size_t>(pi_block)].name + " " + e.label;
        c.terms.push_back({copy_block, e.op});
        c.terms.push_back({pi_block, -1.0 * partial_transpose(e.op, subsystems)});
        c.rhs = 0;
        p.constraints.push_back(std::move(c));
    }
}

inline SdpProblem guessing_primal(double gamma, const DiscriminationPair &pair, bool ppt) {
    const std::vector<int> dims = {2, 2};
    SdpProblem p;
    p.family = ppt ? Family::PptPrimal : Family::GeneralPrimal;
    p.sense = Sense::Maximize;
    p.params["gamma"] = gamma;
    p.blocks = {{"Pi0", dims}, {"Pi1", dims}, {"Pinull", dims}};
    if (ppt) {
        p.blocks.push_back({"Pi0_TB", dims});
        p.blocks.push_back({"Pi1_TB", dims});
        p.blocks.push_back({"Pinull_TB", dims});
    }
    p.objective = {{0, pair.rho0 / 2.0}, {1, pair.rho1 / 2.0}};
    add_completeness(p, dims, {0, 1, 2});
    for (int i = 0; i < kNumInputPairs; i++) {
        Constraint c;
        c.label = "inconclusive " + InputPair::from_index(i).label();
        c.terms.push_back({2, pair.inputs[static_cast<std::size_t>(i)]});
        c.rhs = 1 - gamma * gamma;
        p.constraints.push_back(std::move(c));
    }
    if (ppt) {
        for (int k = 0; k < 3; k++) {
            add_ppt_links(p, dims, {1}, k, k + 3);
        }
    }
    return p;
}

// Y = sum_j t_j D_j, so Tr[E_k Y] = t_k. Slack blocks S_i = 2(Y - T_B(Q_i)) - rho_i
// and S_null = 4(Y - T_B(Q_null)) - gt I are fixed entrywise.
inline SdpProblem guessing_dual(double gamma, const DiscriminationPair &pair, bool ppt) {
    const std::vector<int> dims = {2, 2};
    const auto basis = hermitian_basis(dims);
    const auto id = HermitianOperator::identity(dims);
    SdpProblem p;
    p.family = ppt ? Family::PptDual : Family::GeneralDual;
    p.sense = Sense::Minimize;
    p.params["gamma"] = gamma;
    p.blocks = {{"S0", dims}, {"S1", dims}, {"Snull", dims}};
    if (ppt) {
        p.blocks.push_back({"Q0", dims});
        p.blocks.push_back({"Q1", dims});
        p.blocks.push_back({"Qnull", dims});
    }
    for (const auto &e : basis) {
        p.free_vars.push_back("Y " + e.label);
    }
    const int gt = static_cast<int>(p.free_vars.size());
    p.free_vars.push_back("gamma_tilde");
    for (std::size_t k = 0; k < basis.size(); k++) {
        const double tr = hs_inner(basis[k].dual, id);
        if (tr != 0) {
            p.free_objective.push_back({static_cast<int>(k), tr});
        }
    }
    p.free_objective.push_back({gt, -(1 - gamma * gamma)});
    const std::array<double, 3> scale = {2, 2, 4};
    for (int s = 0; s < 3; s++) {
        for (std::size_t k = 0; k < basis.size(); k++) {
            const auto &e = basis[k];
            Constraint c;
            c.label = "slack " + p.blocks[static_cast<std::size_t>(s)].name + " " + e.label;
            c.terms.push_back({s, e.op});
            if (ppt) {
                c.terms.push_back({s + 3, scale[static_cast<std::size_t>(s)] * partial_transpose(e.op, 1)});
            }
            c.free_terms.push_back({static_cast<int>(k), -scale[static_cast<std::size_t>(s)]});
            if (s < 2) {
                c.rhs = -hs_inner(e.op, pair.rho(s));
            } else {
                c.free_terms.push_back({gt, hs_inner(e.op, id)});
                c.rhs = 0;
            }
            p.constraints.push_back(std::move(c));
        }
    }
    return p;
}

}  // namespace detail

/// Guessing program over all two-qubit measurements with conclusive rate gamma^2.
inline SdpProblem build_general(double gamma, const DiscriminationPair &pair, Direction dir = Direction::Primal) {
    detail::check_gamma(gamma, "build_general");
    return dir == Direction::Primal ? detail::guessing_primal(gamma, pair, false)
                                    : detail::guessing_dual(gamma, pair, false);
}

/// Same with every measurement element PPT across the A:B cut.
inline SdpProblem build_ppt(double gamma, const DiscriminationPair &pair, Direction dir = Direction::Primal) {
    detail::check_gamma(gamma, "build_ppt");
    return dir == Direction::Primal ? detail::guessing_primal(gamma, pair, true)
                                    : detail::guessing_dual(gamma, pair, true);
}

/// Werner resource program on A B A' B' (in that order), gamma^2 = 1/4.
/// Measurement elements are PPT across A A' : B B'. By default the
/// inconclusive rate is fixed only on average over the inputs; `strict`
/// fixes it for each input pair.
inline SdpProblem build_werner(double xi, bool strict = false, const DiscriminationPair &pair = build_pair()) {
    if (!(xi >= 0 && xi <= 1)) {
        throw std::invalid_argument("build_werner: xi must lie in [0, 1], got " + std::to_string(xi));
    }
    const std::vector<int> dims = {2, 2, 2, 2};
    const auto phi = werner(xi).op;
    SdpProblem p;
    p.family = Family::Werner;
    p.sense = Sense::Maximize;
    p.params["xi"] = xi;
    p.params["strict"] = strict ? 1 : 0;
    p.blocks = {{"Pi0", dims}, {"Pi1", dims}, {"Pinull", dims}, {"Pi0_T", dims}, {"Pi1_T", dims}, {"Pinull_T", dims}};
    p.objective = {{0, kron(pair.rho0, phi) / 2.0}, {1, kron(pair.rho1, phi) / 2.0}};
    detail::add_completeness(p, dims, {0, 1, 2});
    for (int k = 0; k < 3; k++) {
        detail::add_ppt_links(p, dims, {1, 3}, k, k + 3);
    }
    if (strict) {
        for (int i = 0; i < kNumInputPairs; i++) {
            Constraint c;
            c.label = "inconclusive " + InputPair::from_index(i).label();
            c.terms.push_back({2, kron(pair.inputs[static_cast<std::size_t>(i)], phi)});
            c.rhs = 0.75;
            p.constraints.push_back(std::move(c));
        }
    } else {
        Constraint c;
        c.label = "inconclusive average";
        c.terms.push_back({2, kron(pair.rho0 + pair.rho1, phi) / 2.0});
        c.rhs = 0.75;
        p.constraints.push_back(std::move(c));
    }
    return p;
}

/// Bell value bound from a Werner program objective.
inline double werner_bell_bound(double objective) {
    return bell_from_guessing(guessing_from_objective(objective, 0.5));
}

}  // namespace sqchsh::sdp
