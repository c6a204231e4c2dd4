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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sqchsh/game.hpp"
#include "sqchsh/sdp/programs.hpp"
#include "sqchsh/sdp/solver.hpp"

using namespace sqchsh;
using namespace sqchsh::sdp;

namespace {

const double kInvSqrt2 = 1 / std::sqrt(2.0);

SolverOptions tight() {
    SolverOptions o;
    o.gap_tol = 1e-10;
    o.feas_tol = 1e-9;
    return o;
}

void expect_contract(const SdpSolution &s, const SolverOptions &o) {
    ASSERT_EQ(s.status, Status::Optimal) << s.message;
    EXPECT_LE(std::abs(s.gap), o.gap_tol);
    EXPECT_LE(s.primal_residual, o.feas_tol);
    EXPECT_LE(s.dual_residual, o.feas_tol);
    EXPECT_GE(s.min_block_eigenvalue, -o.feas_tol);
}

std::vector<double> grid20() {
    std::vector<double> g;
    for (int k = 1; k <= 20; k++) {
        g.push_back(k / 20.0);
    }
    return g;
}

}  // namespace

TEST(Solver, LargestEigenvalueOracle) {
    // max Tr[C X] s.t. Tr X = 1, X PSD  equals  lambda_max(C).
    std::mt19937_64 rng(21);
    for (int n : {2, 3, 4, 8}) {
        const auto c = oracle::random_hermitian(rng, n);
        SdpProblem p;
        p.blocks = {{"X", {n}}};
        p.objective = {{0, HermitianOperator(c, {n})}};
        p.constraints = {{"trace", {{0, HermitianOperator::identity({n})}}, {}, 1.0}};
        const auto o = tight();
        const auto s = solve(p, o);
        expect_contract(s, o);
        EXPECT_NEAR(s.primal_objective, oracle::eigenvalues(c)(n - 1), 1e-8) << "n=" << n;
        // minimizing gives lambda_min
        p.sense = Sense::Minimize;
        const auto t = solve(p, o);
        expect_contract(t, o);
        EXPECT_NEAR(t.primal_objective, oracle::eigenvalues(c)(0), 1e-8);
    }
}

TEST(Solver, FreeVariableProblem) {
    // min t s.t. t I - C PSD  equals  lambda_max(C), via a slack block.
    std::mt19937_64 rng(22);
    const auto c = oracle::random_hermitian(rng, 3);
    SdpProblem p;
    p.sense = Sense::Minimize;
    p.blocks = {{"S", {3}}};
    p.free_vars = {"t"};
    p.free_objective = {{0, 1.0}};
    for (const auto &e : hermitian_basis({3})) {
        // Tr[E S] - t Tr[E] = -Tr[E C]
        Constraint k;
        k.label = e.label;
        k.terms = {{0, e.op}};
        k.free_terms = {{0, -e.op.trace()}};
        k.rhs = -hs_inner(e.op, HermitianOperator(c, {3}));
        p.constraints.push_back(k);
    }
    const auto o = tight();
    const auto s = solve(p, o);
    expect_contract(s, o);
    EXPECT_NEAR(s.primal_objective, oracle::eigenvalues(c)(2), 1e-8);
    EXPECT_NEAR(s.free_values[0], oracle::eigenvalues(c)(2), 1e-7);
}

TEST(Solver, ContradictoryEqualitiesAreInfeasible) {
    SdpProblem p;
    p.blocks = {{"X", {2}}};
    p.objective = {{0, HermitianOperator::identity({2})}};
    p.constraints = {{"a", {{0, HermitianOperator::identity({2})}}, {}, 1.0},
                     {"b", {{0, HermitianOperator::identity({2})}}, {}, 2.0}};
    const auto s = solve(p);
    EXPECT_EQ(s.status, Status::Infeasible);
    ASSERT_EQ(s.infeasibility_certificate.size(), 2u);
    // y with A*(y) = 0 and b.y != 0
    const auto &y = s.infeasibility_certificate;
    EXPECT_NEAR(y[0] + y[1], 0.0, 1e-12);
    EXPECT_GT(std::abs(y[0] * 1.0 + y[1] * 2.0), 0.5);
}

TEST(Solver, ConeInfeasibility) {
    // Tr X = -1 has solutions, none PSD.
    SdpProblem p;
    p.blocks = {{"X", {2}}};
    p.objective = {{0, HermitianOperator(pauli::Z())}};
    p.constraints = {{"trace", {{0, HermitianOperator::identity({2})}}, {}, -1.0}};
    const auto s = solve(p);
    EXPECT_EQ(s.status, Status::Infeasible) << s.message;
    ASSERT_EQ(s.infeasibility_certificate.size(), 1u);
    // y I PSD with b.y = -y < 0
    EXPECT_GT(s.infeasibility_certificate[0], 0);
}

TEST(Solver, RedundantRowsDropped) {
    const auto s = solve(build_general(0.5, build_pair()));
    // 16 inconclusive rows span a 9-dimensional space
    EXPECT_EQ(s.dropped_constraints, 7);
    EXPECT_EQ(s.dual_multipliers.size(), 32u);
}

TEST(Solver, IterationLimitReportsBestIterate) {
    SolverOptions o;
    o.max_iter = 2;
    const auto s = solve(build_general(0.5, build_pair()), o);
    EXPECT_EQ(s.status, Status::MaxIterations);
    EXPECT_FALSE(s.message.empty());
    EXPECT_EQ(s.block_values.size(), 3u);
}

class GeneralPrimal : public ::testing::TestWithParam<double> {};

TEST_P(GeneralPrimal, MatchesClosedForm) {
    const double g = GetParam();
    const auto o = tight();
    const auto s = solve(build_general(g, build_pair()), o);
    expect_contract(s, o);
    EXPECT_NEAR(guessing_from_objective(s.primal_objective, g), closed_form_general(g), 1e-6);
    EXPECT_LE(s.primal_objective, s.dual_objective + o.gap_tol);
    EXPECT_LT(s.seconds, 1.0);
}

TEST_P(GeneralPrimal, DualProgramAgrees) {
    const double g = GetParam();
    const auto o = tight();
    const auto s = solve(build_general(g, build_pair(), Direction::Dual));
    ASSERT_EQ(s.status, Status::Optimal) << s.message;
    EXPECT_NEAR(guessing_from_objective(s.primal_objective, g), closed_form_general(g), 1e-6);
    (void)o;
}

INSTANTIATE_TEST_SUITE_P(Gammas, GeneralPrimal, ::testing::Values(0.3, 0.5, kInvSqrt2, 0.75, 0.9, 1.0));

TEST(GeneralPrimal, PrintedExamples) {
    const auto s = solve(build_general(0.5, build_pair()), tight());
    EXPECT_NEAR(s.primal_objective, 0.2133883, 1e-7);
    const auto t = solve(build_general(0.9, build_pair()), tight());
    EXPECT_NEAR(guessing_from_objective(t.primal_objective, 0.9), 0.71824283, 1e-7);
}

class PptPrimal : public ::testing::TestWithParam<double> {};

TEST_P(PptPrimal, GammaIndependent) {
    const double g = GetParam();
    const auto o = tight();
    const auto s = solve(build_ppt(g, build_pair()), o);
    expect_contract(s, o);
    EXPECT_NEAR(guessing_from_objective(s.primal_objective, g), 0.6767767, 1e-6);
    for (const auto &b : s.block_values) {
        EXPECT_GE(min_eigenvalue(partial_transpose(b, 1)), -1e-8);
    }
    const auto d = solve(build_ppt(g, build_pair(), Direction::Dual));
    ASSERT_EQ(d.status, Status::Optimal) << d.message;
    EXPECT_NEAR(guessing_from_objective(d.primal_objective, g), closed_form_ppt(), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Gammas, PptPrimal, ::testing::Values(0.25, 0.5, 0.75, 1.0));

TEST(Solver, HadamardEncodingSameOptimum) {
    const auto pair = build_pair(Encoding::Hadamard);
    for (double g : {0.4, 0.85}) {
        const auto s = solve(build_general(g, pair), tight());
        EXPECT_NEAR(guessing_from_objective(s.primal_objective, g), closed_form_general(g), 1e-6);
        const auto t = solve(build_ppt(g, pair), tight());
        EXPECT_NEAR(guessing_from_objective(t.primal_objective, g), closed_form_ppt(), 1e-6);
    }
}

TEST(SolverProperties, GridInvariants) {
    const auto pair = build_pair();
    const auto o = tight();
    double prev = 2;
    double ppt_min = 1;
    double ppt_max = 0;
    for (double g : grid20()) {
        const auto s = solve(build_general(g, pair), o);
        const auto t = solve(build_ppt(g, pair), o);
        ASSERT_EQ(s.status, Status::Optimal);
        ASSERT_EQ(t.status, Status::Optimal);
        EXPECT_LE(s.primal_objective, s.dual_objective + o.gap_tol);
        EXPECT_LE(t.primal_objective, t.dual_objective + o.gap_tol);
        const double gen = guessing_from_objective(s.primal_objective, g);
        const double ppt = guessing_from_objective(t.primal_objective, g);
        // closed forms bracketed by the two objectives
        EXPECT_LE(g * g * closed_form_general(g), s.dual_objective + 1e-8);
        EXPECT_GE(g * g * closed_form_general(g), s.primal_objective - 1e-8);
        EXPECT_LE(gen, prev + 1e-8) << "g=" << g;
        prev = gen;
        ppt_min = std::min(ppt_min, ppt);
        ppt_max = std::max(ppt_max, ppt);
        EXPECT_LE(ppt, gen + 1e-8);
        // strategy vs bound
        const double pg =
            bell_report(probability_table(effective_measurement(pretty_good_strategy(g)), pair), g).bell_value;
        EXPECT_LE(pg, bell_from_guessing(gen) + 1e-6);
        if (g <= 0.5) {
            EXPECT_NEAR(pg, bell_from_guessing(gen), 1e-6);
        }
    }
    EXPECT_LE(ppt_max - ppt_min, 1e-6);
}

TEST(SolverJson, SolutionSerializes) {
    const auto s = solve(build_general(0.5, build_pair()));
    const auto j = to_json(s);
    EXPECT_EQ(j.at("status"), "Optimal");
    EXPECT_NEAR(j.at("primal_objective").get<double>(), s.primal_objective, 0);
}
