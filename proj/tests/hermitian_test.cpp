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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sqchsh/hermitian.hpp"
#include "sqchsh/inputs.hpp"

namespace sqchsh {
namespace {

HermitianOperator diag(std::initializer_list<double> values) {
    RealVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index k = 0;
    for (double x : values) {
        v(k++) = x;
    }
    return HermitianOperator(ComplexMatrix(v.cast<cplx>().asDiagonal()));
}

double max_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

TEST(Kron, IdentityTimesIdentity) {
    const auto out = kron(HermitianOperator::identity({2}), HermitianOperator::identity({2}));
    EXPECT_EQ(out.dim(), 4);
    EXPECT_EQ(out.dims(), (std::vector<int>{2, 2}));
    EXPECT_EQ(max_diff(out.matrix(), ComplexMatrix::Identity(4, 4)), 0.0);
}

TEST(Kron, PauliXX) {
    const auto x = HermitianOperator(pauli::X());
    const auto xx = kron(x, x);
    EXPECT_EQ(xx.trace(), 0.0);
    const auto s = eig_hermitian(xx);
    const std::vector<double> expected = {-1, -1, 1, 1};
    for (int k = 0; k < 4; k++) {
        EXPECT_NEAR(s.eigenvalues(k), expected[static_cast<std::size_t>(k)], 1e-14);
    }
}

TEST(Kron, BasisBookkeeping) {
    const auto out = kron(diag({1, 0}), diag({0, 1}));
    EXPECT_EQ(max_diff(out.matrix(), diag({0, 1, 0, 0}).matrix()), 0.0);
}

TEST(Kron, MatchesOracleOnRandomFactors) {
    std::mt19937_64 rng(11);
    const auto a = oracle::random_hermitian(rng, 2);
    const auto b = oracle::random_hermitian(rng, 4);
    const auto out = kron(HermitianOperator(a), HermitianOperator(b, {2, 2}));
    EXPECT_EQ(out.dims(), (std::vector<int>{2, 2, 2}));
    EXPECT_LT(max_diff(out.matrix(), oracle::kron(a, b)), 1e-15);
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
    const auto psi = HermitianOperator::projector(bell_state(BellState::PsiPlus), {2, 2});
    const auto out = partial_trace(psi, {0});
    EXPECT_LT(max_diff(out.matrix(), ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(PartialTrace, ProductFactorization) {
    std::mt19937_64 rng(3);
    const auto a = oracle::random_hermitian(rng, 2);
    const auto b = oracle::random_hermitian(rng, 2);
    const auto out = partial_trace(kron(HermitianOperator(a), HermitianOperator(b)), {0});
    EXPECT_LT(max_diff(out.matrix(), b.trace() * a), 1e-14);
}

TEST(PartialTrace, RhoZeroAliceMarginal) {
    // Oracle: average the 8 hard-coded product inputs with f = 0, then trace
    // out Bob index by index.
    const auto inputs = oracle::pauli_xy_inputs();
    oracle::Mat rho0 = oracle::Mat::Zero(4, 4);
    for (int k = 0; k < 16; k++) {
        if (oracle::f(k) == 0) {
            rho0 += inputs[static_cast<std::size_t>(k)] / 8.0;
        }
    }
    const auto expected = oracle::trace_out_second_qubit(rho0);
    EXPECT_LT(max_diff(expected, ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);
    const auto pair = build_pair(Encoding::PauliXY);
    const auto out = partial_trace(pair.rho0, {0});
    EXPECT_LT(max_diff(out.matrix(), expected), 1e-15);
}

TEST(PartialTrace, KeepsMiddleOfThree) {
    std::mt19937_64 rng(5);
    const auto a = oracle::random_density(rng, 2);
    const auto b = oracle::random_hermitian(rng, 3);
    const auto c = oracle::random_density(rng, 2);
    const auto op = HermitianOperator(oracle::kron(oracle::kron(a, b), c), {2, 3, 2});
    const auto out = partial_trace(op, {1});
    EXPECT_LT(max_diff(out.matrix(), b), 1e-13);
}

TEST(PartialTrace, RejectsBadSubsystem) {
    const auto op = HermitianOperator::identity({2, 2});
    EXPECT_THROW(partial_trace(op, {2}), std::invalid_argument);
    EXPECT_THROW(partial_trace(op, {-1}), std::invalid_argument);
    EXPECT_THROW(partial_trace(op, {}), std::invalid_argument);
}

TEST(PartialTranspose, ProductCase) {
    std::mt19937_64 rng(17);
    const auto a = oracle::random_hermitian(rng, 2);
    const auto b = oracle::random_hermitian(rng, 2);
    const auto out = partial_transpose(kron(HermitianOperator(a), HermitianOperator(b)), 1);
    EXPECT_LT(max_diff(out.matrix(), oracle::kron(a, b.transpose())), 1e-15);
}

TEST(PartialTranspose, IdentityFixed) {
    const auto out = partial_transpose(HermitianOperator::identity({2, 2}), 1);
    EXPECT_EQ(max_diff(out.matrix(), ComplexMatrix::Identity(4, 4)), 0.0);
}

TEST(PartialTranspose, BellStateMinEigenvalue) {
    const auto psi = HermitianOperator::projector(bell_state(BellState::PsiPlus), {2, 2});
    const auto oracle_pt = oracle::transpose_second_qubit(psi.matrix());
    const double expected = oracle::eigenvalues(oracle_pt)(0);
    EXPECT_NEAR(expected, -0.5, 1e-15);
    EXPECT_NEAR(min_eigenvalue(partial_transpose(psi, 1)), expected, 1e-14);
}

TEST(PartialTranspose, RejectsBadSubsystem) {
    EXPECT_THROW(partial_transpose(HermitianOperator::identity({2, 2}), 2), std::invalid_argument);
}

TEST(Eig, Diagonal) {
    const auto s = eig_hermitian(diag({3, 1, 2}));
    EXPECT_EQ(s.eigenvalues(0), 1.0);
    EXPECT_EQ(s.eigenvalues(1), 2.0);
    EXPECT_EQ(s.eigenvalues(2), 3.0);
}

TEST(Eig, PauliX) {
    const auto s = eig_hermitian(HermitianOperator(pauli::X()));
    EXPECT_NEAR(s.eigenvalues(0), -1, 1e-15);
    EXPECT_NEAR(s.eigenvalues(1), 1, 1e-15);
}

TEST(Eig, RhoZeroSpectrum) {
    const auto pair = build_pair(Encoding::PauliXY);
    const auto s = eig_hermitian(pair.rho0);
    EXPECT_NEAR(s.eigenvalues(0), 0.0732233, 1e-7);
    EXPECT_NEAR(s.eigenvalues(1), 0.25, 1e-12);
    EXPECT_NEAR(s.eigenvalues(2), 0.25, 1e-12);
    EXPECT_NEAR(s.eigenvalues(3), 0.4267767, 1e-7);
}

TEST(Eig, PhaseConvention) {
    std::mt19937_64 rng(23);
    const auto s = eig_hermitian(HermitianOperator(oracle::random_hermitian(rng, 4)));
    for (int k = 0; k < 4; k++) {
        const ComplexVector v = s.eigenvectors.col(k);
        int first = 0;
        while (std::abs(v(first)) <= 1e-12) {
            first++;
        }
        EXPECT_GT(v(first).real(), 0);
        EXPECT_EQ(v(first).imag(), 0);
    }
}

TEST(Eig, IterationCapReportsResidual) {
    JacobiOptions opts;
    opts.max_sweeps = 0;
    try {
        eig_hermitian(HermitianOperator(pauli::X()), opts);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError &e) {
        EXPECT_GT(e.residual(), 0.5);
    }
}

TEST(Eig, RandomReconstructionProperty) {
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 200; trial++) {
        const int n = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 4 : 16);
        const auto m = oracle::random_hermitian(rng, n, 1 + trial % 7);
        const auto s = eig_hermitian(HermitianOperator(m));
        const ComplexMatrix &v = s.eigenvectors;
        EXPECT_LE(max_diff(v.adjoint() * v, ComplexMatrix::Identity(n, n)), 1e-10);
        const ComplexMatrix rebuilt = v * s.eigenvalues.cast<cplx>().asDiagonal() * v.adjoint();
        EXPECT_LE(max_diff(rebuilt, m), 1e-10);
        const auto ref = oracle::eigenvalues(m);
        for (int k = 0; k < n; k++) {
            EXPECT_NEAR(s.eigenvalues(k), ref(k), 1e-10);
            if (k > 0) {
                EXPECT_LE(s.eigenvalues(k - 1), s.eigenvalues(k));
            }
        }
    }
}

TEST(Eig, DimensionThirtyTwo) {
    std::mt19937_64 rng(8);
    const auto m = oracle::random_hermitian(rng, 32);
    const auto s = eig_hermitian(HermitianOperator(m));
    const auto ref = oracle::eigenvalues(m);
    EXPECT_LE((s.eigenvalues - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(IsPsd, Examples) {
    EXPECT_TRUE(is_psd(HermitianOperator::identity({4}), 0));
    EXPECT_FALSE(is_psd(-1.0 * HermitianOperator::identity({2}), 1e-9));
    EXPECT_THROW(is_psd(HermitianOperator::identity({2}), -1), std::invalid_argument);
}

TEST(IsPsd, DifferenceOfPairIsIndefinite) {
    const auto pair = build_pair(Encoding::PauliXY);
    const auto diff = pair.rho0 - pair.rho1;
    const auto ref = oracle::eigenvalues(diff.matrix());
    const double h = 1 / (2 * std::sqrt(2.0));
    EXPECT_NEAR(ref(0), -h, 1e-14);
    EXPECT_NEAR(ref(1), 0, 1e-14);
    EXPECT_NEAR(ref(2), 0, 1e-14);
    EXPECT_NEAR(ref(3), h, 1e-14);
    EXPECT_FALSE(is_psd(diff, 1e-9));
}

TEST(HsInner, Examples) {
    EXPECT_EQ(hs_inner(HermitianOperator::identity({2}), HermitianOperator::identity({2})), 2.0);
    EXPECT_EQ(hs_inner(HermitianOperator(pauli::X()), HermitianOperator(pauli::Y())), 0.0);
    const auto pair = build_pair(Encoding::PauliXY);
    const double expected = (pair.rho0.matrix() * (pair.rho0 - pair.rho1).matrix()).trace().real();
    EXPECT_NEAR(expected, 0.125, 1e-15);
    EXPECT_NEAR(hs_inner(pair.rho0, pair.rho0 - pair.rho1), expected, 1e-15);
}

TEST(HsInner, RejectsDimensionMismatch) {
    EXPECT_THROW(hs_inner(HermitianOperator::identity({2}), HermitianOperator::identity({4})), std::invalid_argument);
}

TEST(HsInner, SelfInnerIsFrobeniusSquared) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; trial++) {
        const auto m = oracle::random_hermitian(rng, 4);
        const auto a = HermitianOperator(m);
        EXPECT_GE(hs_inner(a, a), 0);
        EXPECT_NEAR(hs_inner(a, a), m.squaredNorm(), 1e-12);
        const auto b = HermitianOperator(oracle::random_hermitian(rng, 4));
        EXPECT_NEAR(hs_inner(a, b), hs_inner(b, a), 1e-13);
    }
}

TEST(Construction, SymmetrizesRoundoff) {
    ComplexMatrix m = pauli::X();
    m(0, 1) += 1e-14;
    const HermitianOperator op(m);
    EXPECT_EQ(op(0, 1), std::conj(op(1, 0)));
}

TEST(Construction, RejectsNonHermitian) {
    ComplexMatrix m = pauli::X();
    m(0, 1) = 2;
    EXPECT_THROW(HermitianOperator{m}, std::invalid_argument);
}

TEST(Construction, RejectsBadDims) {
    EXPECT_THROW(HermitianOperator(ComplexMatrix::Identity(4, 4), {2, 3}), std::invalid_argument);
    EXPECT_THROW(HermitianOperator(ComplexMatrix::Identity(4, 3)), std::invalid_argument);
}

TEST(Properties, PartialTraceOfKron) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; trial++) {
        const auto a = oracle::random_hermitian(rng, 2);
        const auto b = oracle::random_hermitian(rng, 4);
        const auto ab = kron(HermitianOperator(a), HermitianOperator(b, {2, 2}));
        EXPECT_LE(max_diff(partial_trace(ab, {0}).matrix(), b.trace().real() * a), 1e-12);
        EXPECT_LE(max_diff(partial_trace(ab, {1, 2}).matrix(), a.trace().real() * b), 1e-12);
    }
}

TEST(Properties, PartialTransposeInvolution) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; trial++) {
        const auto m = oracle::random_hermitian(rng, 16);
        const auto op = HermitianOperator(m, {2, 2, 2, 2});
        const std::vector<int> subs = {trial % 4, (trial + 1) % 4};
        const auto pt = partial_transpose(op, subs);
        EXPECT_EQ(max_diff(partial_transpose(pt, subs).matrix(), m), 0.0);
        EXPECT_NEAR(pt.trace(), op.trace(), 1e-12);
        EXPECT_EQ(max_diff(pt.matrix(), pt.matrix().adjoint()), 0.0);
    }
}

TEST(Properties, PermuteSubsystemsMatchesKronOrder) {
    std::mt19937_64 rng(13);
    const auto a = oracle::random_hermitian(rng, 2);
    const auto b = oracle::random_hermitian(rng, 2);
    const auto c = oracle::random_hermitian(rng, 2);
    const auto abc = HermitianOperator(oracle::kron(oracle::kron(a, b), c), {2, 2, 2});
    const auto cab = permute_subsystems(abc, {2, 0, 1});
    EXPECT_LE(max_diff(cab.matrix(), oracle::kron(oracle::kron(c, a), b)), 1e-14);
}

TEST(Properties, TraceNormAndCommutator) {
    const auto pair = build_pair(Encoding::PauliXY);
    EXPECT_NEAR(trace_norm(pair.rho0 - pair.rho1) / 2, 1 / (2 * std::sqrt(2.0)), 1e-14);
    EXPECT_LE(commutator_norm(pair.rho0, pair.rho1), 1e-12);
    EXPECT_NEAR(commutator_norm(HermitianOperator(pauli::X()), HermitianOperator(pauli::Z())), 2.0, 1e-15);
}

}  // namespace
}  // namespace sqchsh
