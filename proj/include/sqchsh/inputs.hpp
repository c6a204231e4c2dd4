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

// Quantum inputs of the semi-quantum CHSH game: the qubit encodings of each
// party's two bits, the target function, and the mixed pair rho0 / rho1 the
// devices must discriminate.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sqchsh/hermitian.hpp"

namespace sqchsh {

inline const double kSqrt2 = std::sqrt(2.0);
/// (1 + 1/sqrt2)/4 and (1 - 1/sqrt2)/4: the non-quarter eigenvalues of rho0.
inline const double kAlphaPlus = (1 + 1 / std::sqrt(2.0)) / 4;
inline const double kAlphaMinus = (1 - 1 / std::sqrt(2.0)) / 4;

enum class Encoding { Hadamard, PauliXY };
enum class Party { Alice, Bob };

inline std::string to_string(Encoding e) {
    return e == Encoding::Hadamard ? "hadamard" : "pauli-xy";
}

inline Encoding parse_encoding(const std::string &s) {
    if (s == "hadamard") {
        return Encoding::Hadamard;
    }
    if (s == "pauli-xy" || s == "paulixy") {
        return Encoding::PauliXY;
    }
    throw std::invalid_argument("unknown encoding '" + s + "'");
}

/// Alice's bits x1x2 and Bob's bits y1y2.
struct InputPair {
    int x1 = 0;
    int x2 = 0;
    int y1 = 0;
    int y2 = 0;

    static InputPair from_index(int index) {
        if (index < 0 || index >= 16) {
            throw std::invalid_argument("InputPair index out of range: " + std::to_string(index));
        }
        return {(index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1};
    }

    int index() const {
        return (x1 << 3) | (x2 << 2) | (y1 << 1) | y2;
    }

    std::string label() const {
        return std::to_string(x1) + std::to_string(x2) + "," + std::to_string(y1) + std::to_string(y2);
    }

    bool operator==(const InputPair &) const = default;
};

inline constexpr int kNumInputPairs = 16;

/// f(x, y) = (x1 AND y1) XOR x2 XOR y2.
inline int target_bit(const InputPair &in) {
    return (in.x1 & in.y1) ^ in.x2 ^ in.y2;
}

namespace pauli {

inline ComplexMatrix I() {
    return ComplexMatrix::Identity(2, 2);
}
inline ComplexMatrix X() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline ComplexMatrix Y() {
    ComplexMatrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
inline ComplexMatrix Z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace pauli

/// The qubit program state for one party's two bits.
///
/// Hadamard: H^{b1} |b2><b2| H^{b1} for both parties.
/// PauliXY:  Alice (1 + (-1)^{b2} P)/2 with P = X for b1 = 0 and Y for b1 = 1;
///           Bob   (1 + (-1)^{b2} (X + (-1)^{b1} Y)/sqrt2)/2.
inline HermitianOperator encode(Party party, int b1, int b2, Encoding scheme) {
    if ((b1 != 0 && b1 != 1) || (b2 != 0 && b2 != 1)) {
        throw std::invalid_argument("encode: bits must be 0 or 1");
    }
    const double sign = b2 ? -1.0 : 1.0;
    if (scheme == Encoding::Hadamard) {
        ComplexVector v(2);
        if (b1 == 0) {
            v << (b2 ? 0.0 : 1.0), (b2 ? 1.0 : 0.0);
        } else {
            v << 1 / kSqrt2, sign / kSqrt2;
        }
        return HermitianOperator::projector(v);
    }
    ComplexMatrix axis;
    if (party == Party::Alice) {
        axis = b1 == 0 ? pauli::X() : pauli::Y();
    } else {
        axis = (pauli::X() + (b1 ? -1.0 : 1.0) * pauli::Y()) / kSqrt2;
    }
    return HermitianOperator((pauli::I() + sign * axis) / 2.0);
}

struct DiscriminationPair {
    Encoding scheme = Encoding::PauliXY;
    HermitianOperator rho0;
    HermitianOperator rho1;
    /// omega_x (kron) tau_y indexed by InputPair::index().
    std::array<HermitianOperator, kNumInputPairs> inputs;

    const HermitianOperator &input(const InputPair &in) const {
        return inputs[static_cast<std::size_t>(in.index())];
    }
    const HermitianOperator &rho(int bit) const {
        return bit == 0 ? rho0 : rho1;
    }
};

/// rho_b = (1/8) sum over inputs with f = b of omega_x (kron) tau_y.
inline DiscriminationPair build_pair(Encoding scheme = Encoding::PauliXY) {
    DiscriminationPair out;
    out.scheme = scheme;
    out.rho0 = HermitianOperator::zero({2, 2});
    out.rho1 = HermitianOperator::zero({2, 2});
    for (int i = 0; i < kNumInputPairs; i++) {
        const auto in = InputPair::from_index(i);
        auto state = kron(encode(Party::Alice, in.x1, in.x2, scheme), encode(Party::Bob, in.y1, in.y2, scheme));
        (target_bit(in) == 0 ? out.rho0 : out.rho1) += state / 8.0;
        out.inputs[static_cast<std::size_t>(i)] = std::move(state);
    }
    return out;
}

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// Phi+- = (|00> +- |11>)/sqrt2, Psi+- = (|01> +- |10>)/sqrt2.
inline ComplexVector bell_state(BellState which) {
    ComplexVector v = ComplexVector::Zero(4);
    const double r = 1 / kSqrt2;
    switch (which) {
        case BellState::PhiPlus:
            v(0) = r;
            v(3) = r;
            break;
        case BellState::PhiMinus:
            v(0) = r;
            v(3) = -r;
            break;
        case BellState::PsiPlus:
            v(1) = r;
            v(2) = r;
            break;
        case BellState::PsiMinus:
            v(1) = r;
            v(2) = -r;
            break;
    }
    return v;
}

/// Phi+, Phi-, Psi+, Psi- in that order.
inline std::array<ComplexVector, 4> bell_basis() {
    return {bell_state(BellState::PhiPlus), bell_state(BellState::PhiMinus), bell_state(BellState::PsiPlus),
            bell_state(BellState::PsiMinus)};
}

struct WernerState {
    double fidelity = 0;
    HermitianOperator op;
};

/// F |Psi-><Psi-| + (1 - F) I/4.
inline WernerState werner(double fidelity) {
    if (!(fidelity >= 0 && fidelity <= 1)) {
        throw std::invalid_argument("werner: fidelity must lie in [0, 1], got " + std::to_string(fidelity));
    }
    const auto singlet = HermitianOperator::projector(bell_state(BellState::PsiMinus), {2, 2});
    return {fidelity, fidelity * singlet + (1 - fidelity) / 4 * HermitianOperator::identity({2, 2})};
}

/// Common eigenbasis of rho0 and rho1, ordered as
///   [0] rho0 eigenvalue alpha+ (rho1: alpha-),
///   [1] rho0 eigenvalue alpha- (rho1: alpha+),
///   [2], [3] the shared 1/4 eigenspace.
/// Columns [0] and [1] span the support of rho0 - rho1.
struct PairEigenbasis {
    ComplexMatrix vectors;
    std::array<double, 4> rho0_values{};
    std::array<double, 4> rho1_values{};

    ComplexVector vector(int k) const {
        return vectors.col(k);
    }

    /// sum_k d_k |e_k><e_k|.
    HermitianOperator diag(const std::array<double, 4> &d) const {
        ComplexMatrix m = vectors * RealVector(Eigen::Map<const RealVector>(d.data(), 4)).asDiagonal() *
                          vectors.adjoint();
        return HermitianOperator(m, {2, 2});
    }
};

inline PairEigenbasis pair_eigenbasis(const DiscriminationPair &pair) {
    const auto spec = eig_hermitian(pair.rho0);
    PairEigenbasis out;
    out.vectors = ComplexMatrix(4, 4);
    out.vectors.col(0) = spec.eigenvectors.col(3);
    out.vectors.col(1) = spec.eigenvectors.col(0);
    out.vectors.col(2) = spec.eigenvectors.col(1);
    out.vectors.col(3) = spec.eigenvectors.col(2);
    for (int k = 0; k < 4; k++) {
        const ComplexVector e = out.vectors.col(k);
        out.rho0_values[static_cast<std::size_t>(k)] = (e.adjoint() * pair.rho0.matrix() * e)(0).real();
        out.rho1_values[static_cast<std::size_t>(k)] = (e.adjoint() * pair.rho1.matrix() * e)(0).real();
    }
    return out;
}

namespace detail {

/// SU(2) element U with U sigma_k U^dagger = images[k] for k = x, y, z,
/// for a proper rotation of the Bloch sphere (not a rotation by pi).
inline ComplexMatrix unitary_from_pauli_images(const std::array<ComplexMatrix, 3> &images) {
    const std::array<ComplexMatrix, 3> sigma = {pauli::X(), pauli::Y(), pauli::Z()};
    ComplexMatrix w = pauli::I();
    for (int k = 0; k < 3; k++) {
        w += images[static_cast<std::size_t>(k)] * sigma[static_cast<std::size_t>(k)];
    }
    const double norm = std::sqrt(std::abs(w.determinant()));
    if (norm < 1e-8) {
        throw std::invalid_argument("unitary_from_pauli_images: rotation by pi is not supported");
    }
    return w / norm;
}

}  // namespace detail

/// Local unitary U with U omega^{from}_b U^dagger = omega^{to}_b for every
/// two-bit string b of the given party.
inline ComplexMatrix frame_unitary(Party party, Encoding from, Encoding to) {
    if (from == to) {
        return pauli::I();
    }
    ComplexMatrix u;
    if (party == Party::Alice) {
        // X -> Z, Y -> X, Z -> Y
        u = detail::unitary_from_pauli_images({pauli::Z(), pauli::X(), pauli::Y()});
    } else {
        // (X+Y)/sqrt2 -> Z, (X-Y)/sqrt2 -> X, Z -> -Y
        u = detail::unitary_from_pauli_images(
            {(pauli::Z() + pauli::X()) / kSqrt2, (pauli::Z() - pauli::X()) / kSqrt2, -pauli::Y()});
    }
    return from == Encoding::PauliXY ? u : ComplexMatrix(u.adjoint());
}

}  // namespace sqchsh
