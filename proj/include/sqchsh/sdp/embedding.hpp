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

#include <stdexcept>

#include "sqchsh/hermitian.hpp"

namespace sqchsh::sdp {

/// A + iB  ->  [[A, -B], [B, A]].
///
/// The map is a real *-homomorphism: products and adjoints carry over,
/// Tr emb(M) = 2 Re Tr M, and every eigenvalue of M appears twice.
inline RealMatrix real_embedding(const ComplexMatrix &m) {
    const Eigen::Index n = m.rows();
    RealMatrix out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = m.real();
    out.bottomRightCorner(n, n) = m.real();
    out.topRightCorner(n, n) = -m.imag();
    out.bottomLeftCorner(n, n) = m.imag();
    return out;
}

inline RealMatrix real_embedding(const HermitianOperator &op) {
    return real_embedding(op.matrix());
}

/// Inverse of real_embedding on its image, and the orthogonal projection
/// onto that image for an arbitrary symmetric S:
///   S = [[S11, S12], [S21, S22]]  ->  (S11 + S22)/2 + i (S21 - S12)/2.
/// A PSD argument yields a PSD result.
inline ComplexMatrix complex_from_embedding(const RealMatrix &s) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0) {
        throw std::invalid_argument("complex_from_embedding: expected an even square matrix");
    }
    const Eigen::Index n = s.rows() / 2;
    ComplexMatrix out(n, n);
    out.real() = (s.topLeftCorner(n, n) + s.bottomRightCorner(n, n)) / 2;
    out.imag() = (s.bottomLeftCorner(n, n) - s.topRightCorner(n, n)) / 2;
    return (out + out.adjoint()) / 2.0;
}

}  // namespace sqchsh::sdp
