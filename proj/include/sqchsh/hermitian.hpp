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

// Dense Hermitian operators on small tensor-product spaces.
//
// Basis ordering: |0...0>, |0...1>, ... with the leftmost tensor factor
// varying slowest. Every operation is a pure function of its arguments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sqchsh {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised when an iterative numerical routine fails to converge.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string &what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {
    }
    double residual() const noexcept {
        return residual_;
    }

  private:
    double residual_;
};

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kDefaultPsdTolerance = 1e-9;

namespace detail {

inline int product(const std::vector<int> &dims) {
    return std::accumulate(dims.begin(), dims.end(), 1, [](int a, int b) { return a * b; });
}

inline double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Mixed-radix digits of `index` for the given subsystem dimensions.
inline std::vector<int> digits_of(int index, const std::vector<int> &dims) {
    std::vector<int> out(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    return out;
}

inline int index_of(const std::vector<int> &digits, const std::vector<int> &dims) {
    int index = 0;
    for (std::size_t k = 0; k < dims.size(); k++) {
        index = index * dims[k] + digits[k];
    }
    return index;
}

inline void check_subsystem(int subsystem, std::size_t count) {
    if (subsystem < 0 || static_cast<std::size_t>(subsystem) >= count) {
        throw std::invalid_argument(
            "subsystem index " + std::to_string(subsystem) + " out of range for " + std::to_string(count) +
            " subsystems");
    }
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Partial trace of an arbitrary (not necessarily Hermitian) matrix.
inline ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<int> &dims, std::vector<int> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set must be nonempty");
    }
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
        throw std::invalid_argument("partial_trace: duplicate subsystem in keep set");
    }
    for (int k : keep) {
        check_subsystem(k, dims.size());
    }
    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) {
        kept[static_cast<std::size_t>(k)] = true;
    }
    std::vector<int> kept_dims;
    std::vector<int> traced_dims;
    for (std::size_t k = 0; k < dims.size(); k++) {
        (kept[k] ? kept_dims : traced_dims).push_back(dims[k]);
    }
    const int n = product(dims);
    std::vector<int> kept_index(static_cast<std::size_t>(n));
    std::vector<int> traced_index(static_cast<std::size_t>(n));
    for (int i = 0; i < n; i++) {
        auto d = digits_of(i, dims);
        std::vector<int> kd;
        std::vector<int> td;
        for (std::size_t k = 0; k < dims.size(); k++) {
            (kept[k] ? kd : td).push_back(d[k]);
        }
        kept_index[static_cast<std::size_t>(i)] = index_of(kd, kept_dims);
        traced_index[static_cast<std::size_t>(i)] = td.empty() ? 0 : index_of(td, traced_dims);
    }
    const int out_dim = product(kept_dims);
    ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            if (traced_index[static_cast<std::size_t>(r)] == traced_index[static_cast<std::size_t>(c)]) {
                out(kept_index[static_cast<std::size_t>(r)], kept_index[static_cast<std::size_t>(c)]) += m(r, c);
            }
        }
    }
    return out;
}

inline ComplexMatrix partial_transpose(const ComplexMatrix &m, const std::vector<int> &dims,
                                       const std::vector<int> &subsystems) {
    std::vector<bool> flip(dims.size(), false);
    for (int s : subsystems) {
        check_subsystem(s, dims.size());
        flip[static_cast<std::size_t>(s)] = true;
    }
    const int n = product(dims);
    ComplexMatrix out(n, n);
    for (int r = 0; r < n; r++) {
        const auto rd = digits_of(r, dims);
        for (int c = 0; c < n; c++) {
            auto nr = rd;
            auto nc = digits_of(c, dims);
            for (std::size_t k = 0; k < dims.size(); k++) {
                if (flip[k]) {
                    std::swap(nr[k], nc[k]);
                }
            }
            out(index_of(nr, dims), index_of(nc, dims)) = m(r, c);
        }
    }
    return out;
}

}  // namespace detail

/// A dense complex matrix equal to its conjugate transpose, tagged with the
/// dimensions of its tensor factors.
class HermitianOperator {
  public:
    HermitianOperator() = default;

    /// Single-factor operator. Throws if `m` is not square or not Hermitian
    /// to within kHermiticityTolerance; small defects are symmetrized away.
    explicit HermitianOperator(const ComplexMatrix &m) : HermitianOperator(m, {static_cast<int>(m.rows())}) {
    }

    HermitianOperator(const ComplexMatrix &m, std::vector<int> dims) : dims_(std::move(dims)) {
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("HermitianOperator: matrix must be square");
        }
        if (dims_.empty() || std::any_of(dims_.begin(), dims_.end(), [](int d) { return d <= 0; })) {
            throw std::invalid_argument("HermitianOperator: subsystem dimensions must be positive");
        }
        if (detail::product(dims_) != m.rows()) {
            throw std::invalid_argument("HermitianOperator: subsystem dimensions do not multiply to matrix size");
        }
        const double defect = detail::max_abs(m - m.adjoint());
        if (defect > kHermiticityTolerance) {
            throw std::invalid_argument(
                "HermitianOperator: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
        }
        m_ = (m + m.adjoint()) / 2.0;
    }

    static HermitianOperator identity(std::vector<int> dims) {
        const int n = detail::product(dims);
        return HermitianOperator(ComplexMatrix::Identity(n, n), std::move(dims));
    }

    static HermitianOperator zero(std::vector<int> dims) {
        const int n = detail::product(dims);
        return HermitianOperator(ComplexMatrix::Zero(n, n), std::move(dims));
    }

    /// |v><v| (no normalization applied).
    static HermitianOperator projector(const ComplexVector &v, std::vector<int> dims) {
        return HermitianOperator(v * v.adjoint(), std::move(dims));
    }
    static HermitianOperator projector(const ComplexVector &v) {
        return projector(v, {static_cast<int>(v.size())});
    }

    int dim() const {
        return static_cast<int>(m_.rows());
    }
    const std::vector<int> &dims() const {
        return dims_;
    }
    const ComplexMatrix &matrix() const {
        return m_;
    }
    cplx operator()(int r, int c) const {
        return m_(r, c);
    }

    double trace() const {
        return m_.trace().real();
    }

    /// U M U^dagger with the same subsystem structure.
    HermitianOperator conjugated(const ComplexMatrix &u) const {
        return HermitianOperator(u * m_ * u.adjoint(), dims_);
    }

    HermitianOperator with_dims(std::vector<int> dims) const {
        return HermitianOperator(m_, std::move(dims));
    }

    HermitianOperator operator-() const {
        return HermitianOperator(-m_, dims_);
    }
    friend HermitianOperator operator+(const HermitianOperator &a, const HermitianOperator &b) {
        check_same_dim(a, b);
        return HermitianOperator(a.m_ + b.m_, a.dims_);
    }
    friend HermitianOperator operator-(const HermitianOperator &a, const HermitianOperator &b) {
        check_same_dim(a, b);
        return HermitianOperator(a.m_ - b.m_, a.dims_);
    }
    friend HermitianOperator operator*(double s, const HermitianOperator &a) {
        return HermitianOperator(s * a.m_, a.dims_);
    }
    friend HermitianOperator operator*(const HermitianOperator &a, double s) {
        return s * a;
    }
    friend HermitianOperator operator/(const HermitianOperator &a, double s) {
        return HermitianOperator(a.m_ / s, a.dims_);
    }
    HermitianOperator &operator+=(const HermitianOperator &o) {
        *this = *this + o;
        return *this;
    }
    HermitianOperator &operator-=(const HermitianOperator &o) {
        *this = *this - o;
        return *this;
    }

  private:
    static void check_same_dim(const HermitianOperator &a, const HermitianOperator &b) {
        if (a.dim() != b.dim()) {
            throw std::invalid_argument(
                "dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
        }
    }

    ComplexMatrix m_;
    std::vector<int> dims_;
};

/// Eigen-decomposition with eigenvalues ascending and orthonormal eigenvector
/// columns in the same order.
struct Spectrum {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
};

inline HermitianOperator kron(const HermitianOperator &a, const HermitianOperator &b) {
    auto dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return HermitianOperator(detail::kron(a.matrix(), b.matrix()), std::move(dims));
}

inline ComplexVector kron(const ComplexVector &a, const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); i++) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

/// Traces out every subsystem not listed in `keep`. Kept factors stay in
/// their original relative order.
inline HermitianOperator partial_trace(const HermitianOperator &op, const std::vector<int> &keep) {
    auto sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    ComplexMatrix m = detail::partial_trace(op.matrix(), op.dims(), sorted);
    std::vector<int> dims;
    for (int k : sorted) {
        dims.push_back(op.dims()[static_cast<std::size_t>(k)]);
    }
    return HermitianOperator(m, std::move(dims));
}

inline HermitianOperator partial_transpose(const HermitianOperator &op, const std::vector<int> &subsystems) {
    return HermitianOperator(detail::partial_transpose(op.matrix(), op.dims(), subsystems), op.dims());
}

inline HermitianOperator partial_transpose(const HermitianOperator &op, int subsystem) {
    return partial_transpose(op, std::vector<int>{subsystem});
}

/// Reorders tensor factors: factor k of the result is factor order[k] of `op`.
inline HermitianOperator permute_subsystems(const HermitianOperator &op, const std::vector<int> &order) {
    const auto &dims = op.dims();
    if (order.size() != dims.size()) {
        throw std::invalid_argument("permute_subsystems: order length must equal number of subsystems");
    }
    std::vector<int> seen(dims.size(), 0);
    for (int o : order) {
        detail::check_subsystem(o, dims.size());
        if (seen[static_cast<std::size_t>(o)]++) {
            throw std::invalid_argument("permute_subsystems: order is not a permutation");
        }
    }
    std::vector<int> new_dims(dims.size());
    for (std::size_t k = 0; k < dims.size(); k++) {
        new_dims[k] = dims[static_cast<std::size_t>(order[k])];
    }
    const int n = op.dim();
    std::vector<int> map(static_cast<std::size_t>(n));
    for (int i = 0; i < n; i++) {
        auto d = detail::digits_of(i, dims);
        std::vector<int> nd(dims.size());
        for (std::size_t k = 0; k < dims.size(); k++) {
            nd[k] = d[static_cast<std::size_t>(order[k])];
        }
        map[static_cast<std::size_t>(i)] = detail::index_of(nd, new_dims);
    }
    ComplexMatrix out(n, n);
    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = op(r, c);
        }
    }
    return HermitianOperator(out, std::move(new_dims));
}

struct JacobiOptions {
    double off_diagonal_tolerance = 1e-14;
    int max_sweeps = 100;
};

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation zeroes one off-diagonal pair (p,q) with the unitary
/// [[c, s e], [-s conj(e), c]] where e is the phase of a_pq. Sweeps stop when
/// the off-diagonal Frobenius norm drops below tolerance * max(1, ||A||_F).
/// Eigenvectors are normalized so their first nonzero component is real
/// and positive.
inline Spectrum eig_hermitian(const HermitianOperator &op, const JacobiOptions &opts = {}) {
    const int n = op.dim();
    ComplexMatrix a = op.matrix();
    ComplexMatrix v = ComplexMatrix::Identity(n, n);
    const double scale = std::max(1.0, a.norm());

    auto off_norm = [&]() {
        double s = 0;
        for (int p = 0; p < n; p++) {
            for (int q = p + 1; q < n; q++) {
                s += 2 * std::norm(a(p, q));
            }
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    double off = off_norm();
    while (off > opts.off_diagonal_tolerance * scale) {
        if (sweep++ >= opts.max_sweeps) {
            throw NumericalError("eig_hermitian: Jacobi did not converge", off);
        }
        for (int p = 0; p < n - 1; p++) {
            for (int q = p + 1; q < n; q++) {
                const double mag = std::abs(a(p, q));
                if (mag < 1e-300) {
                    continue;
                }
                const cplx e = a(p, q) / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2 * mag);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                const double c = 1 / std::sqrt(1 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; k++) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(e) * akq;
                    a(k, q) = s * e * akp + c * akq;
                }
                for (int k = 0; k < n; k++) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - s * e * aqk;
                    a(q, k) = s * std::conj(e) * apk + c * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (int k = 0; k < n; k++) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(e) * vkq;
                    v(k, q) = s * e * vkp + c * vkq;
                }
            }
        }
        off = off_norm();
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    Spectrum out{RealVector(n), ComplexMatrix(n, n)};
    for (int k = 0; k < n; k++) {
        const int src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = a(src, src).real();
        ComplexVector col = v.col(src);
        for (int i = 0; i < n; i++) {
            const double mag = std::abs(col(i));
            if (mag > 1e-12) {
                col *= std::conj(col(i)) / mag;
                col(i) = col(i).real();
                break;
            }
        }
        out.eigenvectors.col(k) = col;
    }
    return out;
}

inline double min_eigenvalue(const HermitianOperator &op) {
    return eig_hermitian(op).eigenvalues(0);
}

inline double max_eigenvalue(const HermitianOperator &op) {
    const auto spec = eig_hermitian(op);
    return spec.eigenvalues(spec.eigenvalues.size() - 1);
}

/// True iff the smallest eigenvalue is at least -tol.
inline bool is_psd(const HermitianOperator &op, double tol = kDefaultPsdTolerance) {
    if (tol < 0) {
        throw std::invalid_argument("is_psd: tolerance must be nonnegative");
    }
    return min_eigenvalue(op) >= -tol;
}

/// Hilbert-Schmidt inner product Tr[a b].
inline double hs_inner(const HermitianOperator &a, const HermitianOperator &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(
            "hs_inner: dimension mismatch " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
    // Tr[ab] = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij) for Hermitian b.
    const cplx v = (a.matrix().array() * b.matrix().conjugate().array()).sum();
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real()))) {
        throw std::logic_error("hs_inner: imaginary residue on Hermitian inputs");
    }
    return v.real();
}

/// Sum of absolute eigenvalues.
inline double trace_norm(const HermitianOperator &op) {
    return eig_hermitian(op).eigenvalues.cwiseAbs().sum();
}

/// Largest entry of |ab - ba|.
inline double commutator_norm(const HermitianOperator &a, const HermitianOperator &b) {
    return detail::max_abs(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

}  // namespace sqchsh
