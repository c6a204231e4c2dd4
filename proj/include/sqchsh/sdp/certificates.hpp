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

// Explicit optimal points of the guessing programs and a solver-free checker.
// Operators are written in the common eigenbasis e1..e4 of the pair:
// e1 carries alpha+ of rho0, e2 carries alpha-, e3 and e4 span the 1/4 space.
// The PPT dual's Q blocks are the exception (see below).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqchsh/inputs.hpp"
#include "sqchsh/sdp/problem.hpp"
#include "sqchsh/sdp/programs.hpp"

namespace sqchsh::sdp {

enum class CertificateKind { Primal, Dual };

struct Certificate {
    Family family = Family::GeneralPrimal;
    CertificateKind kind = CertificateKind::Primal;
    std::string name;
    Encoding scheme = Encoding::PauliXY;
    double gamma = 1;
    /// Pi0, Pi1, Pinull for primal certificates.
    std::vector<HermitianOperator> primal_blocks;
    /// Y, then Q0, Q1, Qnull for PPT duals.
    std::vector<HermitianOperator> dual_blocks;
    double gamma_tilde = 0;
    double claimed_objective = 0;
};

struct ConstraintCheck {
    std::string label;
    double residual = 0;
};

struct CertificateReport {
    std::string name;
    bool passed = false;
    double max_residual = 0;
    std::string worst;
    double objective = 0;
    double claimed_objective = 0;
    std::vector<ConstraintCheck> checks;
};

inline constexpr double kCertificateTolerance = 1e-9;

// Region membership with a little slack so that the boundary gets both.
inline bool low_region(double gamma) {
    return gamma * gamma <= 0.5 + 1e-12;
}

inline bool high_region(double gamma) {
    return gamma * gamma >= 0.5 - 1e-12;
}

inline std::vector<Certificate> optimal_certificates(double gamma, const DiscriminationPair &pair = build_pair()) {
    detail::check_gamma(gamma, "optimal_certificates");
    const auto eb = pair_eigenbasis(pair);
    const double g2 = gamma * gamma;
    const auto id = HermitianOperator::identity({2, 2});
    std::vector<Certificate> out;
    auto make = [&](Family fam, CertificateKind kind, std::string name, double claimed) {
        Certificate c;
        c.family = fam;
        c.kind = kind;
        c.name = std::move(name);
        c.scheme = pair.scheme;
        c.gamma = gamma;
        c.claimed_objective = claimed;
        return c;
    };

    if (low_region(gamma)) {
        const double claimed = g2 * (1 + 1 / kSqrt2) / 2;
        auto p = make(Family::GeneralPrimal, CertificateKind::Primal, "general-low-primal", claimed);
        p.primal_blocks = {eb.diag({2 * g2, 0, 0, 0}), eb.diag({0, 2 * g2, 0, 0}),
                           eb.diag({1 - 2 * g2, 1 - 2 * g2, 1, 1})};
        out.push_back(std::move(p));
        auto d = make(Family::GeneralDual, CertificateKind::Dual, "general-low-dual", claimed);
        d.dual_blocks = {kAlphaPlus / 2 * id};
        d.gamma_tilde = (1 + 1 / kSqrt2) / 2;
        out.push_back(std::move(d));
    }
    if (high_region(gamma)) {
        const double claimed = (2 * g2 + 1 / kSqrt2) / 4;
        auto p = make(Family::GeneralPrimal, CertificateKind::Primal, "general-high-primal", claimed);
        p.primal_blocks = {eb.diag({1, 0, g2 - 0.5, g2 - 0.5}), eb.diag({0, 1, g2 - 0.5, g2 - 0.5}),
                           eb.diag({0, 0, 2 * (1 - g2), 2 * (1 - g2)})};
        out.push_back(std::move(p));
        auto d = make(Family::GeneralDual, CertificateKind::Dual, "general-high-dual", claimed);
        const double mu1 = (2 + 1 / kSqrt2) / 16;
        const double mu2 = (1 + 1 / kSqrt2) / 8 - mu1;
        d.dual_blocks = {eb.diag({mu1 + mu2, mu1 + mu2, mu1 - mu2, mu1 - mu2})};
        d.gamma_tilde = 0.5;
        out.push_back(std::move(d));
    }
    {
        const double claimed = g2 * (2 + 1 / kSqrt2) / 4;
        auto p = make(Family::PptPrimal, CertificateKind::Primal, "ppt-primal", claimed);
        p.primal_blocks = {eb.diag({g2, 0, g2 / 2, g2 / 2}), eb.diag({0, g2, g2 / 2, g2 / 2}), (1 - g2) * id};
        out.push_back(std::move(p));
        auto d = make(Family::PptDual, CertificateKind::Dual, "ppt-dual", claimed);
        // Q is set up in the Hadamard frame, where its support is the pair's
        // signal eigenvectors. A local frame change U_A (x) U_B acts on Q as
        // U_A (x) conj(U_B), since the partial transpose conjugates Bob's side.
        const double q = 1 / (8 * kSqrt2);
        const auto eh = pair_eigenbasis(build_pair(Encoding::Hadamard));
        const ComplexMatrix w =
            sqchsh::detail::kron(frame_unitary(Party::Alice, Encoding::Hadamard, pair.scheme),
                                 frame_unitary(Party::Bob, Encoding::Hadamard, pair.scheme).conjugate());
        d.dual_blocks = {(1 + 1 / (2 * kSqrt2)) / 8 * id, eh.diag({0, q, 0, 0}).conjugated(w),
                         eh.diag({q, 0, 0, 0}).conjugated(w), HermitianOperator::zero({2, 2})};
        d.gamma_tilde = (1 + 1 / (2 * kSqrt2)) / 2;
        out.push_back(std::move(d));
    }
    return out;
}

namespace detail {

inline double psd_violation(const HermitianOperator &op) {
    return std::max(0.0, -min_eigenvalue(op));
}

}  // namespace detail

/// Checks every constraint of the program the certificate belongs to,
/// independently of the solver.
inline CertificateReport verify_certificate(const Certificate &c, const DiscriminationPair &pair) {
    if (c.scheme != pair.scheme) {
        throw std::invalid_argument("verify_certificate: certificate '" + c.name + "' was built for the " +
                                    to_string(c.scheme) + " encoding, pair uses " + to_string(pair.scheme));
    }
    detail::check_gamma(c.gamma, "verify_certificate");
    CertificateReport r;
    r.name = c.name;
    r.claimed_objective = c.claimed_objective;
    const bool ppt = c.family == Family::PptPrimal || c.family == Family::PptDual;
    const double g2 = c.gamma * c.gamma;
    const auto id = HermitianOperator::identity({2, 2});
    auto add = [&](std::string label, double residual) { r.checks.push_back({std::move(label), residual}); };
    const std::array<const char *, 3> names = {"0", "1", "null"};

    if (c.kind == CertificateKind::Primal) {
        if (c.primal_blocks.size() != 3) {
            throw std::invalid_argument("verify_certificate: primal certificate needs 3 blocks");
        }
        const auto &pi = c.primal_blocks;
        add("completeness", sqchsh::detail::max_abs((pi[0] + pi[1] + pi[2] - id).matrix()));
        for (int i = 0; i < kNumInputPairs; i++) {
            add("inconclusive " + InputPair::from_index(i).label(),
                std::abs(hs_inner(pair.inputs[static_cast<std::size_t>(i)], pi[2]) - (1 - g2)));
        }
        for (std::size_t k = 0; k < 3; k++) {
            add(std::string("psd Pi") + names[k], detail::psd_violation(pi[k]));
            if (ppt) {
                add(std::string("ppt Pi") + names[k], detail::psd_violation(partial_transpose(pi[k], 1)));
            }
        }
        r.objective = (hs_inner(pair.rho0, pi[0]) + hs_inner(pair.rho1, pi[1])) / 2;
    } else {
        const std::size_t need = ppt ? 4 : 1;
        if (c.dual_blocks.size() != need) {
            throw std::invalid_argument("verify_certificate: dual certificate needs " + std::to_string(need) +
                                        " blocks");
        }
        const auto &y = c.dual_blocks[0];
        auto shifted = [&](std::size_t i) {
            return ppt ? y - partial_transpose(c.dual_blocks[i + 1], 1) : y;
        };
        add("psd 2Y - rho0", detail::psd_violation(2.0 * shifted(0) - pair.rho0));
        add("psd 2Y - rho1", detail::psd_violation(2.0 * shifted(1) - pair.rho1));
        add("psd 4Y - gt I", detail::psd_violation(4.0 * shifted(2) - c.gamma_tilde * id));
        if (ppt) {
            for (std::size_t k = 0; k < 3; k++) {
                add(std::string("psd Q") + names[k], detail::psd_violation(c.dual_blocks[k + 1]));
            }
        }
        r.objective = y.trace() - (1 - g2) * c.gamma_tilde;
    }
    add("objective", std::abs(r.objective - c.claimed_objective));
    for (const auto &ch : r.checks) {
        if (ch.residual >= r.max_residual) {
            r.max_residual = ch.residual;
            r.worst = ch.label;
        }
    }
    r.passed = r.max_residual <= kCertificateTolerance;
    return r;
}

}  // namespace sqchsh::sdp
