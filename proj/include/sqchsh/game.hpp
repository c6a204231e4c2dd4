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

// Strategy evaluation for the semi-quantum CHSH game: effective two-qubit
// measurements, outcome tables, the postselected Bell value S and the
// conditional guessing probability G, plus a seeded Monte Carlo harness.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqchsh/hermitian.hpp"
#include "sqchsh/inputs.hpp"
#include "sqchsh/rng.hpp"

namespace sqchsh {

/// Outcome labels; Null is the inconclusive outcome.
enum Outcome : int { kZero = 0, kOne = 1, kNull = 2 };
inline constexpr int kNumOutcomes = 3;
inline constexpr int kNumJointOutcomes = 9;

inline constexpr int joint_index(int a, int b) {
    return a * kNumOutcomes + b;
}

inline constexpr double kPovmSumTolerance = 1e-10;
inline constexpr double kEfficiencyTolerance = 1e-8;

/// Elements indexed by outcome label. Local POVMs have three elements
/// (0, 1, null); joint POVMs have nine, indexed by joint_index(a, b).
struct Povm {
    std::vector<HermitianOperator> elements;

    const HermitianOperator &operator[](int k) const {
        return elements.at(static_cast<std::size_t>(k));
    }
    const HermitianOperator &at(int a, int b) const {
        return elements.at(static_cast<std::size_t>(joint_index(a, b)));
    }
};

inline void validate_povm(const Povm &povm, const std::string &name, double psd_tol = kDefaultPsdTolerance,
                          double sum_tol = kPovmSumTolerance) {
    if (povm.elements.empty()) {
        throw std::invalid_argument(name + ": POVM has no elements");
    }
    const int n = povm.elements.front().dim();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < povm.elements.size(); k++) {
        const auto &e = povm.elements[k];
        if (e.dim() != n) {
            throw std::invalid_argument(name + ": POVM elements have mismatched dimensions");
        }
        const double lo = min_eigenvalue(e);
        if (lo < -psd_tol) {
            throw std::invalid_argument(
                name + ": element " + std::to_string(k) + " is not PSD (min eigenvalue " + std::to_string(lo) + ")");
        }
        sum += e.matrix();
    }
    const double defect = detail::max_abs(sum - ComplexMatrix::Identity(n, n));
    if (defect > sum_tol) {
        throw std::invalid_argument(name + ": elements do not sum to identity (defect " + std::to_string(defect) + ")");
    }
}

struct LosrComponent {
    double weight = 1;
    Povm alice;
    Povm bob;
};

/// Shared-randomness mixture of local three-outcome POVMs on the input qubits.
struct LosrStrategy {
    std::vector<LosrComponent> components;
};

/// Shared state on A'B' with programmable measurements on A A' (Alice) and
/// B' B (Bob). The global tensor layout is A A' B' B.
struct QuantumStrategy {
    HermitianOperator shared_state;
    Povm alice;
    Povm bob;
};

inline void validate(const LosrStrategy &s) {
    if (s.components.empty()) {
        throw std::invalid_argument("LosrStrategy: no components");
    }
    double total = 0;
    for (const auto &c : s.components) {
        if (c.weight < 0) {
            throw std::invalid_argument("LosrStrategy: negative weight");
        }
        if (c.alice.elements.size() != kNumOutcomes || c.bob.elements.size() != kNumOutcomes) {
            throw std::invalid_argument("LosrStrategy: local POVMs need exactly three outcomes");
        }
        validate_povm(c.alice, "LosrStrategy alice");
        validate_povm(c.bob, "LosrStrategy bob");
        total += c.weight;
    }
    if (std::abs(total - 1) > 1e-12) {
        throw std::invalid_argument("LosrStrategy: weights sum to " + std::to_string(total));
    }
}

inline void validate(const QuantumStrategy &s) {
    if (s.alice.elements.size() != kNumOutcomes || s.bob.elements.size() != kNumOutcomes) {
        throw std::invalid_argument("QuantumStrategy: PQMs need exactly three outcomes");
    }
    validate_povm(s.alice, "QuantumStrategy alice");
    validate_povm(s.bob, "QuantumStrategy bob");
    if (s.shared_state.dims().size() != 2) {
        throw std::invalid_argument("QuantumStrategy: shared state must be bipartite");
    }
    if (std::abs(s.shared_state.trace() - 1) > 1e-10 || !is_psd(s.shared_state)) {
        throw std::invalid_argument("QuantumStrategy: shared state must be PSD with unit trace");
    }
    const auto &ad = s.alice[0].dims();
    const auto &bd = s.bob[0].dims();
    if (ad.size() != 2 || bd.size() != 2 || ad[1] != s.shared_state.dims()[0] ||
        bd[0] != s.shared_state.dims()[1]) {
        throw std::invalid_argument("QuantumStrategy: PQM factors must be (A, A') and (B', B) matching the state");
    }
}

/// M_{a,b} = Tr_{A'B'}[(1_A (x) phi (x) 1_B)(Q_a (x) R_b)].
inline Povm effective_measurement(const QuantumStrategy &s) {
    validate(s);
    const int da = s.alice[0].dims()[0];
    const int db = s.bob[0].dims()[1];
    const auto &sd = s.shared_state.dims();
    const std::vector<int> layout = {da, sd[0], sd[1], db};
    const auto env = kron(kron(HermitianOperator::identity({da}), s.shared_state), HermitianOperator::identity({db}))
                         .with_dims(layout);
    Povm out;
    out.elements.reserve(kNumJointOutcomes);
    for (int a = 0; a < kNumOutcomes; a++) {
        for (int b = 0; b < kNumOutcomes; b++) {
            const ComplexMatrix prod = env.matrix() * kron(s.alice[a], s.bob[b]).matrix();
            out.elements.emplace_back(detail::partial_trace(prod, layout, {0, 3}), std::vector<int>{da, db});
        }
    }
    return out;
}

/// M_{a,b} = sum_lambda Pr[lambda] Q_a^lambda (x) R_b^lambda.
inline Povm effective_measurement(const LosrStrategy &s) {
    validate(s);
    const int da = s.components.front().alice[0].dim();
    const int db = s.components.front().bob[0].dim();
    Povm out;
    out.elements.assign(kNumJointOutcomes, HermitianOperator::zero({da, db}));
    for (const auto &c : s.components) {
        for (int a = 0; a < kNumOutcomes; a++) {
            for (int b = 0; b < kNumOutcomes; b++) {
                out.elements[static_cast<std::size_t>(joint_index(a, b))] += c.weight * kron(c.alice[a], c.bob[b]);
            }
        }
    }
    return out;
}

/// Pr[a, b | x, y] for all 16 input pairs and 9 outcome pairs.
struct ProbabilityTable {
    std::array<std::array<double, kNumJointOutcomes>, kNumInputPairs> p{};

    double operator()(int input, int a, int b) const {
        return p[static_cast<std::size_t>(input)][static_cast<std::size_t>(joint_index(a, b))];
    }
    double &at(int input, int a, int b) {
        return p[static_cast<std::size_t>(input)][static_cast<std::size_t>(joint_index(a, b))];
    }
};

inline void validate(const ProbabilityTable &t) {
    for (int i = 0; i < kNumInputPairs; i++) {
        double sum = 0;
        for (double v : t.p[static_cast<std::size_t>(i)]) {
            if (v < -1e-12) {
                throw std::invalid_argument("ProbabilityTable: negative entry for input " +
                                            InputPair::from_index(i).label());
            }
            sum += v;
        }
        if (std::abs(sum - 1) > 1e-10) {
            throw std::invalid_argument("ProbabilityTable: conditional distribution for input " +
                                        InputPair::from_index(i).label() + " sums to " + std::to_string(sum));
        }
    }
}

/// Born rule Pr[a, b | x, y] = Tr[M_{a,b} (omega_x (x) tau_y)].
inline ProbabilityTable probability_table(const Povm &joint, const DiscriminationPair &pair) {
    if (joint.elements.size() != kNumJointOutcomes || joint[0].dim() != 4) {
        throw std::invalid_argument("probability_table: expected a nine-outcome POVM on two qubits");
    }
    ProbabilityTable t;
    for (int i = 0; i < kNumInputPairs; i++) {
        for (int k = 0; k < kNumJointOutcomes; k++) {
            t.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                hs_inner(joint.elements[static_cast<std::size_t>(k)], pair.inputs[static_cast<std::size_t>(i)]);
        }
    }
    validate(t);
    return t;
}

inline ProbabilityTable probability_table(const Povm &joint, Encoding scheme) {
    return probability_table(joint, build_pair(scheme));
}

/// Per-input marginals of a table.
struct Efficiencies {
    double alice = 0;
    double bob = 0;
    double joint = 0;
};

inline Efficiencies efficiencies(const ProbabilityTable &t, int input) {
    Efficiencies e;
    for (int a = 0; a < kNumOutcomes; a++) {
        for (int b = 0; b < kNumOutcomes; b++) {
            const double v = t(input, a, b);
            if (a != kNull) {
                e.alice += v;
            }
            if (b != kNull) {
                e.bob += v;
            }
            if (a != kNull && b != kNull) {
                e.joint += v;
            }
        }
    }
    return e;
}

/// C(x, y) = Pr[a = b] - Pr[a != b] restricted to jointly conclusive events.
inline double correlation(const ProbabilityTable &t, int input) {
    return t(input, 0, 0) + t(input, 1, 1) - t(input, 0, 1) - t(input, 1, 0);
}

/// S = (1/4) sum_{x,y} (-1)^f C(x, y) / gamma^2, without precondition checks.
inline double bell_value(const ProbabilityTable &t, double gamma) {
    double s = 0;
    for (int i = 0; i < kNumInputPairs; i++) {
        const double sign = target_bit(InputPair::from_index(i)) ? -1.0 : 1.0;
        s += sign * correlation(t, i);
    }
    return s / (4 * gamma * gamma);
}

/// Raised when a table's conclusive rates differ from gamma / gamma^2.
class EfficiencyMismatch : public std::invalid_argument {
  public:
    EfficiencyMismatch(const InputPair &in, const std::string &which, double deviation)
        : std::invalid_argument("efficiency mismatch at input " + in.label() + ": " + which + " deviates by " +
                                std::to_string(deviation)),
          input(in),
          deviation(deviation) {
    }
    InputPair input;
    double deviation;
};

struct BellReport {
    double gamma = 1;
    std::array<double, kNumInputPairs> alice_eff{};
    std::array<double, kNumInputPairs> bob_eff{};
    std::array<double, kNumInputPairs> joint_eff{};
    /// Unnormalized correlations, each in [-gamma^2, gamma^2].
    std::array<double, kNumInputPairs> correlations{};
    double bell_value = 0;
    /// Pr[a XOR b = f, both conclusive] / gamma^2, computed from the table.
    double guessing = 0;
};

inline BellReport bell_report(const ProbabilityTable &t, double gamma, double tol = kEfficiencyTolerance) {
    if (!(gamma > 0 && gamma <= 1)) {
        throw std::invalid_argument("bell_report: gamma must lie in (0, 1], got " + std::to_string(gamma));
    }
    BellReport r;
    r.gamma = gamma;
    double win = 0;
    for (int i = 0; i < kNumInputPairs; i++) {
        const auto in = InputPair::from_index(i);
        const auto e = efficiencies(t, i);
        const auto check = [&](double value, double target, const char *which) {
            if (std::abs(value - target) > tol) {
                throw EfficiencyMismatch(in, which, value - target);
            }
        };
        check(e.alice, gamma, "alice conclusive rate");
        check(e.bob, gamma, "bob conclusive rate");
        check(e.joint, gamma * gamma, "joint conclusive rate");
        const auto k = static_cast<std::size_t>(i);
        r.alice_eff[k] = e.alice;
        r.bob_eff[k] = e.bob;
        r.joint_eff[k] = e.joint;
        r.correlations[k] = correlation(t, i);
        win += target_bit(in) == 0 ? t(i, 0, 0) + t(i, 1, 1) : t(i, 0, 1) + t(i, 1, 0);
    }
    r.bell_value = bell_value(t, gamma);
    r.guessing = win / kNumInputPairs / (gamma * gamma);
    return r;
}

/// Pi_0 = M00 + M11, Pi_1 = M01 + M10, Pi_null = 1 - Pi_0 - Pi_1.
struct GuessingMeasurement {
    HermitianOperator pi0;
    HermitianOperator pi1;
    HermitianOperator pi_null;
};

inline GuessingMeasurement guessing_measurement(const Povm &joint) {
    auto pi0 = joint.at(0, 0) + joint.at(1, 1);
    auto pi1 = joint.at(0, 1) + joint.at(1, 0);
    auto pi_null = HermitianOperator::identity(pi0.dims()) - pi0 - pi1;
    return {std::move(pi0), std::move(pi1), std::move(pi_null)};
}

/// (1/2)(Tr[rho0 Pi_0] + Tr[rho1 Pi_1]); equals gamma^2 G for valid strategies.
inline double trace_objective(const Povm &joint, const DiscriminationPair &pair) {
    const auto g = guessing_measurement(joint);
    return (hs_inner(pair.rho0, g.pi0) + hs_inner(pair.rho1, g.pi1)) / 2;
}

namespace detail {

inline void check_gamma(double gamma, const char *who) {
    if (!(gamma > 0 && gamma <= 1)) {
        throw std::invalid_argument(std::string(who) + ": gamma must lie in (0, 1], got " + std::to_string(gamma));
    }
}

/// {gamma (1 + P)/2, gamma (1 - P)/2, (1 - gamma) 1} for a Pauli observable P.
inline Povm filtered_projective(const ComplexMatrix &observable, double gamma) {
    const ComplexMatrix id = pauli::I();
    return Povm{{HermitianOperator(gamma * (id + observable) / 2.0), HermitianOperator(gamma * (id - observable) / 2.0),
                 HermitianOperator((1 - gamma) * id)}};
}

}  // namespace detail

/// Both parties measure X with probability gamma, otherwise output null.
inline LosrStrategy losr_x_basis(double gamma) {
    detail::check_gamma(gamma, "losr_x_basis");
    const auto m = detail::filtered_projective(pauli::X(), gamma);
    return {{{1.0, m, m}}};
}

inline LosrStrategy losr_y_basis(double gamma) {
    detail::check_gamma(gamma, "losr_y_basis");
    const auto m = detail::filtered_projective(pauli::Y(), gamma);
    return {{{1.0, m, m}}};
}

/// Fixed outputs (a, b) regardless of input; gamma = 1.
inline LosrStrategy deterministic_strategy(int a = 0, int b = 0) {
    auto fixed = [](int out) {
        Povm p{{HermitianOperator::zero({2}), HermitianOperator::zero({2}), HermitianOperator::zero({2})}};
        p.elements[static_cast<std::size_t>(out)] = HermitianOperator::identity({2});
        return p;
    };
    return {{{1.0, fixed(a), fixed(b)}}};
}

/// Inefficient Bell-state measurements on a shared |Psi+>:
///   Q_0 = g1 |Psi+><Psi+| + g2 (|00><00| + |11><11|)
///   Q_1 = g1 |Psi-><Psi-| + g2 (|00><00| + |11><11|)
/// with g1 = min(2 gamma, 1), g2 = max(gamma - 1/2, 0), and R_i = Q_i.
inline QuantumStrategy pretty_good_strategy(double gamma) {
    detail::check_gamma(gamma, "pretty_good_strategy");
    const double g1 = std::min(2 * gamma, 1.0);
    const double g2 = std::max(gamma - 0.5, 0.0);
    const std::vector<int> dims = {2, 2};
    ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
    diag(0, 0) = 1;
    diag(3, 3) = 1;
    const auto psi_plus = HermitianOperator::projector(bell_state(BellState::PsiPlus), dims);
    const auto psi_minus = HermitianOperator::projector(bell_state(BellState::PsiMinus), dims);
    const HermitianOperator q0 = g1 * psi_plus + g2 * HermitianOperator(diag, dims);
    const HermitianOperator q1 = g1 * psi_minus + g2 * HermitianOperator(diag, dims);
    const HermitianOperator qn = HermitianOperator::identity(dims) - q0 - q1;
    Povm pqm{{q0, q1, qn}};
    return {psi_plus, pqm, pqm};
}

/// Re-expresses a strategy written for the `from` encoding so that it yields
/// the same statistics on inputs prepared in the `to` encoding.
inline QuantumStrategy to_frame(const QuantumStrategy &s, Encoding from, Encoding to) {
    const ComplexMatrix ua = frame_unitary(Party::Alice, from, to);
    const ComplexMatrix ub = frame_unitary(Party::Bob, from, to);
    const int da2 = s.alice[0].dims()[1];
    const int db2 = s.bob[0].dims()[0];
    const ComplexMatrix la = detail::kron(ua, ComplexMatrix::Identity(da2, da2));
    const ComplexMatrix lb = detail::kron(ComplexMatrix::Identity(db2, db2), ub);
    QuantumStrategy out = s;
    for (auto &q : out.alice.elements) {
        q = q.conjugated(la);
    }
    for (auto &r : out.bob.elements) {
        r = r.conjugated(lb);
    }
    return out;
}

inline LosrStrategy to_frame(const LosrStrategy &s, Encoding from, Encoding to) {
    const ComplexMatrix ua = frame_unitary(Party::Alice, from, to);
    const ComplexMatrix ub = frame_unitary(Party::Bob, from, to);
    LosrStrategy out = s;
    for (auto &c : out.components) {
        for (auto &q : c.alice.elements) {
            q = q.conjugated(ua);
        }
        for (auto &r : c.bob.elements) {
            r = r.conjugated(ub);
        }
    }
    return out;
}

/// Pretty-good strategy at gamma = 1/2 sharing werner(F). The Werner family
/// is built on |Psi->, so Bob's device applies Z on B' first, which maps it
/// onto the |Psi+> the measurements expect.
inline QuantumStrategy werner_pretty_good_strategy(double fidelity) {
    auto s = pretty_good_strategy(0.5);
    s.shared_state = werner(fidelity).op;
    ComplexMatrix zb = ComplexMatrix::Zero(4, 4);
    zb.topLeftCorner(2, 2) = ComplexMatrix::Identity(2, 2);
    zb.bottomRightCorner(2, 2) = -ComplexMatrix::Identity(2, 2);
    for (auto &r : s.bob.elements) {
        r = r.conjugated(zb);
    }
    return s;
}

struct CurvePoint {
    double x = 0;
    double value = 0;
};

/// S(F) of werner_pretty_good_strategy on the PauliXY inputs.
inline std::vector<CurvePoint> werner_pretty_good_curve(std::span<const double> fidelities) {
    const auto pair = build_pair(Encoding::PauliXY);
    std::vector<CurvePoint> out;
    out.reserve(fidelities.size());
    for (double f : fidelities) {
        const auto t = probability_table(effective_measurement(werner_pretty_good_strategy(f)), pair);
        out.push_back({f, bell_report(t, 0.5).bell_value});
    }
    return out;
}

struct SimulationReport {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    double gamma = 1;
    /// counts[input][joint_index(a, b)]
    std::array<std::array<std::uint64_t, kNumJointOutcomes>, kNumInputPairs> counts{};
    std::array<double, kNumInputPairs> alice_eff{};
    std::array<double, kNumInputPairs> bob_eff{};
    std::array<double, kNumInputPairs> joint_eff{};
    std::array<double, kNumInputPairs> correlations{};
    double bell_value = 0;
    double standard_error = 0;
    double guessing = 0;
};

/// Draws `rounds` uniformly random input pairs and outcomes from `t`.
///
/// Round r uses counter 2r for the input and 2r+1 for the outcome of
/// CounterRng(seed). C(x, y) is estimated per input from its own rounds and
/// S is divided by the nominal gamma^2. The standard error propagates the
/// per-input multinomial variance (q - C^2)/n, q the conclusive fraction.
inline SimulationReport simulate(const ProbabilityTable &t, double gamma, std::uint64_t rounds, std::uint64_t seed) {
    if (rounds < 1) {
        throw std::invalid_argument("simulate: rounds must be at least 1");
    }
    detail::check_gamma(gamma, "simulate");
    validate(t);
    std::array<std::array<double, kNumJointOutcomes>, kNumInputPairs> cdf{};
    for (std::size_t i = 0; i < kNumInputPairs; i++) {
        double acc = 0;
        for (std::size_t k = 0; k < kNumJointOutcomes; k++) {
            acc += std::max(0.0, t.p[i][k]);
            cdf[i][k] = acc;
        }
        for (auto &c : cdf[i]) {
            c /= acc;
        }
    }
    const CounterRng rng(seed);
    SimulationReport r;
    r.rounds = rounds;
    r.seed = seed;
    r.gamma = gamma;
    for (std::uint64_t round = 0; round < rounds; round++) {
        const auto input = static_cast<std::size_t>(rng.uniform(2 * round) * kNumInputPairs);
        const double u = rng.uniform(2 * round + 1);
        std::size_t k = 0;
        while (k + 1 < kNumJointOutcomes && u >= cdf[input][k]) {
            k++;
        }
        r.counts[input][k]++;
    }
    double s = 0;
    double var = 0;
    double win = 0;
    for (int i = 0; i < kNumInputPairs; i++) {
        const auto &c = r.counts[static_cast<std::size_t>(i)];
        double n = 0;
        for (auto v : c) {
            n += static_cast<double>(v);
        }
        if (n == 0) {
            continue;
        }
        auto cnt = [&](int a, int b) { return static_cast<double>(c[static_cast<std::size_t>(joint_index(a, b))]); };
        const double eq = cnt(0, 0) + cnt(1, 1);
        const double ne = cnt(0, 1) + cnt(1, 0);
        double alice = 0;
        double bob = 0;
        for (int x = 0; x < 2; x++) {
            for (int y = 0; y < kNumOutcomes; y++) {
                alice += cnt(x, y);
                bob += cnt(y, x);
            }
        }
        const auto k = static_cast<std::size_t>(i);
        r.alice_eff[k] = alice / n;
        r.bob_eff[k] = bob / n;
        r.joint_eff[k] = (eq + ne) / n;
        r.correlations[k] = (eq - ne) / n;
        const bool flip = target_bit(InputPair::from_index(i)) != 0;
        s += (flip ? -1.0 : 1.0) * r.correlations[k];
        var += (r.joint_eff[k] - r.correlations[k] * r.correlations[k]) / n;
        win += (flip ? ne : eq) / n;
    }
    const double g2 = gamma * gamma;
    r.bell_value = s / (4 * g2);
    r.standard_error = std::sqrt(std::max(0.0, var)) / (4 * g2);
    r.guessing = win / kNumInputPairs / g2;
    return r;
}

}  // namespace sqchsh
