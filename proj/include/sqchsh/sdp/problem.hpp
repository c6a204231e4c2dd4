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

// Block semidefinite programs over complex Hermitian variables:
//
//   optimize   sum_b Tr[C_b X_b] + sum_j c_j u_j
//   subject to sum_b Tr[A_ib X_b] + sum_j f_ij u_j = rhs_i   for each i
//              X_b PSD, u free.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqchsh/hermitian.hpp"

namespace sqchsh::sdp {

inline constexpr const char *kSchemaRevision = "1";

enum class Family { GeneralPrimal, GeneralDual, PptPrimal, PptDual, Werner, Custom };
enum class Sense { Maximize, Minimize };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::GeneralPrimal:
            return "GeneralPrimal";
        case Family::GeneralDual:
            return "GeneralDual";
        case Family::PptPrimal:
            return "PptPrimal";
        case Family::PptDual:
            return "PptDual";
        case Family::Werner:
            return "Werner";
        case Family::Custom:
            return "Custom";
    }
    return "Custom";
}

inline Family parse_family(const std::string &s) {
    for (auto f : {Family::GeneralPrimal, Family::GeneralDual, Family::PptPrimal, Family::PptDual, Family::Werner,
                   Family::Custom}) {
        if (to_string(f) == s) {
            return f;
        }
    }
    throw std::invalid_argument("unknown problem family '" + s + "'");
}

struct Block {
    std::string name;
    std::vector<int> dims;

    int dim() const {
        int n = 1;
        for (int d : dims) {
            n *= d;
        }
        return n;
    }
};

/// Tr[coeff X_block].
struct Term {
    int block = 0;
    HermitianOperator coeff;
};

struct FreeTerm {
    int var = 0;
    double coeff = 0;
};

struct Constraint {
    std::string label;
    std::vector<Term> terms;
    std::vector<FreeTerm> free_terms;
    double rhs = 0;
};

struct SdpProblem {
    Family family = Family::Custom;
    Sense sense = Sense::Maximize;
    std::map<std::string, double> params;
    std::vector<Block> blocks;
    std::vector<std::string> free_vars;
    std::vector<Term> objective;
    std::vector<FreeTerm> free_objective;
    std::vector<Constraint> constraints;

    int block_index(const std::string &name) const {
        for (std::size_t k = 0; k < blocks.size(); k++) {
            if (blocks[k].name == name) {
                return static_cast<int>(k);
            }
        }
        throw std::invalid_argument("no block named '" + name + "'");
    }
};

inline void validate(const SdpProblem &p) {
    if (p.blocks.empty()) {
        throw std::invalid_argument("SdpProblem: no blocks");
    }
    if (p.constraints.empty()) {
        throw std::invalid_argument("SdpProblem: constraint list is empty");
    }
    auto check_term = [&](const Term &t, const std::string &where) {
        if (t.block < 0 || static_cast<std::size_t>(t.block) >= p.blocks.size()) {
            throw std::invalid_argument(where + ": block index " + std::to_string(t.block) + " out of range");
        }
        if (t.coeff.dim() != p.blocks[static_cast<std::size_t>(t.block)].dim()) {
            throw std::invalid_argument(where + ": coefficient dimension " + std::to_string(t.coeff.dim()) +
                                        " does not match block '" + p.blocks[static_cast<std::size_t>(t.block)].name +
                                        "'");
        }
    };
    auto check_free = [&](const FreeTerm &f, const std::string &where) {
        if (f.var < 0 || static_cast<std::size_t>(f.var) >= p.free_vars.size()) {
            throw std::invalid_argument(where + ": free variable index " + std::to_string(f.var) + " out of range");
        }
    };
    for (const auto &t : p.objective) {
        check_term(t, "objective");
    }
    for (const auto &f : p.free_objective) {
        check_free(f, "objective");
    }
    for (const auto &c : p.constraints) {
        for (const auto &t : c.terms) {
            check_term(t, "constraint '" + c.label + "'");
        }
        for (const auto &f : c.free_terms) {
            check_free(f, "constraint '" + c.label + "'");
        }
    }
}

/// Real linear functionals spanning Herm(n): for every Hermitian X,
/// Tr[E X] runs over X_pp, Re X_pq and Im X_pq (p < q).
struct BasisElement {
    std::string label;
    HermitianOperator op;
    /// Hermitian D with Tr[E' D] = [E' == E] over the same basis.
    HermitianOperator dual;
};

inline std::vector<BasisElement> hermitian_basis(const std::vector<int> &dims) {
    int n = 1;
    for (int d : dims) {
        n *= d;
    }
    std::vector<BasisElement> out;
    out.reserve(static_cast<std::size_t>(n * n));
    for (int p = 0; p < n; p++) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(p, p) = 1;
        out.push_back({"(" + std::to_string(p) + "," + std::to_string(p) + ")", HermitianOperator(e, dims),
                       HermitianOperator(e, dims)});
    }
    for (int p = 0; p < n; p++) {
        for (int q = p + 1; q < n; q++) {
            ComplexMatrix re = ComplexMatrix::Zero(n, n);
            re(p, q) = 0.5;
            re(q, p) = 0.5;
            ComplexMatrix im = ComplexMatrix::Zero(n, n);
            im(p, q) = cplx(0, 0.5);
            im(q, p) = cplx(0, -0.5);
            const std::string pq = std::to_string(p) + "," + std::to_string(q);
            out.push_back({"re(" + pq + ")", HermitianOperator(re, dims), HermitianOperator(2.0 * re, dims)});
            out.push_back({"im(" + pq + ")", HermitianOperator(im, dims), HermitianOperator(2.0 * im, dims)});
        }
    }
    return out;
}

enum class Status { Optimal, MaxIterations, Infeasible };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal:
            return "Optimal";
        case Status::MaxIterations:
            return "MaxIterations";
        case Status::Infeasible:
            return "Infeasible";
    }
    return "Infeasible";
}

struct SdpSolution {
    Status status = Status::MaxIterations;
    std::vector<HermitianOperator> block_values;
    std::vector<double> free_values;
    /// One multiplier per constraint, in the problem's order.
    std::vector<double> dual_multipliers;
    /// sum_i y_i A_ib - C_b, PSD at dual feasibility (maximize form).
    std::vector<HermitianOperator> dual_slacks;
    /// Objective of the problem as posed at the primal iterate.
    double primal_objective = 0;
    /// The matching bound from the dual iterate.
    double dual_objective = 0;
    double gap = 0;
    double primal_residual = 0;
    double dual_residual = 0;
    double min_block_eigenvalue = 0;
    int iterations = 0;
    int dropped_constraints = 0;
    double seconds = 0;
    std::string message;
    /// For Infeasible: multipliers y with sum_i y_i A_i = 0 and y . rhs != 0
    /// (equality system), or with A*(y) PSD and y . rhs < 0.
    std::vector<double> infeasibility_certificate;
};

// ---------------------------------------------------------------- JSON

namespace detail {

inline nlohmann::json operator_to_json(const HermitianOperator &op) {
    const int n = op.dim();
    std::vector<double> re;
    std::vector<double> im;
    re.reserve(static_cast<std::size_t>(n * n));
    im.reserve(static_cast<std::size_t>(n * n));
    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            re.push_back(op(r, c).real());
            im.push_back(op(r, c).imag());
        }
    }
    return {{"dims", op.dims()}, {"re", re}, {"im", im}};
}

inline HermitianOperator operator_from_json(const nlohmann::json &j) {
    const auto dims = j.at("dims").get<std::vector<int>>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    int n = 1;
    for (int d : dims) {
        n *= d;
    }
    if (re.size() != static_cast<std::size_t>(n * n) || im.size() != re.size()) {
        throw std::invalid_argument("operator JSON: entry count does not match dims");
    }
    ComplexMatrix m(n, n);
    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            const auto k = static_cast<std::size_t>(r * n + c);
            m(r, c) = cplx(re[k], im[k]);
        }
    }
    return HermitianOperator(m, dims);
}

inline nlohmann::json terms_to_json(const std::vector<Term> &terms) {
    auto out = nlohmann::json::array();
    for (const auto &t : terms) {
        auto j = operator_to_json(t.coeff);
        j["block"] = t.block;
        out.push_back(std::move(j));
    }
    return out;
}

inline std::vector<Term> terms_from_json(const nlohmann::json &j) {
    std::vector<Term> out;
    for (const auto &t : j) {
        out.push_back({t.at("block").get<int>(), operator_from_json(t)});
    }
    return out;
}

inline nlohmann::json free_to_json(const std::vector<FreeTerm> &terms) {
    auto out = nlohmann::json::array();
    for (const auto &f : terms) {
        out.push_back({{"var", f.var}, {"coeff", f.coeff}});
    }
    return out;
}

inline std::vector<FreeTerm> free_from_json(const nlohmann::json &j) {
    std::vector<FreeTerm> out;
    for (const auto &f : j) {
        out.push_back({f.at("var").get<int>(), f.at("coeff").get<double>()});
    }
    return out;
}

}  // namespace detail

/// Schema: blocks with subsystem dims; every coefficient operator as
/// row-major "re" / "im" arrays; constraint right-hand sides as numbers.
inline nlohmann::json to_json(const SdpProblem &p) {
    nlohmann::json j;
    j["spec_rev"] = kSchemaRevision;
    j["family"] = to_string(p.family);
    j["sense"] = p.sense == Sense::Maximize ? "maximize" : "minimize";
    j["params"] = p.params;
    auto blocks = nlohmann::json::array();
    for (const auto &b : p.blocks) {
        blocks.push_back({{"name", b.name}, {"dims", b.dims}});
    }
    j["blocks"] = blocks;
    j["free_vars"] = p.free_vars;
    j["objective"] = {{"terms", detail::terms_to_json(p.objective)}, {"free", detail::free_to_json(p.free_objective)}};
    auto cons = nlohmann::json::array();
    for (const auto &c : p.constraints) {
        cons.push_back({{"label", c.label},
                        {"terms", detail::terms_to_json(c.terms)},
                        {"free", detail::free_to_json(c.free_terms)},
                        {"rhs", c.rhs}});
    }
    j["constraints"] = cons;
    std::vector<double> rhs;
    rhs.reserve(p.constraints.size());
    for (const auto &c : p.constraints) {
        rhs.push_back(c.rhs);
    }
    j["rhs"] = rhs;
    return j;
}

inline SdpProblem problem_from_json(const nlohmann::json &j) {
    if (j.at("spec_rev").get<std::string>() != kSchemaRevision) {
        throw std::invalid_argument("unsupported schema revision " + j.at("spec_rev").get<std::string>());
    }
    SdpProblem p;
    p.family = parse_family(j.at("family").get<std::string>());
    const auto sense = j.at("sense").get<std::string>();
    if (sense != "maximize" && sense != "minimize") {
        throw std::invalid_argument("unknown sense '" + sense + "'");
    }
    p.sense = sense == "maximize" ? Sense::Maximize : Sense::Minimize;
    p.params = j.at("params").get<std::map<std::string, double>>();
    for (const auto &b : j.at("blocks")) {
        p.blocks.push_back({b.at("name").get<std::string>(), b.at("dims").get<std::vector<int>>()});
    }
    p.free_vars = j.at("free_vars").get<std::vector<std::string>>();
    p.objective = detail::terms_from_json(j.at("objective").at("terms"));
    p.free_objective = detail::free_from_json(j.at("objective").at("free"));
    for (const auto &c : j.at("constraints")) {
        p.constraints.push_back({c.at("label").get<std::string>(), detail::terms_from_json(c.at("terms")),
                                 detail::free_from_json(c.at("free")), c.at("rhs").get<double>()});
    }
    validate(p);
    return p;
}

inline nlohmann::json to_json(const SdpSolution &s) {
    nlohmann::json j;
    j["spec_rev"] = kSchemaRevision;
    j["status"] = to_string(s.status);
    j["primal_objective"] = s.primal_objective;
    j["dual_objective"] = s.dual_objective;
    j["gap"] = s.gap;
    j["primal_residual"] = s.primal_residual;
    j["dual_residual"] = s.dual_residual;
    j["min_block_eigenvalue"] = s.min_block_eigenvalue;
    j["iterations"] = s.iterations;
    j["dropped_constraints"] = s.dropped_constraints;
    j["message"] = s.message;
    auto blocks = nlohmann::json::array();
    for (const auto &b : s.block_values) {
        blocks.push_back(detail::operator_to_json(b));
    }
    j["block_values"] = blocks;
    j["free_values"] = s.free_values;
    j["dual_multipliers"] = s.dual_multipliers;
    return j;
}

}  // namespace sqchsh::sdp
