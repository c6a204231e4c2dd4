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

// Batch commands behind the sqchsh executable. Each returns the rendered
// output and an exit code; nothing here touches the filesystem.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "sqchsh/game.hpp"
#include "sqchsh/inputs.hpp"
#include "sqchsh/sdp/certificates.hpp"
#include "sqchsh/sdp/programs.hpp"
#include "sqchsh/sdp/solver.hpp"

namespace sqchsh::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitCertificate = 3;

inline constexpr const char *kBoundsHeader =
    "gamma,local_bound,quantum_upper,pretty_good_S,solver_general_S,solver_ppt_S,status";
inline constexpr const char *kWernerHeader = "xi,sdp_bound_S,pretty_good_S_at_gamma_half,status";
inline constexpr const char *kVerifyHeader = "gamma,certificate,objective,claimed_objective,max_residual,worst,passed";

class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

enum class Command { Bounds, Werner, Simulate, Verify, Solve };
enum class Format { Csv, Json };

inline Format parse_format(const std::string &s) {
    if (s == "csv") {
        return Format::Csv;
    }
    if (s == "json") {
        return Format::Json;
    }
    throw ValidationError("unknown format '" + s + "' (expected csv or json)");
}

struct RunConfig {
    Command command = Command::Bounds;
    double gamma_min = 0.05;
    double gamma_max = 1.0;
    double xi_min = 0.0;
    double xi_max = 1.0;
    /// Grid points; 0 selects the command default (60 for gamma, 30 for xi).
    int steps = 0;
    /// Explicit gamma values for simulate, verify and solve.
    std::vector<double> gammas;
    std::uint64_t rounds = 1000000;
    std::uint64_t seed = 42;
    std::string strategy = "pretty-good";
    Format format = Format::Csv;
    std::string out;
    bool with_solver = false;
    bool strict_werner = false;
    /// solve only: general, ppt or werner; primal or dual.
    std::string family = "general";
    std::string direction = "primal";
    double xi = 0.5;
    Encoding encoding = Encoding::PauliXY;
};

struct CommandResult {
    int exit_code = kExitOk;
    std::string output;
};

/// Shortest decimal with 9 significant digits; locale independent.
inline std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (v == 0) {
        v = 0;  // drops the sign of -0
    }
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    if (r.ec != std::errc()) {
        throw std::runtime_error("format_number: conversion failed");
    }
    return std::string(buf, r.ptr);
}

namespace detail {

inline bool valid_gamma(double g) {
    return g > 0 && g <= 1;
}

inline bool valid_xi(double x) {
    return x >= 0 && x <= 1;
}

/// Evenly spaced points plus breakpoints that fall inside the range.
inline std::vector<double> grid(double lo, double hi, int steps, std::vector<double> extra) {
    std::vector<double> g;
    if (steps == 1) {
        g.push_back(lo);
    } else {
        for (int k = 0; k < steps; k++) {
            g.push_back(k == steps - 1 ? hi : lo + (hi - lo) * k / (steps - 1));
        }
    }
    for (double e : extra) {
        if (e >= lo && e <= hi) {
            g.push_back(e);
        }
    }
    std::sort(g.begin(), g.end());
    std::vector<double> out;
    for (double v : g) {
        if (out.empty() || v - out.back() > 1e-12) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace detail

inline std::vector<double> gamma_grid(const RunConfig &cfg) {
    return detail::grid(cfg.gamma_min, cfg.gamma_max, cfg.steps > 0 ? cfg.steps : 60, {0.5, 1 / std::sqrt(2.0)});
}

inline std::vector<double> xi_grid(const RunConfig &cfg) {
    return detail::grid(cfg.xi_min, cfg.xi_max, cfg.steps > 0 ? cfg.steps : 30, {1.0 / 3, 0.5});
}

inline const std::vector<double> &default_verify_gammas() {
    static const std::vector<double> g = {0.1, 0.3, 0.5, 1 / std::sqrt(2.0), 0.75, 0.9, 1.0};
    return g;
}

inline void validate(const RunConfig &cfg) {
    if (cfg.steps < 0) {
        throw ValidationError("--steps must be positive");
    }
    switch (cfg.command) {
        case Command::Bounds:
            if (!detail::valid_gamma(cfg.gamma_min) || !detail::valid_gamma(cfg.gamma_max) ||
                cfg.gamma_min > cfg.gamma_max) {
                throw ValidationError("gamma range must satisfy 0 < gamma-min <= gamma-max <= 1");
            }
            break;
        case Command::Werner:
            if (!detail::valid_xi(cfg.xi_min) || !detail::valid_xi(cfg.xi_max) || cfg.xi_min > cfg.xi_max) {
                throw ValidationError("xi range must satisfy 0 <= xi-min <= xi-max <= 1");
            }
            break;
        case Command::Simulate:
            if (cfg.strategy != "pretty-good" && cfg.strategy != "losr-x") {
                throw ValidationError("unknown strategy '" + cfg.strategy + "' (expected pretty-good or losr-x)");
            }
            if (cfg.rounds < 1) {
                throw ValidationError("--rounds must be at least 1");
            }
            if (cfg.gammas.size() > 1) {
                throw ValidationError("simulate takes a single --gamma");
            }
            break;
        case Command::Verify:
            break;
        case Command::Solve:
            if (cfg.family != "general" && cfg.family != "ppt" && cfg.family != "werner") {
                throw ValidationError("unknown family '" + cfg.family + "' (expected general, ppt or werner)");
            }
            if (cfg.direction != "primal" && cfg.direction != "dual") {
                throw ValidationError("unknown direction '" + cfg.direction + "'");
            }
            if (cfg.family == "werner" && !detail::valid_xi(cfg.xi)) {
                throw ValidationError("--xi must lie in [0, 1]");
            }
            if (cfg.family != "werner" && cfg.gammas.size() > 1) {
                throw ValidationError("solve takes a single --gamma");
            }
            break;
    }
    for (double g : cfg.gammas) {
        if (!detail::valid_gamma(g)) {
            throw ValidationError("gamma " + format_number(g) + " outside (0, 1]");
        }
    }
}

namespace detail {

// Objectives carry a factor gamma^2, so the gap target scales with it.
inline sdp::SolverOptions sweep_options(double gamma = 1) {
    sdp::SolverOptions o;
    o.gap_tol = std::max(1e-9 * gamma * gamma, 1e-12);
    o.feas_tol = 1e-9;
    return o;
}

inline std::string status_text(const std::vector<std::pair<std::string, sdp::Status>> &runs) {
    std::string s;
    for (const auto &[name, st] : runs) {
        if (st != sdp::Status::Optimal) {
            s += (s.empty() ? "" : ";") + name + ":" + sdp::to_string(st);
        }
    }
    return s.empty() ? "ok" : s;
}

inline std::string render_csv(const std::string &header, const std::vector<std::vector<std::string>> &rows) {
    std::string out = header + "\n";
    for (const auto &r : rows) {
        for (std::size_t k = 0; k < r.size(); k++) {
            out += (k ? "," : "") + r[k];
        }
        out += "\n";
    }
    return out;
}

inline double pretty_good_value(double gamma, const DiscriminationPair &pair) {
    return bell_report(probability_table(effective_measurement(pretty_good_strategy(gamma)), pair), gamma).bell_value;
}

}  // namespace detail

/// Bell-value curves against gamma: local bound, quantum upper bound,
/// pretty-good strategy, and optionally the two solved programs.
inline CommandResult cmd_bounds(const RunConfig &cfg) {
    validate(cfg);
    const auto pair = build_pair(cfg.encoding);
    const double local = sdp::bell_from_guessing(sdp::closed_form_ppt());
    CommandResult res;
    std::vector<std::vector<std::string>> rows;
    auto json_rows = nlohmann::json::array();
    for (double g : gamma_grid(cfg)) {
        const double upper = sdp::bell_from_guessing(sdp::closed_form_general(g));
        const double pg = detail::pretty_good_value(g, pair);
        std::string gen_s;
        std::string ppt_s;
        nlohmann::json jrow = {{"gamma", g}, {"local_bound", local}, {"quantum_upper", upper}, {"pretty_good_S", pg}};
        std::vector<std::pair<std::string, sdp::Status>> runs;
        if (cfg.with_solver) {
            const auto o = detail::sweep_options(g);
            const auto gen = sdp::solve(sdp::build_general(g, pair), o);
            const auto ppt = sdp::solve(sdp::build_ppt(g, pair), o);
            const double gs = sdp::bell_from_guessing(sdp::guessing_from_objective(gen.dual_objective, g));
            const double ps = sdp::bell_from_guessing(sdp::guessing_from_objective(ppt.dual_objective, g));
            gen_s = format_number(gs);
            ppt_s = format_number(ps);
            jrow["solver_general_S"] = gs;
            jrow["solver_ppt_S"] = ps;
            runs = {{"general", gen.status}, {"ppt", ppt.status}};
        } else {
            jrow["solver_general_S"] = nullptr;
            jrow["solver_ppt_S"] = nullptr;
        }
        const auto status = detail::status_text(runs);
        if (status != "ok") {
            res.exit_code = kExitNonConvergence;
        }
        jrow["status"] = status;
        rows.push_back({format_number(g), format_number(local), format_number(upper), format_number(pg), gen_s, ppt_s,
                        status});
        json_rows.push_back(jrow);
    }
    if (cfg.format == Format::Csv) {
        res.output = detail::render_csv(kBoundsHeader, rows);
    } else {
        res.output = nlohmann::json{{"spec_rev", sdp::kSchemaRevision}, {"command", "bounds"}, {"rows", json_rows}}
                         .dump(2) +
                     "\n";
    }
    return res;
}

/// Werner-resource bound and the pretty-good strategy on the same state.
inline CommandResult cmd_werner(const RunConfig &cfg) {
    validate(cfg);
    const auto pair = build_pair(cfg.encoding);
    const auto grid = xi_grid(cfg);
    const auto curve = werner_pretty_good_curve(grid);
    CommandResult res;
    std::vector<std::vector<std::string>> rows;
    auto json_rows = nlohmann::json::array();
    for (std::size_t k = 0; k < grid.size(); k++) {
        const double xi = grid[k];
        const auto s = sdp::solve(sdp::build_werner(xi, cfg.strict_werner, pair), detail::sweep_options(0.5));
        const double bound = sdp::werner_bell_bound(s.dual_objective);
        const auto status = detail::status_text({{"werner", s.status}});
        if (status != "ok") {
            res.exit_code = kExitNonConvergence;
        }
        rows.push_back({format_number(xi), format_number(bound), format_number(curve[k].value), status});
        json_rows.push_back({{"xi", xi},
                             {"sdp_bound_S", bound},
                             {"sdp_primal_S", sdp::werner_bell_bound(s.primal_objective)},
                             {"pretty_good_S_at_gamma_half", curve[k].value},
                             {"status", status}});
    }
    if (cfg.format == Format::Csv) {
        res.output = detail::render_csv(kWernerHeader, rows);
    } else {
        res.output = nlohmann::json{{"spec_rev", sdp::kSchemaRevision},
                                    {"command", "werner"},
                                    {"strict", cfg.strict_werner},
                                    {"rows", json_rows}}
                         .dump(2) +
                     "\n";
    }
    return res;
}

/// Monte Carlo run of a named strategy; always a JSON report.
inline CommandResult cmd_simulate(const RunConfig &cfg) {
    validate(cfg);
    const double g = cfg.gammas.empty() ? 0.5 : cfg.gammas.front();
    const auto pair = build_pair(cfg.encoding);
    const Povm joint = cfg.strategy == "pretty-good" ? effective_measurement(pretty_good_strategy(g))
                                                     : effective_measurement(losr_x_basis(g));
    const auto table = probability_table(joint, pair);
    const auto exact = bell_report(table, g);
    const auto sim = simulate(table, g, cfg.rounds, cfg.seed);
    auto checks = nlohmann::json::array();
    bool all_ok = true;
    for (int i = 0; i < kNumInputPairs; i++) {
        const auto k = static_cast<std::size_t>(i);
        const double dev = std::max(std::abs(exact.alice_eff[k] - g), std::abs(exact.bob_eff[k] - g));
        const bool ok = dev <= 1e-8;
        all_ok = all_ok && ok;
        checks.push_back({{"input", InputPair::from_index(i).label()},
                          {"alice_rate", exact.alice_eff[k]},
                          {"bob_rate", exact.bob_eff[k]},
                          {"empirical_alice_rate", sim.alice_eff[k]},
                          {"empirical_bob_rate", sim.bob_eff[k]},
                          {"ok", ok}});
    }
    nlohmann::json j = {{"spec_rev", sdp::kSchemaRevision},
                        {"command", "simulate"},
                        {"strategy", cfg.strategy},
                        {"encoding", to_string(cfg.encoding)},
                        {"gamma", g},
                        {"rounds", cfg.rounds},
                        {"seed", cfg.seed},
                        {"exact_S", exact.bell_value},
                        {"empirical_S", sim.bell_value},
                        {"standard_error", sim.standard_error},
                        {"deviation_in_se", sim.standard_error > 0
                                                ? nlohmann::json((sim.bell_value - exact.bell_value) / sim.standard_error)
                                                : nlohmann::json(nullptr)},
                        {"exact_guessing", exact.guessing},
                        {"empirical_guessing", sim.guessing},
                        {"conclusive_rates_ok", all_ok},
                        {"conclusive_rates", checks}};
    return {kExitOk, j.dump(2) + "\n"};
}

/// Audits the explicit optimal points at each gamma.
inline CommandResult cmd_verify(const RunConfig &cfg) {
    validate(cfg);
    const auto pair = build_pair(cfg.encoding);
    const auto &gammas = cfg.gammas.empty() ? default_verify_gammas() : cfg.gammas;
    CommandResult res;
    std::vector<std::vector<std::string>> rows;
    auto json_rows = nlohmann::json::array();
    for (double g : gammas) {
        for (const auto &c : sdp::optimal_certificates(g, pair)) {
            const auto r = sdp::verify_certificate(c, pair);
            if (!r.passed) {
                res.exit_code = kExitCertificate;
            }
            rows.push_back({format_number(g), c.name, format_number(r.objective), format_number(r.claimed_objective),
                            format_number(r.max_residual), r.worst, r.passed ? "true" : "false"});
            json_rows.push_back({{"gamma", g},
                                 {"certificate", c.name},
                                 {"objective", r.objective},
                                 {"claimed_objective", r.claimed_objective},
                                 {"max_residual", r.max_residual},
                                 {"worst", r.worst},
                                 {"passed", r.passed}});
        }
    }
    if (cfg.format == Format::Csv) {
        res.output = detail::render_csv(kVerifyHeader, rows);
    } else {
        res.output =
            nlohmann::json{{"spec_rev", sdp::kSchemaRevision}, {"command", "verify"}, {"rows", json_rows}}.dump(2) +
            "\n";
    }
    return res;
}

inline sdp::SdpProblem problem_for(const RunConfig &cfg) {
    const auto pair = build_pair(cfg.encoding);
    if (cfg.family == "werner") {
        return sdp::build_werner(cfg.xi, cfg.strict_werner, pair);
    }
    const double g = cfg.gammas.empty() ? 0.5 : cfg.gammas.front();
    const auto dir = cfg.direction == "dual" ? sdp::Direction::Dual : sdp::Direction::Primal;
    return cfg.family == "ppt" ? sdp::build_ppt(g, pair, dir) : sdp::build_general(g, pair, dir);
}

/// Solves one program and reports the solution as JSON.
inline CommandResult cmd_solve(const RunConfig &cfg) {
    validate(cfg);
    const auto p = problem_for(cfg);
    const auto s = sdp::solve(
        p, detail::sweep_options(p.family == sdp::Family::Werner ? 0.5 : p.params.at("gamma")));
    auto j = sdp::to_json(s);
    j["family"] = sdp::to_string(p.family);
    j["params"] = p.params;
    if (p.family == sdp::Family::Werner) {
        j["bell_bound"] = sdp::werner_bell_bound(s.dual_objective);
    } else {
        const double g = p.params.at("gamma");
        j["guessing"] = sdp::guessing_from_objective(s.primal_objective, g);
        j["bell_value"] = sdp::bell_from_guessing(sdp::guessing_from_objective(s.primal_objective, g));
    }
    return {s.status == sdp::Status::Optimal ? kExitOk : kExitNonConvergence, j.dump(2) + "\n"};
}

inline CommandResult run(const RunConfig &cfg) {
    switch (cfg.command) {
        case Command::Bounds:
            return cmd_bounds(cfg);
        case Command::Werner:
            return cmd_werner(cfg);
        case Command::Simulate:
            return cmd_simulate(cfg);
        case Command::Verify:
            return cmd_verify(cfg);
        case Command::Solve:
            return cmd_solve(cfg);
    }
    throw ValidationError("unknown command");
}

}  // namespace sqchsh::cli
