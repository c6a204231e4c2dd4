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

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sqchsh/commands.hpp"

namespace {

using sqchsh::cli::Command;
using sqchsh::cli::RunConfig;

struct Flags {
    std::string format = "csv";
    std::string encoding = "pauli-xy";
    bool dump_problem = false;
};

void add_common(CLI::App *sub, RunConfig &cfg, Flags &flags) {
    sub->add_option("--format", flags.format, "csv or json")->capture_default_str();
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--encoding", flags.encoding, "pauli-xy or hadamard")->capture_default_str();
}

void add_gamma_list(CLI::App *sub, RunConfig &cfg) {
    sub->add_option("--gamma", cfg.gammas, "gamma value(s), repeat or comma-separate")->delimiter(',');
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Semi-quantum CHSH bounds, strategies and certificates"};
    app.require_subcommand(1);
    RunConfig cfg;
    Flags flags;

    auto *bounds = app.add_subcommand("bounds", "Bell-value curves over gamma");
    bounds->add_option("--gamma-min", cfg.gamma_min)->capture_default_str();
    bounds->add_option("--gamma-max", cfg.gamma_max)->capture_default_str();
    bounds->add_option("--steps", cfg.steps, "grid points (default 60)");
    bounds->add_flag("--with-solver", cfg.with_solver, "also solve both programs at every point");
    add_common(bounds, cfg, flags);

    auto *werner = app.add_subcommand("werner", "Werner-resource bound over xi");
    werner->add_option("--xi-min", cfg.xi_min)->capture_default_str();
    werner->add_option("--xi-max", cfg.xi_max)->capture_default_str();
    werner->add_option("--steps", cfg.steps, "grid points (default 30)");
    werner->add_flag("--strict-werner", cfg.strict_werner, "fix the inconclusive rate for every input");
    add_common(werner, cfg, flags);

    auto *simulate = app.add_subcommand("simulate", "Monte Carlo run of a strategy (JSON report)");
    simulate->add_option("--strategy", cfg.strategy, "pretty-good or losr-x")->capture_default_str();
    simulate->add_option("--rounds", cfg.rounds)->capture_default_str();
    simulate->add_option("--seed", cfg.seed)->capture_default_str();
    add_gamma_list(simulate, cfg);
    add_common(simulate, cfg, flags);

    auto *verify = app.add_subcommand("verify", "Audit the explicit optimal points");
    add_gamma_list(verify, cfg);
    add_common(verify, cfg, flags);

    auto *solve = app.add_subcommand("solve", "Solve a single program (JSON)");
    solve->add_option("--family", cfg.family, "general, ppt or werner")->capture_default_str();
    solve->add_option("--direction", cfg.direction, "primal or dual")->capture_default_str();
    solve->add_option("--xi", cfg.xi)->capture_default_str();
    solve->add_flag("--strict-werner", cfg.strict_werner);
    solve->add_flag("--dump-problem", flags.dump_problem, "print the problem instead of solving it");
    add_gamma_list(solve, cfg);
    add_common(solve, cfg, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return sqchsh::cli::kExitValidation;
    }

    try {
        if (bounds->parsed()) {
            cfg.command = Command::Bounds;
        } else if (werner->parsed()) {
            cfg.command = Command::Werner;
        } else if (simulate->parsed()) {
            cfg.command = Command::Simulate;
        } else if (verify->parsed()) {
            cfg.command = Command::Verify;
        } else {
            cfg.command = Command::Solve;
        }
        cfg.format = sqchsh::cli::parse_format(flags.format);
        cfg.encoding = sqchsh::parse_encoding(flags.encoding);

        sqchsh::cli::CommandResult result;
        if (cfg.command == Command::Solve && flags.dump_problem) {
            sqchsh::cli::validate(cfg);
            result.output = sqchsh::sdp::to_json(sqchsh::cli::problem_for(cfg)).dump(1) + "\n";
        } else {
            result = sqchsh::cli::run(cfg);
        }
        if (cfg.out.empty()) {
            std::cout << result.output;
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            f << result.output;
            if (!f) {
                std::cerr << "error: cannot write " << cfg.out << "\n";
                return sqchsh::cli::kExitValidation;
            }
        }
        return result.exit_code;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return sqchsh::cli::kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return sqchsh::cli::kExitNonConvergence;
    }
}
