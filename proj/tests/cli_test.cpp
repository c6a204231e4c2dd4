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
#include <sstream>

#include <gtest/gtest.h>

#include "sqchsh/commands.hpp"

using namespace sqchsh;
using namespace sqchsh::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

std::vector<std::string> row_for(const std::vector<std::vector<std::string>> &rows, double key) {
    for (std::size_t k = 1; k < rows.size(); k++) {
        if (std::abs(std::stod(rows[k][0]) - key) < 1e-9) {
            return rows[k];
        }
    }
    return {};
}

RunConfig config(Command c) {
    RunConfig cfg;
    cfg.command = c;
    return cfg;
}

}  // namespace

TEST(FormatNumber, NineSignificantDigits) {
    EXPECT_EQ(format_number(std::sqrt(2.0)), "1.41421356");
    EXPECT_EQ(format_number(2 * std::sqrt(2.0)), "2.82842712");
    EXPECT_EQ(format_number(0.4), "0.4");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1e-12), "1e-12");
}

TEST(Grids, DefaultsIncludeBreakpoints) {
    const auto g = gamma_grid(config(Command::Bounds));
    EXPECT_EQ(g.size(), 62u);
    EXPECT_DOUBLE_EQ(g.front(), 0.05);
    EXPECT_DOUBLE_EQ(g.back(), 1.0);
    EXPECT_NE(std::find(g.begin(), g.end(), 0.5), g.end());
    EXPECT_NE(std::find(g.begin(), g.end(), 1 / std::sqrt(2.0)), g.end());
    EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
    const auto x = xi_grid(config(Command::Werner));
    EXPECT_EQ(x.size(), 32u);
    EXPECT_NE(std::find(x.begin(), x.end(), 1.0 / 3), x.end());
    EXPECT_NE(std::find(x.begin(), x.end(), 0.5), x.end());
    for (std::size_t k = 1; k < x.size(); k++) {
        EXPECT_LT(x[k - 1], x[k]);
    }
}

TEST(Bounds, HeaderAndRows) {
    auto cfg = config(Command::Bounds);
    cfg.gamma_min = 0.4;
    cfg.gamma_max = 1.0;
    cfg.steps = 4;  // 0.4, 0.6, 0.8, 1.0 plus breakpoints
    const auto r = cmd_bounds(cfg);
    EXPECT_EQ(r.exit_code, kExitOk);
    const auto rows = parse_csv(r.output);
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(r.output.substr(0, r.output.find('\n')), kBoundsHeader);
    const auto a = row_for(rows, 0.4);
    ASSERT_EQ(a.size(), 7u);
    EXPECT_NEAR(std::stod(a[1]), 1.4142136, 5e-8);
    EXPECT_NEAR(std::stod(a[2]), 2.8284271, 5e-8);
    EXPECT_NEAR(std::stod(a[3]), 2.8284271, 5e-8);
    EXPECT_EQ(a[4], "");
    EXPECT_EQ(a[6], "ok");
    const auto b = row_for(rows, 1.0);
    EXPECT_EQ(b[2], b[1]);
    const auto c = row_for(rows, 0.6);
    EXPECT_NEAR(std::stod(c[3]), 1.9641855, 5e-8);
    EXPECT_LT(std::stod(c[3]), std::stod(c[2]));
}

TEST(Bounds, WithSolverColumns) {
    auto cfg = config(Command::Bounds);
    cfg.gamma_min = 0.3;
    cfg.gamma_max = 0.9;
    cfg.steps = 3;
    cfg.with_solver = true;
    const auto r = cmd_bounds(cfg);
    EXPECT_EQ(r.exit_code, kExitOk);
    const auto rows = parse_csv(r.output);
    for (std::size_t k = 1; k < rows.size(); k++) {
        EXPECT_NEAR(std::stod(rows[k][4]), std::stod(rows[k][2]), 2e-8) << rows[k][0];
        EXPECT_NEAR(std::stod(rows[k][5]), std::sqrt(2.0), 2e-8);
        EXPECT_EQ(rows[k][6], "ok");
    }
}

TEST(Bounds, ByteStable) {
    auto cfg = config(Command::Bounds);
    cfg.with_solver = true;
    cfg.steps = 5;
    EXPECT_EQ(cmd_bounds(cfg).output, cmd_bounds(cfg).output);
}

TEST(Bounds, JsonCarriesRevision) {
    auto cfg = config(Command::Bounds);
    cfg.steps = 2;
    cfg.format = Format::Json;
    const auto j = nlohmann::json::parse(cmd_bounds(cfg).output);
    EXPECT_EQ(j.at("spec_rev"), sdp::kSchemaRevision);
    EXPECT_TRUE(j.at("rows")[0].at("gamma").is_number());
    EXPECT_TRUE(j.at("rows")[0].at("solver_general_S").is_null());
}

TEST(Werner, SmallSweep) {
    auto cfg = config(Command::Werner);
    cfg.steps = 2;  // 0, 1/3, 1/2, 1
    const auto r = cmd_werner(cfg);
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_EQ(r.output.substr(0, r.output.find('\n')), kWernerHeader);
    const auto rows = parse_csv(r.output);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_NEAR(std::stod(row_for(rows, 1.0)[1]), 2.8284271, 1e-5);
    EXPECT_LE(std::stod(row_for(rows, 1.0 / 3)[1]), std::sqrt(2.0) + 1e-5);
    EXPECT_NEAR(std::stod(row_for(rows, 0.5)[2]), std::sqrt(2.0), 1e-8);
}

TEST(Simulate, PrettyGoodWithinSixSigma) {
    auto cfg = config(Command::Simulate);
    cfg.gammas = {0.5};
    cfg.rounds = 1000000;
    cfg.seed = 42;
    const auto r = cmd_simulate(cfg);
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_NEAR(j.at("exact_S").get<double>(), 2 * std::sqrt(2.0), 1e-9);
    EXPECT_LE(std::abs(j.at("empirical_S").get<double>() - 2 * std::sqrt(2.0)),
              6 * j.at("standard_error").get<double>());
    EXPECT_TRUE(j.at("conclusive_rates_ok").get<bool>());
    EXPECT_EQ(j.at("conclusive_rates").size(), 16u);
    EXPECT_EQ(cmd_simulate(cfg).output, r.output);
}

TEST(Simulate, LosrX) {
    auto cfg = config(Command::Simulate);
    cfg.strategy = "losr-x";
    cfg.gammas = {0.7};
    cfg.seed = 7;
    const auto j = nlohmann::json::parse(cmd_simulate(cfg).output);
    EXPECT_NEAR(j.at("exact_S").get<double>(), std::sqrt(2.0), 1e-12);
    EXPECT_LE(std::abs(j.at("empirical_S").get<double>() - std::sqrt(2.0)), 6 * j.at("standard_error").get<double>());
}

TEST(Simulate, SingleRoundSmoke) {
    auto cfg = config(Command::Simulate);
    cfg.strategy = "losr-x";
    cfg.gammas = {1.0};
    cfg.rounds = 1;
    const auto r = cmd_simulate(cfg);
    EXPECT_EQ(r.exit_code, kExitOk);
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_TRUE(std::isfinite(j.at("empirical_S").get<double>()));
    EXPECT_EQ(j.at("rounds"), 1);
}

TEST(Simulate, RejectsUnknownStrategy) {
    auto cfg = config(Command::Simulate);
    cfg.strategy = "optimal";
    EXPECT_THROW(cmd_simulate(cfg), ValidationError);
}

TEST(Verify, DefaultSetPasses) {
    const auto r = cmd_verify(config(Command::Verify));
    EXPECT_EQ(r.exit_code, kExitOk);
    const auto rows = parse_csv(r.output);
    EXPECT_EQ(rows[0].size(), 7u);
    for (std::size_t k = 1; k < rows.size(); k++) {
        EXPECT_EQ(rows[k][6], "true") << rows[k][1];
    }
}

TEST(Verify, HighRegionObjective) {
    auto cfg = config(Command::Verify);
    cfg.gammas = {0.9};
    const auto rows = parse_csv(cmd_verify(cfg).output);
    bool seen = false;
    for (std::size_t k = 1; k < rows.size(); k++) {
        if (rows[k][1] == "general-high-primal") {
            EXPECT_NEAR(std::stod(rows[k][2]), 0.5817767, 5e-8);
            seen = true;
        }
    }
    EXPECT_TRUE(seen);
}

TEST(Verify, BoundaryRunsBothRegions) {
    auto cfg = config(Command::Verify);
    cfg.gammas = {1 / std::sqrt(2.0)};
    cfg.format = Format::Json;
    const auto j = nlohmann::json::parse(cmd_verify(cfg).output);
    std::vector<double> general;
    for (const auto &row : j.at("rows")) {
        if (row.at("certificate").get<std::string>().rfind("general", 0) == 0) {
            general.push_back(row.at("objective").get<double>());
        }
    }
    ASSERT_EQ(general.size(), 4u);
    for (double v : general) {
        EXPECT_NEAR(v, 0.4267767, 5e-8);
    }
}

TEST(Validation, RangesChecked) {
    auto cfg = config(Command::Bounds);
    cfg.gamma_min = 0;
    EXPECT_THROW(validate(cfg), ValidationError);
    cfg.gamma_min = 0.8;
    cfg.gamma_max = 0.5;
    EXPECT_THROW(validate(cfg), ValidationError);
    auto w = config(Command::Werner);
    w.xi_max = 1.5;
    EXPECT_THROW(validate(w), ValidationError);
    auto v = config(Command::Verify);
    v.gammas = {0.5, 1.2};
    EXPECT_THROW(validate(v), ValidationError);
    EXPECT_THROW(parse_format("xml"), ValidationError);
}

TEST(Solve, ReportsBellValue) {
    auto cfg = config(Command::Solve);
    cfg.family = "ppt";
    cfg.gammas = {0.75};
    const auto r = cmd_solve(cfg);
    EXPECT_EQ(r.exit_code, kExitOk);
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_NEAR(j.at("bell_value").get<double>(), std::sqrt(2.0), 1e-7);
    EXPECT_EQ(j.at("family"), "PptPrimal");
}
