// Copyright 2026 The opspread Authors
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

#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"

namespace opspread::cli {
namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_config(const RunConfig &c) {
    std::ostringstream out, err;
    const int code = run(c, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

TEST(Cli, HaarVelocityRows) {
    RunConfig c;
    c.command = "velocity";
    c.ensemble = "haar";
    c.orders = {0, 2, 4};
    const auto r = run_config(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"alpha", "n", "v_b", "d"}));
    for (int k = 1; k <= 3; ++k) {
        EXPECT_NEAR(std::stod(rows[k][2]), 0.6, 1e-10);
        EXPECT_NEAR(std::stod(rows[k][3]), 0.64, 1e-10);
    }
}

TEST(Cli, SpectrumHaar) {
    RunConfig c;
    c.command = "spectrum";
    const auto r = run_config(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][5], "tau_b");
    EXPECT_EQ(std::stod(rows[1][5]), 0);
    EXPECT_EQ(rows[1][6], "2");
}

TEST(Cli, PoissonSweepHasDefaultGrid) {
    RunConfig c;
    c.command = "rates";
    c.ensemble = "poisson";
    const auto r = run_config(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(parse_csv(r.out).size(), 22u);
}

TEST(Cli, JsonFormat) {
    RunConfig c;
    c.command = "moments";
    c.ensemble = "poisson";
    c.alpha = 0.5;
    c.format = "json";
    const auto r = run_config(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("\"rows\""), std::string::npos);
    EXPECT_NE(r.out.find("\"r22\""), std::string::npos);
}

TEST(Cli, SimulateIsByteIdentical) {
    RunConfig c;
    c.command = "simulate";
    c.ensemble = "poisson";
    c.alpha = 0.6;
    c.sites = 320;
    c.steps = 120;
    c.realizations = 20000;
    c.seed = 7;
    const auto a = run_config(c);
    c.threads = 2;
    const auto b = run_config(c);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(parse_csv(a.out).size(), 122u);
}

TEST(Cli, WritesCsvAndSidecar) {
    RunConfig c;
    c.command = "delta";
    c.ensemble = "poisson";
    c.alpha = 0.6;
    c.out = ::testing::TempDir() + "opspread_delta.csv";
    const auto r = run_config(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::ifstream csv(c.out), side(c.out + ".json");
    ASSERT_TRUE(csv.good());
    ASSERT_TRUE(side.good());
    std::stringstream s;
    s << side.rdbuf();
    EXPECT_NE(s.str().find("\"version\""), std::string::npos);
    std::remove(c.out.c_str());
    std::remove((c.out + ".json").c_str());
}

TEST(Cli, UsageErrors) {
    RunConfig c;
    c.command = "nonsense";
    EXPECT_EQ(run_config(c).code, kExitUsage);
    c.command = "velocity";
    c.ensemble = "gue";
    EXPECT_EQ(run_config(c).code, kExitUsage);
    c.ensemble = "poisson";
    c.alpha = 1.5;
    EXPECT_EQ(run_config(c).code, kExitUsage);
    c.alpha = 0.5;
    c.orders = {3};
    EXPECT_EQ(run_config(c).code, kExitUsage);
    RunConfig s;
    s.command = "simulate";
    s.ensemble = "poisson";
    EXPECT_EQ(run_config(s).code, kExitUsage);
}

TEST(Cli, EnsembleValidityError) {
    RunConfig c;
    c.command = "rates";
    c.ensemble = "raw";
    c.raw_moments = {1, 2, 2, 300, 0};
    const auto r = run_config(c);
    EXPECT_EQ(r.code, kExitEnsemble) << r.err;
}

TEST(Cli, CommandList) {
    const auto &names = command_names();
    EXPECT_NE(std::find(names.begin(), names.end(), "param-space"), names.end());
}

}  // namespace
}  // namespace opspread::cli
