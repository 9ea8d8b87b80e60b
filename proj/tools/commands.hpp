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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace opspread::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitEnsemble = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
    std::string command;
    std::string ensemble = "haar";
    int q = 2;
    std::optional<double> alpha;
    std::optional<double> lambda;
    int brownian_steps = 200;
    int order = 0;
    std::vector<int> orders;
    int sites = 320;
    int steps = 120;
    std::size_t realizations = 20000;
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
    int t_min_fit = -1;  // default steps / 3
    double separation = 60;
    double t_start = 1;
    double t_stop = 200;
    double t_step = 1;
    std::size_t points = 2000;
    std::vector<double> raw_moments;  // r11, r22, r1111, Re r112, Im r112
    std::string out;
    std::string format = "csv";
};

/// Validates and dispatches; writes the artifact to `out` (or to config.out plus a JSON sidecar).
/// Returns one of the exit codes above; diagnostics go to `err`.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Commands accepted by run().
const std::vector<std::string> &command_names();

}  // namespace opspread::cli
