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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char **argv) {
    using opspread::cli::RunConfig;
    RunConfig c;
    CLI::App app{"Operator spreading in brickwork random unitary circuits"};
    app.add_option("command", c.command, "Command to run")
        ->required()
        ->check(CLI::IsMember(opspread::cli::command_names()));
    app.add_option("--ensemble", c.ensemble, "haar|trivial|poisson|brownian|fixed|raw")
        ->check(CLI::IsMember({"haar", "trivial", "poisson", "brownian", "fixed", "raw"}));
    app.add_option("--q", c.q, "Qudit dimension");
    double alpha = 0, lambda = 0;
    auto *alpha_opt = app.add_option("--alpha", alpha, "|alpha| of the Poisson kernel (sweeps when omitted)");
    auto *lambda_opt = app.add_option("--lambda", lambda, "Brownian strength (sweeps when omitted)");
    app.add_option("--brownian-steps", c.brownian_steps, "Sub-steps of the Brownian gate sampler");
    app.add_option("--moments", c.raw_moments, "Raw moments r11,r22,r1111,re_r112,im_r112")->delimiter(',');
    app.add_option("--order", c.order, "Truncation order");
    app.add_option("--orders", c.orders, "Comma-separated truncation orders")->delimiter(',');
    app.add_option("--sites", c.sites, "Chain length for simulate");
    app.add_option("--steps", c.steps, "Time steps for simulate");
    app.add_option("--realizations", c.realizations, "Monte Carlo realizations");
    app.add_option("--seed", c.seed, "Master seed");
    app.add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    app.add_option("--fit-from", c.t_min_fit, "First time step used in the drift/diffusion fit");
    app.add_option("--separation", c.separation, "OTOC separation s");
    app.add_option("--t-start", c.t_start, "OTOC first time");
    app.add_option("--t-stop", c.t_stop, "OTOC last time");
    app.add_option("--t-step", c.t_step, "OTOC time increment");
    app.add_option("--points", c.points, "Samples for param-space");
    app.add_option("--out", c.out, "Output path (a .json sidecar is written next to it)");
    app.add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : opspread::cli::kExitUsage;
    }
    if (*alpha_opt) c.alpha = alpha;
    if (*lambda_opt) c.lambda = lambda;
    if (*app.get_option("--order") && c.orders.empty()) c.orders = {c.order};
    return opspread::cli::run(c, std::cout, std::cerr);
}
