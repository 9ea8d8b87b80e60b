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

#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "opspread/opspread.hpp"

namespace opspread::cli {

namespace {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_cell(const Cell &c) {
    if (auto d = std::get_if<double>(&c)) return format_double(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell &c) {
    if (auto d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) return *d;
        return format_double(*d);
    }
    if (auto i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
}

void write_csv(const Table &t, std::ostream &os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
        os << '\n';
    }
}

nlohmann::ordered_json config_json(const RunConfig &c) {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["ensemble"] = c.ensemble;
    j["q"] = c.q;
    j["alpha"] = c.alpha ? nlohmann::ordered_json(*c.alpha) : nlohmann::ordered_json(nullptr);
    j["lambda"] = c.lambda ? nlohmann::ordered_json(*c.lambda) : nlohmann::ordered_json(nullptr);
    j["brownian_steps"] = c.brownian_steps;
    j["order"] = c.order;
    j["orders"] = c.orders;
    j["sites"] = c.sites;
    j["steps"] = c.steps;
    j["realizations"] = c.realizations;
    j["seed"] = c.seed;
    j["t_min_fit"] = c.t_min_fit;
    j["separation"] = c.separation;
    j["t_start"] = c.t_start;
    j["t_stop"] = c.t_stop;
    j["t_step"] = c.t_step;
    j["points"] = c.points;
    j["moments"] = c.raw_moments;
    j["format"] = c.format;
    return j;
}

nlohmann::ordered_json table_json(const Table &t, const RunConfig &c) {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["config"] = config_json(c);
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto &row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
        rows.push_back(r);
    }
    j["rows"] = rows;
    for (auto it = t.extra.begin(); it != t.extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 19; ++i) g.push_back(i * 0.05);
    g.push_back(0.99);
    return g;
}

std::vector<double> default_lambda_grid() { return {0.05, 0.1, 0.25, 0.5, 0.75, 1, 1.5, 2, 3, 5}; }

EnsembleKind kind_of(const RunConfig &c) { return ensemble_kind_from_string(c.ensemble); }

bool is_brownian(const RunConfig &c) { return kind_of(c) == EnsembleKind::Brownian; }

std::string param_column(const RunConfig &c) { return is_brownian(c) ? "lambda" : "alpha"; }

// Parameter values a command iterates over: the given value, or the default grid when sweeping.
std::vector<double> sweep_values(const RunConfig &c, bool sweep) {
    switch (kind_of(c)) {
        case EnsembleKind::Poisson:
            if (c.alpha) return {*c.alpha};
            require(sweep, "--alpha is required for this command");
            return default_alpha_grid();
        case EnsembleKind::Brownian:
            if (c.lambda) return {*c.lambda};
            require(sweep, "--lambda is required for this command");
            return default_lambda_grid();
        default:
            return {c.alpha.value_or(0.0)};
    }
}

GateEnsembleSpec make_spec(const RunConfig &c, double value) {
    GateEnsembleSpec s;
    switch (kind_of(c)) {
        case EnsembleKind::Haar: s = GateEnsembleSpec::haar(c.q); break;
        case EnsembleKind::Trivial: s = GateEnsembleSpec::trivial(c.q); break;
        case EnsembleKind::Poisson: s = GateEnsembleSpec::poisson(c.q, value); break;
        case EnsembleKind::Brownian: s = GateEnsembleSpec::brownian(c.q, value, c.brownian_steps); break;
        case EnsembleKind::FixedConjugacy: {
            std::mt19937_64 rng = stream_rng(c.seed, 0);
            s = GateEnsembleSpec::fixed(haar_sample(c.q * c.q, rng));
            break;
        }
        case EnsembleKind::RawMoments: {
            const auto &m = c.raw_moments;
            require(m.size() == 5, "--moments needs five values: r11,r22,r1111,re_r112,im_r112");
            s = GateEnsembleSpec::raw_moments({c.q, m[0], m[1], m[2], {m[3], m[4]}});
            break;
        }
    }
    s.validate();
    return s;
}

Coefficients<double> coeffs_of(const RunConfig &c, double value) { return coefficients(moments(make_spec(c, value))); }

TransitionRates<double> rates_of(const RunConfig &c, double value) { return transition_rates(coeffs_of(c, value)); }

std::vector<int> orders_or(const RunConfig &c, std::vector<int> fallback) {
    return c.orders.empty() ? fallback : c.orders;
}

Table cmd_moments(const RunConfig &c) {
    Table t{{param_column(c), "r11", "r22", "r1111", "re_r112", "im_r112"}, {}, {}};
    for (double v : sweep_values(c, false)) {
        const auto m = moments(make_spec(c, v));
        t.rows.push_back({v, m.r11, m.r22, m.r1111, m.r112.real(), m.r112.imag()});
    }
    return t;
}

Table cmd_coeffs(const RunConfig &c) {
    Table t{{param_column(c), "re_a1", "im_a1", "a2", "a3"}, {}, {}};
    for (double v : sweep_values(c, true)) {
        const auto k = coeffs_of(c, v);
        t.rows.push_back({v, k.a1.real(), k.a1.imag(), k.a2, k.a3});
    }
    return t;
}

Table cmd_rates(const RunConfig &c) {
    Table t{{param_column(c), "t1", "tx", "tplus", "tminus", "t11"}, {}, {}};
    for (double v : sweep_values(c, true)) {
        const auto r = rates_of(c, v);
        t.rows.push_back({v, r.t1, r.tx, r.tplus, r.tminus, r.t11});
    }
    return t;
}

Table cmd_spectrum(const RunConfig &c) {
    Table t{{param_column(c), "lambda_plus", "lambda_minus", "lambda_i", "lambda_w", "tau_b", "n_unit", "n_plus",
             "n_minus", "n_i"},
            {},
            {}};
    const bool count = c.q <= 4;
    for (double v : sweep_values(c, true)) {
        const auto s = spectral_summary(coeffs_of(c, v), count);
        auto n = [&](int k) { return Cell(count ? static_cast<long long>(k) : -1LL); };
        t.rows.push_back({v, s.lambda_plus, s.lambda_minus, s.lambda_i, s.lambda_w, s.tau_b, n(s.n_unit),
                          n(s.n_plus), n(s.n_minus), n(s.n_i)});
    }
    return t;
}

Table cmd_drift(const RunConfig &c) {
    Table t{{param_column(c), "n", "v_b", "d"}, {}, {}};
    for (double v : sweep_values(c, true)) {
        const auto r = rates_of(c, v);
        for (int n : orders_or(c, {0, 2, 4})) {
            const auto vd = drift_diffusion(r, n);
            t.rows.push_back({v, static_cast<long long>(n), vd.v_b, vd.d});
        }
    }
    return t;
}

Table cmd_simulate(const RunConfig &c) {
    const double v = sweep_values(c, false).front();
    const auto r = rates_of(c, v);
    const int t_min = c.t_min_fit >= 0 ? c.t_min_fit : c.steps / 3;
    const FrontTrace tr = simulate_front(r, c.sites, c.steps, c.realizations, c.seed, c.threads);
    Table t{{"t", "mean", "mean_se", "var", "var_se"}, {}, {}};
    for (int k = 0; k <= tr.t_max(); ++k)
        t.rows.push_back({static_cast<long long>(k), tr.mean[k], tr.mean_se[k], tr.var[k], tr.var_se[k]});
    const auto fit = fit_drift_diffusion(tr, t_min);
    t.extra["fit"] = {{"t_min_fit", t_min}, {"v_b", fit.v_b}, {"v_b_se", fit.v_se}, {"d", fit.d}, {"d_se", fit.d_se}};
    t.extra["rates"] = {{"t1", r.t1}, {"tx", r.tx}, {"tplus", r.tplus}, {"tminus", r.tminus}, {"t11", r.t11}};
    t.extra["realizations_used"] = tr.n_real;
    t.extra["realizations_wrapped"] = tr.n_wrapped;
    return t;
}

Table cmd_converge(const RunConfig &c) {
    Table t{{param_column(c), "n", "norm"}, {}, {}};
    for (double v : sweep_values(c, true)) {
        const auto r = rates_of(c, v);
        for (int n : orders_or(c, {2, 4, 6, 8})) t.rows.push_back({v, static_cast<long long>(n), eigvec_convergence(r, n)});
    }
    return t;
}

Table cmd_delta(const RunConfig &c) {
    Table t{{param_column(c), "n", "delta"}, {}, {}};
    for (double v : sweep_values(c, true)) {
        const auto r = rates_of(c, v);
        for (int n : orders_or(c, {2, 4})) t.rows.push_back({v, static_cast<long long>(n), delta_correction(r, n)});
    }
    return t;
}

Table cmd_otoc(const RunConfig &c) {
    require(c.t_step > 0 && c.t_start > 0 && c.t_stop >= c.t_start, "invalid time grid");
    const double v = sweep_values(c, false).front();
    const auto r = rates_of(c, v);
    std::vector<double> ts;
    for (long k = 0;; ++k) {
        const double tv = c.t_start + k * c.t_step;
        if (tv > c.t_stop + 1e-9) break;
        ts.push_back(tv);
    }
    Table t{{"t"}, {}, {}};
    std::vector<OtocCurve> curves;
    for (int n : orders_or(c, {0, 2, 4})) {
        curves.push_back(otoc_curve(r, n, c.separation, ts));
        t.columns.push_back("c_n" + std::to_string(n));
        t.extra["orders"].push_back(
            {{"n", n}, {"v_b", curves.back().v_b}, {"d", curves.back().d}, {"delta", curves.back().delta}});
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::vector<Cell> row{ts[i]};
        for (const auto &cv : curves) row.push_back(cv.c_values[i]);
        t.rows.push_back(row);
    }
    return t;
}

Table cmd_param_space(const RunConfig &c) {
    Table t{{"a23", "re_a1", "im_a1", "t1", "tx", "tplus"}, {}, {}};
    for (const auto &p : sample_parameter_space(c.q, c.points, c.seed)) {
        const auto r = transition_rates(p.coeffs);
        t.rows.push_back({p.a23, p.re_a1, p.coeffs.a1.imag(), r.t1, r.tx, r.tplus});
    }
    return t;
}

Table dispatch(const RunConfig &c) {
    const std::string &k = c.command;
    if (k == "moments") return cmd_moments(c);
    if (k == "coeffs") return cmd_coeffs(c);
    if (k == "rates") return cmd_rates(c);
    if (k == "spectrum") return cmd_spectrum(c);
    if (k == "velocity" || k == "diffusion") return cmd_drift(c);
    if (k == "simulate") return cmd_simulate(c);
    if (k == "converge") return cmd_converge(c);
    if (k == "delta") return cmd_delta(c);
    if (k == "otoc") return cmd_otoc(c);
    if (k == "param-space") return cmd_param_space(c);
    throw ArgumentError("unknown command '" + k + "'");
}

void validate(const RunConfig &c) {
    require(c.q >= 2, "--q must be >= 2");
    require(c.format == "csv" || c.format == "json", "--format must be csv or json");
    kind_of(c);
    if (c.alpha) require(*c.alpha >= 0 && *c.alpha <= 1, "--alpha must lie in [0, 1]");
    if (c.lambda) require(*c.lambda >= 0, "--lambda must be >= 0");
    for (int n : c.orders) require(n >= 0 && n % 2 == 0 && n <= 12, "--orders must be even values in [0, 12]");
    require(c.sites >= 4 && c.sites % 2 == 0, "--sites must be even and >= 4");
    require(c.steps >= 1, "--steps must be >= 1");
    require(c.realizations >= 1, "--realizations must be >= 1");
}

}  // namespace

const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names{"moments",  "coeffs",   "rates", "spectrum", "velocity",   "diffusion",
                                                "simulate", "converge", "delta", "otoc",     "param-space"};
    return names;
}

int run(const RunConfig &config, std::ostream &out, std::ostream &err) {
    try {
        validate(config);
        const Table t = dispatch(config);
        std::ostringstream body;
        if (config.format == "json")
            body << table_json(t, config).dump(2) << '\n';
        else
            write_csv(t, body);
        if (config.out.empty()) {
            out << body.str();
            if (t.extra.contains("fit")) err << "fit: " << t.extra["fit"].dump() << '\n';
        } else {
            std::ofstream f(config.out, std::ios::binary);
            if (!f) throw ArgumentError("cannot open output file '" + config.out + "'");
            f << body.str();
            std::ofstream side(config.out + ".json", std::ios::binary);
            if (!side) throw ArgumentError("cannot open sidecar file '" + config.out + ".json'");
            nlohmann::ordered_json meta;
            meta["version"] = kVersion;
            meta["config"] = config_json(config);
            meta["columns"] = t.columns;
            for (auto it = t.extra.begin(); it != t.extra.end(); ++it) meta[it.key()] = it.value();
            side << meta.dump(2) << '\n';
        }
        return kExitOk;
    } catch (const ArgumentError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const EnsembleValidityError &e) {
        err << "ensemble error: " << e.what() << '\n';
        return kExitEnsemble;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace opspread::cli
