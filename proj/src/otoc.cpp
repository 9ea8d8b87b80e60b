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

#include "opspread/otoc.hpp"

#include <cmath>
#include <map>

#include "opspread/transfer.hpp"

namespace opspread {

double delta_correction(const TransitionRates<double> &rates, int n) {
    require(n >= 2 && n % 2 == 0, "delta_correction: order must be even and >= 2");
    const double q2 = static_cast<double>(rates.q) * rates.q;
    std::map<int, VectorXd> cache;
    double delta = 0;
    for (int m = 1; m <= n; ++m) {
        // Odd m: marginalize the (m+1)-point vector over its deepest site.
        const int order = m % 2 == 0 ? m : m + 1;
        auto it = cache.find(order);
        if (it == cache.end()) it = cache.emplace(order, stationary(build_transfer(rates, order)).v1).first;
        const Eigen::Index N = Eigen::Index{1} << order;
        const auto even_half = it->second.head(N);
        const double total = even_half.sum();
        double px = 0;
        for (Eigen::Index c = 0; c < N; ++c)
            if ((c >> (m - 1)) & 1) px += even_half[c];
        px /= total;
        delta += px - (q2 - 1) * (1 - px);
    }
    return delta;
}

double otoc_value(double s, double t, double v_b, double d, double delta, int q) {
    require(t > 0, "otoc_value: t must be > 0");
    const double q2 = static_cast<double>(q) * q;
    const double x = s - v_b * t;
    if (d <= 0) return x < 0 ? 1.0 : (x == 0 ? 0.5 : 0.0);
    const double var = d * t;
    const double front = 0.5 * std::erfc(x / std::sqrt(2 * var));
    const double density = std::exp(-x * x / (2 * var)) / std::sqrt(2 * M_PI * var);
    const double c = front + (1 - delta) / (q2 - 1) * density;
    return std::min(1.0, std::max(0.0, c));
}

OtocCurve otoc_curve(const TransitionRates<double> &rates, int n, double s, const std::vector<double> &t_values) {
    require(s >= 1, "otoc_curve: s must be >= 1");
    OtocCurve c;
    c.s = s;
    c.n = n;
    c.q = rates.q;
    c.rates = rates;
    const auto vd = drift_diffusion(rates, n);
    c.v_b = vd.v_b;
    c.d = vd.d;
    c.delta = n >= 2 ? delta_correction(rates, n) : 0.0;
    c.t_values = t_values;
    for (double t : t_values) c.c_values.push_back(otoc_value(s, t, c.v_b, c.d, c.delta, c.q));
    return c;
}

}  // namespace opspread
