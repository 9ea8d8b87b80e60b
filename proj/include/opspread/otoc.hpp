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

#include <vector>

#include "opspread/core.hpp"

namespace opspread {

/// Long-time domain-wall correction delta at truncation order n (n even >= 2).
double delta_correction(const TransitionRates<double> &rates, int n);

/// Drift-diffusion OTOC with the domain-wall correction, clamped to [0, 1].
/// A zero diffusion constant gives a sharp step at s = v_b t.
double otoc_value(double s, double t, double v_b, double d, double delta, int q);

struct OtocCurve {
    double s = 0;
    std::vector<double> t_values;
    std::vector<double> c_values;
    int n = 0;
    int q = 2;
    TransitionRates<double> rates;
    double v_b = 0;
    double d = 0;
    double delta = 0;
};

/// C(s, t) over t_values using order-n velocity, diffusion constant and delta (delta = 0 at n = 0).
OtocCurve otoc_curve(const TransitionRates<double> &rates, int n, double s, const std::vector<double> &t_values);

}  // namespace opspread
