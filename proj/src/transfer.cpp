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

#include "opspread/transfer.hpp"

namespace opspread {

DriftDiffusion<double> continuous_limit(int q, EnsembleKind kind) {
    require(q >= 2, "continuous_limit: q must be >= 2");
    const double q2 = static_cast<double>(q) * q, q4 = q2 * q2;
    switch (kind) {
        case EnsembleKind::Poisson:
            return {(q2 - 1) * (q2 - 1) * (q2 + 2) / (q2 * (q2 + 1) * (q2 + 3)), (q4 + q2 - 2) / (q2 * (q2 + 3))};
        case EnsembleKind::Brownian:
            return {(q2 - 1) * (q2 - 1) / q4, (q4 - 1) / q4};
        default:
            throw ArgumentError("continuous_limit: ensemble must be poisson or brownian");
    }
}

double eigvec_convergence(const TransitionRates<double> &r, int n) {
    require(n >= 2 && n % 2 == 0, "eigvec_convergence: order must be even and >= 2");
    const VectorXd v = stationary(build_transfer(r, n)).v1;
    const VectorXd vm = stationary(build_transfer(r, n - 2)).v1;
    const Eigen::Index N = Eigen::Index{1} << n, Nm = N >> 2;
    VectorXd ext(2 * N);
    for (int par = 0; par < 2; ++par)
        for (Eigen::Index c = 0; c < N; ++c) {
            const int deep = static_cast<int>((c >> (n - 1)) & 1), next = static_cast<int>((c >> (n - 2)) & 1);
            ext[par * N + c] =
                r_infinity<double>(deep, r.q) * r_infinity<double>(next, r.q) * vm[par * Nm + (c & (Nm - 1))];
        }
    return (v - ext).norm();
}

}  // namespace opspread
