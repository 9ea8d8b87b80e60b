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

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace opspread {

/// Invalid input: bad index, odd order, out-of-range parameter.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Coefficients or moments outside the region reachable by a unitary-invariant ensemble.
struct EnsembleValidityError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Linear solve or iteration failed (e.g. degenerate unit eigenvalue).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = MatrixX<double>;
using VectorXd = VectorX<double>;
using MatrixXcd = MatrixX<std::complex<double>>;

/// Tolerance used for validity checks on probabilities and rates.
inline constexpr double kValidityTol = 1e-12;

template <typename Scalar>
inline Scalar ipow(Scalar x, int k) {
    Scalar r(1);
    for (; k > 0; --k) r *= x;
    return r;
}

/// The four trace moments of a gate ensemble.
///   r11   = <|tr U|^2>
///   r22   = <|tr U^2|^2>
///   r1111 = <|tr U|^4>
///   r112  = <(tr U)^2 conj(tr U^2)>
template <typename Scalar = double>
struct MomentSet {
    int q = 2;
    Scalar r11 = 1;
    Scalar r22 = 2;
    Scalar r1111 = 2;
    std::complex<Scalar> r112 = 0;

    static MomentSet haar(int q) { return {q, 1, 2, 2, 0}; }
    static MomentSet trivial(int q) {
        Scalar q4 = ipow<Scalar>(q, 4);
        return {q, q4, q4, q4 * q4, std::complex<Scalar>(ipow<Scalar>(q, 6))};
    }
};

/// Ensemble fingerprint entering the pair transition probabilities.
template <typename Scalar = double>
struct Coefficients {
    int q = 2;
    std::complex<Scalar> a1 = 0;
    Scalar a2 = 0;
    Scalar a3 = 0;

    static Coefficients haar(int q) { return {q, 0, 0, 0}; }
    static Coefficients trivial(int q) { return {q, 0, 0, ipow<Scalar>(q, 4) - 1}; }
};

/// Binary pair rates on {I, X}^2 -> {I, X}^2.
template <typename Scalar = double>
struct TransitionRates {
    int q = 2;
    Scalar t1 = 0;
    Scalar tx = 0;
    Scalar tplus = 0;
    Scalar tminus = 0;
    Scalar t11 = 0;

    bool is_trivial(Scalar tol = Scalar(kValidityTol)) const { return t1 >= Scalar(1) - tol; }
};

inline void require(bool cond, const std::string &msg) {
    if (!cond) throw ArgumentError(msg);
}

}  // namespace opspread
