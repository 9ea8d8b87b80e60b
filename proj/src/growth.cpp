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

#include "opspread/growth.hpp"

#include <bit>
#include <cmath>

#include "opspread/random.hpp"

namespace opspread {

BinaryChainState::BinaryChainState(int sites) : L(sites), words((sites + 63) / 64, 0) {
    require(sites >= 2 && sites % 2 == 0, "BinaryChainState: L must be even and >= 2");
}

int BinaryChainState::count() const {
    int n = 0;
    for (auto w : words) n += std::popcount(w);
    return n;
}

Eigen::Matrix<double, 4, 4> cumulative_table(const TransitionRates<double> &r) {
    Eigen::Matrix<double, 4, 4> t = rate_table(r);
    for (int in = 0; in < 4; ++in)
        for (int out = 1; out < 4; ++out) t(out, in) += t(out - 1, in);
    return t;
}

int sample_pair(const Eigen::Matrix<double, 4, 4> &cumulative, int in, double u) {
    for (int out = 0; out < 3; ++out)
        if (u < cumulative(out, in)) return out;
    return 3;
}

void step_layer(BinaryChainState &state, const TransitionRates<double> &rates, std::mt19937_64 &rng) {
    const auto cum = cumulative_table(rates);
    const long t = state.t + 1;
    const int L = state.L;
    for (int left = (t % 2 == 0) ? 0 : 1; left < L; left += 2) {
        const int right = (left + 1) % L;
        const int in = pair_code(state.get(left), state.get(right));
        if (in == 0) continue;
        const int out = sample_pair(cum, in, uniform01(rng));
        state.set(left, out >> 1);
        state.set(right, out & 1);
    }
    state.t = t;
}

std::vector<VectorXd> evolve_binary_chain(const TransitionRates<double> &rates, int L, const VectorXd &initial,
                                          int t_max, long t_start) {
    require(L >= 2 && L % 2 == 0 && L <= 20, "evolve_binary_chain: L must be even and in [2, 20]");
    require(initial.size() == (Eigen::Index{1} << L), "evolve_binary_chain: initial has wrong size");
    const auto table = rate_table(rates);
    std::vector<VectorXd> out{initial};
    VectorXd rho = initial;
    VectorXd next(rho.size());
    for (int s = 1; s <= t_max; ++s) {
        const long t = t_start + s;
        for (int left = (t % 2 == 0) ? 0 : 1; left < L; left += 2) {
            const int right = (left + 1) % L;
            const std::size_t ml = std::size_t{1} << left, mr = std::size_t{1} << right;
            next.setZero();
            for (std::size_t i = 0; i < static_cast<std::size_t>(rho.size()); ++i) {
                if (rho[i] == 0.0) continue;
                const int in = pair_code((i & ml) != 0, (i & mr) != 0);
                const std::size_t base = i & ~(ml | mr);
                for (int o = 0; o < 4; ++o) {
                    const double w = table(o, in);
                    if (w == 0.0) continue;
                    next[base | ((o >> 1) ? ml : 0) | ((o & 1) ? mr : 0)] += w * rho[i];
                }
            }
            rho.swap(next);
        }
        out.push_back(rho);
    }
    return out;
}

namespace {

// Integer power sums of the front position for a block of realizations.
struct FrontSums {
    std::vector<std::int64_t> s1, s2;
    std::vector<long double> s3, s4;
    std::size_t used = 0, wrapped = 0;
};

int floor_mod(long x, int m) {
    long r = x % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

// Runs one realization; positions are unwrapped coordinates. Returns false if the fronts met.
bool run_front(const Eigen::Matrix<double, 4, 4> &cum, int L, int t_max, std::mt19937_64 &rng,
               std::vector<long> &front) {
    BinaryChainState s(L);
    s.set(0, kX);
    long lo = 0, hi = 0;
    front[0] = 0;
    auto bit = [&](long x) { return s.get(floor_mod(x, L)); };
    for (int t = 1; t <= t_max; ++t) {
        const int off = t % 2 == 0 ? 0 : 1;
        const long first = lo - floor_mod(lo - off, 2);
        if (hi + 1 - first + 1 > L) return false;
        for (long l = first; l <= hi; l += 2) {
            const int pl = floor_mod(l, L), pr = floor_mod(l + 1, L);
            const int in = pair_code(s.get(pl), s.get(pr));
            if (in == 0) continue;
            const int out = sample_pair(cum, in, uniform01(rng));
            s.set(pl, out >> 1);
            s.set(pr, out & 1);
        }
        long nlo = first;
        while (!bit(nlo)) ++nlo;
        long nhi = hi + 1;
        while (!bit(nhi)) --nhi;
        lo = nlo;
        hi = nhi;
        front[t] = hi;
    }
    return true;
}

}  // namespace

FrontTrace simulate_front(const TransitionRates<double> &rates, int L, int t_max, std::size_t n_real,
                          std::uint64_t seed, unsigned threads) {
    require(L >= 4 && L % 2 == 0, "simulate_front: L must be even and >= 4");
    require(t_max >= 1, "simulate_front: t_max must be >= 1");
    require(n_real >= 1, "simulate_front: n_real must be >= 1");
    const auto cum = cumulative_table(rates);

    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (n_real + kBlock - 1) / kBlock;
    std::vector<FrontSums> parts(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
        FrontSums &p = parts[b];
        p.s1.assign(t_max + 1, 0);
        p.s2.assign(t_max + 1, 0);
        p.s3.assign(t_max + 1, 0);
        p.s4.assign(t_max + 1, 0);
        std::vector<long> front(t_max + 1);
        const std::size_t end = std::min(n_real, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) {
            std::mt19937_64 rng = stream_rng(seed, r);
            if (!run_front(cum, L, t_max, rng, front)) {
                ++p.wrapped;
                continue;
            }
            ++p.used;
            for (int t = 0; t <= t_max; ++t) {
                const std::int64_t x = front[t];
                p.s1[t] += x;
                p.s2[t] += x * x;
                p.s3[t] += static_cast<long double>(x * x * x);
                p.s4[t] += static_cast<long double>(x * x) * static_cast<long double>(x * x);
            }
        }
    });

    FrontTrace tr;
    tr.seed = seed;
    tr.L = L;
    tr.rates = rates;
    std::vector<std::int64_t> s1(t_max + 1, 0), s2(t_max + 1, 0);
    std::vector<long double> s3(t_max + 1, 0), s4(t_max + 1, 0);
    for (const auto &p : parts) {
        tr.n_real += p.used;
        tr.n_wrapped += p.wrapped;
        for (int t = 0; t <= t_max; ++t) {
            s1[t] += p.s1[t];
            s2[t] += p.s2[t];
            s3[t] += p.s3[t];
            s4[t] += p.s4[t];
        }
    }
    if (tr.n_real == 0) throw NumericalError("simulate_front: every realization wrapped around the ring; increase L");
    const long double n = static_cast<long double>(tr.n_real);
    for (int t = 0; t <= t_max; ++t) {
        const long double m1 = s1[t] / n, m2 = s2[t] / n, m3 = s3[t] / n, m4 = s4[t] / n;
        const long double var = std::max<long double>(0, m2 - m1 * m1);
        const long double mu4 = m4 - 4 * m1 * m3 + 6 * m1 * m1 * m2 - 3 * m1 * m1 * m1 * m1;
        tr.mean.push_back(static_cast<double>(m1));
        tr.var.push_back(static_cast<double>(var));
        tr.mean_se.push_back(static_cast<double>(std::sqrt(var / n)));
        tr.var_se.push_back(static_cast<double>(std::sqrt(std::max<long double>(0, mu4 - var * var) / n)));
    }
    return tr;
}

namespace {

void linear_fit(const std::vector<double> &y, int t0, double &slope, double &se) {
    const int t1 = static_cast<int>(y.size()) - 1;
    const int n = t1 - t0 + 1;
    double tm = 0, ym = 0;
    for (int t = t0; t <= t1; ++t) {
        tm += t;
        ym += y[t];
    }
    tm /= n;
    ym /= n;
    double sxx = 0, sxy = 0;
    for (int t = t0; t <= t1; ++t) {
        sxx += (t - tm) * (t - tm);
        sxy += (t - tm) * (y[t] - ym);
    }
    slope = sxy / sxx;
    double rss = 0;
    for (int t = t0; t <= t1; ++t) {
        const double r = y[t] - ym - slope * (t - tm);
        rss += r * r;
    }
    se = std::sqrt(rss / (n - 2) / sxx);
}

}  // namespace

DriftDiffusionFit fit_drift_diffusion(const FrontTrace &trace, int t_min_fit) {
    require(t_min_fit >= 0, "fit_drift_diffusion: t_min_fit must be >= 0");
    const int points = trace.t_max() - t_min_fit + 1;
    require(points >= 5, "fit_drift_diffusion: fewer than 5 fit points");
    DriftDiffusionFit f;
    f.points = points;
    linear_fit(trace.mean, t_min_fit, f.v_b, f.v_se);
    linear_fit(trace.var, t_min_fit, f.d, f.d_se);
    return f;
}

}  // namespace opspread
