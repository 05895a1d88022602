// Copyright 2026 The qstack Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exact binomial sampling: sequential inversion for small n or small mean,
 * BTPE (Kachitvichyanukul & Schmeiser, 1988) otherwise.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "qstack/rng.hpp"

namespace qstack {

namespace detail {

// Requires 0 < p <= 0.5.
inline std::int64_t binomial_inversion(CounterRng &rng, std::int64_t n, double p) {
    const double q = 1.0 - p;
    const double qn = std::exp(static_cast<double>(n) * std::log(q));
    const double np = static_cast<double>(n) * p;
    const auto bound = static_cast<std::int64_t>(
        std::min(static_cast<double>(n), np + 10.0 * std::sqrt(np * q + 1.0)));

    std::int64_t x = 0;
    double px = qn;
    double u = rng.uniform();
    while (u > px) {
        ++x;
        if (x > bound) {
            x = 0;
            px = qn;
            u = rng.uniform();
        } else {
            u -= px;
            px = (static_cast<double>(n - x + 1) * p * px) / (static_cast<double>(x) * q);
        }
    }
    return x;
}

inline double stirling_tail(double v) {
    const double v2 = v * v;
    return (13680. - (462. - (132. - (99. - 140. / v2) / v2) / v2) / v2) / v / 166320.;
}

// Requires 0 < p <= 0.5 and n * p large enough that the triangle/parallelogram
// envelope is valid (callers use n * p > 30).
inline std::int64_t binomial_btpe(CounterRng &rng, std::int64_t n, double p) {
    const double dn = static_cast<double>(n);
    const double r = p;
    const double q = 1.0 - r;
    const double fm = dn * r + r;
    const auto m = static_cast<std::int64_t>(std::floor(fm));
    const double dm = static_cast<double>(m);
    const double p1 = std::floor(2.195 * std::sqrt(dn * r * q) - 4.6 * q) + 0.5;
    const double xm = dm + 0.5;
    const double xl = xm - p1;
    const double xr = xm + p1;
    const double c = 0.134 + 20.5 / (15.3 + dm);
    double a = (fm - xl) / (fm - xl * r);
    const double laml = a * (1.0 + a / 2.0);
    a = (xr - fm) / (xr * q);
    const double lamr = a * (1.0 + a / 2.0);
    const double p2 = p1 * (1.0 + 2.0 * c);
    const double p3 = p2 + c / laml;
    const double p4 = p3 + c / lamr;
    const double nrq = dn * r * q;

    for (;;) {
        const double u = rng.uniform() * p4;
        double v = rng.uniform();
        std::int64_t y = 0;

        if (u <= p1) {
            // Triangular region: accept immediately.
            return static_cast<std::int64_t>(std::floor(xm - p1 * v + u));
        }
        if (u <= p2) {
            const double x = xl + (u - p1) / c;
            v = v * c + 1.0 - std::abs(dm - x + 0.5) / p1;
            if (v > 1.0) {
                continue;
            }
            y = static_cast<std::int64_t>(std::floor(x));
        } else if (u <= p3) {
            if (v == 0.0) {
                continue;
            }
            const double yl = std::floor(xl + std::log(v) / laml);
            if (yl < 0.0) {
                continue;
            }
            y = static_cast<std::int64_t>(yl);
            v = v * (u - p2) * laml;
        } else {
            if (v == 0.0) {
                continue;
            }
            const double yr = std::floor(xr - std::log(v) / lamr);
            if (yr > dn) {
                continue;
            }
            y = static_cast<std::int64_t>(yr);
            v = v * (u - p3) * lamr;
        }

        const auto k = std::llabs(y - m);
        if (k <= 20 || static_cast<double>(k) >= nrq / 2.0 - 1.0) {
            // Explicit evaluation of f(y) / f(m).
            const double s = r / q;
            const double aa = s * (dn + 1.0);
            double f = 1.0;
            if (m < y) {
                for (auto i = m + 1; i <= y; ++i) {
                    f *= (aa / static_cast<double>(i) - s);
                }
            } else if (m > y) {
                for (auto i = y + 1; i <= m; ++i) {
                    f /= (aa / static_cast<double>(i) - s);
                }
            }
            if (v > f) {
                continue;
            }
            return y;
        }

        // Squeeze using upper and lower bounds on log(f(y)).
        const double dk = static_cast<double>(k);
        const double rho = (dk / nrq) * ((dk * (dk / 3.0 + 0.625) + 0.16666666666666666) / nrq + 0.5);
        const double t = -dk * dk / (2.0 * nrq);
        const double alog = std::log(v);
        if (alog < t - rho) {
            return y;
        }
        if (alog > t + rho) {
            continue;
        }

        const double dy = static_cast<double>(y);
        const double x1 = dy + 1.0;
        const double f1 = dm + 1.0;
        const double z = dn + 1.0 - dm;
        const double w = dn - dy + 1.0;
        const double bound = xm * std::log(f1 / x1) + (dn - dm + 0.5) * std::log(z / w) +
                             (dy - dm) * std::log(w * r / (x1 * q)) + stirling_tail(f1) +
                             stirling_tail(z) + stirling_tail(x1) + stirling_tail(w);
        if (alog > bound) {
            continue;
        }
        return y;
    }
}

} // namespace detail

/// Inversion is used below this trial count regardless of the mean.
inline constexpr std::int64_t kBinomialInversionTrials = 64;

/**
 * Draw one Binomial(n, p) variate. The draw consumes a deterministic number of
 * outputs from `rng` for a given (n, p, stream), so equal seeds give equal
 * counts on every platform.
 */
inline std::int64_t sample_binomial(CounterRng &rng, std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return n;
    }
    const bool flip = p > 0.5;
    const double r = flip ? 1.0 - p : p;
    std::int64_t y = 0;
    if (n < kBinomialInversionTrials || static_cast<double>(n) * r <= 30.0) {
        y = detail::binomial_inversion(rng, n, r);
    } else {
        y = detail::binomial_btpe(rng, n, r);
    }
    return flip ? n - y : y;
}

} // namespace qstack
