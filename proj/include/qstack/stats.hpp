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
 * Small statistics toolkit: moments, Pearson correlation with a t-test
 * p-value, chi-square quantiles, isotonic regression and least-squares lines.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "qstack/error.hpp"

namespace qstack::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) {
        throw Error(ErrorKind::TooFewPoints, "mean of an empty series");
    }
    long double acc = 0.0L;
    for (double x : xs) {
        acc += x;
    }
    return static_cast<double>(acc / static_cast<long double>(xs.size()));
}

/// Unbiased (n - 1) sample variance, two-pass.
inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw Error(ErrorKind::TooFewPoints, "variance needs at least 2 points");
    }
    const double m = mean(xs);
    long double acc = 0.0L;
    for (double x : xs) {
        const long double d = x - m;
        acc += d * d;
    }
    return static_cast<double>(acc / static_cast<long double>(xs.size() - 1));
}

namespace detail {

inline constexpr double kTiny = 1e-300;
inline constexpr double kEps = 1e-16;
inline constexpr int kMaxIter = 10000;

// Modified Lentz evaluation of the incomplete-beta continued fraction.
inline double beta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

} // namespace detail

/// I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "incomplete_beta: bad arguments");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::beta_cf(a, b, x) / a;
    }
    return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

/// Two-tailed p-value of Student's t with `df` degrees of freedom.
inline double student_t_two_tailed(double t, double df) {
    if (!std::isfinite(t)) {
        return 0.0;
    }
    return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

/// Regularized lower incomplete gamma P(a, x).
inline double incomplete_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "incomplete_gamma_p: bad arguments");
    }
    if (x == 0.0) {
        return 0.0;
    }
    const double ln_front = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int n = 0; n < detail::kMaxIter; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * detail::kEps) {
                break;
            }
        }
        return sum * std::exp(ln_front);
    }
    // Continued fraction for Q, Lentz.
    double b = x + 1.0 - a;
    double c = 1.0 / detail::kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= detail::kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < detail::kTiny) {
            d = detail::kTiny;
        }
        c = b + an / c;
        if (std::abs(c) < detail::kTiny) {
            c = detail::kTiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < detail::kEps) {
            break;
        }
    }
    return 1.0 - std::exp(ln_front) * h;
}

inline double chi_square_cdf(double x, double dof) {
    if (x <= 0.0) {
        return 0.0;
    }
    return incomplete_gamma_p(0.5 * dof, 0.5 * x);
}

/// Inverse CDF by bisection; dof may be fractional.
inline double chi_square_quantile(double prob, double dof) {
    if (!(prob > 0.0 && prob < 1.0) || !(dof > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "chi_square_quantile: bad arguments");
    }
    double lo = 0.0;
    double hi = std::max(1.0, dof);
    while (chi_square_cdf(hi, dof) < prob) {
        hi *= 2.0;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi_square_cdf(mid, dof) < prob) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct CorrelationStats {
    double r = 0.0;
    double p_value = 1.0;
    std::size_t sample_count = 0;
};

inline CorrelationStats pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorKind::ShapeMismatch, "pearson: series lengths differ");
    }
    if (xs.size() < 3) {
        throw Error(ErrorKind::TooFewPoints, "pearson needs at least 3 points");
    }
    const double mx = mean(xs);
    const double my = mean(ys);
    long double sxx = 0.0L;
    long double syy = 0.0L;
    long double sxy = 0.0L;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const long double dx = xs[i] - mx;
        const long double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0L || syy == 0.0L) {
        throw Error(ErrorKind::ConstantSeries, "pearson: constant series");
    }
    CorrelationStats out;
    out.sample_count = xs.size();
    out.r = std::clamp(static_cast<double>(sxy / std::sqrt(sxx * syy)), -1.0, 1.0);
    const double df = static_cast<double>(xs.size() - 2);
    const double one_minus_r2 = 1.0 - out.r * out.r;
    if (one_minus_r2 <= 0.0) {
        out.p_value = std::numeric_limits<double>::min();
        return out;
    }
    const double t = out.r * std::sqrt(df / one_minus_r2);
    out.p_value = std::clamp(student_t_two_tailed(t, df), std::numeric_limits<double>::min(), 1.0);
    return out;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorKind::ShapeMismatch, "linear_fit: series lengths differ");
    }
    if (xs.size() < 2) {
        throw Error(ErrorKind::TooFewPoints, "linear_fit needs at least 2 points");
    }
    const double mx = mean(xs);
    const double my = mean(ys);
    long double sxx = 0.0L;
    long double sxy = 0.0L;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += static_cast<long double>(xs[i] - mx) * (xs[i] - mx);
        sxy += static_cast<long double>(xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0L) {
        throw Error(ErrorKind::ConstantSeries, "linear_fit: constant abscissa");
    }
    LineFit f;
    f.slope = static_cast<double>(sxy / sxx);
    f.intercept = my - f.slope * mx;
    return f;
}

/// A block of consecutive points pooled by isotonic regression.
struct IsotonicBlock {
    std::size_t first = 0;
    std::size_t count = 0;
    double value = 0.0;
};

/// Pool-adjacent-violators, unit weights. Returns fitted blocks in order.
inline std::vector<IsotonicBlock> isotonic_blocks(std::span<const double> ys, bool increasing) {
    std::vector<IsotonicBlock> blocks;
    std::vector<double> sums;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        blocks.push_back({i, 1, ys[i]});
        sums.push_back(ys[i]);
        while (blocks.size() > 1) {
            const auto &b = blocks[blocks.size() - 1];
            const auto &a = blocks[blocks.size() - 2];
            const bool violates = increasing ? a.value > b.value : a.value < b.value;
            if (!violates) {
                break;
            }
            const double s = sums[sums.size() - 2] + sums.back();
            const std::size_t n = a.count + b.count;
            const std::size_t first = a.first;
            blocks.pop_back();
            sums.pop_back();
            blocks.back() = {first, n, s / static_cast<double>(n)};
            sums.back() = s;
        }
    }
    return blocks;
}

inline std::vector<double> isotonic_regression(std::span<const double> ys, bool increasing) {
    std::vector<double> fit(ys.size());
    for (const auto &b : isotonic_blocks(ys, increasing)) {
        std::fill_n(fit.begin() + static_cast<std::ptrdiff_t>(b.first), b.count, b.value);
    }
    return fit;
}

} // namespace qstack::stats
