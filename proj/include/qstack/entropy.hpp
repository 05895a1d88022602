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
 * Entropy of amplitude distributions and its effect on overlap-estimator
 * variance.
 *
 * For a state with p_i = |a_i|^2, the variance of a Hadamard-test estimate
 * against V|psi> with random-sign diagonal V averages to (1 - sum p_i^2) / S,
 * which is at most (1 - e^{-H}) / S. Sweeps over families of states measure
 * this empirically; entropies are in nats throughout.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qstack/binomial.hpp"
#include "qstack/error.hpp"
#include "qstack/hadamard.hpp"
#include "qstack/parallel.hpp"
#include "qstack/rng.hpp"
#include "qstack/stacking.hpp"
#include "qstack/stats.hpp"
#include "qstack/vectorspace.hpp"

namespace qstack {

inline constexpr double kDistributionTolerance = 1e-12;

/// Probability vector; construct through make_distribution() to validate.
struct ProbDist {
    std::vector<double> p;

    [[nodiscard]] std::size_t n() const noexcept { return p.size(); }
};

inline void validate(const ProbDist &d) {
    if (d.p.empty()) {
        throw Error(ErrorKind::InvalidDistribution, "empty distribution");
    }
    long double sum = 0.0L;
    for (double x : d.p) {
        if (!std::isfinite(x) || x < 0.0) {
            throw Error(ErrorKind::InvalidDistribution, "probabilities must be finite and >= 0");
        }
        sum += x;
    }
    if (std::abs(static_cast<double>(sum) - 1.0) > kDistributionTolerance) {
        throw Error(ErrorKind::InvalidDistribution,
                    "probabilities sum to " + std::to_string(static_cast<double>(sum)));
    }
}

inline ProbDist make_distribution(std::vector<double> p) {
    ProbDist d{std::move(p)};
    validate(d);
    return d;
}

/// Normalize non-negative weights.
inline ProbDist normalize_weights(std::span<const double> w) {
    long double sum = 0.0L;
    for (double x : w) {
        if (!std::isfinite(x) || x < 0.0) {
            throw Error(ErrorKind::InvalidDistribution, "weights must be finite and >= 0");
        }
        sum += x;
    }
    if (sum == 0.0L) {
        throw Error(ErrorKind::InvalidDistribution, "all weights are zero");
    }
    ProbDist d;
    d.p.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        d.p[i] = static_cast<double>(w[i] / sum);
    }
    return d;
}

struct EntropyReport {
    double shannon_nats = 0.0;
    double shannon_bits = 0.0;
    double purity = 1.0;
    double collision_entropy = 0.0;
    double h_max = 0.0;
    double effective_dim = 1.0;
};

inline EntropyReport entropy(const ProbDist &d) {
    validate(d);
    long double h = 0.0L;
    long double g = 0.0L;
    for (double x : d.p) {
        if (x > 0.0) {
            h -= static_cast<long double>(x) * std::log(static_cast<long double>(x));
        }
        g += static_cast<long double>(x) * x;
    }
    EntropyReport r;
    r.h_max = std::log(static_cast<double>(d.n()));
    r.shannon_nats = std::clamp(static_cast<double>(h), 0.0, r.h_max);
    r.shannon_bits = r.shannon_nats / std::numbers::ln2;
    r.purity = std::min(1.0, static_cast<double>(g));
    r.collision_entropy = std::max(0.0, -std::log(r.purity));
    r.effective_dim = std::exp(r.shannon_nats);
    return r;
}

/// (1 - e^{-H}) / S.
inline double dividend_bound(double h_nats, double shots) {
    if (!(h_nats >= 0.0) || !(shots >= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "dividend_bound needs H >= 0 and S >= 1");
    }
    return -std::expm1(-h_nats) / shots;
}

struct StateFamily {
    enum class Kind : std::uint8_t { Normal, Uniform, Exponential, ChiSquare, Interpolated };

    Kind kind = Kind::Normal;
    std::size_t support = 0; ///< Uniform: active support size m (0 means draw m in [1, n])
    double t = 1.0;          ///< Interpolated: 0 is a delta, 1 is uniform

    static StateFamily normal() { return {Kind::Normal}; }
    static StateFamily uniform(std::size_t m = 0) { return {Kind::Uniform, m}; }
    static StateFamily exponential() { return {Kind::Exponential}; }
    static StateFamily chi_square() { return {Kind::ChiSquare}; }
    static StateFamily interpolated(double t) { return {Kind::Interpolated, 0, t}; }
};

constexpr std::string_view to_string(StateFamily::Kind k) noexcept {
    switch (k) {
    case StateFamily::Kind::Normal: return "normal";
    case StateFamily::Kind::Uniform: return "uniform";
    case StateFamily::Kind::Exponential: return "exponential";
    case StateFamily::Kind::ChiSquare: return "chisquare";
    case StateFamily::Kind::Interpolated: return "interpolated";
    }
    return "unknown";
}

enum class SignPolicy : std::uint8_t { Random, Positive };

struct GeneratedState {
    EncodedState state;
    ProbDist dist;
};

/**
 * Normal/Exponential/ChiSquare: n iid weights |N(0,1)|, Exp(1), chi^2(1),
 * normalized. Uniform: 1/m on a random m-subset. Interpolated(t):
 * (1 - t) delta_0 + t / n. Amplitudes are sqrt(p_i) times a sign.
 */
inline GeneratedState generate_state(const StateFamily &family, std::size_t n, std::uint64_t seed,
                                     SignPolicy signs = SignPolicy::Random) {
    if (n < 2) {
        throw Error(ErrorKind::InvalidSupport, "support must be >= 2");
    }
    CounterRng rng(seed);
    std::vector<double> w(n, 0.0);
    switch (family.kind) {
    case StateFamily::Kind::Normal:
        for (auto &x : w) {
            x = std::abs(rng.normal());
        }
        break;
    case StateFamily::Kind::Exponential:
        for (auto &x : w) {
            x = rng.exponential();
        }
        break;
    case StateFamily::Kind::ChiSquare:
        for (auto &x : w) {
            const double z = rng.normal();
            x = z * z;
        }
        break;
    case StateFamily::Kind::Uniform: {
        std::size_t m = family.support;
        if (m == 0) {
            m = 1 + static_cast<std::size_t>(rng.below(n));
        }
        if (m > n) {
            throw Error(ErrorKind::InvalidSupport,
                        "uniform support " + std::to_string(m) + " exceeds n = " + std::to_string(n));
        }
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) {
            idx[i] = i;
        }
        for (std::size_t i = 0; i < m; ++i) {
            const auto k = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(idx[i], idx[k]);
            w[idx[i]] = 1.0;
        }
        break;
    }
    case StateFamily::Kind::Interpolated: {
        if (!(family.t >= 0.0 && family.t <= 1.0)) {
            throw Error(ErrorKind::InvalidSupport, "interpolation t must lie in [0, 1]");
        }
        const double u = family.t / static_cast<double>(n);
        std::fill(w.begin(), w.end(), u);
        w[0] += 1.0 - family.t;
        break;
    }
    }

    GeneratedState g;
    g.dist = normalize_weights(w);
    g.state.source_norm = 1.0;
    g.state.amplitudes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = signs == SignPolicy::Random ? rng.sign() : 1.0;
        g.state.amplitudes[i] = s * std::sqrt(g.dist.p[i]);
    }
    return g;
}

/// |+>^n generalised to any n: every amplitude 1/sqrt(n).
inline EncodedState equal_superposition(std::size_t n) {
    EncodedState s;
    s.source_norm = 1.0;
    s.amplitudes.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    return s;
}

/// How the partner state phi of a sweep point is chosen.
enum class Pairing : std::uint8_t {
    FamilyPartner,    ///< independent same-family phi, random signs on both
    UniformReference, ///< sign-free psi against the equal superposition
    SignDiagonal,     ///< phi = V psi, fresh random +-1 diagonal V per batch
};

constexpr std::string_view to_string(Pairing p) noexcept {
    switch (p) {
    case Pairing::FamilyPartner: return "family-partner";
    case Pairing::UniformReference: return "uniform-reference";
    case Pairing::SignDiagonal: return "sign-diagonal";
    }
    return "unknown";
}

struct SweepLevel {
    StateFamily family;
    std::size_t n = 2;
};

/// Uniform family on n amplitudes, one level per support size m = 1..n.
inline std::vector<SweepLevel> uniform_levels(std::size_t n) {
    std::vector<SweepLevel> out;
    for (std::size_t m = 1; m <= n; ++m) {
        out.push_back({StateFamily::uniform(m), n});
    }
    return out;
}

/// `count` dimensions spaced geometrically in [lo, hi], rounded to integers.
inline std::vector<SweepLevel> geometric_levels(const StateFamily &family, std::size_t lo,
                                                std::size_t hi, std::size_t count) {
    if (lo < 2 || hi < lo || count < 2) {
        throw Error(ErrorKind::InvalidSupport, "geometric levels need 2 <= lo <= hi, count >= 2");
    }
    std::vector<SweepLevel> out;
    const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
    for (std::size_t k = 0; k < count; ++k) {
        const double e = static_cast<double>(k) / static_cast<double>(count - 1);
        const auto n = static_cast<std::size_t>(std::lround(static_cast<double>(lo) * std::pow(ratio, e)));
        out.push_back({family, n});
    }
    return out;
}

inline std::vector<SweepLevel> interpolated_levels(std::size_t n, std::size_t count) {
    if (count < 2) {
        throw Error(ErrorKind::InvalidArgument, "need at least 2 levels");
    }
    std::vector<SweepLevel> out;
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back({StateFamily::interpolated(static_cast<double>(k) /
                                                 static_cast<double>(count - 1)),
                       n});
    }
    return out;
}

struct SweepConfig {
    std::vector<SweepLevel> levels;
    std::int64_t shots = 8192;
    std::size_t repetitions = 500;
    std::uint64_t seed = 0;
    Pairing pairing = Pairing::UniformReference;
    std::size_t threads = 1;
};

struct SweepRecord {
    std::string family;
    std::size_t n = 0;
    double entropy_nats = 0.0;
    double entropy_bits = 0.0;
    double purity = 1.0;
    double overlap = 0.0;            ///< mu, or mean mu over batches for SignDiagonal
    double empirical_variance = 0.0;
    double expected_variance = 0.0;  ///< mean of (1 - mu_r^2) / S over batches
    double theoretical_ceiling = 0.0;
    double dividend_bound = 0.0;
    double degrees_of_freedom = 0.0; ///< of the chi^2 law for empirical_variance
    std::int64_t shots = 0;
    std::size_t repetitions = 0;
};

namespace detail {

inline SweepRecord sweep_point(const SweepLevel &level, std::size_t index, const SweepConfig &cfg) {
    const auto signs =
        cfg.pairing == Pairing::FamilyPartner ? SignPolicy::Random : SignPolicy::Positive;
    const auto psi = generate_state(level.family, level.n, derive_seed(cfg.seed, {index, 0}), signs);
    const auto rep = entropy(psi.dist);
    const auto s = static_cast<double>(cfg.shots);
    const std::size_t reps = cfg.repetitions;

    SweepRecord rec;
    rec.family = std::string(to_string(level.family.kind));
    rec.n = level.n;
    rec.entropy_nats = rep.shannon_nats;
    rec.entropy_bits = rep.shannon_bits;
    rec.purity = rep.purity;
    rec.theoretical_ceiling = 1.0 / s;
    rec.dividend_bound = dividend_bound(rep.shannon_nats, s);
    rec.shots = cfg.shots;
    rec.repetitions = reps;

    std::vector<double> z(reps);
    if (cfg.pairing == Pairing::SignDiagonal) {
        // Independent terms (z_r - mu_r)^2 with means e_r = (1 - mu_r^2) / S.
        long double sum_t = 0.0L;
        long double sum_e = 0.0L;
        long double sum_e2 = 0.0L;
        long double sum_mu = 0.0L;
        for (std::size_t r = 0; r < reps; ++r) {
            CounterRng vr(derive_seed(cfg.seed, {index, 3, r}));
            long double mu = 0.0L;
            for (double p : psi.dist.p) {
                mu += p * vr.sign();
            }
            const double m = std::clamp(static_cast<double>(mu), -1.0, 1.0);
            CounterRng rng(derive_seed(cfg.seed, {index, 2, r}));
            const auto c0 = sample_binomial(rng, cfg.shots, ancilla_zero_probability(m));
            const double zr = 2.0 * static_cast<double>(c0) / s - 1.0;
            const double e = (1.0 - m * m) / s;
            sum_t += static_cast<long double>(zr - m) * (zr - m);
            sum_e += e;
            sum_e2 += static_cast<long double>(e) * e;
            sum_mu += m;
        }
        const auto nr = static_cast<long double>(reps);
        rec.overlap = static_cast<double>(sum_mu / nr);
        rec.empirical_variance = static_cast<double>(sum_t / nr);
        rec.expected_variance = static_cast<double>(sum_e / nr);
        rec.degrees_of_freedom = sum_e2 > 0.0L ? static_cast<double>(sum_e * sum_e / sum_e2)
                                               : static_cast<double>(reps);
        return rec;
    }

    EncodedState phi;
    if (cfg.pairing == Pairing::FamilyPartner) {
        phi = generate_state(level.family, level.n, derive_seed(cfg.seed, {index, 1}),
                             SignPolicy::Random)
                  .state;
    } else {
        phi = equal_superposition(level.n);
    }
    const double mu = analytic_overlap(psi.state, phi);
    const double p0 = ancilla_zero_probability(mu);
    for (std::size_t r = 0; r < reps; ++r) {
        CounterRng rng(derive_seed(cfg.seed, {index, 2, r}));
        z[r] = 2.0 * static_cast<double>(sample_binomial(rng, cfg.shots, p0)) / s - 1.0;
    }
    rec.overlap = mu;
    rec.empirical_variance = stats::sample_variance(z);
    rec.expected_variance = (1.0 - mu * mu) / s;
    rec.degrees_of_freedom = static_cast<double>(reps - 1);
    return rec;
}

} // namespace detail

/// One record per level; cells are seeded by (seed, level index, batch).
inline std::vector<SweepRecord> variance_sweep(const SweepConfig &cfg) {
    if (cfg.repetitions < 100) {
        throw Error(ErrorKind::InvalidArgument, "sweeps need at least 100 repetitions");
    }
    if (cfg.shots < 1) {
        throw Error(ErrorKind::InvalidArgument, "shots must be >= 1");
    }
    std::vector<SweepRecord> out(cfg.levels.size());
    parallel_for(
        cfg.levels.size(), cfg.threads,
        [&](std::size_t k) { out[k] = detail::sweep_point(cfg.levels[k], k, cfg); }, 1);
    return out;
}

/// Upper edge of the one-sided chi^2 band around a reference variance.
inline double variance_band(double reference, double dof, double confidence = 0.999) {
    if (reference <= 0.0) {
        return 0.0;
    }
    return reference * stats::chi_square_quantile(confidence, dof) / dof;
}

/// Empirical variance within the (1 - mu^2) / S law.
inline bool within_variance_law(const SweepRecord &r, double confidence = 0.999) {
    return r.empirical_variance <= variance_band(r.expected_variance, r.degrees_of_freedom, confidence);
}

/// Empirical variance within the (1 - e^{-H}) / S bound.
inline bool within_dividend_bound(const SweepRecord &r, double confidence = 0.999) {
    return r.empirical_variance <= variance_band(r.dividend_bound, r.degrees_of_freedom, confidence);
}

/// Empirical variance within the 1/S ceiling.
inline bool within_ceiling(const SweepRecord &r, double confidence = 0.999) {
    return r.empirical_variance <=
           variance_band(r.theoretical_ceiling, r.degrees_of_freedom, confidence);
}

/// Pearson correlation of entropy against empirical variance.
inline stats::CorrelationStats entropy_variance_correlation(std::span<const SweepRecord> sweep) {
    std::vector<double> h;
    std::vector<double> v;
    for (const auto &r : sweep) {
        h.push_back(r.entropy_nats);
        v.push_back(r.empirical_variance);
    }
    return stats::pearson(h, v);
}

inline stats::LineFit entropy_variance_slope(std::span<const SweepRecord> sweep) {
    std::vector<double> h;
    std::vector<double> v;
    for (const auto &r : sweep) {
        h.push_back(r.entropy_nats);
        v.push_back(r.empirical_variance);
    }
    return stats::linear_fit(h, v);
}

struct CurvePoint {
    double h = 0.0;
    double v = 0.0;
};

/// Monotone piecewise-linear curve: knots at isotonic block centroids.
struct MonotoneCurve {
    std::vector<CurvePoint> knots;

    [[nodiscard]] double lo() const { return knots.front().h; }
    [[nodiscard]] double hi() const { return knots.back().h; }

    [[nodiscard]] double operator()(double h) const {
        if (h <= knots.front().h) {
            return knots.front().v;
        }
        if (h >= knots.back().h) {
            return knots.back().v;
        }
        auto it = std::upper_bound(knots.begin(), knots.end(), h,
                                   [](double x, const CurvePoint &k) { return x < k.h; });
        const auto &b = *it;
        const auto &a = *(it - 1);
        if (b.h == a.h) {
            return b.v;
        }
        return a.v + (b.v - a.v) * (h - a.h) / (b.h - a.h);
    }
};

/// Isotonic fit in whichever direction has the smaller residual sum of squares.
inline MonotoneCurve fit_monotone(std::vector<CurvePoint> pts) {
    if (pts.size() < 2) {
        throw Error(ErrorKind::TooFewPoints, "a curve needs at least 2 points");
    }
    std::stable_sort(pts.begin(), pts.end(),
                     [](const CurvePoint &a, const CurvePoint &b) { return a.h < b.h; });
    std::vector<double> ys;
    for (const auto &p : pts) {
        ys.push_back(p.v);
    }
    auto sse = [&](const std::vector<stats::IsotonicBlock> &blocks) {
        double s = 0.0;
        for (const auto &b : blocks) {
            for (std::size_t i = b.first; i < b.first + b.count; ++i) {
                s += (ys[i] - b.value) * (ys[i] - b.value);
            }
        }
        return s;
    };
    const auto up = stats::isotonic_blocks(ys, true);
    const auto down = stats::isotonic_blocks(ys, false);
    const auto &best = sse(down) <= sse(up) ? down : up;

    MonotoneCurve c;
    for (const auto &b : best) {
        double hs = 0.0;
        for (std::size_t i = b.first; i < b.first + b.count; ++i) {
            hs += pts[i].h;
        }
        c.knots.push_back({hs / static_cast<double>(b.count), b.value});
    }
    return c;
}

struct Crossing {
    double nats = 0.0;
    double bits = 0.0;
};

/**
 * First point in the shared entropy range where the smoothed curves change
 * order. Touching without changing order, or coinciding, is not a crossing.
 */
inline Crossing crossing_point(std::span<const CurvePoint> a, std::span<const CurvePoint> b) {
    const auto fa = fit_monotone({a.begin(), a.end()});
    const auto fb = fit_monotone({b.begin(), b.end()});
    const double lo = std::max(fa.lo(), fb.lo());
    const double hi = std::min(fa.hi(), fb.hi());
    if (!(hi > lo)) {
        throw Error(ErrorKind::InsufficientOverlap, "entropy ranges do not overlap");
    }
    std::vector<double> grid{lo, hi};
    for (const auto *f : {&fa, &fb}) {
        for (const auto &k : f->knots) {
            if (k.h > lo && k.h < hi) {
                grid.push_back(k.h);
            }
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    double scale = 0.0;
    for (double h : grid) {
        scale = std::max({scale, std::abs(fa(h)), std::abs(fb(h))});
    }
    const double tol = 1e-12 * std::max(scale, std::numeric_limits<double>::min());

    int last_sign = 0;
    double last_h = lo;
    double last_d = 0.0;
    bool last_was_zero = false;
    double first_zero_h = lo;
    for (double h : grid) {
        const double d = fa(h) - fb(h);
        const int sign = d > tol ? 1 : (d < -tol ? -1 : 0);
        if (sign == 0) {
            if (!last_was_zero) {
                first_zero_h = h;
            }
            last_was_zero = true;
            continue;
        }
        if (last_sign != 0 && sign != last_sign) {
            double x = first_zero_h;
            if (!last_was_zero) {
                x = last_h + (h - last_h) * last_d / (last_d - d);
            }
            return {x, x / std::numbers::ln2};
        }
        last_sign = sign;
        last_h = h;
        last_d = d;
        last_was_zero = false;
    }
    throw Error(ErrorKind::NoCrossing, "curves do not cross in the shared entropy range");
}

inline std::vector<CurvePoint> curve_of(std::span<const SweepRecord> sweep) {
    std::vector<CurvePoint> out;
    for (const auto &r : sweep) {
        out.push_back({r.entropy_nats, r.empirical_variance});
    }
    return out;
}

inline Crossing crossing_point(std::span<const SweepRecord> a, std::span<const SweepRecord> b) {
    const auto ca = curve_of(a);
    const auto cb = curve_of(b);
    return crossing_point(std::span<const CurvePoint>(ca), std::span<const CurvePoint>(cb));
}

struct ConcentrationVerdict {
    double mean_mu2 = 0.0;
    double standard_error = 0.0;
    double lower_bound = 0.0; ///< e^{-H} * min |V_ii|^2
    double purity = 0.0;      ///< closed form of E[mu^2]
    std::size_t trials = 0;
    bool pass = false;
};

/**
 * Monte-Carlo E[mu^2] for mu = <psi|V|psi> with V = diag(+-1) drawn fresh per
 * trial, checked against e^{-H} min |V_ii|^2 less three standard errors.
 */
inline ConcentrationVerdict concentration_check(const ProbDist &d, std::size_t trials,
                                                std::uint64_t seed) {
    const auto rep = entropy(d);
    if (trials < 2) {
        throw Error(ErrorKind::InvalidArgument, "need at least 2 trials");
    }
    std::vector<double> mu2(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng(derive_seed(seed, {t}));
        long double mu = 0.0L;
        for (double p : d.p) {
            mu += p * rng.sign();
        }
        mu2[t] = static_cast<double>(mu * mu);
    }
    ConcentrationVerdict v;
    v.trials = trials;
    v.mean_mu2 = stats::mean(mu2);
    v.standard_error = std::sqrt(stats::sample_variance(mu2) / static_cast<double>(trials));
    v.lower_bound = std::exp(-rep.shannon_nats);
    v.purity = rep.purity;
    v.pass = v.mean_mu2 >= v.lower_bound - 3.0 * v.standard_error;
    return v;
}

/// min(sMax, ceil(ceil(1/eps^2) * e^{hMax - H})).
inline std::uint64_t adaptive_shots(double h, double h_max, double epsilon, std::uint64_t s_max) {
    if (!(h >= 0.0) || h > h_max + 1e-12) {
        throw Error(ErrorKind::InvalidEntropy, "entropy must lie in [0, hMax]");
    }
    const auto base = static_cast<double>(shots_for_precision(epsilon));
    const double s = ceil_tolerant(base * std::exp(std::max(0.0, h_max - h)));
    if (s >= static_cast<double>(s_max)) {
        return s_max;
    }
    return static_cast<std::uint64_t>(s);
}

} // namespace qstack
