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
 * Counter-based random streams.
 *
 * Every stochastic quantity in qstack is drawn from a CounterRng whose key is
 * derived from the identity of the thing being sampled (a job, a sweep cell,
 * a training step). The n-th output of a stream is a pure function of
 * (key, n), so results never depend on scheduling order or thread count.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

namespace qstack {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
}

/// Hash a master seed together with an ordered list of identifiers.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> ids) noexcept {
    std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
    for (auto id : ids) {
        h = mix64(h ^ mix64(id + 0x9e3779b97f4a7c15ULL));
    }
    return h;
}

/**
 * Stateless-by-construction generator: output k is mix64(key + k * gamma).
 * Satisfies UniformRandomBitGenerator so it can drive <random> adaptors,
 * but the helpers below are preferred since their output is portable.
 */
class CounterRng {
  public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11U) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1).
    double uniform_open() noexcept {
        double u = 0.0;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's nearly-divisionless method.
        auto x = (*this)();
        auto m = static_cast<unsigned __int128>(x) * bound;
        auto l = static_cast<std::uint64_t>(m);
        if (l < bound) {
            const std::uint64_t t = (0 - bound) % bound;
            while (l < t) {
                x = (*this)();
                m = static_cast<unsigned __int128>(x) * bound;
                l = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64U);
    }

    /// +1 or -1 with equal probability.
    double sign() noexcept { return ((*this)() >> 63U) != 0U ? -1.0 : 1.0; }

    /// Standard normal deviate (Marsaglia polar method).
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Exponential(1) deviate.
    double exponential() noexcept { return -std::log(uniform_open()); }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Ceil that ignores relative rounding noise below 1e-12, so that values like
/// 1/(0.1*0.1) = 99.99999999999999 and 100 * e^{ln 2} land on the intended integer.
inline double ceil_tolerant(double x) noexcept {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) {
        return r;
    }
    return std::ceil(x);
}

} // namespace qstack
