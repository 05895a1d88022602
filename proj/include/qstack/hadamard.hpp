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
 * Hadamard-test overlap estimation.
 *
 * The test prepares (|0> + |1>)|psi> / sqrt(2), applies a controlled unitary
 * W with W|psi> = |phi>, and interferes the ancilla with a second Hadamard.
 * The ancilla reads 0 with probability (1 + Re<psi|phi>) / 2, so S shots give
 * count0 ~ Binomial(S, (1 + mu) / 2) and Z = P(0) - P(1) estimates mu with
 * variance (1 - mu^2) / S.
 *
 * The production path samples that binomial directly from the analytic
 * overlap; circuit.hpp holds the explicit statevector used to verify it.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "qstack/binomial.hpp"
#include "qstack/error.hpp"
#include "qstack/rng.hpp"
#include "qstack/vectorspace.hpp"

namespace qstack {

struct HadamardJob {
    StateHandle psi;
    StateHandle phi;
    std::int64_t shots = 1;
    std::uint64_t seed = 0;
};

struct ShotResult {
    std::int64_t count0 = 0;
    std::int64_t count1 = 0;
    std::int64_t shots = 0;

    bool operator==(const ShotResult &) const = default;
};

struct OverlapEstimate {
    double z_hat = 0.0;
    double true_overlap = 0.0;
    double variance_theoretical = 0.0;
};

namespace detail {

inline void require_same_dim(const EncodedState &a, const EncodedState &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::DimMismatch,
                    "state dims differ: " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
    }
}

} // namespace detail

/// <psi|phi> for real amplitudes, clamped to [-1, 1].
inline double analytic_overlap(const EncodedState &psi, const EncodedState &phi) {
    detail::require_same_dim(psi, phi);
    if (psi.is_zero() || phi.is_zero()) {
        throw Error(ErrorKind::ZeroState, "overlap with the zero-vector sentinel is undefined");
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        acc += static_cast<long double>(psi.amplitudes[i]) * phi.amplitudes[i];
    }
    return std::clamp(static_cast<double>(acc), -1.0, 1.0);
}

/// Probability that the Hadamard-test ancilla reads 0.
inline double ancilla_zero_probability(double overlap) noexcept {
    return std::clamp(0.5 * (1.0 + overlap), 0.0, 1.0);
}

inline void validate(const HadamardJob &job) {
    if (!job.psi || !job.phi) {
        throw Error(ErrorKind::InvalidArgument, "job has no state attached");
    }
    if (job.shots < 1) {
        throw Error(ErrorKind::InvalidArgument, "shots must be >= 1");
    }
    detail::require_same_dim(*job.psi, *job.phi);
}

/// Draw ancilla counts for a job; identical jobs (including seed) give identical counts.
inline ShotResult sample_hadamard(const HadamardJob &job) {
    validate(job);
    const double mu = analytic_overlap(*job.psi, *job.phi);
    CounterRng rng(job.seed);
    const auto count0 = sample_binomial(rng, job.shots, ancilla_zero_probability(mu));
    return {count0, job.shots - count0, job.shots};
}

/// Z = P(0) - P(1). Theoretical variance uses the plug-in overlap.
inline OverlapEstimate estimate(const ShotResult &result) {
    const auto s = static_cast<double>(result.shots);
    OverlapEstimate e;
    e.z_hat = static_cast<double>(result.count0 - result.count1) / s;
    e.true_overlap = e.z_hat;
    e.variance_theoretical = std::max(0.0, 1.0 - e.z_hat * e.z_hat) / s;
    return e;
}

/// As above, with the simulated true overlap filled in.
inline OverlapEstimate estimate(const ShotResult &result, double true_overlap) {
    auto e = estimate(result);
    e.true_overlap = true_overlap;
    e.variance_theoretical =
        std::max(0.0, 1.0 - true_overlap * true_overlap) / static_cast<double>(result.shots);
    return e;
}

/// The Stage-3 form 2 P(0) - 1; equal to estimate().z_hat whenever counts are consistent.
inline double two_p0_minus_one(const ShotResult &result) {
    return 2.0 * static_cast<double>(result.count0) / static_cast<double>(result.shots) - 1.0;
}

/// |<psi|phi>|^2 as reported by a SWAP test. The sign of the overlap is lost.
inline double swap_test_overlap_squared(const EncodedState &psi, const EncodedState &phi) {
    const double mu = analytic_overlap(psi, phi);
    return mu * mu;
}

/// Sampled SWAP test: P(0) = (1 + |<psi|phi>|^2) / 2, returns 2 P(0) - 1.
inline double sample_swap_test(const EncodedState &psi, const EncodedState &phi,
                               std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw Error(ErrorKind::InvalidArgument, "shots must be >= 1");
    }
    const double f = swap_test_overlap_squared(psi, phi);
    CounterRng rng(seed);
    const auto c0 = sample_binomial(rng, shots, ancilla_zero_probability(f));
    return 2.0 * static_cast<double>(c0) / static_cast<double>(shots) - 1.0;
}

} // namespace qstack
