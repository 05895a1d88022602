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
 * C = A B through Hadamard-test overlaps.
 *
 *   1. prepare: norms of rows of A and columns of B, one encode per vector
 *   2. dispatch: one job per (i, j) with both norms non-zero, run per plan
 *   3. reconstruct: C_ij = |A_i| |B_j| zHat_ij
 *
 * Job (i, j) draws from derive_seed(seed, {i, j}), so C does not depend on the
 * stacking pattern, the budget or the thread count.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qstack/error.hpp"
#include "qstack/hadamard.hpp"
#include "qstack/rng.hpp"
#include "qstack/stacking.hpp"
#include "qstack/vectorspace.hpp"

namespace qstack {

struct MatMulConfig {
    std::int64_t shots = 16384;
    double epsilon = 0.01; ///< advisory; shots is authoritative
    StackingPattern pattern = StackingPattern::Batch;
    std::uint64_t seed = 0;
    bool exact = false; ///< analytic overlaps, no sampling
    std::size_t threads = 1;
    std::size_t budget = kUnlimitedBudget;
};

inline void validate(const MatMulConfig &cfg) {
    if (cfg.shots < 1) {
        throw Error(ErrorKind::InvalidArgument, "shots must be >= 1");
    }
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
        throw Error(ErrorKind::InvalidEpsilon, "epsilon must lie in (0, 1)");
    }
}

struct MatMulResult {
    RealMatrix c;
    std::vector<OverlapEstimate> estimates; ///< row-major; zero-norm cells stay default
    std::vector<char> dispatched;           ///< row-major; 1 where a job ran
    std::vector<double> row_norms;
    std::vector<double> col_norms;
    StackingPlan plan;
    PrepStats prep;
    std::size_t job_count = 0;
    std::int64_t shots = 0;

    [[nodiscard]] const OverlapEstimate &estimate_at(std::size_t i, std::size_t j) const {
        return estimates[i * c.cols() + j];
    }

    /// 1-sigma error of C_ij from the theoretical overlap variance.
    [[nodiscard]] double standard_error(std::size_t i, std::size_t j) const {
        return row_norms[i] * col_norms[j] * std::sqrt(estimate_at(i, j).variance_theoretical);
    }
};

/// Naive triple loop, the reference product.
inline RealMatrix classical_matmul(const RealMatrix &a, const RealMatrix &b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::ShapeMismatch, "inner dimensions differ");
    }
    RealMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += a(i, k) * b(k, j);
            }
            c(i, j) = acc;
        }
    }
    return c;
}

inline MatMulResult matmul(const RealMatrix &a, const RealMatrix &b, const MatMulConfig &cfg,
                           PrepCache &cache) {
    validate(cfg);
    const auto before = cache.stats();
    auto prep = cache.prepare_all(a, b);
    const auto after = cache.stats();

    const std::size_t rows = a.rows();
    const std::size_t cols = b.cols();
    MatMulResult out;
    out.c = RealMatrix(rows, cols);
    out.estimates.assign(rows * cols, OverlapEstimate{});
    out.dispatched.assign(rows * cols, 0);
    out.row_norms = prep.row_norms;
    out.col_norms = prep.col_norms;
    out.prep = {after.hits - before.hits, after.misses - before.misses,
                after.sentinels - before.sentinels};
    out.shots = cfg.shots;

    std::vector<HadamardJob> jobs;
    std::vector<std::size_t> cell;
    for (std::size_t i = 0; i < rows; ++i) {
        if (prep.row_norms[i] == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (prep.col_norms[j] == 0.0) {
                continue;
            }
            jobs.push_back({prep.rows[i], prep.cols[j], cfg.shots, derive_seed(cfg.seed, {i, j})});
            cell.push_back(i * cols + j);
        }
    }
    out.job_count = jobs.size();
    out.plan = plan(PlanRequest{jobs.size(), std::max<std::size_t>(1, cols), a.cols(),
                                cfg.pattern, cfg.budget, rows, cols});

    std::vector<double> mu(jobs.size());
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        mu[k] = analytic_overlap(*jobs[k].psi, *jobs[k].phi);
    }

    std::vector<ShotResult> shots;
    if (!cfg.exact) {
        shots = execute_plan(out.plan, jobs, cfg.threads);
    }
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const std::size_t idx = cell[k];
        const std::size_t i = idx / cols;
        const std::size_t j = idx % cols;
        OverlapEstimate e;
        if (cfg.exact) {
            e.z_hat = mu[k];
            e.true_overlap = mu[k];
            e.variance_theoretical = 0.0;
        } else {
            e = estimate(shots[k], mu[k]);
        }
        out.estimates[idx] = e;
        out.dispatched[idx] = 1;
        out.c(i, j) = prep.row_norms[i] * prep.col_norms[j] * e.z_hat;
    }
    return out;
}

inline MatMulResult matmul(const RealMatrix &a, const RealMatrix &b, const MatMulConfig &cfg) {
    PrepCache cache;
    return matmul(a, b, cfg, cache);
}

/// A x with x treated as a single column.
inline RealVector matvec(const RealMatrix &a, const RealVector &x, const MatMulConfig &cfg) {
    if (a.cols() != x.dim()) {
        throw Error(ErrorKind::ShapeMismatch, "matvec: A has " + std::to_string(a.cols()) +
                                                  " columns, x has " + std::to_string(x.dim()));
    }
    const RealMatrix column(x.dim(), 1, x.vec());
    const auto r = matmul(a, column, cfg);
    return RealVector(std::vector<double>(r.c.values().begin(), r.c.values().end()));
}

/// 1-sigma error of a reconstructed element, normProduct * sqrt((1 - mu^2) / S).
inline double error_budget(double norm_product, std::int64_t shots, double mu = 0.0) {
    if (shots < 1) {
        throw Error(ErrorKind::InvalidArgument, "shots must be >= 1");
    }
    const double v = std::max(0.0, 1.0 - mu * mu) / static_cast<double>(shots);
    return std::abs(norm_product) * std::sqrt(v);
}

} // namespace qstack
