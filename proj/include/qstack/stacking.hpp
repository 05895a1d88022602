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
 * Stacking planner: lays a buffer of Hadamard jobs out over clock cycles.
 *
 * Each test occupies ceil(log2 dim) data qubits plus one ancilla. A cycle
 * runs a group of tests side by side on disjoint registers, so its width is
 * (group size) * (qubits per test). The patterns differ only in group size:
 *
 *   Horizontal  1 job per cycle          N^2 cycles
 *   Balanced    one row (N jobs)/cycle   N cycles
 *   Vertical    every job in one cycle   1 cycle
 *   Batch       as many jobs as fit      ceil(N^2 / floor(budget / qpt))
 *
 * When a pattern's group does not fit the qubit budget it is split into
 * near-equal chunks and the plan is flagged as degraded.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qstack/error.hpp"
#include "qstack/hadamard.hpp"
#include "qstack/parallel.hpp"
#include "qstack/rng.hpp"

namespace qstack {

enum class StackingPattern : std::uint8_t { Horizontal, Balanced, Vertical, Batch };

inline constexpr std::size_t kUnlimitedBudget = std::numeric_limits<std::size_t>::max();

constexpr std::string_view to_string(StackingPattern p) noexcept {
    switch (p) {
    case StackingPattern::Horizontal: return "horizontal";
    case StackingPattern::Balanced: return "balanced";
    case StackingPattern::Vertical: return "vertical";
    case StackingPattern::Batch: return "batch";
    }
    return "unknown";
}

inline std::optional<StackingPattern> parse_pattern(std::string_view s) {
    for (auto p : {StackingPattern::Horizontal, StackingPattern::Balanced,
                   StackingPattern::Vertical, StackingPattern::Batch}) {
        if (s == to_string(p)) {
            return p;
        }
    }
    return std::nullopt;
}

struct ResourceModel {
    std::size_t data_qubits = 1;
    std::size_t qubits_per_test = 2;
    std::size_t total_jobs = 0;
};

/// ceil(log2 dim), at least 1: non-power-of-two vectors are zero-padded.
inline std::size_t data_qubits_for(std::size_t dim) {
    if (dim <= 2) {
        return 1;
    }
    return static_cast<std::size_t>(std::bit_width(dim - 1));
}

inline ResourceModel make_resource_model(std::size_t dim, std::size_t total_jobs) {
    const auto n = data_qubits_for(dim);
    return {n, n + 1, total_jobs};
}

struct StackingPlan {
    StackingPattern pattern = StackingPattern::Batch;
    std::vector<std::vector<std::size_t>> cycles;
    std::size_t width = 0;
    std::size_t qubits_per_test = 2;
    std::size_t data_qubits = 1;
    std::size_t budget = kUnlimitedBudget;
    std::size_t grid_rows = 0;
    std::size_t grid_cols = 0;
    bool degraded = false;

    [[nodiscard]] std::size_t cycle_count() const noexcept { return cycles.size(); }

    [[nodiscard]] std::size_t job_count() const noexcept {
        std::size_t n = 0;
        for (const auto &c : cycles) {
            n += c.size();
        }
        return n;
    }
};

struct PlanRequest {
    std::size_t jobs = 0;       ///< jobs to place, ids 0..jobs-1
    std::size_t row_length = 1; ///< jobs per output row (Balanced group size)
    std::size_t dim = 2;        ///< vector dimension of each test
    StackingPattern pattern = StackingPattern::Batch;
    std::size_t budget = kUnlimitedBudget;
    std::size_t grid_rows = 0; ///< for reporting; defaults to jobs / row_length
    std::size_t grid_cols = 0;
};

namespace detail {

// Split [first, first+count) into `parts` contiguous chunks whose sizes differ by at most 1.
inline void append_chunks(std::vector<std::vector<std::size_t>> &cycles, std::size_t first,
                          std::size_t count, std::size_t parts) {
    const std::size_t base = count / parts;
    const std::size_t extra = count % parts;
    std::size_t next = first;
    for (std::size_t k = 0; k < parts; ++k) {
        const std::size_t size = base + (k < extra ? 1 : 0);
        std::vector<std::size_t> group(size);
        for (auto &id : group) {
            id = next++;
        }
        cycles.push_back(std::move(group));
    }
}

} // namespace detail

inline StackingPlan plan(const PlanRequest &req) {
    const auto model = make_resource_model(req.dim, req.jobs);
    if (req.budget < model.qubits_per_test) {
        throw Error(ErrorKind::BudgetTooSmall,
                    "budget " + std::to_string(req.budget) + " < " +
                        std::to_string(model.qubits_per_test) + " qubits per test");
    }
    if (req.row_length == 0) {
        throw Error(ErrorKind::InvalidArgument, "row length must be >= 1");
    }

    StackingPlan out;
    out.pattern = req.pattern;
    out.qubits_per_test = model.qubits_per_test;
    out.data_qubits = model.data_qubits;
    out.budget = req.budget;
    out.grid_cols = req.grid_cols != 0 ? req.grid_cols : req.row_length;
    out.grid_rows = req.grid_rows != 0 ? req.grid_rows
                                       : (req.jobs + req.row_length - 1) / req.row_length;

    const std::size_t capacity = req.budget / model.qubits_per_test; // jobs per cycle
    std::size_t group = 1;
    switch (req.pattern) {
    case StackingPattern::Horizontal: group = 1; break;
    case StackingPattern::Balanced: group = req.row_length; break;
    case StackingPattern::Vertical: group = std::max<std::size_t>(1, req.jobs); break;
    case StackingPattern::Batch: group = std::max<std::size_t>(1, std::min(capacity, req.jobs)); break;
    }

    for (std::size_t first = 0; first < req.jobs; first += group) {
        const std::size_t count = std::min(group, req.jobs - first);
        const std::size_t parts = (count + capacity - 1) / capacity;
        if (parts > 1) {
            out.degraded = true;
        }
        detail::append_chunks(out.cycles, first, count, std::max<std::size_t>(1, parts));
    }

    for (const auto &c : out.cycles) {
        out.width = std::max(out.width, c.size() * model.qubits_per_test);
    }
    return out;
}

/// Square N x N product of dim-dimensional vectors.
inline StackingPlan plan(std::size_t n, std::size_t dim, StackingPattern pattern,
                         std::size_t budget = kUnlimitedBudget) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
    }
    return plan(PlanRequest{n * n, n, dim, pattern, budget, n, n});
}

struct ComplexityReport {
    StackingPattern pattern = StackingPattern::Batch;
    std::size_t cycle_count = 0;
    std::size_t width = 0;
    std::uint64_t shots_per_job = 0;          ///< ceil(1 / eps^2)
    std::uint64_t total_sequential_shots = 0; ///< cycles * shots_per_job
    std::uint64_t classical_prep_ops = 0;     ///< N^2 entries read for Stage-1 norms
    std::size_t data_qubits = 0;              ///< state-preparation depth proxy, log2 N
    bool degraded = false;
};

inline std::uint64_t shots_for_precision(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw Error(ErrorKind::InvalidEpsilon, "epsilon must lie in (0, 1)");
    }
    return static_cast<std::uint64_t>(ceil_tolerant(1.0 / (epsilon * epsilon)));
}

/// Shot-cycle accounting; quantum and classical costs are kept separate.
inline ComplexityReport complexity_report(const StackingPlan &p, double epsilon) {
    ComplexityReport r;
    r.pattern = p.pattern;
    r.cycle_count = p.cycle_count();
    r.width = p.width;
    r.shots_per_job = shots_for_precision(epsilon);
    r.total_sequential_shots = r.cycle_count * r.shots_per_job;
    r.classical_prep_ops = static_cast<std::uint64_t>(p.grid_rows) * p.grid_cols;
    r.data_qubits = p.data_qubits;
    r.degraded = p.degraded;
    return r;
}

/**
 * Execute cycle groups in order. Jobs inside a group run concurrently; each
 * job draws from its own seed, so the result buffer is independent of the
 * plan and of the thread count.
 */
inline std::vector<ShotResult> execute_plan(const StackingPlan &p,
                                            std::span<const HadamardJob> jobs,
                                            std::size_t threads = 1) {
    if (jobs.size() != p.job_count()) {
        throw Error(ErrorKind::PlanJobMismatch, "plan covers " + std::to_string(p.job_count()) +
                                                    " jobs, buffer has " +
                                                    std::to_string(jobs.size()));
    }
    std::vector<ShotResult> results(jobs.size());
    for (const auto &cycle : p.cycles) {
        parallel_for(
            cycle.size(), threads,
            [&](std::size_t k) {
                const auto id = cycle[k];
                results.at(id) = sample_hadamard(jobs[id]);
            },
            256);
    }
    return results;
}

} // namespace qstack
