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
 * CSV and JSON serialization of plans, products, sweeps and training runs.
 * CSV numbers use shortest round-trip formatting so output is byte-stable.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "json.hpp"

#include "qstack/entropy.hpp"
#include "qstack/matmul.hpp"
#include "qstack/matrix_io.hpp"
#include "qstack/qml.hpp"
#include "qstack/stacking.hpp"

namespace qstack::report {

using Json = nlohmann::ordered_json;

inline Json budget_json(std::size_t budget) {
    return budget == kUnlimitedBudget ? Json(nullptr) : Json(budget);
}

inline Json to_json(const StackingPlan &p) {
    Json j;
    j["pattern"] = std::string(to_string(p.pattern));
    j["grid_rows"] = p.grid_rows;
    j["grid_cols"] = p.grid_cols;
    j["qubits_per_test"] = p.qubits_per_test;
    j["budget"] = budget_json(p.budget);
    j["cycle_count"] = p.cycle_count();
    j["width"] = p.width;
    j["degraded"] = p.degraded;
    j["cycles"] = p.cycles;
    return j;
}

inline Json to_json(const ComplexityReport &r) {
    Json j;
    j["pattern"] = std::string(to_string(r.pattern));
    j["cycle_count"] = r.cycle_count;
    j["width"] = r.width;
    j["shots_per_job"] = r.shots_per_job;
    j["total_sequential_shots"] = r.total_sequential_shots;
    j["classical_prep_ops"] = r.classical_prep_ops;
    j["data_qubits"] = r.data_qubits;
    j["degraded"] = r.degraded;
    return j;
}

/// Columns i, j, zHat, C_ij, stderr.
inline void write_matmul_csv(std::ostream &os, const MatMulResult &r) {
    os << "i,j,zHat,C_ij,stderr\n";
    for (std::size_t i = 0; i < r.c.rows(); ++i) {
        for (std::size_t j = 0; j < r.c.cols(); ++j) {
            os << i << ',' << j << ',' << io::format_double(r.estimate_at(i, j).z_hat) << ','
               << io::format_double(r.c(i, j)) << ',' << io::format_double(r.standard_error(i, j))
               << '\n';
        }
    }
}

struct ErrorSummary {
    double max_abs = 0.0;
    double mean_abs = 0.0;
};

inline ErrorSummary compare(const RealMatrix &got, const RealMatrix &want) {
    if (got.rows() != want.rows() || got.cols() != want.cols()) {
        throw Error(ErrorKind::ShapeMismatch, "compare: shapes differ");
    }
    ErrorSummary s;
    const auto n = got.values().size();
    long double sum = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = std::abs(got.values()[k] - want.values()[k]);
        s.max_abs = std::max(s.max_abs, e);
        sum += e;
    }
    s.mean_abs = n == 0 ? 0.0 : static_cast<double>(sum / static_cast<long double>(n));
    return s;
}

inline Json matmul_summary(const MatMulResult &r, std::size_t inner, const MatMulConfig &cfg,
                           const std::optional<RealMatrix> &reference) {
    Json j;
    j["rows"] = r.c.rows();
    j["inner"] = inner;
    j["cols"] = r.c.cols();
    j["pattern"] = std::string(to_string(cfg.pattern));
    j["shots"] = cfg.shots;
    j["epsilon"] = cfg.epsilon;
    j["seed"] = cfg.seed;
    j["exact"] = cfg.exact;
    j["jobs"] = r.job_count;
    j["cycles"] = r.plan.cycle_count();
    j["width"] = r.plan.width;
    j["degraded"] = r.plan.degraded;
    j["prep"] = {{"hits", r.prep.hits}, {"misses", r.prep.misses}, {"sentinels", r.prep.sentinels}};
    if (reference) {
        const auto e = compare(r.c, *reference);
        j["max_abs_error"] = e.max_abs;
        j["mean_abs_error"] = e.mean_abs;
    }
    return j;
}

inline void write_sweep_csv(std::ostream &os, std::span<const SweepRecord> records) {
    os << "family,n,H_nats,H_bits,purity,empirical_variance,dividend_bound,shots,repetitions\n";
    for (const auto &r : records) {
        os << r.family << ',' << r.n << ',' << io::format_double(r.entropy_nats) << ','
           << io::format_double(r.entropy_bits) << ',' << io::format_double(r.purity) << ','
           << io::format_double(r.empirical_variance) << ','
           << io::format_double(r.dividend_bound) << ',' << r.shots << ',' << r.repetitions
           << '\n';
    }
}

inline Json to_json(const stats::CorrelationStats &c) {
    return {{"r", c.r}, {"p", c.p_value}, {"sample_count", c.sample_count}};
}

inline Json to_json(const Crossing &c) { return {{"nats", c.nats}, {"bits", c.bits}}; }

inline void write_metrics_csv(std::ostream &os, const qml::TrainReport &r) {
    os << "epoch,train_loss,test_accuracy\n";
    for (std::size_t e = 0; e < r.epoch_loss.size(); ++e) {
        os << e + 1 << ',' << io::format_double(r.epoch_loss[e]) << ','
           << io::format_double(r.epoch_test_accuracy[e]) << '\n';
    }
}

inline Json to_json(const qml::TrainReport &r, const qml::TrainConfig &cfg) {
    Json j;
    j["shape"] = {cfg.shape.input, cfg.shape.hidden, cfg.shape.output};
    j["mode"] = std::string(qml::to_string(cfg.mode));
    j["exact"] = cfg.exact;
    j["learning_rate"] = cfg.learning_rate;
    j["batch_size"] = cfg.batch_size;
    j["epochs"] = cfg.epochs;
    j["shots"] = cfg.shots;
    j["seed"] = cfg.seed;
    j["final_accuracy"] = r.final_accuracy;
    j["final_train_accuracy"] = r.final_train_accuracy;
    j["quantum_jobs"] = r.quantum_jobs;
    j["wall_seconds"] = r.wall_seconds;
    j["train_loss"] = r.epoch_loss;
    j["test_accuracy"] = r.epoch_test_accuracy;
    return j;
}

} // namespace qstack::report
