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
 * Classical operands, amplitude encoding with norm tracking, and the
 * memoized state-preparation cache.
 *
 * A real vector x is loaded as the state |x> = x / ||x||, and ||x|| is kept
 * as classical metadata so that x . w = <x|w> ||x|| ||w|| can be rebuilt
 * after the overlap has been estimated.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qstack/error.hpp"

namespace qstack {

/// Dense real vector.
class RealVector {
  public:
    RealVector() = default;
    explicit RealVector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
    explicit RealVector(std::vector<double> data) : data_(std::move(data)) {}
    RealVector(std::initializer_list<double> init) : data_(init) {}

    [[nodiscard]] std::size_t dim() const noexcept { return data_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return data_; }
    [[nodiscard]] std::span<double> values() noexcept { return data_; }
    [[nodiscard]] const std::vector<double> &vec() const noexcept { return data_; }

    double operator[](std::size_t i) const { return data_[i]; }
    double &operator[](std::size_t i) { return data_[i]; }

    bool operator==(const RealVector &) const = default;

  private:
    std::vector<double> data_;
};

/// Dense row-major real matrix.
class RealMatrix {
  public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw Error(ErrorKind::ShapeMismatch,
                        "matrix data length " + std::to_string(data_.size()) + " != " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
        }
    }
    RealMatrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &row : rows) {
            if (row.size() != cols_) {
                throw Error(ErrorKind::ShapeMismatch, "ragged matrix literal");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static RealMatrix identity(std::size_t n) {
        RealMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return data_; }
    [[nodiscard]] std::span<double> values() noexcept { return data_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_).subspan(r * cols_, cols_);
    }
    [[nodiscard]] std::span<double> row(std::size_t r) {
        return std::span<double>(data_).subspan(r * cols_, cols_);
    }
    [[nodiscard]] std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            out[r] = data_[r * cols_ + c];
        }
        return out;
    }

    [[nodiscard]] RealMatrix transposed() const {
        RealMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                t(c, r) = (*this)(r, c);
            }
        }
        return t;
    }

    bool operator==(const RealMatrix &) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline bool all_finite(std::span<const double> values) noexcept {
    for (double v : values) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

inline void require_finite(std::span<const double> values, const char *what) {
    if (!all_finite(values)) {
        throw Error(ErrorKind::NonFiniteInput, std::string(what) + " contains NaN or Inf");
    }
}

/// Euclidean norm accumulated in long double.
inline double euclidean_norm(std::span<const double> values) noexcept {
    long double acc = 0.0L;
    for (double v : values) {
        acc += static_cast<long double>(v) * static_cast<long double>(v);
    }
    return static_cast<double>(std::sqrt(acc));
}

/**
 * Amplitude-encoded real state. Amplitudes carry the sign of the source
 * entries (phase 0 or pi). A source norm of 0 marks the zero-vector
 * sentinel whose amplitudes are all zero.
 */
struct EncodedState {
    std::vector<double> amplitudes;
    double source_norm = 0.0;

    [[nodiscard]] std::size_t dim() const noexcept { return amplitudes.size(); }
    [[nodiscard]] bool is_zero() const noexcept { return source_norm == 0.0; }

    /// p_i = a_i^2.
    [[nodiscard]] std::vector<double> probabilities() const {
        std::vector<double> p(amplitudes.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = amplitudes[i] * amplitudes[i];
        }
        return p;
    }

    bool operator==(const EncodedState &) const = default;
};

inline EncodedState encode(std::span<const double> v) {
    require_finite(v, "encode input");
    EncodedState s;
    s.source_norm = euclidean_norm(v);
    s.amplitudes.assign(v.size(), 0.0);
    if (s.source_norm == 0.0) {
        return s;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        s.amplitudes[i] = v[i] / s.source_norm;
    }
    return s;
}

inline EncodedState encode(const RealVector &v) { return encode(v.values()); }

/// Pad with zero amplitudes up to the next power of two.
inline EncodedState pad_to_power_of_two(EncodedState s) {
    std::size_t target = 1;
    while (target < s.amplitudes.size()) {
        target <<= 1U;
    }
    s.amplitudes.resize(target, 0.0);
    return s;
}

inline std::vector<double> row_norms(const RealMatrix &m) {
    require_finite(m.values(), "matrix");
    std::vector<double> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out[r] = euclidean_norm(m.row(r));
    }
    return out;
}

inline std::vector<double> col_norms(const RealMatrix &m) {
    require_finite(m.values(), "matrix");
    std::vector<long double> acc(m.cols(), 0.0L);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            acc[c] += static_cast<long double>(row[c]) * static_cast<long double>(row[c]);
        }
    }
    std::vector<double> out(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        out[c] = static_cast<double>(std::sqrt(acc[c]));
    }
    return out;
}

enum class Orientation : std::uint8_t { Row, Column };

struct PrepKey {
    std::uint64_t matrix = 0;
    Orientation orientation = Orientation::Row;
    std::size_t index = 0;

    bool operator==(const PrepKey &) const = default;
};

struct PrepKeyHash {
    std::size_t operator()(const PrepKey &k) const noexcept {
        std::size_t h = std::hash<std::uint64_t>{}(k.matrix);
        h ^= std::hash<std::size_t>{}(k.index * 2 + (k.orientation == Orientation::Column ? 1 : 0)) +
             0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
        return h;
    }
};

using StateHandle = std::shared_ptr<const EncodedState>;

struct PrepStats {
    std::size_t hits = 0;
    std::size_t misses = 0;    ///< encode() calls performed
    std::size_t sentinels = 0; ///< zero vectors stored without encoding
};

/// Encoded rows of A and columns of B plus their norms, ready for dispatch.
struct PreparedOperands {
    std::vector<StateHandle> rows;
    std::vector<StateHandle> cols;
    std::vector<double> row_norms;
    std::vector<double> col_norms;
};

/**
 * Memoized state preparation keyed by (matrix id, orientation, index).
 *
 * Entries are addressed by position, not content: callers that mutate an
 * operand must clear() or use a fresh matrix id. Population is single-writer;
 * once populated, const lookups are safe from any number of threads.
 */
class PrepCache {
  public:
    static constexpr std::uint64_t kLeftOperand = 0;
    static constexpr std::uint64_t kRightOperand = 1;

    [[nodiscard]] StateHandle find(const PrepKey &key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : it->second;
    }

    /// Returns the cached state for `key`, encoding `values` on a miss. A known
    /// zero norm short-circuits to the sentinel without an encode call.
    StateHandle get_or_encode(const PrepKey &key, std::span<const double> values,
                              double known_norm = -1.0) {
        if (auto it = entries_.find(key); it != entries_.end()) {
            ++stats_.hits;
            return it->second;
        }
        StateHandle state;
        if (known_norm == 0.0) {
            ++stats_.sentinels;
            auto sentinel = std::make_shared<EncodedState>();
            sentinel->amplitudes.assign(values.size(), 0.0);
            state = std::move(sentinel);
        } else {
            ++stats_.misses;
            state = std::make_shared<const EncodedState>(encode(values));
        }
        entries_.emplace(key, state);
        return state;
    }

    /**
     * Stage-1 preparation for C = A B: norms of every row of A and column of B,
     * then one encode per non-zero vector. A cold cache on N x N inputs sees
     * exactly 2N misses; a warm cache sees 2N hits.
     */
    PreparedOperands prepare_all(const RealMatrix &a, const RealMatrix &b,
                                 std::uint64_t a_id = kLeftOperand,
                                 std::uint64_t b_id = kRightOperand) {
        if (a.cols() != b.rows()) {
            throw Error(ErrorKind::ShapeMismatch,
                        "inner dimensions differ: " + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()));
        }
        PreparedOperands out;
        out.row_norms = row_norms(a);
        out.col_norms = col_norms(b);
        out.rows.reserve(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            out.rows.push_back(
                get_or_encode({a_id, Orientation::Row, i}, a.row(i), out.row_norms[i]));
        }
        out.cols.reserve(b.cols());
        for (std::size_t j = 0; j < b.cols(); ++j) {
            const auto column = b.column(j);
            out.cols.push_back(
                get_or_encode({b_id, Orientation::Column, j}, column, out.col_norms[j]));
        }
        return out;
    }

    [[nodiscard]] const PrepStats &stats() const noexcept { return stats_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

    void clear() {
        entries_.clear();
        stats_ = {};
    }

  private:
    std::unordered_map<PrepKey, StateHandle, PrepKeyHash> entries_;
    PrepStats stats_;
};

} // namespace qstack
