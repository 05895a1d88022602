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
 * Small dense statevector simulator used to verify the analytic Hadamard path
 * gate by gate. Qubit q corresponds to bit q of the basis index.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qstack/error.hpp"
#include "qstack/hadamard.hpp"
#include "qstack/vectorspace.hpp"

namespace qstack {

/// Largest data register accepted by circuit_verify (1024 amplitudes).
inline constexpr std::size_t kMaxVerifyQubits = 10;

/// Dense square matrix, row-major.
struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<double> data;

    double operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
    double &operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
};

class Statevector {
  public:
    using Complex = std::complex<double>;

    explicit Statevector(std::size_t num_qubits)
        : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits, Complex{0.0, 0.0}) {
        amps_[0] = 1.0;
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] const std::vector<Complex> &amplitudes() const noexcept { return amps_; }

    /// Load real amplitudes into the low `values.size()` basis states of the
    /// register spanned by qubits [0, log2(values.size())), other qubits |0>.
    void load_register(std::span<const double> values) {
        std::fill(amps_.begin(), amps_.end(), Complex{0.0, 0.0});
        for (std::size_t i = 0; i < values.size(); ++i) {
            amps_[i] = values[i];
        }
    }

    void apply_hadamard(std::size_t qubit) {
        const std::size_t stride = std::size_t{1} << qubit;
        const double h = std::numbers::sqrt2 / 2.0;
        for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Complex a = amps_[i];
                const Complex b = amps_[i + stride];
                amps_[i] = h * (a + b);
                amps_[i + stride] = h * (a - b);
            }
        }
    }

    /// Apply `u` to qubits [0, log2(u.dim)) on the branch where `control` is |1>.
    void apply_controlled(std::size_t control, const DenseMatrix &u) {
        const std::size_t block = u.dim;
        const std::size_t cbit = std::size_t{1} << control;
        std::vector<Complex> in(block);
        for (std::size_t base = 0; base < amps_.size(); base += block) {
            if ((base & cbit) == 0) {
                continue;
            }
            for (std::size_t i = 0; i < block; ++i) {
                in[i] = amps_[base + i];
            }
            for (std::size_t r = 0; r < block; ++r) {
                Complex acc{0.0, 0.0};
                for (std::size_t c = 0; c < block; ++c) {
                    acc += u(r, c) * in[c];
                }
                amps_[base + r] = acc;
            }
        }
    }

    /// Probability mass on `qubit` = |0>.
    [[nodiscard]] double probability_zero(std::size_t qubit) const {
        const std::size_t bit = std::size_t{1} << qubit;
        double p = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if ((i & bit) == 0) {
                p += std::norm(amps_[i]);
            }
        }
        return p;
    }

  private:
    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

/// Householder reflection exchanging the unit vector v with |0>.
inline DenseMatrix reflection_to_zero(std::span<const double> v) {
    const std::size_t n = v.size();
    DenseMatrix h{n, std::vector<double>(n * n, 0.0)};
    std::vector<double> u(v.begin(), v.end());
    u[0] -= 1.0;
    double norm2 = 0.0;
    for (double x : u) {
        norm2 += x * x;
    }
    for (std::size_t r = 0; r < n; ++r) {
        h(r, r) = 1.0;
    }
    if (norm2 < 1e-30) {
        return h;
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            h(r, c) -= 2.0 * u[r] * u[c] / norm2;
        }
    }
    return h;
}

inline DenseMatrix multiply(const DenseMatrix &a, const DenseMatrix &b) {
    const std::size_t n = a.dim;
    DenseMatrix out{n, std::vector<double>(n * n, 0.0)};
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const double ark = a(r, k);
            if (ark == 0.0) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

/**
 * An orthogonal W with W|psi> = |phi>: reflect psi onto |0>, then |0> onto
 * phi. Any such unitary gives the same ancilla statistics, since the test
 * only sees <psi|W|psi> = <psi|phi>.
 */
inline DenseMatrix transition_unitary(const EncodedState &psi, const EncodedState &phi) {
    return multiply(reflection_to_zero(phi.amplitudes), reflection_to_zero(psi.amplitudes));
}

/**
 * Run the full (n+1)-qubit Hadamard test and return the exact probability of
 * the ancilla reading |0>. Data register on qubits [0, n), ancilla on qubit n.
 */
inline double circuit_verify(const EncodedState &psi, const EncodedState &phi) {
    if (psi.dim() != phi.dim()) {
        throw Error(ErrorKind::DimMismatch, "state dims differ");
    }
    const std::size_t dim = psi.dim();
    if (!std::has_single_bit(dim)) {
        throw Error(ErrorKind::DimNotPowerOfTwo,
                    "circuit verification needs dim = 2^n, got " + std::to_string(dim));
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(dim));
    if (n > kMaxVerifyQubits) {
        throw Error(ErrorKind::DimTooLarge, std::to_string(n) + " data qubits exceeds " +
                                                std::to_string(kMaxVerifyQubits));
    }
    if (psi.is_zero() || phi.is_zero()) {
        throw Error(ErrorKind::ZeroState, "cannot prepare the zero-vector sentinel");
    }

    const auto w = transition_unitary(psi, phi);
    Statevector sv(n + 1);
    sv.load_register(psi.amplitudes);
    sv.apply_hadamard(n);
    sv.apply_controlled(n, w);
    sv.apply_hadamard(n);
    return sv.probability_zero(n);
}

} // namespace qstack
