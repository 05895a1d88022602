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
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qstack/matmul.hpp"
#include "qstack/report.hpp"

namespace qs = qstack;

namespace {

qs::RealMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    qs::CounterRng rng(seed);
    qs::RealMatrix m(r, c);
    for (double &v : m.values()) {
        v = 2.0 * rng.uniform() - 1.0;
    }
    return m;
}

double max_abs_diff(const qs::RealMatrix &a, const qs::RealMatrix &b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) {
        m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
    }
    return m;
}

qs::MatMulConfig exact_cfg() {
    qs::MatMulConfig cfg;
    cfg.exact = true;
    return cfg;
}

} // namespace

TEST(MatMul, IdentityExact) {
    const auto r = qs::matmul(qs::RealMatrix::identity(2), qs::RealMatrix::identity(2), exact_cfg());
    EXPECT_LE(max_abs_diff(r.c, qs::RealMatrix::identity(2)), 1e-10);
}

TEST(MatMul, ThreeFourFiveReconstruction) {
    const auto r = qs::matmul(qs::RealMatrix{{3, 4}}, qs::RealMatrix{{4}, {3}}, exact_cfg());
    EXPECT_NEAR(r.estimate_at(0, 0).z_hat, 0.96, 1e-15);
    EXPECT_NEAR(r.c(0, 0), 24.0, 1e-12);
    EXPECT_DOUBLE_EQ(r.row_norms[0], 5.0);
    EXPECT_DOUBLE_EQ(r.col_norms[0], 5.0);
}

TEST(MatMul, SampledWithinFourSigma) {
    const auto a = random_matrix(8, 8, 1);
    const auto b = random_matrix(8, 8, 2);
    qs::MatMulConfig cfg;
    cfg.shots = 65536;
    cfg.seed = 77;
    const auto r = qs::matmul(a, b, cfg);
    const auto c = qs::classical_matmul(a, b);
    int outside = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            const double bound = 4.0 * r.row_norms[i] * r.col_norms[j] / std::sqrt(65536.0);
            outside += std::abs(r.c(i, j) - c(i, j)) > bound ? 1 : 0;
        }
    }
    EXPECT_LE(outside, 1);
}

TEST(MatMul, ZeroRowSkipsJobs) {
    auto a = random_matrix(4, 4, 3);
    for (std::size_t k = 0; k < 4; ++k) {
        a(2, k) = 0.0;
    }
    qs::MatMulConfig cfg;
    cfg.shots = 1024;
    const auto r = qs::matmul(a, random_matrix(4, 4, 4), cfg);
    EXPECT_EQ(r.job_count, 12U);
    EXPECT_EQ(r.plan.job_count(), 12U);
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_EQ(r.c(2, j), 0.0);
        EXPECT_FALSE(r.dispatched[2 * 4 + j]);
    }
    EXPECT_EQ(r.prep.misses, 7U);
    EXPECT_EQ(r.prep.sentinels, 1U);
}

TEST(MatMul, Errors) {
    try {
        (void)qs::matmul(qs::RealMatrix(2, 3), qs::RealMatrix(2, 2), exact_cfg());
        FAIL();
    } catch (const qs::Error &e) {
        EXPECT_EQ(e.kind(), qs::ErrorKind::ShapeMismatch);
    }
    try {
        (void)qs::matmul(qs::RealMatrix{{1, NAN}}, qs::RealMatrix{{1}, {1}}, exact_cfg());
        FAIL();
    } catch (const qs::Error &e) {
        EXPECT_EQ(e.kind(), qs::ErrorKind::NonFiniteInput);
    }
    auto cfg = exact_cfg();
    cfg.shots = 0;
    EXPECT_THROW((void)qs::matmul(qs::RealMatrix::identity(2), qs::RealMatrix::identity(2), cfg), qs::Error);
}

TEST(MatMulProperty, ExactEqualsClassical) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        qs::CounterRng rng(qs::derive_seed(5, {t}));
        const std::size_t m = 1 + rng.below(64);
        const std::size_t k = 1 + rng.below(64);
        const std::size_t n = 1 + rng.below(64);
        const auto a = random_matrix(m, k, qs::derive_seed(6, {t}));
        const auto b = random_matrix(k, n, qs::derive_seed(7, {t}));
        const auto r = qs::matmul(a, b, exact_cfg());
        ASSERT_LE(max_abs_diff(r.c, qs::classical_matmul(a, b)), 1e-10);
    }
}

TEST(MatMulProperty, ScaleEquivariance) {
    const auto a = random_matrix(6, 5, 1);
    const auto b = random_matrix(5, 7, 2);
    for (double c : {-3.0, 0.5, 1000.0}) {
        qs::RealMatrix ca = a;
        for (double &v : ca.values()) {
            v *= c;
        }
        const auto lhs = qs::matmul(ca, b, exact_cfg()).c;
        const auto rhs = qs::matmul(a, b, exact_cfg()).c;
        for (std::size_t q = 0; q < lhs.values().size(); ++q) {
            EXPECT_NEAR(lhs.values()[q], c * rhs.values()[q], 1e-12 * std::abs(c));
        }
    }
}

TEST(MatMulProperty, ErrorShrinksWithShots) {
    const auto a = random_matrix(8, 8, 10);
    const auto b = random_matrix(8, 8, 11);
    const auto c = qs::classical_matmul(a, b);
    std::vector<double> err;
    for (int e = 10; e <= 19; ++e) {
        qs::MatMulConfig cfg;
        cfg.shots = std::int64_t{1} << e;
        cfg.seed = 2026;
        err.push_back(max_abs_diff(qs::matmul(a, b, cfg).c, c));
    }
    int non_increasing = 0;
    for (std::size_t k = 1; k < err.size(); ++k) {
        non_increasing += err[k] <= err[k - 1] ? 1 : 0;
    }
    EXPECT_EQ(err.size() - 1, 9U);
    EXPECT_GE(non_increasing, 7);
    EXPECT_LT(err.back(), err.front());
}

TEST(MatMulProperty, PrepCostLinear) {
    auto a = random_matrix(16, 16, 1);
    auto b = random_matrix(16, 16, 2);
    for (std::size_t k = 0; k < 16; ++k) {
        a(3, k) = 0.0;
        a(9, k) = 0.0;
        b(k, 0) = 0.0;
    }
    const auto r = qs::matmul(a, b, exact_cfg());
    EXPECT_EQ(r.prep.misses, 14U + 15U);
    EXPECT_LE(r.prep.misses, 32U);
    EXPECT_EQ(r.job_count, 14U * 15U);
}

TEST(MatMulProperty, PatternAndThreadIndependence) {
    const auto a = random_matrix(8, 8, 21);
    const auto b = random_matrix(8, 8, 22);
    qs::MatMulConfig cfg;
    cfg.shots = 4096;
    cfg.seed = 9;
    const auto ref = qs::matmul(a, b, cfg).c;
    for (auto pat : {qs::StackingPattern::Horizontal, qs::StackingPattern::Balanced,
                     qs::StackingPattern::Vertical, qs::StackingPattern::Batch}) {
        for (std::size_t threads : {1U, 3U}) {
            cfg.pattern = pat;
            cfg.threads = threads;
            cfg.budget = 30;
            EXPECT_EQ(qs::matmul(a, b, cfg).c, ref);
        }
    }
}

TEST(MatMul, WarmCacheHits) {
    const auto a = random_matrix(4, 4, 1);
    const auto b = random_matrix(4, 4, 2);
    qs::PrepCache cache;
    const auto cold = qs::matmul(a, b, exact_cfg(), cache);
    const auto warm = qs::matmul(a, b, exact_cfg(), cache);
    EXPECT_EQ(cold.prep.misses, 8U);
    EXPECT_EQ(warm.prep.hits, 8U);
    EXPECT_EQ(warm.prep.misses, 0U);
    EXPECT_EQ(cold.c, warm.c);
}

TEST(MatVec, Examples) {
    const auto y = qs::matvec(qs::RealMatrix::identity(3), qs::RealVector{1, 2, 3}, exact_cfg());
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(y[i], static_cast<double>(i + 1), 1e-12);
    }
    const auto z = qs::matmul(random_matrix(3, 3, 1), qs::RealMatrix(3, 1), exact_cfg());
    EXPECT_EQ(z.job_count, 0U);
    for (double v : z.c.values()) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(MatVec, SampledWithinFourSigma) {
    const auto a = random_matrix(16, 16, 31);
    qs::CounterRng rng(32);
    qs::RealVector x(16);
    for (std::size_t i = 0; i < 16; ++i) {
        x[i] = rng.normal();
    }
    qs::MatMulConfig cfg;
    cfg.shots = 16384;
    cfg.seed = 4;
    const auto y = qs::matvec(a, x, cfg);
    const auto norms = qs::row_norms(a);
    const double xn = qs::euclidean_norm(x.values());
    for (std::size_t i = 0; i < 16; ++i) {
        double dot = 0.0;
        for (std::size_t k = 0; k < 16; ++k) {
            dot += a(i, k) * x[k];
        }
        EXPECT_LE(std::abs(y[i] - dot), 4.0 * norms[i] * xn / std::sqrt(16384.0));
    }
    EXPECT_THROW((void)qs::matvec(a, qs::RealVector(3), cfg), qs::Error);
}

TEST(ErrorBudget, Examples) {
    EXPECT_LE(qs::error_budget(1.0, 10000), 0.01);
    EXPECT_DOUBLE_EQ(qs::error_budget(1.0, 10000), 0.01);
    EXPECT_EQ(qs::error_budget(0.0, 10), 0.0);
    EXPECT_NEAR(qs::error_budget(25.0, 16384, 0.96), 0.0546875, 1e-12);
    EXPECT_LE(qs::error_budget(3.0, 100, 0.5), 3.0 / 10.0);
    EXPECT_THROW((void)qs::error_budget(1.0, 0), qs::Error);
}

TEST(MatMulReport, CsvColumns) {
    qs::MatMulConfig cfg;
    cfg.shots = 256;
    const auto r = qs::matmul(qs::RealMatrix{{3, 4}}, qs::RealMatrix{{4}, {3}}, cfg);
    std::ostringstream os;
    qs::report::write_matmul_csv(os, r);
    const auto text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "i,j,zHat,C_ij,stderr");
    const auto j = qs::report::matmul_summary(r, 2, cfg, qs::classical_matmul(qs::RealMatrix{{3, 4}}, qs::RealMatrix{{4}, {3}}));
    EXPECT_EQ(j["jobs"], 1);
    EXPECT_LE(j["max_abs_error"].get<double>(), 4.0 * 25.0 / 16.0);
}
