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
#include <filesystem>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>

#include "qstack/matrix_io.hpp"
#include "qstack/rng.hpp"
#include "qstack/vectorspace.hpp"

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

double sum_squares(const std::vector<double> &a) {
    double s = 0.0;
    for (double x : a) {
        s += x * x;
    }
    return s;
}

} // namespace

TEST(Encode, UnitBasisVector) {
    const auto s = qs::encode(qs::RealVector{1, 0, 0, 0});
    EXPECT_EQ(s.amplitudes, (std::vector<double>{1, 0, 0, 0}));
    EXPECT_DOUBLE_EQ(s.source_norm, 1.0);
}

TEST(Encode, ThreeFourFive) {
    const auto s = qs::encode(qs::RealVector{3, 4});
    EXPECT_NEAR(s.amplitudes[0], 0.6, 1e-15);
    EXPECT_NEAR(s.amplitudes[1], 0.8, 1e-15);
    EXPECT_DOUBLE_EQ(s.source_norm, 5.0);
}

TEST(Encode, SignIsPreserved) {
    const auto s = qs::encode(qs::RealVector{1, -1});
    EXPECT_NEAR(s.amplitudes[0], 0.70710678118654752, 1e-15);
    EXPECT_NEAR(s.amplitudes[1], -0.70710678118654752, 1e-15);
    EXPECT_NEAR(s.source_norm, std::sqrt(2.0), 1e-15);
}

TEST(Encode, ZeroVectorIsSentinel) {
    const auto s = qs::encode(qs::RealVector{0, 0});
    EXPECT_TRUE(s.is_zero());
    EXPECT_EQ(s.source_norm, 0.0);
    EXPECT_EQ(s.amplitudes, (std::vector<double>{0, 0}));
}

TEST(Encode, RejectsNonFinite) {
    try {
        (void)qs::encode(qs::RealVector{1.0, NAN});
        FAIL();
    } catch (const qs::Error &e) {
        EXPECT_EQ(e.kind(), qs::ErrorKind::NonFiniteInput);
    }
    EXPECT_THROW((void)qs::encode(qs::RealVector{INFINITY}), qs::Error);
}

TEST(EncodeProperty, NormalizedAndScaleInvariant) {
    for (std::uint64_t t = 0; t < 200; ++t) {
        qs::CounterRng rng(qs::derive_seed(7, {t}));
        const std::size_t n = 1 + rng.below(64);
        std::vector<double> v(n);
        for (double &x : v) {
            x = rng.normal() * 10.0;
        }
        const auto s = qs::encode(v);
        ASSERT_NEAR(sum_squares(s.amplitudes), 1.0, 1e-12);

        const double c = 0.01 + 100.0 * rng.uniform();
        std::vector<double> cv(v);
        std::vector<double> nv(v);
        for (std::size_t i = 0; i < n; ++i) {
            cv[i] *= c;
            nv[i] = -v[i];
        }
        const auto sc = qs::encode(cv);
        const auto sn = qs::encode(nv);
        EXPECT_NEAR(sc.source_norm, c * s.source_norm, 1e-12 * c * s.source_norm);
        EXPECT_EQ(sn.source_norm, s.source_norm);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(sc.amplitudes[i], s.amplitudes[i], 1e-12);
            EXPECT_EQ(sn.amplitudes[i], -s.amplitudes[i]);
        }
    }
}

TEST(Encode, PaddingKeepsNormalization) {
    const auto s = qs::pad_to_power_of_two(qs::encode(qs::RealVector{1, 2, 3}));
    EXPECT_EQ(s.dim(), 4U);
    EXPECT_EQ(s.amplitudes[3], 0.0);
    EXPECT_NEAR(sum_squares(s.amplitudes), 1.0, 1e-12);
}

TEST(Norms, IdentityAndZeroRow) {
    EXPECT_EQ(qs::row_norms(qs::RealMatrix::identity(2)), (std::vector<double>{1, 1}));
    EXPECT_EQ(qs::row_norms(qs::RealMatrix{{3, 4}, {0, 0}}), (std::vector<double>{5, 0}));
    EXPECT_EQ(qs::col_norms(qs::RealMatrix{{3, 0}, {4, 0}}), (std::vector<double>{5, 0}));
}

TEST(Norms, RandomMatchesDirectSummation) {
    const auto m = random_matrix(8, 8, 11);
    const auto rn = qs::row_norms(m);
    const auto cn = qs::col_norms(m);
    for (std::size_t i = 0; i < 8; ++i) {
        double r = 0.0;
        double c = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
            r += m(i, k) * m(i, k);
            c += m(k, i) * m(k, i);
        }
        EXPECT_NEAR(rn[i], std::sqrt(r), 1e-12);
        EXPECT_NEAR(cn[i], std::sqrt(c), 1e-12);
    }
}

TEST(Norms, RejectNonFinite) {
    qs::RealMatrix m{{1, 2}, {3, NAN}};
    EXPECT_THROW((void)qs::row_norms(m), qs::Error);
    EXPECT_THROW((void)qs::col_norms(m), qs::Error);
}

TEST(Matrix, ShapeChecks) {
    EXPECT_THROW(qs::RealMatrix(2, 2, std::vector<double>{1, 2, 3}), qs::Error);
    EXPECT_THROW((qs::RealMatrix{{1, 2}, {3}}), qs::Error);
}

TEST(PrepCache, ColdThenWarm) {
    const auto a = random_matrix(4, 4, 1);
    const auto b = random_matrix(4, 4, 2);
    qs::PrepCache cache;
    (void)cache.prepare_all(a, b);
    EXPECT_EQ(cache.stats().misses, 8U);
    EXPECT_EQ(cache.stats().hits, 0U);
    EXPECT_EQ(cache.size(), 8U);
    (void)cache.prepare_all(a, b);
    EXPECT_EQ(cache.stats().misses, 8U);
    EXPECT_EQ(cache.stats().hits, 8U);
}

TEST(PrepCache, HitIsBitIdenticalToFreshEncode) {
    const auto a = random_matrix(5, 3, 3);
    const auto b = random_matrix(3, 6, 4);
    qs::PrepCache cache;
    (void)cache.prepare_all(a, b);
    const auto warm = cache.prepare_all(a, b);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        EXPECT_EQ(*warm.rows[i], qs::encode(a.row(i)));
    }
    for (std::size_t j = 0; j < b.cols(); ++j) {
        EXPECT_EQ(*warm.cols[j], qs::encode(b.column(j)));
    }
}

TEST(PrepCache, DuplicateRowsGetDistinctEntries) {
    qs::RealMatrix a{{1, 2}, {1, 2}};
    qs::PrepCache cache;
    const auto p = cache.prepare_all(a, qs::RealMatrix::identity(2));
    EXPECT_NE(p.rows[0].get(), p.rows[1].get());
    EXPECT_EQ(p.rows[0]->amplitudes, p.rows[1]->amplitudes);
    EXPECT_EQ(cache.stats().misses, 4U);
}

TEST(PrepCache, ZeroVectorsAreSentinelsNotEncodes) {
    qs::RealMatrix a{{0, 0}, {1, 2}};
    qs::RealMatrix b{{1, 0}, {2, 0}};
    qs::PrepCache cache;
    const auto p = cache.prepare_all(a, b);
    EXPECT_EQ(cache.stats().misses, 2U);
    EXPECT_EQ(cache.stats().sentinels, 2U);
    EXPECT_TRUE(p.rows[0]->is_zero());
    EXPECT_TRUE(p.cols[1]->is_zero());
}

TEST(PrepCache, ShapeMismatch) {
    qs::PrepCache cache;
    try {
        (void)cache.prepare_all(qs::RealMatrix(2, 3), qs::RealMatrix(2, 2));
        FAIL();
    } catch (const qs::Error &e) {
        EXPECT_EQ(e.kind(), qs::ErrorKind::ShapeMismatch);
    }
}

TEST(MatrixIo, CsvRoundTrip) {
    const auto m = random_matrix(3, 5, 9);
    const auto path = std::filesystem::temp_directory_path() / "qstack_io_test.csv";
    qs::io::write_matrix_csv(path, m);
    EXPECT_EQ(qs::io::read_matrix(path), m);
    std::filesystem::remove(path);
}

TEST(MatrixIo, BinaryRoundTripAndLayout) {
    const qs::RealMatrix m{{1.5, -2.0, 3.25}, {0.0, 1e-300, -7.0}};
    const auto path = std::filesystem::temp_directory_path() / "qstack_io_test.bin";
    qs::io::write_matrix_binary(path, m);
    const auto bytes = qs::io::read_bytes(path);
    ASSERT_EQ(bytes.size(), 8U + 6U * 8U);
    EXPECT_EQ(bytes[0], 2U);
    EXPECT_EQ(bytes[1], 0U);
    EXPECT_EQ(bytes[4], 3U);
    EXPECT_EQ(qs::io::read_matrix(path), m);
    std::filesystem::remove(path);
}

TEST(MatrixIo, BinaryTruncated) {
    const std::vector<unsigned char> bytes{2, 0, 0, 0, 2, 0, 0, 0, 1, 2, 3};
    try {
        (void)qs::io::decode_matrix_binary(bytes);
        FAIL();
    } catch (const qs::Error &e) {
        EXPECT_EQ(e.kind(), qs::ErrorKind::TruncatedFile);
    }
}

TEST(MatrixIo, CsvErrors) {
    EXPECT_THROW((void)qs::io::parse_matrix_csv("1,2\n3\n"), qs::Error);
    EXPECT_THROW((void)qs::io::parse_matrix_csv("1,x\n"), qs::Error);
    EXPECT_THROW((void)qs::io::parse_matrix_csv("\n\n"), qs::Error);
    const auto m = qs::io::parse_matrix_csv(" 1, 2 \r\n3,4\n\n");
    EXPECT_EQ(m, (qs::RealMatrix{{1, 2}, {3, 4}}));
}
