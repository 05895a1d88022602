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

#include "qstack/stats.hpp"

namespace st = qstack::stats;
using qstack::Error;
using qstack::ErrorKind;

namespace {

// Reference values computed once with scipy.stats / scipy.special.
const std::vector<double> kFixtureX{0.0,      1.341471, 1.909297, 1.64112,  1.243198, 1.541076, 2.720585,
                                    4.156987, 4.989358, 4.912118, 4.455979, 4.50001,  5.463427, 6.920167,
                                    7.990607, 8.150288, 7.712097, 7.538603, 8.249013, 9.649877};
const std::vector<double> kFixtureY{1.0,       0.714842,  0.469967, -0.654846, -0.342222, -1.186457, 0.409739,
                                    -0.163488, 1.975566,  0.549859, 2.253902,  -0.396626, 1.280711,  -1.597722,
                                    1.169574,  -1.225537, 2.603005, -0.06393,  3.699435,  -0.207251};

} // namespace

TEST(Pearson, FrozenFixture) {
    const auto c = st::pearson(kFixtureX, kFixtureY);
    EXPECT_NEAR(c.r, 0.18951554273187565, 1e-6);
    EXPECT_NEAR(c.p_value, 0.42356095732140281, 1e-6);
    EXPECT_EQ(c.sample_count, 20U);
}

TEST(Pearson, StrongCorrelationFixture) {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 1; i <= 20; ++i) {
        x.push_back(i);
        y.push_back(i + (i % 2 == 0 ? 3.0 : -3.0));
    }
    const auto c = st::pearson(x, y);
    EXPECT_NEAR(c.r, 0.89587969265477385, 1e-9);
    EXPECT_NEAR(c.p_value, 9.3097931908847445e-08, 1e-12);
}

TEST(Pearson, ExactLinearity) {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(2 * v + 1);
    }
    const auto c = st::pearson(x, y);
    EXPECT_DOUBLE_EQ(c.r, 1.0);
    EXPECT_GT(c.p_value, 0.0);
    EXPECT_LE(c.p_value, 1e-300);
}

TEST(Pearson, Errors) {
    try {
        (void)st::pearson(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConstantSeries);
    }
    try {
        (void)st::pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooFewPoints);
    }
}

TEST(Pearson, PValueInRange) {
    std::vector<double> x{1, 2, 3, 4, 5, 6};
    std::vector<double> y{2, 1, 2, 1, 2, 1.5};
    const auto c = st::pearson(x, y);
    EXPECT_GT(c.p_value, 0.0);
    EXPECT_LE(c.p_value, 1.0);
    EXPECT_LE(std::abs(c.r), 1.0);
}

TEST(SpecialFunctions, IncompleteBeta) {
    EXPECT_NEAR(st::incomplete_beta(2, 3, 0.4), 0.52479999999999993, 1e-13);
    EXPECT_NEAR(st::incomplete_beta(0.5, 0.5, 0.9), 0.79516723530086653, 1e-13);
    EXPECT_NEAR(st::incomplete_beta(9, 0.5, 0.3), 4.2748486179417878e-06, 1e-17);
    EXPECT_NEAR(st::incomplete_beta(50, 0.5, 0.99), 0.31730439787419729, 1e-12);
    EXPECT_NEAR(st::student_t_two_tailed(2.1, 18), 0.050090405709568346, 1e-12);
}

TEST(SpecialFunctions, IncompleteGamma) {
    EXPECT_NEAR(st::incomplete_gamma_p(0.5, 0.2), 0.47291074313446196, 1e-13);
    EXPECT_NEAR(st::incomplete_gamma_p(3, 2.5), 0.45618688411667035, 1e-13);
    EXPECT_NEAR(st::incomplete_gamma_p(10, 15), 0.9301463393005901, 1e-13);
    EXPECT_NEAR(st::incomplete_gamma_p(249.5, 260), 0.75069318864068624, 1e-11);
}

TEST(SpecialFunctions, ChiSquareQuantile) {
    EXPECT_NEAR(st::chi_square_quantile(0.999, 499), 602.34825679312678, 1e-7);
    EXPECT_NEAR(st::chi_square_quantile(0.999, 99), 148.23035916510173, 1e-8);
    EXPECT_NEAR(st::chi_square_quantile(0.999, 37.5), 70.025263988204586, 1e-8);
    EXPECT_NEAR(st::chi_square_quantile(0.95, 1), 3.841458820694124, 1e-9);
    EXPECT_NEAR(st::chi_square_quantile(0.5, 2), 1.386294361119891, 1e-9);
    EXPECT_NEAR(st::chi_square_quantile(0.999, 1999), 2200.1073326859764, 1e-6);
}

TEST(Moments, MeanAndVariance) {
    const std::vector<double> x{2, 4, 4, 4, 5, 5, 7, 9};
    EXPECT_DOUBLE_EQ(st::mean(x), 5.0);
    EXPECT_DOUBLE_EQ(st::sample_variance(x), 32.0 / 7.0);
    EXPECT_THROW((void)st::sample_variance(std::vector<double>{1}), Error);
}

TEST(LinearFit, Line) {
    const auto f = st::linear_fit(std::vector<double>{0, 1, 2, 3}, std::vector<double>{1, 3, 5, 7});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
}

TEST(Isotonic, PoolsViolators) {
    const std::vector<double> y{1, 3, 2, 4, 3.5, 5};
    const auto up = st::isotonic_regression(y, true);
    EXPECT_EQ(up, (std::vector<double>{1, 2.5, 2.5, 3.75, 3.75, 5}));
    const auto down = st::isotonic_regression(std::vector<double>{5, 3, 4, 1}, false);
    EXPECT_EQ(down, (std::vector<double>{5, 3.5, 3.5, 1}));
}

TEST(Isotonic, MonotoneAndMeanPreserving) {
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) {
        y.push_back(std::sin(i * 0.7) + 0.05 * i);
    }
    const auto fit = st::isotonic_regression(y, true);
    for (std::size_t i = 1; i < fit.size(); ++i) {
        EXPECT_LE(fit[i - 1], fit[i] + 1e-15);
    }
    EXPECT_NEAR(st::mean(fit), st::mean(y), 1e-12);
}
