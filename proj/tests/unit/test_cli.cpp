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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#include "qstack/matmul.hpp"
#include "qstack/matrix_io.hpp"

namespace fs = std::filesystem;
namespace qs = qstack;

namespace {

const std::string kCli{QSTACK_CLI};
const fs::path kData{QSTACK_DATA_DIR};

struct CliRun {
    int code = -1;
    std::string out;
};

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("qstack_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    CliRun run(const std::string &args) const {
        const auto log = dir_ / "stdout.txt";
        const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
        const int status = std::system(cmd.c_str());
        CliRun r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(log);
        return r;
    }

    static std::string slurp(const fs::path &p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

qs::RealMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    qs::CounterRng rng(seed);
    qs::RealMatrix m(r, c);
    for (double &v : m.values()) {
        v = rng.normal();
    }
    return m;
}

} // namespace

TEST_F(CliTest, PlanVerticalBudget48) {
    const auto r = run("plan --n 4 --dim 4 --pattern vertical --budget 48");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["cycle_count"], 1);
    EXPECT_EQ(j["width"], 48);
    EXPECT_EQ(j["pattern"], "vertical");
    EXPECT_EQ(j["cycles"][0].size(), 16U);
    EXPECT_FALSE(j["degraded"].get<bool>());
}

TEST_F(CliTest, PlanBudgetTooSmallIsUsageError) {
    EXPECT_EQ(run("plan --n 4 --dim 4 --budget 2").code, 2);
}

TEST_F(CliTest, ExactMatMulEqualsClassical) {
    const auto a = random_matrix(5, 7, 1);
    const auto b = random_matrix(7, 3, 2);
    qs::io::write_matrix_csv(dir_ / "a.csv", a);
    qs::io::write_matrix_binary(dir_ / "b.bin", b);
    const auto r = run("matmul --a " + (dir_ / "a.csv").string() + " --b " + (dir_ / "b.bin").string() +
                       " --exact --out " + (dir_ / "o").string());
    ASSERT_EQ(r.code, 0) << r.out;
    const auto want = qs::classical_matmul(a, b);
    std::istringstream csv(slurp(dir_ / "o" / "matmul.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "i,j,zHat,C_ij,stderr");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        std::size_t i = 0;
        std::size_t j = 0;
        double z = 0;
        double cij = 0;
        double se = 0;
        ASSERT_EQ(std::sscanf(line.c_str(), "%zu,%zu,%lf,%lf,%lf", &i, &j, &z, &cij, &se), 5);
        EXPECT_NEAR(cij, want(i, j), 1e-10);
        EXPECT_EQ(se, 0.0);
        ++rows;
    }
    EXPECT_EQ(rows, 15U);
    const auto summary = nlohmann::json::parse(slurp(dir_ / "o" / "matmul_summary.json"));
    EXPECT_LE(summary["max_abs_error"].get<double>(), 1e-10);
    EXPECT_EQ(summary["rows"], 5);
    EXPECT_EQ(summary["inner"], 7);
}

TEST_F(CliTest, SampledMatMulIsByteIdentical) {
    qs::io::write_matrix_csv(dir_ / "a.csv", random_matrix(4, 4, 3));
    qs::io::write_matrix_csv(dir_ / "b.csv", random_matrix(4, 4, 4));
    const std::string base = "matmul --a " + (dir_ / "a.csv").string() + " --b " + (dir_ / "b.csv").string() +
                             " --shots 4096 --seed 17 --out ";
    ASSERT_EQ(run(base + (dir_ / "x").string()).code, 0);
    ASSERT_EQ(run(base + (dir_ / "y").string() + " --pattern horizontal --threads 3").code, 0);
    const auto x = slurp(dir_ / "x" / "matmul.csv");
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, slurp(dir_ / "y" / "matmul.csv"));
}

TEST_F(CliTest, SeedFromEnvironment) {
    qs::io::write_matrix_csv(dir_ / "a.csv", random_matrix(3, 3, 5));
    const std::string args = "matmul --a " + (dir_ / "a.csv").string() + " --b " + (dir_ / "a.csv").string() +
                             " --shots 512 --out ";
    ASSERT_EQ(run(args + (dir_ / "flag").string() + " --seed 9").code, 0);
    ASSERT_EQ(::setenv("AQ_SEED", "9", 1), 0);
    const auto r = run(args + (dir_ / "env").string());
    ::unsetenv("AQ_SEED");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(slurp(dir_ / "flag" / "matmul.csv"), slurp(dir_ / "env" / "matmul.csv"));
}

TEST_F(CliTest, EntropySweepDeterministic) {
    const std::string base = "entropy-sweep --family uniform,exponential --n 8 --max-dim 16 --levels 8 "
                             "--repetitions 100 --shots 1024 --seed 3 --out ";
    ASSERT_EQ(run(base + (dir_ / "s1").string()).code, 0);
    ASSERT_EQ(run(base + (dir_ / "s2").string() + " --threads 4").code, 0);
    const auto csv = slurp(dir_ / "s1" / "sweep.csv");
    EXPECT_EQ(csv, slurp(dir_ / "s2" / "sweep.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "family,n,H_nats,H_bits,purity,empirical_variance,dividend_bound,shots,repetitions");
    const auto j = nlohmann::json::parse(slurp(dir_ / "s1" / "correlation.json"));
    EXPECT_EQ(j["families"]["uniform"]["sample_count"], 8);
    EXPECT_EQ(j["crossings"].size(), 1U);
}

TEST_F(CliTest, TrainWritesReportAndMetrics) {
    {
        std::ofstream cfg(dir_ / "run.cfg");
        cfg << "shape=4,4,3\nepochs=3\ndataset=iris\niris=" << (kData / "iris.data").string() << '\n';
    }
    const std::string base = "train --config " + (dir_ / "run.cfg").string() + " --mode quantum --shots 512 --out ";
    ASSERT_EQ(run(base + (dir_ / "t1").string()).code, 0);
    ASSERT_EQ(run(base + (dir_ / "t2").string()).code, 0);
    const auto csv = slurp(dir_ / "t1" / "metrics.csv");
    EXPECT_EQ(csv, slurp(dir_ / "t2" / "metrics.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,train_loss,test_accuracy");
    const auto j = nlohmann::json::parse(slurp(dir_ / "t1" / "train_report.json"));
    EXPECT_EQ(j["mode"], "quantum");
    EXPECT_EQ(j["train_loss"].size(), 3U);
}

TEST_F(CliTest, VerifyPasses) {
    const auto r = run("verify");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("[FAIL]"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("plan --pattern diagonal").code, 2);
    EXPECT_EQ(run("matmul --a " + (dir_ / "missing.csv").string() + " --b x.csv").code, 3);
    {
        std::ofstream bad(dir_ / "bad.csv");
        bad << "1,2\n3,oops\n";
    }
    EXPECT_EQ(run("matmul --a " + (dir_ / "bad.csv").string() + " --b " + (dir_ / "bad.csv").string()).code, 3);
    {
        std::ofstream cfg(dir_ / "bad.cfg");
        cfg << "colour=blue\n";
    }
    EXPECT_EQ(run("train --config " + (dir_ / "bad.cfg").string()).code, 3);
    ASSERT_EQ(::setenv("AQ_SEED", "abc", 1), 0);
    EXPECT_EQ(run("verify").code, 2);
    ::unsetenv("AQ_SEED");
}
