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
// Multiply two random 6x6 matrices through sampled Hadamard tests and
// compare each stacking pattern's schedule against the classical product.
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qstack/qstack.hpp"

int main() {
    namespace qs = qstack;
    qs::CounterRng rng(2026);
    qs::RealMatrix a(6, 6);
    qs::RealMatrix b(6, 6);
    for (double &v : a.values()) {
        v = rng.normal();
    }
    for (double &v : b.values()) {
        v = rng.normal();
    }
    const auto want = qs::classical_matmul(a, b);

    std::printf("%-10s %6s %6s %9s %12s\n", "pattern", "cycles", "width", "degraded", "max |err|");
    for (auto p : {qs::StackingPattern::Horizontal, qs::StackingPattern::Balanced,
                   qs::StackingPattern::Vertical, qs::StackingPattern::Batch}) {
        qs::MatMulConfig cfg;
        cfg.pattern = p;
        cfg.seed = 7;
        cfg.budget = 40;
        const auto r = qs::matmul(a, b, cfg);
        const auto e = qs::report::compare(r.c, want);
        std::printf("%-10s %6zu %6zu %9s %12.5f\n", std::string(qs::to_string(p)).c_str(),
                    r.plan.cycle_count(), r.plan.width, r.plan.degraded ? "yes" : "no", e.max_abs);
    }

    // Error shrinks like 1/sqrt(S).
    std::printf("\n%8s %12s %12s\n", "shots", "max |err|", "4 sigma");
    const auto rn = qs::row_norms(a);
    const auto cn = qs::col_norms(b);
    const double norm_max = *std::max_element(rn.begin(), rn.end()) * *std::max_element(cn.begin(), cn.end());
    for (std::int64_t s : {256, 4096, 65536}) {
        qs::MatMulConfig cfg;
        cfg.shots = s;
        const auto r = qs::matmul(a, b, cfg);
        std::printf("%8lld %12.5f %12.5f\n", static_cast<long long>(s), qs::report::compare(r.c, want).max_abs,
                    4.0 * qs::error_budget(norm_max, s));
    }
    return 0;
}
