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
// Entropy of a few sample states and the shot-noise variance of their
// overlap with the equal superposition.
#include <cstdio>

#include "qstack/qstack.hpp"

int main() {
    namespace qs = qstack;
    qs::SweepConfig cfg;
    cfg.levels = qs::uniform_levels(8);
    cfg.shots = 4096;
    cfg.repetitions = 300;
    cfg.seed = 11;
    const auto uniform = qs::variance_sweep(cfg);

    cfg.levels = qs::geometric_levels(qs::StateFamily::exponential(), 2, 16, 8);
    const auto expo = qs::variance_sweep(cfg);

    std::printf("%-12s %3s %8s %8s %12s %12s\n", "family", "n", "H bits", "purity", "variance", "bound");
    for (const auto *sweep : {&uniform, &expo}) {
        for (const auto &r : *sweep) {
            std::printf("%-12s %3zu %8.3f %8.4f %12.4e %12.4e\n", r.family.c_str(), r.n, r.entropy_bits,
                        r.purity, r.empirical_variance, r.dividend_bound);
        }
    }
    const auto c = qs::entropy_variance_correlation(uniform);
    std::printf("\nuniform: r = %.4f, p = %.3g\n", c.r, c.p_value);
    try {
        const auto x = qs::crossing_point(uniform, expo);
        std::printf("uniform/exponential crossing at %.3f bits\n", x.bits);
    } catch (const qs::Error &e) {
        std::printf("no crossing: %s\n", e.what());
    }
    return 0;
}
