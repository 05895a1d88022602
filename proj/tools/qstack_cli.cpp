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
// qstack command-line runner: matmul, plan, entropy-sweep, train, verify.
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qstack/qstack.hpp"

namespace fs = std::filesystem;
namespace qs = qstack;
using qs::report::Json;

namespace {

constexpr int kUsage = 2;
constexpr int kData = 3;
constexpr int kVerify = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> shots;
    std::string pattern = "batch";
    std::optional<std::size_t> budget;
    double epsilon = 0.01;
    bool exact = false;
    std::string out = ".";
    std::size_t threads = 1;

    [[nodiscard]] std::uint64_t seed_or_env() const {
        if (seed) {
            return *seed;
        }
        if (const char *env = std::getenv("AQ_SEED"); env != nullptr && *env != '\0') {
            try {
                std::size_t used = 0;
                const auto v = std::stoull(env, &used);
                if (used == std::string(env).size()) {
                    return v;
                }
            } catch (const std::exception &) {
            }
            throw UsageError("AQ_SEED is not an unsigned integer");
        }
        return 0;
    }

    [[nodiscard]] qs::StackingPattern stacking() const { return *qs::parse_pattern(pattern); }

    [[nodiscard]] std::size_t budget_or_unlimited() const {
        return budget.value_or(qs::kUnlimitedBudget);
    }

    [[nodiscard]] fs::path out_dir() const {
        fs::path p(out);
        fs::create_directories(p);
        return p;
    }
};

void add_common(CLI::App *app, Common &c) {
    app->add_option("--seed", c.seed, "master seed (default: $AQ_SEED, else 0)");
    app->add_option("--shots", c.shots, "shots per Hadamard test")->check(CLI::PositiveNumber);
    app->add_option("--pattern", c.pattern, "stacking pattern")
        ->check(CLI::IsMember({"horizontal", "balanced", "vertical", "batch"}));
    app->add_option("--budget", c.budget, "qubit budget (default unlimited)");
    app->add_option("--epsilon", c.epsilon, "target precision")->check(CLI::Range(0.0, 1.0));
    app->add_flag("--exact", c.exact, "analytic overlaps instead of sampling");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--threads", c.threads, "worker threads, 0 = auto");
}

void write_json(const fs::path &p, const Json &j) {
    std::ofstream out(p);
    if (!out) {
        throw qs::Error(qs::ErrorKind::IoError, "cannot write " + p.string());
    }
    out << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path &p) {
    std::ofstream out(p);
    if (!out) {
        throw qs::Error(qs::ErrorKind::IoError, "cannot write " + p.string());
    }
    return out;
}

// ------------------------------------------------------------------ matmul

struct MatMulArgs {
    std::string a;
    std::string b;
};

int run_matmul(const Common &c, const MatMulArgs &m) {
    const auto a = qs::io::read_matrix(m.a);
    const auto b = qs::io::read_matrix(m.b);
    qs::MatMulConfig cfg;
    cfg.shots = c.shots.value_or(cfg.shots);
    cfg.epsilon = c.epsilon;
    cfg.pattern = c.stacking();
    cfg.seed = c.seed_or_env();
    cfg.exact = c.exact;
    cfg.threads = c.threads;
    cfg.budget = c.budget_or_unlimited();
    const auto r = qs::matmul(a, b, cfg);
    const auto dir = c.out_dir();
    auto csv = open_out(dir / "matmul.csv");
    qs::report::write_matmul_csv(csv, r);
    const auto summary = qs::report::matmul_summary(r, a.cols(), cfg, qs::classical_matmul(a, b));
    write_json(dir / "matmul_summary.json", summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

// -------------------------------------------------------------------- plan

struct PlanArgs {
    std::size_t n = 4;
    std::size_t dim = 4;
};

int run_plan(const Common &c, const PlanArgs &p) {
    const auto plan = qs::plan(p.n, p.dim, c.stacking(), c.budget_or_unlimited());
    auto j = qs::report::to_json(plan);
    j["complexity"] = qs::report::to_json(qs::complexity_report(plan, c.epsilon));
    std::cout << j.dump(2) << '\n';
    if (c.out != ".") {
        write_json(c.out_dir() / "plan.json", j);
    }
    return 0;
}

// ------------------------------------------------------------ entropy-sweep

struct SweepArgs {
    std::vector<std::string> families{"uniform", "normal", "exponential"};
    std::size_t n = 16;
    std::size_t levels = 16;
    std::size_t min_dim = 2;
    std::size_t max_dim = 64;
    std::size_t repetitions = 500;
    std::string pairing = "uniform-reference";
};

std::vector<qs::SweepLevel> levels_for(const std::string &family, const SweepArgs &s) {
    if (family == "uniform") {
        return qs::uniform_levels(s.n);
    }
    if (family == "interpolated") {
        return qs::interpolated_levels(s.n, s.levels);
    }
    const auto fam = family == "normal"        ? qs::StateFamily::normal()
                     : family == "exponential" ? qs::StateFamily::exponential()
                                               : qs::StateFamily::chi_square();
    return qs::geometric_levels(fam, s.min_dim, s.max_dim, s.levels);
}

qs::Pairing pairing_of(const std::string &s) {
    for (auto p : {qs::Pairing::FamilyPartner, qs::Pairing::UniformReference, qs::Pairing::SignDiagonal}) {
        if (s == qs::to_string(p)) {
            return p;
        }
    }
    throw UsageError("unknown pairing " + s);
}

int run_sweep(const Common &c, const SweepArgs &s) {
    const auto seed = c.seed_or_env();
    std::vector<std::vector<qs::SweepRecord>> per_family;
    std::vector<qs::SweepRecord> all;
    Json families = Json::object();
    for (std::size_t f = 0; f < s.families.size(); ++f) {
        qs::SweepConfig cfg;
        cfg.levels = levels_for(s.families[f], s);
        cfg.shots = c.shots.value_or(cfg.shots);
        cfg.repetitions = s.repetitions;
        cfg.seed = qs::derive_seed(seed, {f});
        cfg.pairing = pairing_of(s.pairing);
        cfg.threads = c.threads;
        auto recs = qs::variance_sweep(cfg);
        Json fj;
        try {
            fj = qs::report::to_json(qs::entropy_variance_correlation(recs));
            fj["slope"] = qs::entropy_variance_slope(recs).slope;
        } catch (const qs::Error &e) {
            fj = {{"error", e.what()}};
        }
        families[s.families[f]] = fj;
        all.insert(all.end(), recs.begin(), recs.end());
        per_family.push_back(std::move(recs));
    }
    Json crossings = Json::array();
    for (std::size_t i = 0; i < per_family.size(); ++i) {
        for (std::size_t k = i + 1; k < per_family.size(); ++k) {
            Json cj{{"a", s.families[i]}, {"b", s.families[k]}};
            try {
                const auto x = qs::crossing_point(per_family[i], per_family[k]);
                cj["nats"] = x.nats;
                cj["bits"] = x.bits;
            } catch (const qs::Error &e) {
                cj["error"] = std::string(qs::to_string(e.kind()));
            }
            crossings.push_back(cj);
        }
    }
    const auto dir = c.out_dir();
    auto csv = open_out(dir / "sweep.csv");
    qs::report::write_sweep_csv(csv, all);
    Json summary{{"families", families}, {"crossings", crossings}};
    write_json(dir / "correlation.json", summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
    std::string config;
    std::string mode;
};

int run_train(const Common &c, const TrainArgs &t, const CLI::App &sub) {
    auto rc = qs::qml::read_run_config(t.config);
    auto &cfg = rc.train;
    if (c.shots) {
        cfg.shots = *c.shots;
    }
    if (c.seed || std::getenv("AQ_SEED") != nullptr) {
        cfg.seed = c.seed_or_env();
    }
    if (sub.count("--pattern") > 0) {
        cfg.pattern = c.stacking();
    }
    if (c.exact) {
        cfg.exact = true;
    }
    if (!t.mode.empty()) {
        cfg.mode = t.mode == "quantum" ? qs::qml::ForwardMode::Quantum : qs::qml::ForwardMode::Classical;
    }
    cfg.threads = c.threads;
    const auto data = qs::qml::load_dataset(rc);
    const auto rep = qs::qml::train(data, cfg);
    const auto dir = c.out_dir();
    auto csv = open_out(dir / "metrics.csv");
    qs::report::write_metrics_csv(csv, rep);
    const auto j = qs::report::to_json(rep, cfg);
    write_json(dir / "train_report.json", j);
    std::cout << "final test accuracy " << rep.final_accuracy << " after " << cfg.epochs
              << " epochs (" << qs::qml::to_string(cfg.mode) << ")\n";
    return 0;
}

// ------------------------------------------------------------------ verify

qs::EncodedState random_state(std::size_t dim, std::uint64_t seed) {
    qs::CounterRng rng(seed);
    std::vector<double> v(dim);
    for (double &x : v) {
        x = rng.normal();
    }
    return qs::encode(v);
}

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

Check verify_circuit(std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t t = 0; t < 120; ++t) {
        const std::size_t dim = std::size_t{1} << (1 + t % 6);
        const auto psi = random_state(dim, qs::derive_seed(seed, {t, 0}));
        const auto phi = random_state(dim, qs::derive_seed(seed, {t, 1}));
        const double want = (1.0 + qs::analytic_overlap(psi, phi)) / 2.0;
        worst = std::max(worst, std::abs(qs::circuit_verify(psi, phi) - want));
    }
    return {"circuit vs analytic P(0)", worst <= 1e-10, "max deviation " + qs::io::format_double(worst)};
}

Check verify_estimator(std::uint64_t seed) {
    const auto psi = std::make_shared<const qs::EncodedState>(random_state(8, qs::derive_seed(seed, {10})));
    const auto phi = std::make_shared<const qs::EncodedState>(random_state(8, qs::derive_seed(seed, {11})));
    const double mu = qs::analytic_overlap(*psi, *phi);
    const std::int64_t shots = 1024;
    const std::size_t batches = 2000;
    std::vector<double> z(batches);
    for (std::size_t r = 0; r < batches; ++r) {
        z[r] = qs::estimate(qs::sample_hadamard({psi, phi, shots, qs::derive_seed(seed, {12, r})})).z_hat;
    }
    const double var = qs::stats::sample_variance(z);
    const double want = (1.0 - mu * mu) / static_cast<double>(shots);
    const double band = std::abs(var / want - 1.0);
    const double bias = std::abs(qs::stats::mean(z) - mu);
    const bool ok = band <= 0.2 && bias <= 4.0 * std::sqrt(want / static_cast<double>(batches));
    return {"estimator variance (1 - mu^2)/S", ok, "variance ratio " + qs::io::format_double(var / want)};
}

Check verify_purity(std::uint64_t seed) {
    std::size_t bad = 0;
    const auto fams = {qs::StateFamily::normal(), qs::StateFamily::uniform(), qs::StateFamily::exponential(),
                       qs::StateFamily::chi_square()};
    std::size_t t = 0;
    for (const auto &fam : fams) {
        for (std::size_t k = 0; k < 2500; ++k, ++t) {
            const auto g = qs::generate_state(fam, 2 + t % 63, qs::derive_seed(seed, {20, t}));
            const auto e = qs::entropy(g.dist);
            const double tol = 1e-12;
            if (std::exp(-e.shannon_nats) > e.purity * (1 + tol) || e.collision_entropy > e.shannon_nats + tol) {
                ++bad;
            }
        }
    }
    return {"purity >= e^-H and H2 <= H", bad == 0, std::to_string(bad) + " violations"};
}

Check verify_dividend(std::uint64_t seed) {
    qs::SweepConfig cfg;
    cfg.levels = qs::uniform_levels(16);
    cfg.shots = 8192;
    cfg.repetitions = 200;
    cfg.seed = qs::derive_seed(seed, {30});
    cfg.pairing = qs::Pairing::SignDiagonal;
    std::size_t bad = 0;
    for (const auto &r : qs::variance_sweep(cfg)) {
        bad += qs::within_dividend_bound(r) ? 0 : 1;
    }
    return {"dividend bound under sign-diagonal pairing", bad == 0, std::to_string(bad) + " levels above band"};
}

Check verify_concentration(std::uint64_t seed) {
    std::size_t bad = 0;
    for (std::size_t t = 0; t < 10; ++t) {
        const auto g = qs::generate_state(qs::StateFamily::exponential(), 4 + t, qs::derive_seed(seed, {40, t}));
        bad += qs::concentration_check(g.dist, 2000, qs::derive_seed(seed, {41, t})).pass ? 0 : 1;
    }
    return {"concentration lower bound", bad == 0, std::to_string(bad) + " failures"};
}

int run_verify(const Common &c) {
    const auto seed = c.seed_or_env();
    const std::vector<Check> checks{verify_circuit(seed), verify_estimator(seed), verify_purity(seed),
                                    verify_dividend(seed), verify_concentration(seed)};
    bool ok = true;
    for (const auto &k : checks) {
        std::cout << (k.pass ? "[PASS] " : "[FAIL] ") << k.name << ": " << k.detail << '\n';
        ok = ok && k.pass;
    }
    return ok ? 0 : kVerify;
}

int exit_code_for(qs::ErrorKind k) {
    switch (k) {
    case qs::ErrorKind::InvalidArgument:
    case qs::ErrorKind::InvalidEpsilon:
    case qs::ErrorKind::BudgetTooSmall:
    case qs::ErrorKind::InvalidSupport:
    case qs::ErrorKind::InvalidEntropy:
        return kUsage;
    default:
        return kData;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qstack: Hadamard-test matrix products, stacking plans, entropy sweeps, training"};
    app.require_subcommand(1, 1);

    Common c;
    MatMulArgs mm;
    PlanArgs pa;
    SweepArgs sw;
    TrainArgs tr;

    auto *matmul = app.add_subcommand("matmul", "C = A B from two matrix files");
    add_common(matmul, c);
    matmul->add_option("--a", mm.a, "left matrix (.csv or .bin)")->required();
    matmul->add_option("--b", mm.b, "right matrix (.csv or .bin)")->required();

    auto *plan = app.add_subcommand("plan", "print a stacking plan as JSON");
    add_common(plan, c);
    plan->add_option("--n", pa.n, "jobs per row (N x N jobs)")->check(CLI::PositiveNumber);
    plan->add_option("--dim", pa.dim, "vector dimension")->check(CLI::PositiveNumber);

    auto *sweep = app.add_subcommand("entropy-sweep", "entropy vs overlap-variance sweep");
    add_common(sweep, c);
    sweep->add_option("--family", sw.families, "families to sweep")
        ->delimiter(',')
        ->check(CLI::IsMember({"uniform", "normal", "exponential", "chisquare", "interpolated"}));
    sweep->add_option("--n", sw.n, "amplitudes for uniform/interpolated levels");
    sweep->add_option("--levels", sw.levels, "levels for geometric/interpolated families");
    sweep->add_option("--min-dim", sw.min_dim, "smallest dimension");
    sweep->add_option("--max-dim", sw.max_dim, "largest dimension");
    sweep->add_option("--repetitions", sw.repetitions, "batches per level");
    sweep->add_option("--pairing", sw.pairing, "state pairing")
        ->check(CLI::IsMember({"uniform-reference", "family-partner", "sign-diagonal"}));

    auto *train = app.add_subcommand("train", "train a classifier from a key=value config");
    add_common(train, c);
    train->add_option("--config", tr.config, "run config file")->required()->check(CLI::ExistingFile);
    train->add_option("--mode", tr.mode, "override mode")->check(CLI::IsMember({"quantum", "classical"}));

    auto *verify = app.add_subcommand("verify", "circuit and bound self-checks");
    add_common(verify, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*matmul) {
            return run_matmul(c, mm);
        }
        if (*plan) {
            return run_plan(c, pa);
        }
        if (*sweep) {
            return run_sweep(c, sw);
        }
        if (*train) {
            return run_train(c, tr, *train);
        }
        return run_verify(c);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const qs::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
}
