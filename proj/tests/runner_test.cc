// Copyright 2026 The mend-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mend/runner.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "mend/closed_forms.h"
#include "mend/errors.h"
#include "oracles.h"

namespace mend {
namespace {

const double kHalf = 1 / std::sqrt(2.0);
const TwoParamQutrit kVendor = TwoParamQutrit::from_cos2_alpha(4.0 / 15.0, kPi / 4);

TrialConfig direct(double a, int copies, StrategySpec strategy = StrategySpec::adaptive()) {
    TrialConfig cfg;
    cfg.source = a;
    cfg.copies = copies;
    cfg.strategy = strategy;
    return cfg;
}

oracle::OffsetRule parity_rule(const StrategySpec& s) {
    return [s](int round, double estimate) { return next_measurement(s, round, estimate).chi; };
}

TEST(Seeds, DerivationIsStableAndSpreads) {
    EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(uniform01(0), 0.0);
    EXPECT_LT(uniform01(~0ULL), 1.0);
}

TEST(Threads, EnvironmentParsing) {
    ::setenv("MEND_SIM_THREADS", "3", 1);
    EXPECT_EQ(threads_from_environment(), 3);
    ::setenv("MEND_SIM_THREADS", "x", 1);
    EXPECT_THROW(threads_from_environment(), ConfigError);
    ::unsetenv("MEND_SIM_THREADS");
    EXPECT_EQ(threads_from_environment(), 0);
    EXPECT_GE(resolve_threads(0), 1);
    EXPECT_EQ(resolve_threads(5), 5);
}

TEST(TrialConfig, Validation) {
    TrialConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.trials = 0;
    EXPECT_THROW(cfg.validate(), DomainError);
    TrialConfig naive = direct(0.5, 3);
    naive.mode = TrialMode::NaiveReceived;
    EXPECT_THROW(naive.validate(), DomainError);
    TrialConfig bad = direct(1.2, 3);
    EXPECT_THROW(bad.validate(), DomainError);
    EXPECT_THROW(run_naive_trial(direct(0.5, 3), 0.0, 1), DomainError);
}

TEST(Trials, NoCopiesGiveFlatPriorDistance) {
    auto record = run_failure_branch_trial(direct(kHalf, 0), 1.0, 7);
    EXPECT_NEAR(record.final_distance, 2.0 / 3.0, 1e-12);
    TrialConfig naive;
    naive.copies = 0;
    naive.mode = TrialMode::NaiveReceived;
    EXPECT_NEAR(run_naive_trial(naive, 1.0, 7).final_distance, 2.0 / 3.0, 1e-12);
}

TEST(Trials, OneAdaptiveMeasurement) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto record = run_failure_branch_trial(direct(kHalf, 1), 0.3 * seed, seed);
        EXPECT_NEAR(record.final_distance, (1 + std::sqrt(3.0)) / 6, 1e-10);
    }
}

TEST(Trials, RecordCountsAreConsistent) {
    TrialConfig cfg;
    cfg.copies = 40;
    auto record = run_failure_branch_trial(cfg, 2.0, 99);
    EXPECT_EQ(record.success_count + record.failure_count, 40);
    EXPECT_EQ(static_cast<int>(record.entries.size()), 40);
    EXPECT_EQ(static_cast<int>(record.estimation_distances.size()), record.failure_count + 1);
    for (const auto& e : record.entries) {
        EXPECT_EQ(e.measured, e.kind == CopyKind::Failure);
    }
}

TEST(Enumeration, SingleMeasurementAnyStrategy) {
    for (auto s : {StrategySpec::fixed(), StrategySpec::alternating(), StrategySpec::rotating(), StrategySpec::adaptive()}) {
        auto curve = enumerate_exact(direct(kHalf, 1, s));
        EXPECT_NEAR(curve[1].mean_distance, (1 + std::sqrt(3.0)) / 6, 1e-10);
    }
}

TEST(Enumeration, MatchesIndependentTreeForAllStrategies) {
    for (auto s : {StrategySpec::fixed(), StrategySpec::alternating(), StrategySpec::rotating(), StrategySpec::adaptive()}) {
        TrialConfig cfg = direct(kHalf, 6, s);
        cfg.grid_size = 256;
        auto curve = enumerate_exact(cfg);
        auto reference = oracle::parity_tree_average(kHalf, 6, 256, parity_rule(s));
        for (int k = 0; k <= 6; ++k) {
            EXPECT_NEAR(curve[k].mean_distance, reference[k], 1e-10) << s.name() << " k=" << k;
        }
    }
}

TEST(Enumeration, NaiveMatchesIndependentTree) {
    TrialConfig cfg;
    cfg.source = kVendor;
    cfg.mode = TrialMode::NaiveReceived;
    cfg.copies = 4;
    cfg.grid_size = 256;
    auto curve = enumerate_exact(cfg);
    auto amps = kVendor.amplitudes();
    auto reference = oracle::dft_tree_average({amps.begin(), amps.end()}, 4, 256, [](int round, double est) {
        return next_mub_measurement(StrategySpec::adaptive(), round, est).nu;
    });
    for (int k = 0; k <= 4; ++k) {
        EXPECT_NEAR(curve[k].mean_distance, reference[k], 1e-10) << k;
    }
}

TEST(Enumeration, FixedStrategyMatchesClosedForm) {
    TrialConfig cfg = direct(kHalf, 12, StrategySpec::fixed());
    cfg.grid_size = 1024;
    auto curve = enumerate_exact(cfg);
    for (int k = 0; k <= 12; ++k) {
        EXPECT_NEAR(curve[k].mean_distance, no_update_estimator_and_distance(k, kHalf).average_distance, 1e-8) << k;
    }
}

TEST(Enumeration, BudgetIsEnforced) {
    TrialConfig cfg = direct(kHalf, 20);
    EXPECT_THROW(enumerate_exact(cfg), BudgetError);
    EXPECT_THROW(enumerate_exact(direct(kHalf, 4), 10.0), BudgetError);
}

TEST(MonteCarlo, AgreesWithEnumeration) {
    for (auto s : {StrategySpec::fixed(), StrategySpec::alternating(), StrategySpec::rotating(), StrategySpec::adaptive()}) {
        TrialConfig cfg = direct(kHalf, 6, s);
        cfg.grid_size = 256;
        cfg.trials = 20000;
        cfg.master_seed = 5;
        auto mc = average_over_prior(cfg);
        auto exact = enumerate_exact(cfg);
        for (int k = 1; k <= 6; ++k) {
            EXPECT_LT(std::abs(mc[k].mean_distance - exact[k].mean_distance), 3.5 * mc[k].std_error + 1e-12)
                << s.name() << " k=" << k;
        }
    }
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
    TrialConfig cfg;
    cfg.copies = 15;
    cfg.trials = 300;
    cfg.grid_size = 256;
    cfg.master_seed = 1234;
    auto one = simulate_over_prior(cfg, 1);
    for (int threads : {2, 3, 8}) {
        auto many = simulate_over_prior(cfg, threads);
        ASSERT_EQ(one.curve.size(), many.curve.size());
        EXPECT_EQ(one.success_count, many.success_count);
        for (std::size_t i = 0; i < one.curve.size(); ++i) {
            EXPECT_EQ(one.curve[i].x, many.curve[i].x);
            EXPECT_EQ(std::memcmp(&one.curve[i].mean_distance, &many.curve[i].mean_distance, sizeof(double)), 0) << threads;
            EXPECT_EQ(std::memcmp(&one.curve[i].std_error, &many.curve[i].std_error, sizeof(double)), 0) << threads;
        }
    }
}

TEST(MonteCarlo, SampleCountsPerPoint) {
    TrialConfig recycled = direct(kHalf, 5);
    recycled.trials = 50;
    recycled.grid_size = 256;
    for (const auto& p : average_over_prior(recycled)) {
        EXPECT_EQ(p.samples, 50);
    }
    TrialConfig vendor;
    vendor.copies = 20;
    vendor.trials = 200;
    vendor.grid_size = 256;
    auto curve = average_over_prior(vendor);
    EXPECT_EQ(curve[0].samples, 200);
    for (std::size_t x = 1; x < curve.size(); ++x) {
        EXPECT_LE(curve[x].samples, curve[x - 1].samples);
        EXPECT_GE(curve[x].samples, 2);
    }
}

TEST(MonteCarlo, SuccessFractionIsFourFifths) {
    TrialConfig cfg;
    cfg.copies = 100;
    cfg.trials = 1000;
    cfg.grid_size = 256;
    auto s = simulate_over_prior(cfg);
    ASSERT_EQ(s.copies, 100000);
    double sigma = std::sqrt(0.8 * 0.2 / s.copies);
    EXPECT_LT(std::abs(s.success_count / double(s.copies) - 0.8), 4 * sigma);
}

TEST(MonteCarlo, AdaptiveCurveShape) {
    TrialConfig cfg = direct(kHalf, 20);
    cfg.trials = 3000;
    cfg.grid_size = 1024;
    auto adaptive = average_over_prior(cfg);
    for (int k = 1; k <= 20; ++k) {
        double se = std::hypot(adaptive[k].std_error, adaptive[k - 1].std_error);
        EXPECT_LE(adaptive[k].mean_distance, adaptive[k - 1].mean_distance + 2 * se) << k;
    }
    cfg.source = 0.3;
    auto weak = average_over_prior(cfg);
    for (int k = 1; k <= 20; ++k) {
        EXPECT_LT(adaptive[k].mean_distance, weak[k].mean_distance) << k;
    }
}

TEST(MonteCarlo, ReceivedCopiesBeatFailureCopies) {
    TrialConfig naive;
    naive.source = kVendor;
    naive.mode = TrialMode::NaiveReceived;
    naive.copies = 20;
    naive.trials = 2000;
    naive.grid_size = 1024;
    TrialConfig recycled = direct(kHalf, 20);
    recycled.trials = 2000;
    recycled.grid_size = 1024;
    auto n = average_over_prior(naive);
    auto r = average_over_prior(recycled);
    for (int k = 1; k <= 20; ++k) {
        EXPECT_LT(n[k].mean_distance, r[k].mean_distance) << k;
    }
}

TEST(ExactFixedCurve, Validates) {
    EXPECT_THROW(exact_fixed_curve(1.5, 3), DomainError);
    EXPECT_THROW(exact_fixed_curve(0.5, -1), DomainError);
    EXPECT_NEAR(exact_fixed_curve(0.5, 0, 256)[0].mean_distance, 2.0 / 3.0, 1e-12);
}

}  // namespace
}  // namespace mend
