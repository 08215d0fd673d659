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

#include "mend/integrated_osbp.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mend/errors.h"
#include "mend/runner.h"

namespace mend {
namespace {

const TwoParamQutrit kVendor = TwoParamQutrit::from_cos2_alpha(4.0 / 15.0, kPi / 4);
const TwoParamQutrit kGhz = TwoParamQutrit::from_cos2_alpha(1.0 / 3.0, kPi / 4);

TEST(AveragedOperator, PointMassGivesFullOsbp) {
    auto p = PhaseDistribution::point_mass(1024, 2.0);
    auto ops = averaged_success_operator(p, 2.0, kVendor);
    auto full = build_osbp(kVendor);
    for (int l = 0; l < 3; ++l) {
        EXPECT_NEAR(ops.success_diag[l], full.success_diag[l], 1e-12);
    }
    EXPECT_NEAR(ops.p_success, 0.8, 1e-12);
}

TEST(AveragedOperator, FlatPosteriorStartsFromIdentity) {
    auto ops = averaged_success_operator(PhaseDistribution::flat(256), 0.0, kVendor);
    for (int l = 0; l < 3; ++l) {
        EXPECT_NEAR(ops.success_diag[l], 1.0, 1e-15);
        EXPECT_NEAR(ops.failure_diag[l], 0.0, 1e-7);
    }
    EXPECT_NEAR(ops.p_success, 1.0, 1e-15);
    auto ghz = averaged_success_operator(PhaseDistribution::flat(256), 0.0, kGhz);
    EXPECT_NEAR(ghz.p_success, 1.0, 1e-12);
}

TEST(AveragedOperator, CompletenessAlwaysHolds) {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> w(256);
        double power = 1 + 20 * u(rng);
        for (auto& x : w) {
            x = std::pow(u(rng), power);
        }
        double beta = kPi / 4 * u(rng);
        double lo = std::atan(1 / std::sin(std::max(beta, 1e-9)));
        TwoParamQutrit params{lo + (kPi / 2 - lo) * u(rng), beta};
        auto ops = averaged_success_operator(PhaseDistribution::from_weights(w), 0.0, params);
        EXPECT_LT(ops.completeness_error(), 1e-10);
    }
}

TEST(StorageCriterion, KnownValues) {
    auto point = PhaseDistribution::point_mass(1024, 1.0);
    double est = *estimate_phase(point);
    auto ops = averaged_success_operator(point, est, kVendor);
    EXPECT_NEAR(storage_criterion_value(point, est, ops, kVendor), 1.0, 1e-12);
    EXPECT_TRUE(storage_criterion(point, est, ops, kVendor, 1e-6));

    auto flat = PhaseDistribution::flat(1024);
    auto flat_ops = averaged_success_operator(flat, 0.0, kVendor);
    EXPECT_NEAR(storage_criterion_value(flat, 0.0, ops, kVendor), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(storage_criterion_value(flat, 0.0, flat_ops, kVendor), 1.0 / 3.0, 1e-12);
    EXPECT_FALSE(storage_criterion(flat, 0.0, ops, kVendor, 0.6));
    EXPECT_TRUE(storage_criterion(flat, 0.0, ops, kVendor, 1.0));
    EXPECT_THROW(storage_criterion(flat, 0.0, ops, kVendor, 0.0), DomainError);
}

TEST(StorageCriterion, FlatValueMatchesDirectAverage) {
    // Average of |<GHZ|psi(phi)>|^2 over phi for the uniform success branch.
    const int grid = 4096;
    double direct = 0.0;
    for (int g = 0; g < grid; ++g) {
        double phi = kTwoPi * g / grid;
        Complex overlap = 0.0;
        for (int j = 0; j < 3; ++j) {
            overlap += std::polar(1.0 / 3.0, j * phi);
        }
        direct += std::norm(overlap) / grid;
    }
    auto flat = PhaseDistribution::flat(1024);
    auto ops = build_osbp(kVendor);
    EXPECT_NEAR(storage_criterion_value(flat, 0.3, ops, kVendor), direct, 1e-10);
}

TEST(StorageCriterion, MonotoneUnderSharpening) {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t grid = 512;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> base(grid);
        for (auto& x : base) {
            x = u(rng);
        }
        std::size_t target = static_cast<std::size_t>(u(rng) * grid) % grid;
        double truth = kTwoPi * target / grid;
        auto ops = build_osbp(kVendor);
        double previous = -1.0;
        for (int step = 0; step <= 10; ++step) {
            double t = step / 10.0;
            std::vector<double> mixed(grid);
            double total = 0.0;
            for (double x : base) {
                total += x;
            }
            for (std::size_t g = 0; g < grid; ++g) {
                mixed[g] = (1 - t) * base[g] / total + (g == target ? t : 0.0);
            }
            auto p = PhaseDistribution::from_weights(mixed);
            double fixed_value = storage_criterion_value(p, truth, ops, kVendor);
            EXPECT_GE(fixed_value, previous - 1e-12);
            previous = fixed_value;
        }
        EXPECT_NEAR(previous, 1.0, 1e-12);
    }
}

TEST(RunIntegrated, GhzVendorWithKnownPhaseStoresEverything) {
    IntegratedConfig cfg;
    cfg.params = kGhz;
    cfg.copies = 30;
    cfg.grid_size = 256;
    auto prior = PhaseDistribution::point_mass(256, 1.0);
    auto result = run_integrated(cfg, 1.0, 3, prior);
    EXPECT_EQ(static_cast<int>(result.state.stored.size()), 30);
    EXPECT_EQ(result.record.failure_count, 0);
    for (const auto& copy : result.state.stored) {
        EXPECT_TRUE(copy.passes_final);
    }
}

TEST(RunIntegrated, FlatStartMeasuresFirstCopy) {
    IntegratedConfig cfg;
    cfg.copies = 1;
    cfg.grid_size = 256;
    auto result = run_integrated(cfg, 2.0, 5);
    ASSERT_EQ(result.record.entries.size(), 1u);
    EXPECT_FALSE(result.record.entries[0].stored);
    EXPECT_TRUE(result.record.entries[0].measured);
}

TEST(RunIntegrated, PointMassPriorReproducesRecyclingTrial) {
    IntegratedConfig icfg;
    icfg.copies = 40;
    icfg.grid_size = 1024;
    TrialConfig tcfg;
    tcfg.source = kVendor;
    tcfg.copies = 40;
    tcfg.grid_size = 1024;
    for (int t = 0; t < 50; ++t) {
        TrialDraw draw = draw_trial(11, 3, t);
        auto prior = PhaseDistribution::point_mass(1024, draw.true_phi);
        auto integrated = run_integrated(icfg, draw.true_phi, draw.seed, prior);
        auto recycled = run_failure_branch_trial(tcfg, draw.true_phi, draw.seed, prior);
        EXPECT_EQ(integrated.record.success_count, recycled.success_count);
        EXPECT_NEAR(integrated.record.final_distance, recycled.final_distance, 1e-12);
        EXPECT_EQ(static_cast<int>(integrated.state.stored.size()), recycled.success_count);
        for (std::size_t i = 0; i < recycled.entries.size(); ++i) {
            EXPECT_EQ(integrated.record.entries[i].kind, recycled.entries[i].kind);
            EXPECT_EQ(integrated.record.entries[i].outcome, recycled.entries[i].outcome);
        }
    }
}

TEST(RunIntegrated, StoredFractionIncreases) {
    IntegratedConfig cfg;
    cfg.copies = 100;
    cfg.grid_size = 1024;
    auto s = simulate_integrated(cfg, 200, 1);
    EXPECT_GT(s.stored_second_half, s.stored_first_half);
    EXPECT_GT(s.final_pass_fraction, 0.9);
}

TEST(RunIntegrated, DeterministicAcrossThreadCounts) {
    IntegratedConfig cfg;
    cfg.copies = 30;
    cfg.grid_size = 256;
    auto a = simulate_integrated(cfg, 40, 9, 1);
    auto b = simulate_integrated(cfg, 40, 9, 4);
    EXPECT_EQ(a.stored_fraction, b.stored_fraction);
    EXPECT_EQ(a.mean_distance, b.mean_distance);
    EXPECT_EQ(a.stored_total, b.stored_total);
}

TEST(IntegratedConfig, Validation) {
    IntegratedConfig cfg;
    cfg.epsilon = 0.0;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg.epsilon = 0.05;
    cfg.copies = -1;
    EXPECT_THROW(cfg.validate(), DomainError);
}

}  // namespace
}  // namespace mend
