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

#ifndef MEND_RUNNER_H
#define MEND_RUNNER_H

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mend/estimation.h"
#include "mend/phase_space.h"
#include "mend/record.h"

namespace mend {

enum class TrialMode {
    FailureBranch,  // copies pass the OSBP; failures are measured by parity
    NaiveReceived,  // received copies are measured directly in the DFT basis
};

/// Source of the probes: the vendor parameters, or a failure amplitude a given
/// directly. With a direct amplitude every copy is a failure-branch probe.
using ProbeSource = std::variant<TwoParamQutrit, double>;

struct TrialConfig {
    ProbeSource source = TwoParamQutrit::from_cos2_alpha(4.0 / 15.0, kPi / 4);
    int parties = 3;
    int copies = 20;
    StrategySpec strategy = StrategySpec::adaptive();
    TrialMode mode = TrialMode::FailureBranch;
    std::size_t grid_size = kDefaultGridSize;
    std::uint64_t master_seed = 1;
    int trials = 1;

    void validate() const;
};

/// Mean distance after x estimation updates over all trials that reached x.
struct CurvePoint {
    int x = 0;
    double mean_distance = 0.0;
    double std_error = 0.0;
    long long samples = 0;  // trials that reached x measured copies
};

struct SimulationSummary {
    std::vector<CurvePoint> curve;
    long long success_count = 0;
    long long copies = 0;
};

/// Seed of trial `index` derived from the master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double uniform01(std::uint64_t bits);

/// Resolves a requested worker count; 0 means "all hardware threads".
int resolve_threads(int requested);

/// Worker count from MEND_SIM_THREADS (unset or 0 = auto).
int threads_from_environment();

/// Failure-amplitude used for parity probes of the configured source.
double probe_failure_amplitude(const ProbeSource& source);

/// One trial of the recycling protocol at collective phase true_phi.
RunRecord run_failure_branch_trial(const TrialConfig& cfg, double true_phi, std::uint64_t seed,
                                   std::optional<PhaseDistribution> prior = std::nullopt);

/// One trial of the estimate-first protocol: all copies measured in the DFT basis.
RunRecord run_naive_trial(const TrialConfig& cfg, double true_phi, std::uint64_t seed,
                          std::optional<PhaseDistribution> prior = std::nullopt);

/// True collective phase (theta uniform, phi = N theta) and stream seed of one trial.
struct TrialDraw {
    double true_phi = 0.0;
    std::uint64_t seed = 0;
};
TrialDraw draw_trial(std::uint64_t master_seed, int parties, int trial);

/// Dispatches on cfg.mode.
RunRecord run_trial(const TrialConfig& cfg, double true_phi, std::uint64_t seed);

/// Monte Carlo over a flat prior on theta. Deterministic in (cfg, master_seed),
/// independent of the thread count.
SimulationSummary simulate_over_prior(const TrialConfig& cfg, int threads = 0);

std::vector<CurvePoint> average_over_prior(const TrialConfig& cfg, int threads = 0);

inline constexpr double kDefaultEnumerationBudget = 67108864.0;  // grid cells over all tree nodes

/// Exact outcome-tree average of the distance after each of 0..copies updates.
/// Throws BudgetError when (tree nodes x grid size) exceeds the budget.
std::vector<CurvePoint> enumerate_exact(const TrialConfig& cfg, double budget = kDefaultEnumerationBudget);

/// Fixed-basis parity curve for k = 0..max_k computed on the grid from outcome
/// counts (order of outcomes is irrelevant without adaptation).
std::vector<CurvePoint> exact_fixed_curve(double a, int max_k, std::size_t grid_size = kDefaultGridSize);

}  // namespace mend

#endif  // MEND_RUNNER_H
