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

#ifndef MEND_INTEGRATED_OSBP_H
#define MEND_INTEGRATED_OSBP_H

#include <cstdint>
#include <optional>
#include <vector>

#include "mend/channel_osbp.h"
#include "mend/estimation.h"
#include "mend/phase_space.h"
#include "mend/record.h"

namespace mend {

/// Success operator of the full OSBP blended with the identity by the posterior's
/// concentration |M_1|: s_eff = (1 - |M_1|) + |M_1| s. The failure operator follows
/// from completeness and p_success is evaluated on the source amplitudes.
OsbpOperators averaged_success_operator(const PhaseDistribution& posterior, double estimate,
                                        const TwoParamQutrit& params);

/// Posterior average of |<GHZ_d| M_s U(-estimate) |psi(phi)>|^2 with the success
/// branch renormalized.
double storage_criterion_value(const PhaseDistribution& posterior, double estimate, const OsbpOperators& ops,
                               const TwoParamQutrit& params);

/// storage_criterion_value >= 1 - epsilon, for epsilon in (0, 1].
bool storage_criterion(const PhaseDistribution& posterior, double estimate, const OsbpOperators& ops,
                       const TwoParamQutrit& params, double epsilon);

struct IntegratedConfig {
    int copies = 100;
    double epsilon = 0.05;
    TwoParamQutrit params = TwoParamQutrit::from_cos2_alpha(4.0 / 15.0, kPi / 4);
    int parties = 3;
    std::size_t grid_size = kDefaultGridSize;
    StrategySpec strategy = StrategySpec::adaptive();

    void validate() const;
};

struct StoredCopy {
    int copy_index = 0;
    std::vector<double> success_diag;  // operator applied to this copy
    double estimate = 0.0;             // correction applied when stored
    double criterion = 0.0;            // criterion value when stored
    double final_criterion = 0.0;      // re-evaluated against the final posterior
    bool passes_final = false;
    double true_fidelity = 0.0;        // |<GHZ|copy>|^2 after the final correction
};

struct IntegratedState {
    PhaseDistribution posterior;
    double estimate = 0.0;
    std::vector<StoredCopy> stored;
    int round = 0;
};

struct IntegratedResult {
    IntegratedState state;
    RunRecord record;
};

/// One run of the storage-aware loop. Successful copies passing the criterion are
/// stored; the rest are measured (DFT basis on success copies, parity on failure
/// copies) to refine the posterior. Branch draws consume the random stream exactly
/// as run_failure_branch_trial does, so a point-mass prior reproduces that run.
IntegratedResult run_integrated(const IntegratedConfig& cfg, double true_phi, std::uint64_t seed,
                                std::optional<PhaseDistribution> prior = std::nullopt);

/// Averages over independent runs with phases and seeds drawn as for the
/// Monte Carlo trials. Deterministic in (cfg, runs, master_seed).
struct IntegratedSummary {
    int runs = 0;
    std::vector<double> stored_fraction;   // per copy index
    std::vector<double> success_fraction;  // per copy index
    std::vector<double> mean_distance;     // estimation distance after each copy
    std::vector<double> distance_stderr;
    double stored_first_half = 0.0;   // stored copies / copies, first half of each run
    double stored_second_half = 0.0;
    double final_pass_fraction = 0.0;  // stored copies still passing the final re-check
    double mean_stored_fidelity = 0.0;
    long long stored_total = 0;
};

IntegratedSummary simulate_integrated(const IntegratedConfig& cfg, int runs, std::uint64_t master_seed,
                                      int threads = 0);

}  // namespace mend

#endif  // MEND_INTEGRATED_OSBP_H
