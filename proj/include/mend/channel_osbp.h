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

#ifndef MEND_CHANNEL_OSBP_H
#define MEND_CHANNEL_OSBP_H

#include <optional>
#include <span>
#include <vector>

#include "mend/phase_space.h"

namespace mend {

/// Diagonal two-outcome OSBP measurement {M_s, M_f} on one party.
///
/// success_diag[l]^2 + failure_diag[l]^2 = 1 for every level, and p_success is
/// the probability of the success outcome on the source state the operators
/// were built for.
struct OsbpOperators {
    std::vector<double> success_diag;
    std::vector<double> failure_diag;
    double p_success = 1.0;

    /// Largest violation of completeness over all levels.
    double completeness_error() const;
};

enum class BranchTag { Success, Failure };

struct BranchOutcome {
    BranchTag tag;
    std::optional<GhzPhaseState> success_state;
    std::optional<FailureBranchState> failure_state;
};

/// Every party applies U(theta) = sum_l e^{i l theta}|l><l|; the collective phase
/// advances by N theta.
GhzPhaseState apply_dephasing(const GhzPhaseState& state, double theta);

/// Optimal OSBP taking the two-parameter qutrit to GHZ_3:
/// M_s = diag(cot a sec b, cot a csc b, 1), p_s = 3 cos^2 a.
OsbpOperators build_osbp(const TwoParamQutrit& params);

/// OSBP for an arbitrary full-rank source in the GHZ class targeting GHZ_d.
/// s_l = (t_l / src_l) (src_min / t_min), scaled so that max s_l = 1.
OsbpOperators build_osbp(std::span<const double> source_amps);

/// Success probability sum_l amps_l^2 s_l^2 of the given operators on a source.
double osbp_success_probability(std::span<const double> source_amps, const OsbpOperators& ops);

/// Normalized amplitudes of M_f|source>; throws DomainError when the failure
/// branch is empty.
std::vector<double> failure_branch_amps(std::span<const double> source_amps, const OsbpOperators& ops);

/// a = sqrt(sin^2 a cos^2 b - cos^2 a) / sqrt(1 - 3 cos^2 a).
double failure_amplitude(const TwoParamQutrit& params);

/// Samples the OSBP branch with the uniform draw u: success iff u < p_success.
/// The collective phase passes through unchanged in both branches.
BranchOutcome osbp_branch(const GhzPhaseState& state, const OsbpOperators& ops, double u);

/// Single-copy conversion probability min_j sum_{l>=j} src_l^2 / sum_{l>=j} tgt_l^2,
/// clamped to [0, 1]. Tails that vanish for both states are skipped; a vanishing
/// target tail with a positive source tail never attains the minimum.
double vidal_conversion_bound(std::span<const double> source_amps, std::span<const double> target_amps);

}  // namespace mend

#endif  // MEND_CHANNEL_OSBP_H
