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

#include "mend/channel_osbp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mend/errors.h"

namespace mend {

namespace {

constexpr double kOpTol = 1e-12;

OsbpOperators complete(std::vector<double> success_diag, double p_success) {
    OsbpOperators ops;
    ops.failure_diag.resize(success_diag.size());
    for (std::size_t l = 0; l < success_diag.size(); ++l) {
        double s = success_diag[l];
        if (!(s >= 0.0) || s > 1.0 + kOpTol) {
            throw DomainError("OSBP success entry " + std::to_string(l) + " = " + std::to_string(s) +
                              " is outside [0, 1]");
        }
        s = std::min(s, 1.0);
        success_diag[l] = s;
        ops.failure_diag[l] = std::sqrt(std::max(0.0, 1.0 - s * s));
    }
    ops.success_diag = std::move(success_diag);
    ops.p_success = std::clamp(p_success, 0.0, 1.0);
    return ops;
}

}  // namespace

double OsbpOperators::completeness_error() const {
    double worst = 0.0;
    for (std::size_t l = 0; l < success_diag.size(); ++l) {
        double s = success_diag[l];
        double f = failure_diag[l];
        worst = std::max(worst, std::abs(s * s + f * f - 1.0));
    }
    return worst;
}

GhzPhaseState apply_dephasing(const GhzPhaseState& state, double theta) {
    return state.with_phase(state.phase() + state.parties() * theta);
}

OsbpOperators build_osbp(const TwoParamQutrit& params) {
    params.validate();
    double sa = std::sin(params.alpha);
    double ca = std::cos(params.alpha);
    // cos(pi/2) rounds to ~6e-17 rather than zero.
    double cot = std::abs(ca) < 1e-15 ? 0.0 : ca / sa;
    double sec = 1.0 / std::cos(params.beta);
    // cot(alpha) vanishes at alpha = pi/2, which also covers beta = 0.
    double s0 = cot == 0.0 ? 0.0 : cot * sec;
    double s1 = cot == 0.0 ? 0.0 : cot / std::sin(params.beta);
    if (s0 > 1.0 + kOpTol || s1 > 1.0 + kOpTol) {
        throw DomainError("parameters violate sin(a)cos(b) >= sin(a)sin(b) >= cos(a)");
    }
    return complete({s0, s1, 1.0}, 3.0 * ca * ca);
}

OsbpOperators build_osbp(std::span<const double> source_amps) {
    if (source_amps.size() < 2) {
        throw DomainError("OSBP needs dimension >= 2");
    }
    double smallest = std::numeric_limits<double>::infinity();
    for (double amp : source_amps) {
        if (!(amp >= 0.0)) {
            throw DomainError("source amplitudes must be non-negative");
        }
        smallest = std::min(smallest, amp);
    }
    std::vector<double> s(source_amps.size());
    for (std::size_t l = 0; l < s.size(); ++l) {
        // An unpopulated level carries no weight; 1 keeps M_f off it.
        s[l] = source_amps[l] > 0.0 ? smallest / source_amps[l] : 1.0;
    }
    double d = static_cast<double>(s.size());
    return complete(std::move(s), d * smallest * smallest);
}

double osbp_success_probability(std::span<const double> source_amps, const OsbpOperators& ops) {
    if (source_amps.size() != ops.success_diag.size()) {
        throw DomainError("operator and state dimensions differ");
    }
    double p = 0.0;
    for (std::size_t l = 0; l < source_amps.size(); ++l) {
        double x = source_amps[l] * ops.success_diag[l];
        p += x * x;
    }
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> failure_branch_amps(std::span<const double> source_amps, const OsbpOperators& ops) {
    if (source_amps.size() != ops.failure_diag.size()) {
        throw DomainError("operator and state dimensions differ");
    }
    std::vector<double> out(source_amps.size());
    double norm = 0.0;
    for (std::size_t l = 0; l < out.size(); ++l) {
        out[l] = source_amps[l] * ops.failure_diag[l];
        norm += out[l] * out[l];
    }
    if (!(norm > 1e-300)) {
        throw DomainError("failure branch has zero probability");
    }
    norm = std::sqrt(norm);
    for (double& x : out) {
        x /= norm;
    }
    return out;
}

double failure_amplitude(const TwoParamQutrit& params) {
    params.validate();
    double sa2 = std::pow(std::sin(params.alpha), 2);
    double ca2 = std::pow(std::cos(params.alpha), 2);
    double cb2 = std::pow(std::cos(params.beta), 2);
    double pf = 1.0 - 3.0 * ca2;
    if (!(pf > 1e-15)) {
        throw DomainError("failure branch has zero probability (p_s = 1)");
    }
    double num = std::max(0.0, sa2 * cb2 - ca2);
    return std::clamp(std::sqrt(num / pf), 0.0, 1.0);
}

BranchOutcome osbp_branch(const GhzPhaseState& state, const OsbpOperators& ops, double u) {
    if (state.dim() != static_cast<int>(ops.success_diag.size())) {
        throw DomainError("operator and state dimensions differ");
    }
    if (u < ops.p_success) {
        return BranchOutcome{BranchTag::Success, GhzPhaseState::ghz(state.dim(), state.parties(), state.phase()),
                             std::nullopt};
    }
    auto amps = failure_branch_amps(state.amps(), ops);
    // The failure branch of a full OSBP lives on levels {0, 1}.
    for (std::size_t l = 2; l < amps.size(); ++l) {
        if (amps[l] > 1e-12) {
            throw DomainError("failure branch spans more than two levels");
        }
    }
    return BranchOutcome{BranchTag::Failure, std::nullopt,
                         FailureBranchState(std::clamp(amps[0], 0.0, 1.0), state.phase())};
}

double vidal_conversion_bound(std::span<const double> source_amps, std::span<const double> target_amps) {
    if (source_amps.size() != target_amps.size()) {
        throw DomainError("source and target dimensions differ");
    }
    const std::size_t d = source_amps.size();
    double best = 1.0;
    double src_tail = 0.0;
    double tgt_tail = 0.0;
    for (std::size_t j = d; j-- > 0;) {
        src_tail += source_amps[j] * source_amps[j];
        tgt_tail += target_amps[j] * target_amps[j];
        if (tgt_tail <= 0.0) {
            continue;  // zero target tail: skipped or +inf, never the minimum
        }
        best = std::min(best, src_tail / tgt_tail);
    }
    return std::clamp(best, 0.0, 1.0);
}

}  // namespace mend
