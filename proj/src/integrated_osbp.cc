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

#include <algorithm>
#include <cmath>
#include <random>

#include "mend/errors.h"
#include "mend/parallel.h"
#include "mend/runner.h"

namespace mend {

namespace {

std::vector<double> success_branch_amps(std::span<const double> amps, const OsbpOperators& ops) {
    std::vector<double> out(amps.size());
    double norm = 0.0;
    for (std::size_t l = 0; l < amps.size(); ++l) {
        out[l] = amps[l] * ops.success_diag[l];
        norm += out[l] * out[l];
    }
    if (!(norm > 0.0)) {
        throw DomainError("success branch has zero probability");
    }
    norm = std::sqrt(norm);
    for (double& x : out) {
        x /= norm;
    }
    return out;
}

double criterion_from_moments(std::span<const Complex> moments, double estimate, std::span<const double> b) {
    const int d = static_cast<int>(b.size());
    double value = 0.0;
    for (int j = 0; j < d; ++j) {
        for (int l = 0; l < d; ++l) {
            int n = j - l;
            Complex m = n >= 0 ? moments[n] : std::conj(moments[-n]);
            value += b[j] * b[l] * std::real(std::polar(1.0, -n * estimate) * m);
        }
    }
    return std::clamp(value / d, 0.0, 1.0);
}

double true_fidelity(std::span<const double> b, double residual_phase) {
    Complex overlap = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        overlap += b[j] * std::polar(1.0, static_cast<double>(j) * residual_phase);
    }
    return std::norm(overlap) / static_cast<double>(b.size());
}

}  // namespace

OsbpOperators averaged_success_operator(const PhaseDistribution& posterior, double /*estimate*/,
                                        const TwoParamQutrit& params) {
    // The diagonal family commutes with the correction, so only |M_1| enters.
    double weight = std::clamp(std::abs(circular_moment(posterior, 1)), 0.0, 1.0);
    OsbpOperators full = build_osbp(params);
    std::vector<double> s(full.success_diag.size());
    double largest = 0.0;
    for (std::size_t l = 0; l < s.size(); ++l) {
        s[l] = (1.0 - weight) + weight * full.success_diag[l];
        largest = std::max(largest, s[l]);
    }
    if (largest > 1.0) {
        for (double& x : s) {
            x /= largest;
        }
    }
    OsbpOperators ops;
    ops.failure_diag.resize(s.size());
    for (std::size_t l = 0; l < s.size(); ++l) {
        ops.failure_diag[l] = std::sqrt(std::max(0.0, 1.0 - s[l] * s[l]));
    }
    ops.success_diag = std::move(s);
    ops.p_success = osbp_success_probability(params.amplitudes(), ops);
    return ops;
}

double storage_criterion_value(const PhaseDistribution& posterior, double estimate, const OsbpOperators& ops,
                               const TwoParamQutrit& params) {
    auto amps = params.amplitudes();
    if (ops.success_diag.size() != amps.size()) {
        throw DomainError("operator and state dimensions differ");
    }
    auto b = success_branch_amps(amps, ops);
    auto moments = circular_moments(posterior, static_cast<int>(b.size()) - 1);
    return criterion_from_moments(moments, estimate, b);
}

bool storage_criterion(const PhaseDistribution& posterior, double estimate, const OsbpOperators& ops,
                       const TwoParamQutrit& params, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw DomainError("epsilon must lie in (0, 1]");
    }
    return storage_criterion_value(posterior, estimate, ops, params) >= 1.0 - epsilon;
}

void IntegratedConfig::validate() const {
    params.validate();
    if (copies < 0) {
        throw DomainError("number of copies must be non-negative");
    }
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw DomainError("epsilon must lie in (0, 1]");
    }
    if (parties < 2) {
        throw DomainError("at least two parties are required");
    }
    strategy.validate();
    PhaseGrid::get(grid_size);
}

IntegratedResult run_integrated(const IntegratedConfig& cfg, double true_phi, std::uint64_t seed,
                                std::optional<PhaseDistribution> prior) {
    cfg.validate();
    true_phi = wrap_phase(true_phi);
    if (prior && prior->size() != cfg.grid_size) {
        throw DomainError("prior grid size differs from the configured grid size");
    }
    std::mt19937_64 engine(seed);
    auto uniform = [&engine]() { return uniform01(engine()); };

    PhaseTracker tracker(prior ? *prior : PhaseDistribution::flat(cfg.grid_size));
    const auto amps = cfg.params.amplitudes();

    RunRecord record;
    std::vector<StoredCopy> stored;
    record.estimation_distances.push_back(tracker.distance());

    for (int i = 0; i < cfg.copies; ++i) {
        const double estimate = tracker.estimate();
        OsbpOperators ops = averaged_success_operator(tracker.posterior(), estimate, cfg.params);
        CopyEntry entry;
        entry.copy_index = i;
        if (uniform() < ops.p_success) {
            ++record.success_count;
            entry.kind = CopyKind::Success;
            auto b = success_branch_amps(amps, ops);
            double value = criterion_from_moments(tracker.moments(), estimate, b);
            if (value >= 1.0 - cfg.epsilon) {
                entry.stored = true;
                stored.push_back({i, ops.success_diag, estimate, value, 0.0, false, 0.0});
            } else {
                ProbeModel model = ProbeModel::qutrit_mub(b);
                double nu = next_mub_measurement(cfg.strategy, tracker.rounds(), estimate).nu;
                entry.measured = true;
                entry.offset = nu;
                entry.outcome = model.sample(true_phi, nu, uniform());
                tracker.observe(model, entry.outcome, nu);
            }
        } else {
            ++record.failure_count;
            entry.kind = CopyKind::Failure;
            // s_2 = 1 throughout, so the failure branch stays on levels {0, 1}.
            double a = std::clamp(failure_branch_amps(amps, ops)[0], 0.0, 1.0);
            ProbeModel model = ProbeModel::parity(a);
            double chi = next_measurement(cfg.strategy, tracker.rounds(), estimate).chi;
            entry.measured = true;
            entry.offset = chi;
            entry.outcome = model.sample(true_phi, chi, uniform());
            tracker.observe(model, entry.outcome, chi);
        }
        if (entry.measured) {
            record.estimation_distances.push_back(tracker.distance());
        }
        entry.moment_modulus = tracker.moment_modulus();
        entry.estimate = tracker.estimate();
        entry.distance = record.estimation_distances.back();
        record.entries.push_back(entry);
    }

    // Stored copies are re-corrected by the final estimate and re-checked.
    const double final_estimate = tracker.estimate();
    for (auto& copy : stored) {
        OsbpOperators ops;
        ops.success_diag = copy.success_diag;
        auto b = success_branch_amps(amps, ops);
        copy.final_criterion = criterion_from_moments(tracker.moments(), final_estimate, b);
        copy.passes_final = copy.final_criterion >= 1.0 - cfg.epsilon;
        copy.true_fidelity = true_fidelity(b, true_phi - final_estimate);
    }
    record.final_distance = record.estimation_distances.back();

    IntegratedResult result{IntegratedState{tracker.posterior(), final_estimate, std::move(stored), cfg.copies},
                            std::move(record)};
    return result;
}

IntegratedSummary simulate_integrated(const IntegratedConfig& cfg, int runs, std::uint64_t master_seed,
                                      int threads) {
    cfg.validate();
    if (runs < 1) {
        throw DomainError("at least one run is required");
    }
    std::vector<std::optional<IntegratedResult>> results(runs);
    parallel_for(runs, resolve_threads(threads), [&](int r) {
        TrialDraw draw = draw_trial(master_seed, cfg.parties, r);
        results[r] = run_integrated(cfg, draw.true_phi, draw.seed);
    });

    IntegratedSummary summary;
    summary.runs = runs;
    const int k = cfg.copies;
    summary.stored_fraction.assign(k, 0.0);
    summary.success_fraction.assign(k, 0.0);
    summary.mean_distance.assign(k, 0.0);
    summary.distance_stderr.assign(k, 0.0);
    std::vector<double> m2(k, 0.0);
    long long first = 0, second = 0, passing = 0;
    double fidelity = 0.0;
    for (int r = 0; r < runs; ++r) {
        const auto& res = *results[r];
        for (const auto& e : res.record.entries) {
            int i = e.copy_index;
            summary.stored_fraction[i] += e.stored ? 1.0 : 0.0;
            summary.success_fraction[i] += e.kind == CopyKind::Success ? 1.0 : 0.0;
            double delta = e.distance - summary.mean_distance[i];
            summary.mean_distance[i] += delta / (r + 1);
            m2[i] += delta * (e.distance - summary.mean_distance[i]);
            if (e.stored) {
                (2 * i < k ? first : second) += 1;
            }
        }
        for (const auto& copy : res.state.stored) {
            passing += copy.passes_final ? 1 : 0;
            fidelity += copy.true_fidelity;
        }
    }
    for (int i = 0; i < k; ++i) {
        summary.stored_fraction[i] /= runs;
        summary.success_fraction[i] /= runs;
        summary.distance_stderr[i] = runs > 1 ? std::sqrt(m2[i] / (runs - 1) / runs) : 0.0;
    }
    const int first_len = (k + 1) / 2;
    const int second_len = k - first_len;
    summary.stored_total = first + second;
    summary.stored_first_half = first_len > 0 ? static_cast<double>(first) / (static_cast<double>(first_len) * runs) : 0.0;
    summary.stored_second_half =
        second_len > 0 ? static_cast<double>(second) / (static_cast<double>(second_len) * runs) : 0.0;
    if (summary.stored_total > 0) {
        summary.final_pass_fraction = static_cast<double>(passing) / static_cast<double>(summary.stored_total);
        summary.mean_stored_fidelity = fidelity / static_cast<double>(summary.stored_total);
    }
    return summary;
}

}  // namespace mend
