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

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "mend/channel_osbp.h"
#include "mend/closed_forms.h"
#include "mend/errors.h"
#include "mend/parallel.h"

namespace mend {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class TrialRng {
  public:
    explicit TrialRng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return uniform01(engine_()); }

  private:
    std::mt19937_64 engine_;
};

PhaseDistribution initial_distribution(const TrialConfig& cfg, const std::optional<PhaseDistribution>& prior) {
    if (prior) {
        if (prior->size() != cfg.grid_size) {
            throw DomainError("prior grid size differs from the configured grid size");
        }
        return *prior;
    }
    return PhaseDistribution::flat(cfg.grid_size);
}

CopyEntry measured_entry(int index, CopyKind kind, int outcome, double offset, const PhaseTracker& tracker,
                         double distance) {
    CopyEntry e;
    e.copy_index = index;
    e.kind = kind;
    e.measured = true;
    e.outcome = outcome;
    e.offset = offset;
    e.moment_modulus = tracker.moment_modulus();
    e.estimate = tracker.estimate();
    e.distance = distance;
    return e;
}

struct TrialSummary {
    std::vector<double> distances;
    int successes = 0;
    int copies = 0;
};

std::vector<CurvePoint> aggregate(const std::vector<std::vector<double>>& per_trial) {
    std::size_t longest = 0;
    for (const auto& d : per_trial) {
        longest = std::max(longest, d.size());
    }
    std::vector<CurvePoint> curve;
    for (std::size_t x = 0; x < longest; ++x) {
        // Welford accumulation in trial order.
        long long n = 0;
        double mean = 0.0;
        double m2 = 0.0;
        for (const auto& d : per_trial) {
            if (x >= d.size()) {
                continue;
            }
            ++n;
            double delta = d[x] - mean;
            mean += delta / static_cast<double>(n);
            m2 += delta * (d[x] - mean);
        }
        // A point seen by a single trial has no spread estimate; the curve stops there.
        if (n < 2 && per_trial.size() > 1) {
            break;
        }
        double se = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        curve.push_back({static_cast<int>(x), mean, se, n});
    }
    return curve;
}

}  // namespace

const char* to_string(CopyKind kind) {
    switch (kind) {
        case CopyKind::Success:
            return "success";
        case CopyKind::Failure:
            return "failure";
        case CopyKind::Received:
            return "received";
    }
    return "unknown";
}

void TrialConfig::validate() const {
    if (const auto* params = std::get_if<TwoParamQutrit>(&source)) {
        params->validate();
    } else {
        double a = std::get<double>(source);
        if (!(a >= 0.0 && a <= 1.0)) {
            throw DomainError("failure amplitude a must lie in [0, 1]");
        }
        if (mode == TrialMode::NaiveReceived) {
            throw DomainError("the received-copy protocol needs vendor parameters, not a failure amplitude");
        }
    }
    if (parties < 2) {
        throw DomainError("at least two parties are required");
    }
    if (copies < 0) {
        throw DomainError("number of copies must be non-negative");
    }
    if (trials < 1) {
        throw DomainError("at least one trial is required");
    }
    strategy.validate();
    PhaseGrid::get(grid_size);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

int resolve_threads(int requested) {
    if (requested > 0) {
        return requested;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int threads_from_environment() {
    const char* value = std::getenv("MEND_SIM_THREADS");
    if (value == nullptr || *value == '\0') {
        return 0;
    }
    char* end = nullptr;
    long parsed = std::strtol(value, &end, 10);
    if (*end != '\0' || parsed < 0) {
        throw ConfigError(std::string("MEND_SIM_THREADS must be a non-negative integer, got '") + value + "'");
    }
    return static_cast<int>(parsed);
}

double probe_failure_amplitude(const ProbeSource& source) {
    if (const auto* params = std::get_if<TwoParamQutrit>(&source)) {
        return failure_amplitude(*params);
    }
    return std::get<double>(source);
}

RunRecord run_failure_branch_trial(const TrialConfig& cfg, double true_phi, std::uint64_t seed,
                                   std::optional<PhaseDistribution> prior) {
    cfg.validate();
    if (cfg.mode != TrialMode::FailureBranch) {
        throw DomainError("run_failure_branch_trial needs the failure-branch mode");
    }
    true_phi = wrap_phase(true_phi);
    TrialRng rng(seed);
    PhaseTracker tracker(initial_distribution(cfg, prior));

    const auto* params = std::get_if<TwoParamQutrit>(&cfg.source);
    std::optional<GhzPhaseState> received;
    std::optional<OsbpOperators> ops;
    if (params != nullptr) {
        received = make_vendor_qutrit(*params, cfg.parties).with_phase(true_phi);
        ops = build_osbp(*params);
    }
    double direct_a = params == nullptr ? std::get<double>(cfg.source) : 0.0;

    RunRecord record;
    record.estimation_distances.push_back(tracker.distance());
    for (int i = 0; i < cfg.copies; ++i) {
        double a = direct_a;
        if (received) {
            BranchOutcome branch = osbp_branch(*received, *ops, rng.uniform());
            if (branch.tag == BranchTag::Success) {
                ++record.success_count;
                CopyEntry e;
                e.copy_index = i;
                e.kind = CopyKind::Success;
                e.moment_modulus = tracker.moment_modulus();
                e.estimate = tracker.estimate();
                e.distance = record.estimation_distances.back();
                record.entries.push_back(e);
                continue;
            }
            a = branch.failure_state->a();
        }
        ++record.failure_count;
        ProbeModel model = ProbeModel::parity(a);
        double chi = next_measurement(cfg.strategy, tracker.rounds(), tracker.estimate()).chi;
        int outcome = model.sample(true_phi, chi, rng.uniform());
        tracker.observe(model, outcome, chi);
        double distance = tracker.distance();
        record.estimation_distances.push_back(distance);
        record.entries.push_back(measured_entry(i, CopyKind::Failure, outcome, chi, tracker, distance));
    }
    record.final_distance = record.estimation_distances.back();
    return record;
}

RunRecord run_naive_trial(const TrialConfig& cfg, double true_phi, std::uint64_t seed,
                          std::optional<PhaseDistribution> prior) {
    cfg.validate();
    if (cfg.mode != TrialMode::NaiveReceived) {
        throw DomainError("run_naive_trial needs the received-copy mode");
    }
    true_phi = wrap_phase(true_phi);
    TrialRng rng(seed);
    PhaseTracker tracker(initial_distribution(cfg, prior));
    const auto& params = std::get<TwoParamQutrit>(cfg.source);
    ProbeModel model = ProbeModel::qutrit_mub(params.amplitudes());

    RunRecord record;
    record.estimation_distances.push_back(tracker.distance());
    for (int i = 0; i < cfg.copies; ++i) {
        double nu = next_mub_measurement(cfg.strategy, tracker.rounds(), tracker.estimate()).nu;
        int outcome = model.sample(true_phi, nu, rng.uniform());
        tracker.observe(model, outcome, nu);
        double distance = tracker.distance();
        record.estimation_distances.push_back(distance);
        record.entries.push_back(measured_entry(i, CopyKind::Received, outcome, nu, tracker, distance));
    }
    record.final_distance = record.estimation_distances.back();
    return record;
}

TrialDraw draw_trial(std::uint64_t master_seed, int parties, int trial) {
    auto index = static_cast<std::uint64_t>(trial);
    double theta = kTwoPi * uniform01(derive_seed(master_seed, 2 * index));
    return {wrap_phase(parties * theta), derive_seed(master_seed, 2 * index + 1)};
}

RunRecord run_trial(const TrialConfig& cfg, double true_phi, std::uint64_t seed) {
    return cfg.mode == TrialMode::FailureBranch ? run_failure_branch_trial(cfg, true_phi, seed)
                                                : run_naive_trial(cfg, true_phi, seed);
}

SimulationSummary simulate_over_prior(const TrialConfig& cfg, int threads) {
    cfg.validate();
    std::vector<TrialSummary> results(cfg.trials);
    parallel_for(cfg.trials, resolve_threads(threads), [&](int t) {
        TrialDraw draw = draw_trial(cfg.master_seed, cfg.parties, t);
        RunRecord record = run_trial(cfg, draw.true_phi, draw.seed);
        results[t] = {std::move(record.estimation_distances), record.success_count,
                      record.success_count + record.failure_count};
    });

    SimulationSummary summary;
    std::vector<std::vector<double>> distances;
    distances.reserve(results.size());
    for (auto& r : results) {
        summary.success_count += r.successes;
        summary.copies += r.copies;
        distances.push_back(std::move(r.distances));
    }
    summary.curve = aggregate(distances);
    return summary;
}

std::vector<CurvePoint> average_over_prior(const TrialConfig& cfg, int threads) {
    return simulate_over_prior(cfg, threads).curve;
}

std::vector<CurvePoint> enumerate_exact(const TrialConfig& cfg, double budget) {
    cfg.validate();
    const bool naive = cfg.mode == TrialMode::NaiveReceived;
    ProbeModel model = naive ? ProbeModel::qutrit_mub(std::get<TwoParamQutrit>(cfg.source).amplitudes())
                             : ProbeModel::parity(probe_failure_amplitude(cfg.source));
    const int branching = model.outcome_count();
    double nodes = 0.0;
    double level = 1.0;
    for (int depth = 0; depth <= cfg.copies; ++depth) {
        nodes += level;
        level *= branching;
    }
    if (nodes * static_cast<double>(cfg.grid_size) > budget) {
        throw BudgetError("exact enumeration of " + std::to_string(cfg.copies) + " copies needs " +
                          std::to_string(nodes * static_cast<double>(cfg.grid_size)) +
                          " grid cells, above the budget of " + std::to_string(budget));
    }

    std::vector<double> sums(cfg.copies + 1, 0.0);
    std::vector<double> likelihood(cfg.grid_size);

    // Depth-first over outcome sequences; `probability` is p(m_1..m_depth) under the flat prior.
    auto visit = [&](auto&& self, const PhaseTracker& tracker, double probability) -> void {
        int depth = tracker.rounds();
        sums[depth] += probability * tracker.distance();
        if (depth == cfg.copies) {
            return;
        }
        double offset = naive ? next_mub_measurement(cfg.strategy, depth, tracker.estimate()).nu
                              : next_measurement(cfg.strategy, depth, tracker.estimate()).chi;
        for (int outcome = 0; outcome < branching; ++outcome) {
            model.likelihood_on_grid(outcome, offset, tracker.posterior().grid(), likelihood);
            double evidence = 0.0;
            auto w = tracker.posterior().weights();
            for (std::size_t g = 0; g < w.size(); ++g) {
                evidence += w[g] * likelihood[g];
            }
            if (!(evidence * probability > 0.0) || evidence < 1e-300) {
                continue;
            }
            PhaseTracker child = tracker;
            child.observe(model, outcome, offset);
            self(self, child, probability * evidence);
        }
    };
    visit(visit, PhaseTracker(PhaseDistribution::flat(cfg.grid_size)), 1.0);

    std::vector<CurvePoint> curve;
    for (int x = 0; x <= cfg.copies; ++x) {
        curve.push_back({x, sums[x], 0.0});
    }
    return curve;
}

std::vector<CurvePoint> exact_fixed_curve(double a, int max_k, std::size_t grid_size) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw DomainError("failure amplitude a must lie in [0, 1]");
    }
    if (max_k < 0) {
        throw DomainError("max_k must be non-negative");
    }
    auto grid = PhaseGrid::get(grid_size);
    double c = a * std::sqrt(1.0 - a * a);
    std::vector<CurvePoint> curve;
    for (int k = 0; k <= max_k; ++k) {
        double average = 0.0;
        for (int m = 0; m <= k; ++m) {
            std::vector<double> w(grid_size);
            double z = 0.0;
            for (std::size_t g = 0; g < grid_size; ++g) {
                double even = 0.5 + c * grid->cos_table[0][g];
                double odd = 0.5 - c * grid->cos_table[0][g];
                w[g] = std::pow(even, m) * std::pow(odd, k - m) / static_cast<double>(grid_size);
                z += w[g];
            }
            if (!(z > 0.0)) {
                continue;
            }
            double p = binomial(k, m) * z;
            auto posterior = PhaseDistribution::from_weights(std::move(w));
            auto moments = circular_moments(posterior, 2);
            average += p * distance_to_ghz(moments, estimate_from_moment(moments[1]), 3);
        }
        curve.push_back({k, average, 0.0});
    }
    return curve;
}

}  // namespace mend
