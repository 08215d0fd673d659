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

#include "mend/estimation.h"

#include <algorithm>
#include <cmath>

#include "mend/errors.h"

namespace mend {

StrategySpec StrategySpec::rotating(double step) {
    StrategySpec s{StrategyKind::Rotating, step};
    s.validate();
    return s;
}

void StrategySpec::validate() const {
    if (kind == StrategyKind::Rotating && !(rotating_step > 0.0 && rotating_step < kTwoPi)) {
        throw DomainError("rotating step must lie in (0, 2pi)");
    }
}

std::string StrategySpec::name() const {
    switch (kind) {
        case StrategyKind::Fixed:
            return "fixed";
        case StrategyKind::Alternating:
            return "alternating";
        case StrategyKind::Rotating:
            return "rotating";
        case StrategyKind::Adaptive:
            return "adaptive";
    }
    return "unknown";
}

StrategyKind parse_strategy_kind(const std::string& name) {
    if (name == "fixed") return StrategyKind::Fixed;
    if (name == "alternating") return StrategyKind::Alternating;
    if (name == "rotating") return StrategyKind::Rotating;
    if (name == "adaptive") return StrategyKind::Adaptive;
    throw ConfigError("unknown strategy '" + name + "' (expected fixed, alternating, rotating or adaptive)");
}

double parity_likelihood(Parity m, double phi, double a, double chi) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw DomainError("failure amplitude a must lie in [0, 1]");
    }
    double c = a * std::sqrt(1.0 - a * a);
    double sign = m == Parity::Even ? 1.0 : -1.0;
    return std::max(0.0, 0.5 + sign * c * std::cos(phi - chi));
}

double mub_likelihood(int l, double phi, std::span<const double> amps, double nu) {
    return ProbeModel::qutrit_mub(amps).likelihood(l, phi, nu);
}

double qutrit_mub_likelihood(int l, double phi, const TwoParamQutrit& params, double nu) {
    params.validate();
    auto amps = params.amplitudes();
    return mub_likelihood(l, phi, amps, nu);
}

ProbeModel ProbeModel::parity(double a) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw DomainError("failure amplitude a must lie in [0, 1]");
    }
    ProbeModel m;
    m.outcome_count_ = 2;
    m.constant_ = 0.5;
    double c = a * std::sqrt(1.0 - a * a);
    m.cos_coef_[0][0] = c;
    m.cos_coef_[1][0] = -c;
    return m;
}

ProbeModel ProbeModel::qutrit_mub(std::span<const double> amps) {
    if (amps.size() != 3) {
        throw DomainError("the DFT-basis model needs three amplitudes");
    }
    double norm = 0.0;
    for (double x : amps) {
        if (!(x >= 0.0)) {
            throw DomainError("amplitudes must be non-negative");
        }
        norm += x * x;
    }
    if (!(norm > 0.0)) {
        throw DomainError("amplitudes must not all vanish");
    }
    double a0 = amps[0] / std::sqrt(norm);
    double a1 = amps[1] / std::sqrt(norm);
    double a2 = amps[2] / std::sqrt(norm);
    // |<xi_l|psi>|^2 = 1/3 [1 + 2(a0a1 + a1a2) cos(x - 2pi l/3) + 2 a0a2 cos(2x - 4pi l/3)].
    ProbeModel m;
    m.outcome_count_ = 3;
    m.constant_ = 1.0 / 3.0;
    double first = 2.0 / 3.0 * (a0 * a1 + a1 * a2);
    double second = 2.0 / 3.0 * a0 * a2;
    for (int l = 0; l < 3; ++l) {
        double t1 = kTwoPi * l / 3.0;
        double t2 = 2.0 * t1;
        m.cos_coef_[l][0] = first * std::cos(t1);
        m.sin_coef_[l][0] = first * std::sin(t1);
        m.cos_coef_[l][1] = second * std::cos(t2);
        m.sin_coef_[l][1] = second * std::sin(t2);
    }
    return m;
}

double ProbeModel::likelihood(int outcome, double phi, double offset) const {
    if (outcome < 0 || outcome >= outcome_count_) {
        throw DomainError("outcome index out of range");
    }
    double x = phi - offset;
    double p = constant_;
    for (int n = 0; n < kMaxHarmonic; ++n) {
        p += cos_coef_[outcome][n] * std::cos((n + 1) * x) + sin_coef_[outcome][n] * std::sin((n + 1) * x);
    }
    return std::max(0.0, p);
}

void ProbeModel::likelihood_on_grid(int outcome, double offset, const PhaseGrid& grid, std::span<double> out) const {
    if (outcome < 0 || outcome >= outcome_count_) {
        throw DomainError("outcome index out of range");
    }
    if (out.size() != grid.size) {
        throw DomainError("output size does not match the grid");
    }
    // cos(n(phi - o)) = cos(n phi) cos(n o) + sin(n phi) sin(n o), and likewise for sin.
    std::array<double, kMaxHarmonic> cc{};
    std::array<double, kMaxHarmonic> ss{};
    for (int n = 0; n < kMaxHarmonic; ++n) {
        double co = std::cos((n + 1) * offset);
        double so = std::sin((n + 1) * offset);
        double a = cos_coef_[outcome][n];
        double b = sin_coef_[outcome][n];
        cc[n] = a * co - b * so;  // coefficient of cos(n phi)
        ss[n] = a * so + b * co;  // coefficient of sin(n phi)
    }
    const auto& c1 = grid.cos_table[0];
    const auto& s1 = grid.sin_table[0];
    const auto& c2 = grid.cos_table[1];
    const auto& s2 = grid.sin_table[1];
    for (std::size_t g = 0; g < grid.size; ++g) {
        double p = constant_ + cc[0] * c1[g] + ss[0] * s1[g] + cc[1] * c2[g] + ss[1] * s2[g];
        out[g] = p > 0.0 ? p : 0.0;
    }
}

int ProbeModel::sample(double phi, double offset, double u) const {
    double cumulative = 0.0;
    for (int l = 0; l + 1 < outcome_count_; ++l) {
        cumulative += likelihood(l, phi, offset);
        if (u < cumulative) {
            return l;
        }
    }
    return outcome_count_ - 1;
}

PhaseDistribution bayes_update(PhaseDistribution prior, std::span<const double> likelihood_on_grid) {
    for (double x : likelihood_on_grid) {
        if (!(x >= 0.0)) {
            throw DomainError("likelihood must be non-negative");
        }
    }
    prior.multiply_and_normalize(likelihood_on_grid);
    return prior;
}

double estimate_from_moment(Complex first_moment) {
    if (std::abs(first_moment) <= 1e-12) {
        return 0.0;
    }
    return wrap_phase(std::arg(first_moment));
}

std::optional<double> estimate_phase(const PhaseDistribution& p) {
    Complex m1 = circular_moment(p, 1);
    if (std::abs(m1) <= 1e-12) {
        return std::nullopt;
    }
    return wrap_phase(std::arg(m1));
}

double estimate_phase_or_zero(const PhaseDistribution& p) { return estimate_phase(p).value_or(0.0); }

ParityMeasurement next_measurement(const StrategySpec& strategy, int round, double current_estimate) {
    if (round < 0) {
        throw DomainError("round must be non-negative");
    }
    switch (strategy.kind) {
        case StrategyKind::Fixed:
            return {0.0};
        case StrategyKind::Alternating:
            return {(round % 2) * kPi / 2};
        case StrategyKind::Rotating:
            return {wrap_phase(round * strategy.rotating_step)};
        case StrategyKind::Adaptive:
            return {wrap_phase(current_estimate + kPi / 2)};
    }
    return {0.0};
}

QutritMubMeasurement next_mub_measurement(const StrategySpec& strategy, int round, double current_estimate) {
    if (round < 0) {
        throw DomainError("round must be non-negative");
    }
    switch (strategy.kind) {
        case StrategyKind::Fixed:
            return {0.0};
        case StrategyKind::Alternating:
            return {(round % 2) * kPi / 3};
        case StrategyKind::Rotating:
            return {wrap_phase(round * strategy.rotating_step)};
        case StrategyKind::Adaptive:
            return {round == 0 ? 0.0 : wrap_phase(current_estimate + kPi / 3)};
    }
    return {0.0};
}

PhaseTracker::PhaseTracker(PhaseDistribution prior) : posterior_(std::move(prior)), scratch_(posterior_.size()) {
    refresh();
}

void PhaseTracker::refresh() {
    moments_ = circular_moments(posterior_, PhaseGrid::kTabulatedOrders);
    estimate_ = estimate_from_moment(moments_[1]);
}

double PhaseTracker::distance(int dim) const {
    if (dim < 2 || dim > PhaseGrid::kTabulatedOrders + 1) {
        throw DomainError("tracked moments support dimensions 2..4");
    }
    return distance_to_ghz(moments_, estimate_, dim);
}

double PhaseTracker::observe(const ProbeModel& model, int outcome, double offset) {
    model.likelihood_on_grid(outcome, offset, posterior_.grid(), scratch_);
    double evidence = posterior_.multiply_and_normalize(scratch_);
    ++rounds_;
    refresh();
    return evidence;
}

}  // namespace mend
