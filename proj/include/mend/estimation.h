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

#ifndef MEND_ESTIMATION_H
#define MEND_ESTIMATION_H

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mend/phase_space.h"

namespace mend {

enum class Parity { Even = 0, Odd = 1 };

/// Equatorial measurement on the failure-branch qubit subspace, rotated by chi
/// at the collective-phase level. chi = 0 is the {|+>, |->} basis.
struct ParityMeasurement {
    double chi = 0.0;
};

/// Discrete-Fourier basis measurement on a received qutrit, shifted by nu.
struct QutritMubMeasurement {
    double nu = 0.0;
};

enum class StrategyKind { Fixed, Alternating, Rotating, Adaptive };

/// Measurement-direction policy. Only the circular-mean estimator is supported.
struct StrategySpec {
    StrategyKind kind = StrategyKind::Adaptive;
    double rotating_step = kPi / 8;

    static StrategySpec fixed() { return {StrategyKind::Fixed, kPi / 8}; }
    static StrategySpec alternating() { return {StrategyKind::Alternating, kPi / 8}; }
    static StrategySpec rotating(double step = kPi / 8);
    static StrategySpec adaptive() { return {StrategyKind::Adaptive, kPi / 8}; }

    void validate() const;
    std::string name() const;
};

/// Parses "fixed", "alternating", "rotating" or "adaptive".
StrategyKind parse_strategy_kind(const std::string& name);

/// p(even/odd | phi) = 1/2 +- a sqrt(1-a^2) cos(phi - chi).
double parity_likelihood(Parity m, double phi, double a, double chi);

/// Outcome probability for DFT-basis outcome l on the state sum_n amps[n] e^{i n phi}|n>,
/// with the basis shifted by nu.
double mub_likelihood(int l, double phi, std::span<const double> amps, double nu);

/// mub_likelihood with the two-parameter qutrit amplitudes.
double qutrit_mub_likelihood(int l, double phi, const TwoParamQutrit& params, double nu);

/// Likelihood of a probe outcome evaluated on a grid. Both probe models share
/// this form: a low-order trigonometric polynomial in (phi - offset).
class ProbeModel {
  public:
    /// Failure-branch state with amplitude a, measured by parity.
    static ProbeModel parity(double a);
    /// Qutrit state with the given (length-3) amplitudes, measured in the DFT basis.
    static ProbeModel qutrit_mub(std::span<const double> amps);

    int outcome_count() const { return outcome_count_; }

    /// Outcome probability at a single phase.
    double likelihood(int outcome, double phi, double offset) const;

    /// Fills out[g] = likelihood(outcome, phi_g, offset).
    void likelihood_on_grid(int outcome, double offset, const PhaseGrid& grid, std::span<double> out) const;

    /// Inverse-CDF sample of the outcome at the exact phase.
    int sample(double phi, double offset, double u) const;

  private:
    // p(l | phi) = c0 + sum_n [cos_coef[l][n] cos(n x) + sin_coef[l][n] sin(n x)], x = phi - offset.
    static constexpr int kMaxHarmonic = 2;
    int outcome_count_ = 0;
    std::array<std::array<double, kMaxHarmonic>, 3> cos_coef_{};
    std::array<std::array<double, kMaxHarmonic>, 3> sin_coef_{};
    double constant_ = 0.0;
};

/// Posterior proportional to prior * likelihood; throws ZeroEvidenceError when the
/// evidence falls below 1e-300.
PhaseDistribution bayes_update(PhaseDistribution prior, std::span<const double> likelihood_on_grid);

template <typename Likelihood>
PhaseDistribution bayes_update(PhaseDistribution prior, Likelihood&& likelihood) {
    std::vector<double> values(prior.size());
    for (std::size_t g = 0; g < values.size(); ++g) {
        values[g] = likelihood(prior.angle(g));
    }
    return bayes_update(std::move(prior), std::span<const double>(values));
}

/// arg of the first circular moment in [0, 2pi); nullopt when its modulus is at
/// most 1e-12 (e.g. a flat posterior).
std::optional<double> estimate_phase(const PhaseDistribution& p);

/// estimate_phase with the flat-posterior convention of returning 0.
double estimate_phase_or_zero(const PhaseDistribution& p);

/// Same conventions from a precomputed first moment.
double estimate_from_moment(Complex first_moment);

/// Next parity direction: Fixed 0, Alternating (round mod 2) pi/2,
/// Rotating round*step, Adaptive estimate + pi/2 (all mod 2pi).
ParityMeasurement next_measurement(const StrategySpec& strategy, int round, double current_estimate);

/// Next DFT-basis shift for received qutrits: Adaptive keeps the unshifted basis in
/// round 0 and uses estimate + pi/3 afterwards; Fixed 0; Alternating
/// (round mod 2) pi/3; Rotating round*step.
QutritMubMeasurement next_mub_measurement(const StrategySpec& strategy, int round, double current_estimate);

/// Running Bayesian state of one estimation sequence: posterior, circular-mean
/// estimate and the low-order moments needed for the corrected-state distance.
class PhaseTracker {
  public:
    explicit PhaseTracker(PhaseDistribution prior);

    const PhaseDistribution& posterior() const { return posterior_; }
    double estimate() const { return estimate_; }
    double moment_modulus() const { return std::abs(moments_[1]); }
    std::span<const Complex> moments() const { return moments_; }
    int rounds() const { return rounds_; }

    /// Distance of the corrected GHZ_d success-branch state to GHZ_d (d <= 4).
    double distance(int dim = 3) const;

    /// Bayes update with one observed outcome; returns the evidence p(outcome).
    double observe(const ProbeModel& model, int outcome, double offset);

  private:
    void refresh();

    PhaseDistribution posterior_;
    std::vector<double> scratch_;
    std::vector<Complex> moments_;
    double estimate_ = 0.0;
    int rounds_ = 0;
};

}  // namespace mend

#endif  // MEND_ESTIMATION_H
