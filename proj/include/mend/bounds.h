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

#ifndef MEND_BOUNDS_H
#define MEND_BOUNDS_H

#include <span>

#include "mend/phase_space.h"

namespace mend {

/// QFI of the two-parameter qutrit w.r.t. theta for N parties:
/// 4N^2 [sin^2a sin^2b + 4cos^2a - (sin^2a sin^2b + 2cos^2a)^2].
double quantum_fisher_information(const TwoParamQutrit& params, int parties);

/// Trace-distance floor after k copies from the Gaussian van Trees argument,
/// with x = N^2 sigma^2 = 1 / (k * qfi_per_copy) and qfi_per_copy the QFI at N = 1.
double van_trees_distance_floor(double k, double qfi_per_copy);

/// The floor as a function of x = N^2 sigma^2 directly.
double gaussian_dephasing_floor(double x);

/// Smallest continuous k at which the floor reaches the target distance.
double van_trees_crossing(double target_distance, double qfi_per_copy);

/// Entropy of the squared amplitudes in base d (0 log 0 = 0).
double distillation_rate(std::span<const double> source_amps);

struct YieldComparison {
    double failure_branch_yield = 0.0;  // k p_s
    double naive_yield = 0.0;           // (k - k_e_naive) p_s
    double optimal_naive_yield = 0.0;   // (k - k_e_optimal) p_s
};

YieldComparison yield_comparison(double k, double p_success, double k_e_naive, double k_e_optimal);

/// Benchmark quantities for one vendor parameter choice.
class BoundReport {
  public:
    explicit BoundReport(const TwoParamQutrit& params);

    double qfi_per_copy() const { return qfi_per_copy_; }
    double distillation_rate() const { return distillation_rate_; }
    double vidal_rate() const { return vidal_rate_; }

    /// N^2 sigma^2 after k copies (collective-phase variance).
    double sigma_sq(int k) const;
    double distance_floor(int k) const;
    /// The Gaussian replacement of the posterior is crude while sigma > pi/4.
    bool approximation_regime(int k) const;

  private:
    double qfi_per_copy_;
    double distillation_rate_;
    double vidal_rate_;
};

}  // namespace mend

#endif  // MEND_BOUNDS_H
