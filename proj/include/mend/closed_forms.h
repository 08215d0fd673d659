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

#ifndef MEND_CLOSED_FORMS_H
#define MEND_CLOSED_FORMS_H

#include <vector>

namespace mend {

/// Outcome of k non-adaptive parity measurements: m "even" results out of k.
struct NoUpdateOutcome {
    int k = 1;
    int m = 0;

    void validate() const;
};

/// Binomial coefficient as a double. Exact integer arithmetic for n <= 20,
/// log-gamma above.
double binomial(int n, int r);

/// Flat-prior average distance after one parity measurement:
/// (1/6)(1 + sqrt(9 + 8a^2(1-a^2) - 16a sqrt(1-a^2))).
double single_measurement_distance(double a);

/// Flat-prior probability of m even outcomes in k fixed-basis parity measurements.
double no_update_outcome_probability(const NoUpdateOutcome& outcome, double a);

struct NoUpdateResult {
    std::vector<double> estimates;      // per m = 0..k: pi for m < k/2, else 0
    std::vector<double> probabilities;  // p(m)
    std::vector<double> distances;      // distance of the corrected state given m
    double average_distance = 0.0;
};

/// Per-outcome estimator and outcome-averaged distance for the fixed strategy
/// with a flat prior, evaluated from binomial expansions of the posterior.
NoUpdateResult no_update_estimator_and_distance(int k, double a);

}  // namespace mend

#endif  // MEND_CLOSED_FORMS_H
