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

#include "mend/closed_forms.h"

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "mend/errors.h"
#include "mend/phase_space.h"

namespace mend {

namespace {

void check_amplitude(double a) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw DomainError("failure amplitude a must lie in [0, 1], got " + std::to_string(a));
    }
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) {
            s += x;
        }
        return s;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

// E[cos^n(phi)] under the flat prior: C(n, n/2) / 2^n for even n, 0 for odd n.
double flat_cos_power(int n) {
    if (n % 2 != 0) {
        return 0.0;
    }
    return binomial(n, n / 2) * std::ldexp(1.0, -n);
}

struct BinomialSums {
    double norm = 0.0;    // sum term * E[cos^n]
    double first = 0.0;   // sum term * E[cos^n e^{i phi}]
    double second = 0.0;  // sum term * E[cos^n e^{2 i phi}]
};

// Expands (1/2 + c cos)^m (1/2 - c cos)^{k-m} = 2^{-k} sum_n q_n (2c cos)^n, where q_n are the
// coefficients of (1 + x)^m (1 - x)^{k-m}, and integrates against the flat prior. The q_n are built
// by integer convolution so the sign cancellation happens exactly; the imaginary parts vanish by
// symmetry phi -> -phi.
BinomialSums expand(int k, int m, double a) {
    double two_c = 2.0 * a * std::sqrt(1.0 - a * a);
    std::vector<double> q{1.0};
    for (int step = 0; step < k; ++step) {
        double sign = step < m ? 1.0 : -1.0;
        q.push_back(0.0);
        for (std::size_t n = q.size() - 1; n > 0; --n) {
            q[n] += sign * q[n - 1];
        }
    }
    std::vector<double> t0;
    std::vector<double> t1;
    std::vector<double> t2;
    double power = 1.0;
    for (int n = 0; n <= k; ++n) {
        double term = q[n] * power;
        power *= two_c;
        double e0 = flat_cos_power(n);
        double e1 = flat_cos_power(n + 1);
        double e2 = 2.0 * flat_cos_power(n + 2) - e0;
        if (e0 != 0.0) t0.push_back(term * e0);
        if (e1 != 0.0) t1.push_back(term * e1);
        if (e2 != 0.0) t2.push_back(term * e2);
    }
    return {pairwise_sum(t0), pairwise_sum(t1), pairwise_sum(t2)};
}

}  // namespace

void NoUpdateOutcome::validate() const {
    if (k < 0 || m < 0 || m > k) {
        throw DomainError("outcome needs 0 <= m <= k");
    }
}

double binomial(int n, int r) {
    if (r < 0 || r > n || n < 0) {
        return 0.0;
    }
    if (n <= 20) {
        std::uint64_t value = 1;
        int rr = r < n - r ? r : n - r;
        for (int i = 1; i <= rr; ++i) {
            value = value * static_cast<std::uint64_t>(n - rr + i) / static_cast<std::uint64_t>(i);
        }
        return static_cast<double>(value);
    }
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0)));
}

double single_measurement_distance(double a) {
    check_amplitude(a);
    double b = std::sqrt(1.0 - a * a);
    double inner = 9.0 + 8.0 * a * a * (1.0 - a * a) - 16.0 * a * b;
    return (1.0 + std::sqrt(std::max(0.0, inner))) / 6.0;
}

double no_update_outcome_probability(const NoUpdateOutcome& outcome, double a) {
    outcome.validate();
    check_amplitude(a);
    BinomialSums sums = expand(outcome.k, outcome.m, a);
    return binomial(outcome.k, outcome.m) * std::ldexp(1.0, -outcome.k) * sums.norm;
}

NoUpdateResult no_update_estimator_and_distance(int k, double a) {
    if (k < 0) {
        throw DomainError("number of measured copies must be non-negative");
    }
    check_amplitude(a);
    NoUpdateResult result;
    for (int m = 0; m <= k; ++m) {
        BinomialSums sums = expand(k, m, a);
        double p = binomial(k, m) * std::ldexp(1.0, -k) * sums.norm;
        double estimate = 2 * m < k ? kPi : 0.0;
        double distance = 2.0 / 3.0;
        if (sums.norm > 0.0) {
            std::vector<Complex> moments = {1.0, sums.first / sums.norm, sums.second / sums.norm};
            distance = distance_to_ghz(moments, estimate, 3);
        }
        result.estimates.push_back(estimate);
        result.probabilities.push_back(p);
        result.distances.push_back(distance);
    }
    std::vector<double> weighted(result.distances.size());
    for (std::size_t m = 0; m < weighted.size(); ++m) {
        weighted[m] = result.probabilities[m] * result.distances[m];
    }
    result.average_distance = pairwise_sum(weighted);
    return result;
}

}  // namespace mend
