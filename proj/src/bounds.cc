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

#include "mend/bounds.h"

#include <cmath>
#include <string>
#include <vector>

#include "mend/channel_osbp.h"
#include "mend/errors.h"

namespace mend {

double quantum_fisher_information(const TwoParamQutrit& params, int parties) {
    params.validate();
    if (parties < 1) {
        throw DomainError("number of parties must be positive");
    }
    double sa2 = std::pow(std::sin(params.alpha), 2);
    double sb2 = std::pow(std::sin(params.beta), 2);
    double ca2 = std::pow(std::cos(params.alpha), 2);
    double first = sa2 * sb2 + 4.0 * ca2;
    double mean = sa2 * sb2 + 2.0 * ca2;
    double n = parties;
    return std::max(0.0, 4.0 * n * n * (first - mean * mean));
}

double gaussian_dephasing_floor(double x) {
    if (!(x >= 0.0)) {
        throw DomainError("variance must be non-negative");
    }
    double e_half = std::exp(x / 2.0);
    double e_one = std::exp(x);
    double root = std::sqrt(8.0 * std::exp(3.0 * x) + std::pow((1.0 + e_half) * (1.0 + e_one), 2));
    // expm1 keeps the small-x prefactor accurate.
    return std::exp(-2.0 * x) / 6.0 * std::expm1(x / 2.0) * (1.0 + e_half + e_one + std::exp(1.5 * x) + root);
}

double van_trees_distance_floor(double k, double qfi_per_copy) {
    if (!(qfi_per_copy > 0.0)) {
        throw DomainError("Fisher information per copy must be positive, got " + std::to_string(qfi_per_copy));
    }
    if (!(k >= 1.0)) {
        throw DomainError("the floor needs k >= 1");
    }
    return gaussian_dephasing_floor(1.0 / (k * qfi_per_copy));
}

double van_trees_crossing(double target_distance, double qfi_per_copy) {
    if (!(target_distance > 0.0)) {
        throw DomainError("target distance must be positive");
    }
    double lo = 1.0;
    if (van_trees_distance_floor(lo, qfi_per_copy) <= target_distance) {
        return lo;
    }
    double hi = 2.0;
    while (van_trees_distance_floor(hi, qfi_per_copy) > target_distance) {
        hi *= 2.0;
        if (hi > 1e12) {
            throw DomainError("floor does not reach the target distance");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (van_trees_distance_floor(mid, qfi_per_copy) > target_distance) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double distillation_rate(std::span<const double> source_amps) {
    if (source_amps.size() < 2) {
        throw DomainError("distillation rate needs dimension >= 2");
    }
    double log_d = std::log(static_cast<double>(source_amps.size()));
    double entropy = 0.0;
    for (double amp : source_amps) {
        double lambda = amp * amp;
        if (lambda > 0.0) {
            entropy -= lambda * std::log(lambda);
        }
    }
    return entropy / log_d;
}

YieldComparison yield_comparison(double k, double p_success, double k_e_naive, double k_e_optimal) {
    if (!(k_e_naive >= 0.0 && k_e_naive <= k && k_e_optimal >= 0.0 && k_e_optimal <= k)) {
        throw DomainError("estimation copies must lie in [0, k]");
    }
    return {k * p_success, (k - k_e_naive) * p_success, (k - k_e_optimal) * p_success};
}

BoundReport::BoundReport(const TwoParamQutrit& params)
    : qfi_per_copy_(quantum_fisher_information(params, 1)),
      distillation_rate_(0.0),
      vidal_rate_(0.0) {
    auto amps = params.amplitudes();
    distillation_rate_ = mend::distillation_rate(amps);
    std::vector<double> ghz(3, 1.0 / std::sqrt(3.0));
    vidal_rate_ = vidal_conversion_bound(amps, ghz);
}

double BoundReport::sigma_sq(int k) const {
    if (k < 1) {
        throw DomainError("sigma^2 needs k >= 1");
    }
    if (!(qfi_per_copy_ > 1e-12)) {
        throw DomainError("state carries no phase information");
    }
    return 1.0 / (k * qfi_per_copy_);
}

double BoundReport::distance_floor(int k) const { return van_trees_distance_floor(k, qfi_per_copy_); }

bool BoundReport::approximation_regime(int k) const { return std::sqrt(sigma_sq(k)) > kPi / 4; }

}  // namespace mend
