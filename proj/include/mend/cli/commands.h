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

#ifndef MEND_CLI_COMMANDS_H
#define MEND_CLI_COMMANDS_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mend/bounds.h"
#include "mend/phase_space.h"

namespace mend::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitConfig = 3,
    kExitRuntime = 4,
};

/// Parses the arguments (without the program name), runs the command and
/// returns the process exit code. Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fewest received copies for which the exact average distance of the adaptive
/// DFT-basis protocol is at most `target`; nullopt if more than `max_copies`.
std::optional<int> naive_copies_needed(const TwoParamQutrit& params, int parties, double target, int max_copies);

struct CompareReport {
    int total_copies = 0;
    double target_distance = 0.0;
    double success_probability = 0.0;
    long long simulated_copies = 0;
    long long simulated_successes = 0;
    double empirical_success_fraction = 0.0;
    double binomial_sigma = 0.0;
    int naive_copies = 0;             // exact, smallest with distance <= target
    double optimal_copies = 0.0;      // floor crossing rounded to one decimal
    double optimal_copies_raw = 0.0;  // unrounded crossing
    double distillation_rate = 0.0;
    YieldComparison yields;
    double distillation_ceiling = 0.0;  // (k - optimal_copies) * rate
};

/// Yield table for k copies of the vendor state. The success fraction comes from
/// runner trials over at least `sampled_copies` copies.
CompareReport compare_report(const TwoParamQutrit& params, int parties, int k, std::uint64_t seed,
                             long long sampled_copies = 100000, int threads = 1);

std::string format_compare(const CompareReport& report);

}  // namespace mend::cli

#endif  // MEND_CLI_COMMANDS_H
