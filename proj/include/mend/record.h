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

#ifndef MEND_RECORD_H
#define MEND_RECORD_H

#include <vector>

namespace mend {

enum class CopyKind { Success, Failure, Received };

const char* to_string(CopyKind kind);

/// What happened to one distributed copy.
struct CopyEntry {
    int copy_index = 0;
    CopyKind kind = CopyKind::Received;
    bool measured = false;
    bool stored = false;
    int outcome = -1;           // -1 when the copy was not measured
    double offset = 0.0;        // chi (parity) or nu (DFT basis) of the measurement
    double moment_modulus = 0;  // |M_1| of the posterior after this copy
    double estimate = 0.0;      // running estimate after this copy
    double distance = 0.0;      // corrected success-state distance after this copy
};

/// Per-copy log of one trial.
///
/// estimation_distances[j] is the corrected-state distance after j estimation
/// updates (j = 0 is the prior), which is what the distance-vs-copies curves use.
struct RunRecord {
    std::vector<CopyEntry> entries;
    std::vector<double> estimation_distances;
    double final_distance = 0.0;
    int success_count = 0;
    int failure_count = 0;
};

}  // namespace mend

#endif  // MEND_RECORD_H
