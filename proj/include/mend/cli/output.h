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

#ifndef MEND_CLI_OUTPUT_H
#define MEND_CLI_OUTPUT_H

#include <filesystem>
#include <string>
#include <vector>

#include "mend/record.h"
#include "mend/runner.h"

namespace mend::cli {

struct LabeledCurve {
    std::string label;
    std::vector<CurvePoint> points;
    bool dotted = false;  // bound curves
};

/// 12 significant digits, "%.12g".
std::string format_number(double x);

/// Long-format table with header `x,mean_distance,stderr,label`, LF line endings.
/// Throws DomainError on an empty curve list, an empty curve, or an empty label
/// (labels may not contain commas, quotes or line breaks).
std::string format_curves_csv(const std::vector<LabeledCurve>& curves);

/// Standalone SVG line chart: one polyline per curve, legend, linear axes titled
/// "copies" and "average trace distance".
std::string format_svg(const std::vector<LabeledCurve>& curves, const std::string& title = "");

/// Per-copy table of one run.
std::string format_run_record_csv(const RunRecord& record);

/// Files written together: every file goes to a temporary name first and all are
/// renamed at commit(). Uncommitted temporaries are removed on destruction, so a
/// failed command leaves no partial output.
class OutputBatch {
  public:
    explicit OutputBatch(std::filesystem::path dir);
    ~OutputBatch();
    OutputBatch(const OutputBatch&) = delete;
    OutputBatch& operator=(const OutputBatch&) = delete;

    void add(const std::string& name, const std::string& content);
    std::vector<std::filesystem::path> commit();

  private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pending_;  // (temp, final)
};

}  // namespace mend::cli

#endif  // MEND_CLI_OUTPUT_H
