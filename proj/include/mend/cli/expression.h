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

#ifndef MEND_CLI_EXPRESSION_H
#define MEND_CLI_EXPRESSION_H

#include <string>

namespace mend::cli {

/// Evaluates a small arithmetic expression: decimal numbers, `pi`, + - * /,
/// parentheses and sqrt(...). "pi/4", "4/15" and "1/sqrt(2)" are typical inputs.
/// Throws ConfigError on malformed input or a non-finite result.
double parse_expression(const std::string& text);

}  // namespace mend::cli

#endif  // MEND_CLI_EXPRESSION_H
