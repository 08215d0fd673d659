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

#ifndef MEND_ERRORS_H
#define MEND_ERRORS_H

#include <stdexcept>
#include <string>

namespace mend {

/// A parameter lies outside the physical or mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Bayes update with an outcome that has (numerically) zero probability under the prior.
class ZeroEvidenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Exact enumeration would exceed the configured work budget.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-facing configuration (config file, overrides, output specs).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace mend

#endif  // MEND_ERRORS_H
