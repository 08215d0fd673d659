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

#ifndef MEND_CLI_CONFIG_H
#define MEND_CLI_CONFIG_H

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mend/integrated_osbp.h"
#include "mend/runner.h"

namespace mend::cli {

/// Raw key/value settings from one configuration layer (file or command line).
/// Values stay textual until resolved so that "pi/4" style input works everywhere.
class Settings {
  public:
    /// Sets a key; unknown keys raise ConfigError. Setting any of the probe-source
    /// keys (a, alpha, alpha_cos2) clears the other two.
    void set(const std::string& key, const std::string& value);

    std::optional<std::string> get(const std::string& key) const;
    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    /// Layers `over` on top of this: its keys win.
    Settings merged_with(const Settings& over) const;

  private:
    std::map<std::string, std::string> values_;
};

/// Every accepted key, in a fixed order.
const std::vector<std::string>& known_keys();

/// Parses a JSON object. Values may be numbers or strings; anything else, and
/// any unknown key, is a ConfigError.
Settings parse_config_text(const std::string& json_text);
Settings load_config_file(const std::filesystem::path& path);

double get_real(const Settings& s, const std::string& key, double fallback);
long long get_integer(const Settings& s, const std::string& key, long long fallback);

/// Probe source from alpha / alpha_cos2 / beta, or from a direct `a`.
ProbeSource probe_source_from(const Settings& s, const ProbeSource& fallback);
TwoParamQutrit vendor_params_from(const Settings& s, const TwoParamQutrit& fallback);
StrategySpec strategy_from(const Settings& s, const StrategySpec& fallback);
TrialMode mode_from(const Settings& s, TrialMode fallback);

/// Full trial configuration; keys absent from `s` keep the value in `defaults`.
TrialConfig trial_config_from(const Settings& s, const TrialConfig& defaults);
IntegratedConfig integrated_config_from(const Settings& s, const IntegratedConfig& defaults);

}  // namespace mend::cli

#endif  // MEND_CLI_CONFIG_H
