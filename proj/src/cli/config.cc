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

#include "mend/cli/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mend/cli/expression.h"
#include "mend/errors.h"

namespace mend::cli {

namespace {

const std::vector<std::string> kSourceKeys = {"a", "alpha", "alpha_cos2"};

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "a",     "alpha",     "alpha_cos2",  "beta",   "parties", "copies", "strategy",
        "rotating_step", "mode", "grid_size", "master_seed", "trials", "epsilon", "k",
    };
    return keys;
}

void Settings::set(const std::string& key, const std::string& value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
    if (std::find(kSourceKeys.begin(), kSourceKeys.end(), key) != kSourceKeys.end()) {
        for (const auto& other : kSourceKeys) {
            values_.erase(other);
        }
    }
    values_[key] = value;
}

std::optional<std::string> Settings::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Settings Settings::merged_with(const Settings& over) const {
    Settings out = *this;
    for (const auto& [key, value] : over.values_) {
        out.set(key, value);
    }
    return out;
}

Settings parse_config_text(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    Settings s;
    for (const auto& [key, value] : doc.items()) {
        if (value.is_string()) {
            s.set(key, value.get<std::string>());
        } else if (value.is_number()) {
            s.set(key, value.dump());
        } else {
            throw ConfigError("configuration key '" + key + "' must be a number or a string");
        }
    }
    return s;
}

Settings load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read configuration file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

double get_real(const Settings& s, const std::string& key, double fallback) {
    auto value = s.get(key);
    if (!value) {
        return fallback;
    }
    return parse_expression(*value);
}

long long get_integer(const Settings& s, const std::string& key, long long fallback) {
    auto value = s.get(key);
    if (!value) {
        return fallback;
    }
    double x = parse_expression(*value);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) {
        throw ConfigError("'" + key + "' must be an integer, got '" + *value + "'");
    }
    return static_cast<long long>(x);
}

TwoParamQutrit vendor_params_from(const Settings& s, const TwoParamQutrit& fallback) {
    if (s.contains("a")) {
        throw ConfigError("this command needs vendor parameters (alpha or alpha_cos2, beta), not 'a'");
    }
    double beta = get_real(s, "beta", fallback.beta);
    TwoParamQutrit params;
    try {
        if (s.contains("alpha_cos2")) {
            params = TwoParamQutrit::from_cos2_alpha(get_real(s, "alpha_cos2", 0.0), beta);
        } else {
            params = TwoParamQutrit{get_real(s, "alpha", fallback.alpha), beta};
            params.validate();
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return params;
}

ProbeSource probe_source_from(const Settings& s, const ProbeSource& fallback) {
    if (s.contains("a")) {
        double a = get_real(s, "a", 0.0);
        if (!(a >= 0.0 && a <= 1.0)) {
            throw ConfigError("'a' must lie in [0, 1]");
        }
        return a;
    }
    if (s.contains("alpha") || s.contains("alpha_cos2") || s.contains("beta")) {
        const auto* base = std::get_if<TwoParamQutrit>(&fallback);
        return vendor_params_from(s, base != nullptr ? *base : TwoParamQutrit::from_cos2_alpha(4.0 / 15.0, kPi / 4));
    }
    return fallback;
}

StrategySpec strategy_from(const Settings& s, const StrategySpec& fallback) {
    StrategySpec out = fallback;
    if (auto name = s.get("strategy")) {
        out.kind = parse_strategy_kind(*name);
    }
    out.rotating_step = get_real(s, "rotating_step", out.rotating_step);
    try {
        out.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return out;
}

TrialMode mode_from(const Settings& s, TrialMode fallback) {
    auto name = s.get("mode");
    if (!name) {
        return fallback;
    }
    if (*name == "failure-branch") {
        return TrialMode::FailureBranch;
    }
    if (*name == "naive") {
        return TrialMode::NaiveReceived;
    }
    throw ConfigError("unknown mode '" + *name + "' (expected failure-branch or naive)");
}

TrialConfig trial_config_from(const Settings& s, const TrialConfig& defaults) {
    TrialConfig cfg = defaults;
    cfg.source = probe_source_from(s, defaults.source);
    cfg.parties = static_cast<int>(get_integer(s, "parties", defaults.parties));
    cfg.copies = static_cast<int>(get_integer(s, "copies", defaults.copies));
    cfg.strategy = strategy_from(s, defaults.strategy);
    cfg.mode = mode_from(s, defaults.mode);
    long long grid = get_integer(s, "grid_size", static_cast<long long>(defaults.grid_size));
    long long seed = get_integer(s, "master_seed", static_cast<long long>(defaults.master_seed));
    if (grid <= 0) {
        throw ConfigError("'grid_size' must be positive");
    }
    if (seed < 0) {
        throw ConfigError("'master_seed' must be non-negative");
    }
    cfg.grid_size = static_cast<std::size_t>(grid);
    cfg.master_seed = static_cast<std::uint64_t>(seed);
    cfg.trials = static_cast<int>(get_integer(s, "trials", defaults.trials));
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

IntegratedConfig integrated_config_from(const Settings& s, const IntegratedConfig& defaults) {
    IntegratedConfig cfg = defaults;
    cfg.params = vendor_params_from(s, defaults.params);
    cfg.parties = static_cast<int>(get_integer(s, "parties", defaults.parties));
    cfg.copies = static_cast<int>(get_integer(s, "copies", defaults.copies));
    cfg.epsilon = get_real(s, "epsilon", defaults.epsilon);
    cfg.strategy = strategy_from(s, defaults.strategy);
    long long grid = get_integer(s, "grid_size", static_cast<long long>(defaults.grid_size));
    if (grid <= 0) {
        throw ConfigError("'grid_size' must be positive");
    }
    cfg.grid_size = static_cast<std::size_t>(grid);
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

}  // namespace mend::cli
