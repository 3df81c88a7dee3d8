// Copyright 2026 The gpedd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file config.hpp
 * Experiment configuration: a flat JSON object, unknown keys rejected.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"

#include "errors.hpp"
#include "io.hpp"

namespace gpedd {

enum class Mode { full, dd, classical_dd, newton, dla, variance, compare };

inline constexpr std::array<std::pair<Mode, std::string_view>, 7> kModeNames{{
    {Mode::full, "full"},
    {Mode::dd, "dd"},
    {Mode::classical_dd, "classical_dd"},
    {Mode::newton, "newton"},
    {Mode::dla, "dla"},
    {Mode::variance, "variance"},
    {Mode::compare, "compare"},
}};

inline std::string to_string(Mode m) {
    for (auto [mode, name] : kModeNames) {
        if (mode == m) {
            return std::string(name);
        }
    }
    return "unknown";
}

inline Mode parse_mode(std::string_view s) {
    for (auto [mode, name] : kModeNames) {
        if (name == s) {
            return mode;
        }
    }
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

/// Full-domain depth used when the config leaves `d` out: 100 * 2^(n-7),
/// i.e. 100, 200, 400 for n = 7, 8, 9, and at least 1.
inline int default_depth(int n) {
    return std::max(1, static_cast<int>(std::lround(100.0 * std::pow(2.0, n - 7))));
}

struct ExperimentConfig {
    Mode mode = Mode::full;
    int n = 7;
    int d = 100;
    int d_local = 50;
    double kappa = 1.0;
    int sweeps = 16;
    std::optional<int> local_budget = 50; ///< nullopt = "converge"
    int max_full_iters = 300;
    double cost_ratio = 8.0;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::string potential = "one_minus_cos";
    bool warm_start = true;
    int variance_samples = 200;
    int variance_n_min = 4;
    bool record_wall_time = false;
    int threads = 1;

    bool operator==(const ExperimentConfig &) const = default;
};

namespace detail {

inline const std::set<std::string, std::less<>> &config_keys() {
    static const std::set<std::string, std::less<>> keys{
        "mode",      "n",          "d",          "d_local",         "kappa",
        "sweeps",    "local_budget", "max_full_iters", "cost_ratio", "seed",
        "output_dir", "potential", "warm_start", "variance_samples", "variance_n_min",
        "record_wall_time", "threads"};
    return keys;
}

template <class T> T get_as(const nlohmann::json &j, std::string_view key) {
    try {
        return j.at(std::string(key)).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("config field '" + std::string(key) + "': " + e.what());
    }
}

inline int get_int(const nlohmann::json &j, std::string_view key) {
    const auto &v = j.at(std::string(key));
    if (!v.is_number_integer()) {
        throw ConfigError("config field '" + std::string(key) + "' must be an integer");
    }
    return get_as<int>(j, key);
}

} // namespace detail

inline void validate(const ExperimentConfig &c) {
    auto fail = [](const std::string &msg) { throw ConfigError(msg); };
    if (c.n < kMinGridQubits || c.n > kMaxGridQubits) {
        fail("n must lie in [2, 14]");
    }
    if (c.d < 1) {
        fail("d must be positive");
    }
    if (c.d_local != c.d / 2 && c.d_local != c.d) {
        fail("d_local must equal d/2 or d");
    }
    if (!std::isfinite(c.kappa) || c.kappa < 0.0) {
        fail("kappa must be finite and nonnegative");
    }
    if (c.sweeps < 1) {
        fail("sweeps must be positive");
    }
    if (c.local_budget && *c.local_budget < 1) {
        fail("local_budget must be positive or \"converge\"");
    }
    if (c.max_full_iters < 1) {
        fail("max_full_iters must be positive");
    }
    if (!(c.cost_ratio > 0.0) || !std::isfinite(c.cost_ratio)) {
        fail("cost_ratio must be positive");
    }
    if (c.potential != "one_minus_cos") {
        fail("unsupported potential '" + c.potential + "'");
    }
    if (c.output_dir.empty()) {
        fail("output_dir must not be empty");
    }
    if (c.variance_samples < 2) {
        fail("variance_samples must be at least 2");
    }
    if (c.threads < 1) {
        fail("threads must be positive");
    }
    const bool needs_layout =
        c.mode == Mode::dd || c.mode == Mode::classical_dd || c.mode == Mode::compare;
    if (needs_layout && c.n < 3) {
        fail("domain decomposition modes need n >= 3");
    }
    if (c.mode == Mode::compare && !c.local_budget) {
        fail("compare mode needs a numeric local_budget");
    }
    if (c.mode == Mode::dla && c.n > 6) {
        fail("dla mode supports n <= 6");
    }
    if (c.mode == Mode::variance && (c.variance_n_min < 2 || c.variance_n_min > c.n)) {
        fail("variance_n_min must lie in [2, n]");
    }
}

inline ExperimentConfig config_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto &item : j.items()) {
        if (!detail::config_keys().contains(item.key())) {
            throw ConfigError("unknown config key '" + item.key() + "'");
        }
    }
    if (!j.contains("mode") || !j.contains("n")) {
        throw ConfigError("config requires 'mode' and 'n'");
    }
    ExperimentConfig c;
    c.mode = parse_mode(detail::get_as<std::string>(j, "mode"));
    c.n = detail::get_int(j, "n");
    c.d = j.contains("d") ? detail::get_int(j, "d") : default_depth(c.n);
    c.d_local = j.contains("d_local") ? detail::get_int(j, "d_local") : c.d / 2;
    if (j.contains("kappa")) {
        c.kappa = detail::get_as<double>(j, "kappa");
    }
    if (j.contains("sweeps")) {
        c.sweeps = detail::get_int(j, "sweeps");
    }
    if (j.contains("local_budget")) {
        const auto &lb = j.at("local_budget");
        if (lb.is_string()) {
            if (lb.get<std::string>() != "converge") {
                throw ConfigError("local_budget must be an integer or \"converge\"");
            }
            c.local_budget.reset();
        } else {
            c.local_budget = detail::get_int(j, "local_budget");
        }
    }
    if (j.contains("max_full_iters")) {
        c.max_full_iters = detail::get_int(j, "max_full_iters");
    }
    if (j.contains("cost_ratio")) {
        c.cost_ratio = detail::get_as<double>(j, "cost_ratio");
    }
    if (j.contains("seed")) {
        c.seed = detail::get_as<std::uint64_t>(j, "seed");
    }
    if (j.contains("output_dir")) {
        c.output_dir = detail::get_as<std::string>(j, "output_dir");
    }
    if (j.contains("potential")) {
        c.potential = detail::get_as<std::string>(j, "potential");
    }
    if (j.contains("warm_start")) {
        c.warm_start = detail::get_as<bool>(j, "warm_start");
    }
    if (j.contains("variance_samples")) {
        c.variance_samples = detail::get_int(j, "variance_samples");
    }
    if (j.contains("variance_n_min")) {
        c.variance_n_min = detail::get_int(j, "variance_n_min");
    }
    if (j.contains("record_wall_time")) {
        c.record_wall_time = detail::get_as<bool>(j, "record_wall_time");
    }
    if (j.contains("threads")) {
        c.threads = detail::get_int(j, "threads");
    }
    validate(c);
    return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig &c) {
    nlohmann::json j;
    j["mode"] = to_string(c.mode);
    j["n"] = c.n;
    j["d"] = c.d;
    j["d_local"] = c.d_local;
    j["kappa"] = c.kappa;
    j["sweeps"] = c.sweeps;
    if (c.local_budget) {
        j["local_budget"] = *c.local_budget;
    } else {
        j["local_budget"] = "converge";
    }
    j["max_full_iters"] = c.max_full_iters;
    j["cost_ratio"] = c.cost_ratio;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["potential"] = c.potential;
    j["warm_start"] = c.warm_start;
    j["variance_samples"] = c.variance_samples;
    j["variance_n_min"] = c.variance_n_min;
    j["record_wall_time"] = c.record_wall_time;
    j["threads"] = c.threads;
    return j;
}

inline ExperimentConfig parse_config_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline ExperimentConfig load_config(const std::filesystem::path &path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError &e) {
        throw ConfigError(e.what());
    }
    return parse_config_text(text);
}

} // namespace gpedd
