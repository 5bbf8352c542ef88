/*
 * Copyright (C) 2026 The sislab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SISLAB_CONFIG_HPP
#define SISLAB_CONFIG_HPP

#include "sislab/grid.hpp"
#include "sislab/model.hpp"
#include "sislab/simulator.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sislab
{

/**
 * Flat run configuration. Text form is one "key = value" per line with '#'
 * comments; see the README for the key list. Coefficient expressions may
 * refer to "param.<name>" entries as {name}.
 */
struct RunConfig {
    std::string model;
    std::string beta_expr;
    std::string gamma_expr;
    std::string S0_expr;
    std::string I0_expr;
    std::optional<double> d_S;
    std::optional<double> d_I;
    int nx                = 201;
    double x_min          = 0.0;
    double x_max          = 1.0;
    double dt             = 1e-3;
    double T              = 200.0;
    double snapshot_every = 0.5;
    double steady_tol     = 1e-7;
    double eps_reg        = 1e-12;
    double eps_radius     = 0.05;
    double verify_tol     = 0.01;
    std::string scheme    = "exact";
    /// "corrected" or "strang".
    std::string splitting  = "corrected";
    std::string output_dir = "out";
    std::optional<std::string> preset;
    /// Saved run directory for classify; empty means simulate first.
    std::string trajectory;
    std::map<std::string, double> params;

    std::string sweep_parameter;
    double sweep_lo               = 0.0;
    double sweep_hi               = 1.0;
    int sweep_count               = 0;
    std::string sweep_observable  = "I_mass_at_T";
};

const std::vector<std::string>& preset_names();
/// Throws InvalidArgument for unknown names.
RunConfig preset_config(std::string_view name);

/// Applies one key. "preset" replaces every field with the preset's values.
void set_key(RunConfig& cfg, std::string_view key, std::string_view value);
/// Accepts "key=value".
void apply_override(RunConfig& cfg, std::string_view assignment);
std::string get_key(const RunConfig& cfg, std::string_view key);
std::vector<std::string> known_keys();

/// Parses config text; errors carry the 1-based line number. A preset line is applied before other keys.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Throws InvalidArgument naming every missing required key.
void check_complete(const RunConfig& cfg);

/// Replaces {name} with the value of param.name.
std::string substitute_params(std::string_view expr, const std::map<std::string, double>& params);

struct Scenario {
    ModelSpec spec;
    Field S0;
    Field I0;
    RunOptions options;
};

Scenario build_scenario(const RunConfig& cfg);

std::string format_config(const RunConfig& cfg);

} // namespace sislab

#endif // SISLAB_CONFIG_HPP
