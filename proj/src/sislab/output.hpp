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
#ifndef SISLAB_OUTPUT_HPP
#define SISLAB_OUTPUT_HPP

#include "sislab/simulator.hpp"

#include <string>
#include <vector>

namespace sislab
{

struct SweepResult;

/// Shortest decimal that parses back to the same double.
std::string shortest(double v);

/// Writes dir/profiles.csv (t,x,S,I) and dir/diagnostics.csv, creating dir if needed.
void emit_csv(const Trajectory& traj, const std::string& dir);

/**
 * Reads dir/profiles.csv back into snapshots on the spec's grid. J is rebuilt by
 * the trapezoid rule over the saved times and diagnostics are recomputed.
 */
Trajectory load_trajectory(const std::string& dir, const ModelSpec& spec);

enum class SvgKind
{
    FinalProfiles,
    MassSeries,
    LyapunovSeries,
    SweepCurve,
};

SvgKind parse_svg_kind(const std::string& name);

/// Throws InvalidArgument("no data for kind") when the requested series is empty.
void emit_svg(const Trajectory& traj, const std::string& path, SvgKind kind);
void emit_sweep_svg(const SweepResult& sweep, const std::string& path);
void emit_sweep_csv(const SweepResult& sweep, const std::string& path);

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

/// Standalone SVG line plot; one polyline per series. Optional vertical marker.
std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series, const double* marker_x = nullptr,
                       const std::string& marker_label = {});

} // namespace sislab

#endif // SISLAB_OUTPUT_HPP
