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
#ifndef SISLAB_SWEEP_HPP
#define SISLAB_SWEEP_HPP

#include "sislab/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sislab
{

struct SweepRow {
    double param = 0.0;
    /// Total initial population of the run.
    double N     = 0.0;
    double value = 0.0;
    bool ok      = false;
    std::string error;
};

struct SweepResult {
    std::string parameter;
    std::string observable;
    /// Sorted by parameter.
    std::vector<SweepRow> rows;
    std::optional<std::size_t> knee_index;
};

/// Index of the largest |second divided difference|; absent for < 3 points or a flat curve.
std::optional<std::size_t> detect_knee(const std::vector<double>& x, const std::vector<double>& y);

/**
 * One simulation per value of cfg.sweep_parameter over [lo, hi] (count points).
 * The parameter is a param.<name> entry when such a name exists, otherwise any
 * numeric config key. Failed points are recorded and skipped.
 */
SweepResult run_sweep(const RunConfig& cfg, int jobs = 1);

} // namespace sislab

#endif // SISLAB_SWEEP_HPP
