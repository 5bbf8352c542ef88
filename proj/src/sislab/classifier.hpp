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
#ifndef SISLAB_CLASSIFIER_HPP
#define SISLAB_CLASSIFIER_HPP

#include "sislab/grid.hpp"
#include "sislab/model.hpp"
#include "sislab/simulator.hpp"
#include "sislab/threshold.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sislab
{

enum class Regime
{
    MassDS0Extinction,
    MassDS0Endemic,
    MassDI0Extinction,
    MassDI0Concentration,
    StdDS0ExtinctionLowRisk,
    StdDS0Endemic,
    StdDS0ExtinctionNeutral,
    StdDS0SubseqExtinction,
    StdDI0Persistence,
    Indeterminate,
};

std::string_view regime_name(Regime t);

struct RegimePrediction {
    Regime regime = Regime::Indeterminate;
    std::optional<Field> predicted_S;
    std::optional<Field> predicted_I;
    std::optional<double> predicted_I_mass;
    /// Nodes where infected mass is expected to collect (concentration regime).
    std::vector<std::size_t> concentration_target;
    /// High-risk nodes of the initial support, for the persistence regime.
    std::vector<std::size_t> support_nodes;
    double N = 0.0;
    std::optional<double> n_star;
    std::string notes;
};

/// Quadrature of min(1/(beta - gamma), cap) over a node set on the grid and two coarsenings.
struct IntegrabilityReport {
    /// Spacing multipliers actually used, coarsest first, and the matching quadratures.
    std::vector<int> strides;
    std::vector<double> quadratures;
    double growth   = 1.0;
    bool divergent  = false;
};

IntegrabilityReport integrability_check(const Field& beta, const Field& gamma, const std::vector<bool>& nodes,
                                        double cap = 1e12);

struct ClassifierOptions {
    /// Skips the optimisation when already known.
    std::optional<double> n_star;
    ThresholdOptions threshold;
};

/// Throws InvalidArgument for the Full variant.
RegimePrediction predict_regime(const ModelSpec& spec, const Field& S0, const Field& I0,
                                const ClassifierOptions& opts = {});

/// exp(-beta J) of the final snapshot.
Field estimate_lambda_star(const Trajectory& traj, const Field& r, const Field& beta);

struct OutcomeReport {
    RegimePrediction prediction;
    std::vector<std::pair<std::string, double>> measured_errors;
    /// Informational measurements that carry no verdict.
    std::vector<std::pair<std::string, double>> measurements;
    bool has_verdict = false;
    bool pass        = false;
    double tolerance = 0.0;
    /// Time of the snapshot the verdict was taken on.
    double verified_t = 0.0;
};

/**
 * Regime-specific relative errors against the prediction. Subsequential regimes
 * use the most favourable snapshot in the trailing half of the run.
 * Indeterminate predictions are measured without a verdict.
 */
OutcomeReport verify_outcome(const Trajectory& traj, const RegimePrediction& pred, double tol);

/// Machine-readable report; used by the CLI.
std::string report_json(const OutcomeReport& report);

} // namespace sislab

#endif // SISLAB_CLASSIFIER_HPP
