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
#ifndef SISLAB_MODEL_HPP
#define SISLAB_MODEL_HPP

#include "sislab/grid.hpp"
#include "sislab/neumann.hpp"
#include "sislab/risk.hpp"

#include <string>
#include <string_view>

namespace sislab
{

enum class Variant
{
    Full,
    MassAction_dS0,
    MassAction_dI0,
    StdIncidence_dS0,
    StdIncidence_dI0,
};

std::string_view variant_name(Variant v);
/// Throws InvalidArgument listing the accepted names.
Variant parse_variant(std::string_view name);

bool is_mass_action(Variant v);
/// The variants with a non-diffusing component.
bool is_degenerate(Variant v);

struct ModelSpec {
    Variant variant = Variant::MassAction_dS0;
    Field beta;
    Field gamma;
    double d_S     = 0.0;
    double d_I     = 1.0;
    double eps_reg = 1e-12;
    /// Incidence of the Full variant; the degenerate variants fix their own.
    RiskMode full_incidence  = RiskMode::MassAction;
    DiffusionScheme scheme   = DiffusionScheme::Exact;
    /// Test hook: skips the reaction substeps entirely.
    bool reaction_enabled = true;
    /// Moves the wall slope of the reaction field into the diffusion substep; off gives plain Strang.
    bool boundary_correction = true;

    RiskMode incidence() const;
};

/// Enforces the diffusion-rate pattern of the variant and positivity of beta, gamma.
void validate(const ModelSpec& spec);

/// r = gamma / beta.
Field ratio_r(const ModelSpec& spec);

} // namespace sislab

#endif // SISLAB_MODEL_HPP
