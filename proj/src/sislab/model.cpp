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
#include "sislab/model.hpp"
#include "sislab/error.hpp"

#include <array>

namespace sislab
{

namespace
{

constexpr std::array<std::pair<Variant, std::string_view>, 5> k_names{{
    {Variant::Full, "Full"},
    {Variant::MassAction_dS0, "MassAction_dS0"},
    {Variant::MassAction_dI0, "MassAction_dI0"},
    {Variant::StdIncidence_dS0, "StdIncidence_dS0"},
    {Variant::StdIncidence_dI0, "StdIncidence_dI0"},
}};

} // namespace

std::string_view variant_name(Variant v)
{
    for (const auto& [k, name] : k_names) {
        if (k == v) {
            return name;
        }
    }
    return "?";
}

Variant parse_variant(std::string_view name)
{
    for (const auto& [k, n] : k_names) {
        if (n == name) {
            return k;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) +
                                                "'; expected Full, MassAction_dS0, MassAction_dI0, "
                                                "StdIncidence_dS0 or StdIncidence_dI0");
}

bool is_mass_action(Variant v)
{
    return v == Variant::MassAction_dS0 || v == Variant::MassAction_dI0;
}

bool is_degenerate(Variant v)
{
    return v != Variant::Full;
}

RiskMode ModelSpec::incidence() const
{
    if (variant == Variant::Full) {
        return full_incidence;
    }
    return is_mass_action(variant) ? RiskMode::MassAction : RiskMode::StdIncidence;
}

void validate(const ModelSpec& spec)
{
    require(!spec.beta.empty() && !spec.gamma.empty(), "model needs beta and gamma fields");
    require(same_grid(spec.beta, spec.gamma), "beta and gamma must share a grid");
    for (std::size_t i = 0; i < spec.beta.size(); ++i) {
        require(spec.beta[i] > 0.0 && spec.gamma[i] > 0.0,
                "beta and gamma must be positive at every node (x = " + std::to_string(spec.beta.grid().nodes[i]) +
                    ")");
    }
    require(spec.d_S >= 0.0 && spec.d_I >= 0.0, "diffusion rates must be nonnegative");
    require(spec.eps_reg >= 0.0, "eps_reg must be nonnegative");
    switch (spec.variant) {
    case Variant::MassAction_dS0:
    case Variant::StdIncidence_dS0:
        require(spec.d_S == 0.0 && spec.d_I > 0.0, std::string(variant_name(spec.variant)) + " needs d_S = 0 and d_I > 0");
        break;
    case Variant::MassAction_dI0:
    case Variant::StdIncidence_dI0:
        require(spec.d_I == 0.0 && spec.d_S > 0.0, std::string(variant_name(spec.variant)) + " needs d_I = 0 and d_S > 0");
        break;
    case Variant::Full:
        break;
    }
}

Field ratio_r(const ModelSpec& spec)
{
    std::vector<double> r(spec.beta.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = spec.gamma[i] / spec.beta[i];
    }
    return Field(spec.beta.grid_ptr(), std::move(r));
}

} // namespace sislab
