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
#ifndef SISLAB_DIAGNOSTICS_HPP
#define SISLAB_DIAGNOSTICS_HPP

#include "sislab/grid.hpp"
#include "sislab/model.hpp"
#include "sislab/risk.hpp"

#include <optional>
#include <vector>

namespace sislab
{

struct DiagnosticsRecord {
    double t          = 0.0;
    double total_mass = 0.0;
    std::optional<double> lyapunov;
    /// -dV/dt predicted by the dissipation identity.
    std::optional<double> lyapunov_dissipation;
    std::optional<double> harnack_ratio;
    std::optional<double> concentration_fraction;
    /// Max-norm change of (S, I) per unit time since the previous snapshot.
    double sup_change_rate = 0.0;
};

struct LyapunovValue {
    double V           = 0.0;
    double dissipation = 0.0;
};

/// V = int (S^2/2 + r I); dissipation = d_S |grad S|^2 + int beta (S - r)^2 I.
LyapunovValue lyapunov_mass_dI0(const Field& S, const Field& I, const Field& r, const Field& beta, double d_S);

/**
 * V = int (kappa S^2 + I^2)/2 with kappa = (beta - gamma)/gamma;
 * dissipation = d_I |grad I|^2 + int gamma (kappa S - I)^2 I/(S + I).
 * Throws Domain if beta < gamma - tol_zero somewhere.
 */
LyapunovValue lyapunov_std_dS0(const Field& S, const Field& I, const Field& beta, const Field& gamma, double d_I,
                               double eps_reg = 1e-12, double tol_zero = 1e-9);

struct LyapunovTerms {
    double V             = 0.0;
    double term_grad     = 0.0;
    double term_lowrisk  = 0.0;
    double term_highrisk = 0.0;
};

/**
 * V = int (S^2 + kappa I^2)/2, kappa = gamma/(beta - gamma) on the high-risk part of
 * the initial support and 0 elsewhere. dV/dt = -term_grad + term_lowrisk - term_highrisk.
 */
LyapunovTerms lyapunov_std_dI0(const Field& S, const Field& I, const Field& beta, const Field& gamma, double d_S,
                               const RiskProfile& risk, const std::vector<bool>& I0_support, double eps_reg = 1e-12);

/// max I / min I, absent unless I > 0 everywhere.
std::optional<double> harnack_ratio(const Field& I);

/// Share of int I lying within eps_radius of some min_set node, integrating the linear interpolant.
double concentration_fraction(const Field& I, const std::vector<std::size_t>& min_set, double eps_radius = 0.05);

/// Interpolant mass of each window, one per min_set node.
std::vector<double> window_masses(const Field& I, const std::vector<std::size_t>& min_set, double eps_radius = 0.05);

/**
 * Precomputed per-run data that turns a state into a DiagnosticsRecord:
 * r, the risk profile, the initial support and the minimum set.
 */
class DiagnosticsContext
{
public:
    DiagnosticsContext(const ModelSpec& spec, const Field& S0, const Field& I0, double eps_radius = 0.05);

    DiagnosticsRecord record(double t, const Field& S, const Field& I) const;

    const RiskProfile& risk() const
    {
        return m_risk;
    }
    const std::vector<bool>& I0_support() const
    {
        return m_support;
    }
    const Field& r() const
    {
        return m_r;
    }
    bool std_dS0_lyapunov_applies() const
    {
        return m_beta_ge_gamma;
    }
    double eps_radius() const
    {
        return m_eps_radius;
    }

private:
    ModelSpec m_spec;
    Field m_r;
    RiskProfile m_risk;
    std::vector<bool> m_support;
    bool m_beta_ge_gamma = false;
    double m_eps_radius;
};

} // namespace sislab

#endif // SISLAB_DIAGNOSTICS_HPP
