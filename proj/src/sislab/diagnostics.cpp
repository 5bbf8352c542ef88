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
#include "sislab/diagnostics.hpp"
#include "sislab/error.hpp"
#include "sislab/neumann.hpp"

#include <algorithm>
#include <cmath>

namespace sislab
{

LyapunovValue lyapunov_mass_dI0(const Field& S, const Field& I, const Field& r, const Field& beta, double d_S)
{
    const auto& w = S.grid().weights;
    LyapunovValue out;
    double reaction = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        out.V += w[i] * (0.5 * S[i] * S[i] + r[i] * I[i]);
        const double e = S[i] - r[i];
        reaction += w[i] * beta[i] * e * e * I[i];
    }
    out.dissipation = d_S * gradient_energy(S) + reaction;
    return out;
}

LyapunovValue lyapunov_std_dS0(const Field& S, const Field& I, const Field& beta, const Field& gamma, double d_I,
                               double eps_reg, double tol_zero)
{
    const auto& w = S.grid().weights;
    LyapunovValue out;
    double reaction = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        require(beta[i] >= gamma[i] - tol_zero, "the standard-incidence functional needs beta >= gamma",
                ErrorCode::Domain);
        const double kappa = std::max(beta[i] - gamma[i], 0.0) / gamma[i];
        out.V += 0.5 * w[i] * (kappa * S[i] * S[i] + I[i] * I[i]);
        const double m = S[i] + I[i];
        if (m > eps_reg) {
            const double e = kappa * S[i] - I[i];
            reaction += w[i] * gamma[i] * e * e * I[i] / m;
        }
    }
    out.dissipation = d_I * gradient_energy(I) + reaction;
    return out;
}

LyapunovTerms lyapunov_std_dI0(const Field& S, const Field& I, const Field& beta, const Field& gamma, double d_S,
                               const RiskProfile& risk, const std::vector<bool>& I0_support, double eps_reg)
{
    const auto& w   = S.grid().weights;
    const auto high = mask_of(risk.h_plus, S.size());
    LyapunovTerms out;
    out.term_grad = d_S * gradient_energy(S);
    for (std::size_t i = 0; i < S.size(); ++i) {
        const double bg  = beta[i] - gamma[i];
        const bool in_hp = high[i] && I0_support[i];
        const double kappa = in_hp ? gamma[i] / bg : 0.0;
        out.V += 0.5 * w[i] * (S[i] * S[i] + kappa * I[i] * I[i]);
        const double m = S[i] + I[i];
        if (m <= eps_reg) {
            continue;
        }
        if (in_hp) {
            const double e = bg * S[i] - gamma[i] * I[i];
            out.term_highrisk += w[i] * I[i] * e * e / (bg * m);
        }
        else {
            out.term_lowrisk += w[i] * S[i] * I[i] * (gamma[i] * I[i] - bg * S[i]) / m;
        }
    }
    return out;
}

std::optional<double> harnack_ratio(const Field& I)
{
    const double lo = min_value(I);
    if (!(lo > 0.0)) {
        return std::nullopt;
    }
    return max_value(I) / lo;
}

namespace
{

// Integral over [lo, hi] of the piecewise-linear interpolant of I.
double interval_mass(const Field& I, double lo, double hi)
{
    const auto& x = I.grid().nodes;
    lo            = std::max(lo, x.front());
    hi            = std::min(hi, x.back());
    double m      = 0.0;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        const double p = std::max(lo, x[j]), q = std::min(hi, x[j + 1]);
        if (q <= p) {
            continue;
        }
        const double h  = x[j + 1] - x[j];
        auto at         = [&](double y) { return I[j] + (I[j + 1] - I[j]) * (y - x[j]) / h; };
        m += 0.5 * (q - p) * (at(p) + at(q));
    }
    return m;
}

} // namespace

std::vector<double> window_masses(const Field& I, const std::vector<std::size_t>& min_set, double eps_radius)
{
    const auto& x = I.grid().nodes;
    std::vector<double> out;
    for (auto c : min_set) {
        out.push_back(interval_mass(I, x[c] - eps_radius, x[c] + eps_radius));
    }
    return out;
}

double concentration_fraction(const Field& I, const std::vector<std::size_t>& min_set, double eps_radius)
{
    const auto& x      = I.grid().nodes;
    const double total = integrate(I);
    require(total > 0.0, "concentration needs positive infected mass", ErrorCode::Domain);
    // merge overlapping windows before integrating
    std::vector<std::pair<double, double>> spans;
    for (auto c : min_set) {
        spans.emplace_back(x[c] - eps_radius, x[c] + eps_radius);
    }
    std::sort(spans.begin(), spans.end());
    double inside = 0.0;
    for (std::size_t k = 0; k < spans.size();) {
        auto [lo, hi] = spans[k];
        for (++k; k < spans.size() && spans[k].first <= hi; ++k) {
            hi = std::max(hi, spans[k].second);
        }
        inside += interval_mass(I, lo, hi);
    }
    return std::clamp(inside / total, 0.0, 1.0);
}

DiagnosticsContext::DiagnosticsContext(const ModelSpec& spec, const Field& S0, const Field& I0, double eps_radius)
    : m_spec(spec)
    , m_r(ratio_r(spec))
    , m_eps_radius(eps_radius)
{
    const double N = integrate(S0) + integrate(I0);
    m_risk         = risk_sets(spec.beta, spec.gamma, N, spec.incidence(), -1.0);
    // A looser band for the minimum set: a sampled minimum can sit half a cell off the true one.
    double curvature = 0.0;
    for (std::size_t i = 1; i + 1 < m_r.size(); ++i) {
        curvature = std::max(curvature, std::abs(m_r[i + 1] - 2.0 * m_r[i] + m_r[i - 1]));
    }
    auto rm            = rmin_set(m_r, I0, 1e-9 * max_abs(m_r.values()) + 0.25 * curvature);
    m_risk.r_tilde_min = rm.r_tilde_min;
    m_risk.min_set     = std::move(rm.min_set);
    m_support.resize(I0.size());
    for (std::size_t i = 0; i < I0.size(); ++i) {
        m_support[i] = I0[i] > 0.0;
    }
    m_beta_ge_gamma = m_risk.h_minus.empty();
}

DiagnosticsRecord DiagnosticsContext::record(double t, const Field& S, const Field& I) const
{
    DiagnosticsRecord rec;
    rec.t          = t;
    rec.total_mass = integrate(S) + integrate(I);
    switch (m_spec.variant) {
    case Variant::MassAction_dI0: {
        const auto v             = lyapunov_mass_dI0(S, I, m_r, m_spec.beta, m_spec.d_S);
        rec.lyapunov             = v.V;
        rec.lyapunov_dissipation = v.dissipation;
        rec.harnack_ratio        = harnack_ratio(S);
        if (integrate(I) > 0.0) {
            rec.concentration_fraction = concentration_fraction(I, m_risk.min_set, m_eps_radius);
        }
        break;
    }
    case Variant::StdIncidence_dS0:
        if (m_beta_ge_gamma) {
            const auto v = lyapunov_std_dS0(S, I, m_spec.beta, m_spec.gamma, m_spec.d_I, m_spec.eps_reg,
                                            m_risk.tol_zero);
            rec.lyapunov             = v.V;
            rec.lyapunov_dissipation = v.dissipation;
        }
        rec.harnack_ratio = harnack_ratio(I);
        break;
    case Variant::StdIncidence_dI0: {
        const auto v = lyapunov_std_dI0(S, I, m_spec.beta, m_spec.gamma, m_spec.d_S, m_risk, m_support,
                                        m_spec.eps_reg);
        rec.lyapunov             = v.V;
        rec.lyapunov_dissipation = v.term_grad - v.term_lowrisk + v.term_highrisk;
        rec.harnack_ratio        = harnack_ratio(S);
        break;
    }
    case Variant::MassAction_dS0:
    case Variant::Full:
        rec.harnack_ratio = harnack_ratio(I);
        break;
    }
    return rec;
}

} // namespace sislab
