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
#include "sislab/simulator.hpp"
#include "sislab/error.hpp"

#include <algorithm>
#include <cmath>

namespace sislab
{

double reaction_mass_action(double S, double I, double beta, double /*gamma*/)
{
    return beta * S * I;
}

double reaction_std_incidence(double S, double I, double beta, double /*gamma*/, double eps_reg)
{
    const double m = S + I;
    return m > eps_reg ? beta * S * I / m : 0.0;
}

double dt_bound(const ModelSpec& spec, const State& state)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < state.S.size(); ++i) {
        worst = std::max(worst, spec.beta[i] * (state.S[i] + state.I[i]) + spec.gamma[i]);
    }
    return 0.5 / worst;
}

namespace
{

// expm1(z)/z, continuous at 0.
double phi1(double z)
{
    return std::abs(z) < 1e-300 ? 1.0 : std::expm1(z) / z;
}

} // namespace

Stepper::Stepper(const ModelSpec& spec, double dt)
    : m_spec(spec)
    , m_r(ratio_r(spec))
    , m_dt(dt)
{
    validate(spec);
    require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
    const auto& g = spec.beta.grid();
    if (spec.d_S > 0.0) {
        m_diffuse_S = std::make_unique<DiffusionStepper>(g, spec.d_S, dt, spec.scheme);
    }
    if (spec.d_I > 0.0) {
        m_diffuse_I = std::make_unique<DiffusionStepper>(g, spec.d_I, dt, spec.scheme);
    }
    m_corrected = spec.boundary_correction;
}

Stepper::~Stepper() = default;

double Stepper::reaction_rate(double S, double I, std::size_t i) const
{
    const double b = m_spec.beta[i], g = m_spec.gamma[i];
    const double f = m_spec.incidence() == RiskMode::MassAction ? reaction_mass_action(S, I, b, g)
                                                                 : reaction_std_incidence(S, I, b, g, m_spec.eps_reg);
    return f - g * I;
}

// The reaction field generally has a nonzero slope at the walls, which the
// Neumann propagator cannot reproduce; plain Strang then drops to about order
// 1.5 near the boundary once d dt / dx^2 is large. A smooth q carrying that
// slope is moved from the reaction part into the diffusion part.
void Stepper::boundary_correction(const State& st)
{
    const auto& grid = st.S.grid();
    const std::size_t n = grid.size();
    std::vector<double> rate(n);
    for (std::size_t i = 0; i < n; ++i) {
        rate[i] = reaction_rate(st.S[i], st.I[i], i);
    }
    // Wall bumps live on a quarter of the interval each, so q vanishes in the
    // middle and cannot push a zero component negative there. The profile
    // (1-t)^4 (0.6 t - 0.1) has unit slope at t = 0 and zero mean; a small
    // multiple of (1-t)^4 removes the leftover discrete mean.
    const double len   = grid.length();
    const double width = 0.25 * len;
    std::vector<double> bump_l(n, 0.0), bump_r(n, 0.0), base_l(n, 0.0), base_r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double tl = (grid.nodes[i] - grid.a) / width;
        const double tr = (grid.b - grid.nodes[i]) / width;
        if (tl < 1.0) {
            base_l[i] = std::pow(1.0 - tl, 4);
            bump_l[i] = width * base_l[i] * (0.6 * tl - 0.1);
        }
        if (tr < 1.0) {
            base_r[i] = std::pow(1.0 - tr, 4);
            bump_r[i] = -width * base_r[i] * (0.6 * tr - 0.1);
        }
    }
    auto balanced = [&](std::vector<double>& bump, const std::vector<double>& base) {
        double m = 0.0, b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            m += grid.weights[i] * bump[i];
            b += grid.weights[i] * base[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            bump[i] -= (m / b) * base[i];
        }
    };
    balanced(bump_l, base_l);
    balanced(bump_r, base_r);
    auto build = [&](double sign, std::vector<double>& q) {
        const double left  = sign * (-3.0 * rate[0] + 4.0 * rate[1] - rate[2]) / (2.0 * grid.dx);
        const double right = sign * (3.0 * rate[n - 1] - 4.0 * rate[n - 2] + rate[n - 3]) / (2.0 * grid.dx);
        q.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = left * bump_l[i] + right * bump_r[i];
        }
    };
    if (m_diffuse_S) {
        build(-1.0, m_q_S);
    }
    if (m_diffuse_I) {
        build(1.0, m_q_I);
    }
}

void Stepper::shift(State& st, double tau, StepStats& stats) const
{
    auto apply = [&](Field& u, const std::vector<double>& q) {
        const auto& w = u.grid().weights;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double v = u[i] - tau * q[i];
            if (v < 0.0) {
                stats.clipped_mass += w[i] * (-v);
            }
            u[i] = std::max(v, 0.0);
        }
    };
    if (m_diffuse_S) {
        apply(st.S, m_q_S);
    }
    if (m_diffuse_I) {
        apply(st.I, m_q_I);
    }
}

void Stepper::react(State& st, double tau, StepStats& stats) const
{
    const auto& beta  = m_spec.beta;
    const auto& gamma = m_spec.gamma;
    const std::size_t n = st.S.size();

    if (m_spec.incidence() == RiskMode::MassAction) {
        // With M = S + I fixed, I' = beta I (c - I), c = M - r: a logistic equation.
        const bool s_form = m_spec.variant == Variant::MassAction_dS0;
        for (std::size_t i = 0; i < n; ++i) {
            const double S = st.S[i], I = st.I[i], b = beta[i], r = m_r[i];
            const double M  = S + I;
            const double z  = b * (M - r) * tau;
            const double q  = b * I * tau * phi1(z);
            const double dJ = std::log1p(q) / b;
            if (s_form) {
                const double S_new = r + (S - r) * std::exp(-b * dJ);
                st.I[i] += S - S_new;
                st.S[i] = S_new;
            }
            else {
                // Scale I directly; recovering it as M - S loses small values.
                const double I_new = I * std::exp(z - std::log1p(q));
                st.I[i]            = I_new;
                st.S[i]            = std::max(M - I_new, 0.0);
            }
            st.J[i] += dJ;
        }
        return;
    }

    const double eps = m_spec.eps_reg;
    for (std::size_t i = 0; i < n; ++i) {
        const double S = st.S[i], I = st.I[i], b = beta[i], g = gamma[i];
        auto rate = [&](double s, double v) {
            return reaction_std_incidence(s, v, b, g, eps) - g * v;
        };
        const double k1 = rate(S, I);
        const double S1 = std::max(S - tau * k1, 0.0);
        const double I1 = std::max(I + tau * k1, 0.0);
        const double k2 = rate(S1, I1);
        const double raw = 0.5 * tau * (k1 + k2);
        const double moved = std::clamp(raw, -I, S);
        stats.clipped_mass += st.S.grid().weights[i] * std::abs(raw - moved);
        st.S[i] = S - moved;
        st.I[i] = I + moved;
        st.J[i] += 0.5 * tau * (I + st.I[i]);
    }
}

StepStats Stepper::advance(State& st)
{
    if (m_spec.incidence() == RiskMode::StdIncidence) {
        const double bound = dt_bound(m_spec, st);
        if (m_dt > bound) {
            throw Error(ErrorCode::StepRejected, "time step " + std::to_string(m_dt) +
                                                     " exceeds the positivity bound " + std::to_string(bound) +
                                                     " at t = " + std::to_string(st.t));
        }
    }
    StepStats stats;
    const double half = 0.5 * m_dt;
    if (!m_spec.reaction_enabled) {
        if (m_diffuse_S) {
            m_diffuse_S->advance(st.S.values());
        }
        if (m_diffuse_I) {
            m_diffuse_I->advance(st.I.values());
        }
        st.t += m_dt;
        return stats;
    }
    if (!m_corrected) {
        react(st, half, stats);
        if (m_diffuse_S) {
            m_diffuse_S->advance(st.S.values());
        }
        if (m_diffuse_I) {
            m_diffuse_I->advance(st.I.values());
        }
        react(st, half, stats);
        st.t += m_dt;
        return stats;
    }
    boundary_correction(st);
    shift(st, 0.5 * half, stats);
    react(st, half, stats);
    shift(st, 0.5 * half, stats);
    if (m_diffuse_S) {
        m_diffuse_S->advance(st.S.values(), m_q_S);
    }
    if (m_diffuse_I) {
        m_diffuse_I->advance(st.I.values(), m_q_I);
    }
    shift(st, 0.5 * half, stats);
    react(st, half, stats);
    shift(st, 0.5 * half, stats);
    st.t += m_dt;
    return stats;
}

State step(const ModelSpec& spec, const State& state, double dt)
{
    Stepper stepper(spec, dt);
    State next = state;
    stepper.advance(next);
    return next;
}

void validate_initial_data(const ModelSpec& spec, const Field& S0, const Field& I0)
{
    require(same_grid(S0, spec.beta) && same_grid(I0, spec.beta), "initial data must live on the model grid");
    bool nontrivial = false;
    for (std::size_t i = 0; i < S0.size(); ++i) {
        require(S0[i] >= 0.0 && I0[i] >= 0.0, "initial data must be nonnegative (x = " +
                                                    std::to_string(S0.grid().nodes[i]) + ")");
        nontrivial = nontrivial || I0[i] > 0.0;
    }
    require(nontrivial, "I0 vanishes identically; the infected initial data must be nontrivial");
}

Trajectory run(const ModelSpec& spec, const Field& S0, const Field& I0, const RunOptions& opts)
{
    validate(spec);
    validate_initial_data(spec, S0, I0);
    require(opts.T > 0.0 && opts.dt > 0.0, "run needs T > 0 and dt > 0");
    require(opts.snapshot_every > 0.0, "snapshot_every must be positive");

    const long n_steps = std::max(1L, std::lround(opts.T / opts.dt));
    const long every   = std::max(1L, std::lround(opts.snapshot_every / opts.dt));

    Trajectory traj;
    traj.spec = spec;
    traj.N    = integrate(S0) + integrate(I0);
    traj.dt   = opts.dt;

    const DiagnosticsContext ctx(spec, S0, I0, opts.eps_radius);
    Stepper stepper(spec, opts.dt);

    State st{0.0, S0, I0, Field::zeros(S0.grid_ptr())};
    traj.snapshots.push_back(st);
    traj.diagnostics.push_back(ctx.record(0.0, st.S, st.I));

    int calm = 0;
    for (long k = 1; k <= n_steps; ++k) {
        const auto stats = stepper.advance(st);
        st.t             = static_cast<double>(k) * opts.dt;
        const double clipped = stats.clipped_mass / traj.N;
        traj.max_clipped_fraction = std::max(traj.max_clipped_fraction, clipped);
        if (clipped > 1e-8) {
            traj.clipping_flagged = true;
        }
        if (k % every != 0 && k != n_steps) {
            continue;
        }
        const State& prev = traj.snapshots.back();
        auto rec          = ctx.record(st.t, st.S, st.I);
        rec.sup_change_rate = std::max(max_diff(st.S, prev.S), max_diff(st.I, prev.I)) / (st.t - prev.t);
        traj.snapshots.push_back(st);
        traj.diagnostics.push_back(rec);
        if (opts.steady_tol > 0.0) {
            calm = rec.sup_change_rate < opts.steady_tol ? calm + 1 : 0;
            if (calm >= opts.steady_window) {
                traj.steady_reached = true;
                break;
            }
        }
    }
    return traj;
}

} // namespace sislab
