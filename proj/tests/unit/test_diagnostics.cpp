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
#include "sislab/config.hpp"
#include "sislab/diagnostics.hpp"
#include "sislab/error.hpp"
#include "sislab/neumann.hpp"
#include "sislab/simulator.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace sislab;

namespace
{

struct Series {
    std::vector<double> t, V, D;
};

// V and its dissipation at every step of a short run.
Series lyapunov_series(const char* preset, double dt, double T)
{
    auto cfg = preset_config(preset);
    const auto sc = build_scenario(cfg);
    const DiagnosticsContext ctx(sc.spec, sc.S0, sc.I0);
    RunOptions o;
    o.dt             = dt;
    o.T              = T;
    o.snapshot_every = dt;
    o.steady_tol     = 0.0;
    const auto tr    = run(sc.spec, sc.S0, sc.I0, o);
    Series s;
    for (const auto& rec : tr.diagnostics) {
        s.t.push_back(rec.t);
        s.V.push_back(rec.lyapunov.value());
        s.D.push_back(rec.lyapunov_dissipation.value());
    }
    return s;
}

// Largest |(V1 - V0)/dt + mean dissipation| over the run, after t_skip.
double balance_defect(const Series& s, double t_skip)
{
    double worst = 0.0;
    for (std::size_t k = 1; k < s.t.size(); ++k) {
        if (s.t[k - 1] < t_skip) {
            continue;
        }
        const double h = s.t[k] - s.t[k - 1];
        worst = std::max(worst, std::abs((s.V[k] - s.V[k - 1]) / h + 0.5 * (s.D[k] + s.D[k - 1])));
    }
    return worst;
}

} // namespace

TEST_SUITE("diagnostics")
{
    TEST_CASE("mass-action Lyapunov function, non-diffusing I")
    {
        const auto g    = make_grid(0.0, 1.0, 101);
        const auto r    = eval_expression(g, "0.5 + 0.2*cos(pi*x)");
        const auto beta = Field::constant(g, 2.0);
        const auto I    = eval_expression(g, "1 + x*x");
        const auto at_r = lyapunov_mass_dI0(r, I, r, beta, 0.7);
        CHECK(at_r.dissipation == doctest::Approx(0.7 * gradient_energy(r)).epsilon(1e-14));
        const auto flat = lyapunov_mass_dI0(Field::constant(g, 2.0), Field::zeros(g), r, beta, 0.7);
        CHECK(flat.dissipation == 0.0);
        CHECK(flat.V == doctest::Approx(2.0));
    }

    TEST_CASE("standard-incidence Lyapunov function, non-diffusing S")
    {
        const auto g     = make_grid(0.0, 1.0, 101);
        const auto beta  = Field::constant(g, 2.0);
        const auto gamma = Field::constant(g, 1.0);
        const auto S     = eval_expression(g, "1 + 0.5*sin(x)");
        const auto none  = lyapunov_std_dS0(S, Field::zeros(g), beta, gamma, 1.0);
        CHECK(none.dissipation == 0.0);
        // kappa = 1 here
        CHECK(none.V == doctest::Approx(0.5 * inner(S, S)).epsilon(1e-14));
        const auto c = Field::constant(g, 0.8);
        CHECK(std::abs(lyapunov_std_dS0(c, c, beta, gamma, 1.0).dissipation) < 1e-15);
        CHECK_THROWS_AS(lyapunov_std_dS0(S, c, Field::constant(g, 0.5), gamma, 1.0), Error);
    }

    TEST_CASE("standard-incidence terms, non-diffusing I")
    {
        const auto g     = make_grid(0.0, 1.0, 101);
        const auto beta  = eval_expression(g, "2 - sin(pi*x)");
        const auto gamma = Field::constant(g, 1.5);
        const auto S     = eval_expression(g, "1 + x");
        const auto risk  = risk_sets(beta, gamma, 3.0, RiskMode::StdIncidence);
        const std::vector<bool> all(g->size(), true);
        const auto zero  = lyapunov_std_dI0(S, Field::zeros(g), beta, gamma, 1.0, risk, all);
        CHECK(zero.term_grad == doctest::Approx(gradient_energy(S)));
        CHECK(zero.term_lowrisk == 0.0);
        CHECK(zero.term_highrisk == 0.0);

        // beta < gamma everywhere: no high-risk sites
        const auto low      = Field::constant(g, 0.5);
        const auto low_risk = risk_sets(low, gamma, 3.0, RiskMode::StdIncidence);
        CHECK(low_risk.h_plus.empty());
        const auto t = lyapunov_std_dI0(S, Field::constant(g, 0.3), low, gamma, 1.0, low_risk, all);
        CHECK(t.term_highrisk == 0.0);
    }

    TEST_CASE("Harnack ratio")
    {
        const auto g = make_grid(0.0, 1.0, 101);
        CHECK(harnack_ratio(Field::constant(g, 2.0)).value() == 1.0);
        CHECK(harnack_ratio(eval_expression(g, "1 + 0.5*cos(pi*x)")).value() == doctest::Approx(3.0));
        CHECK_FALSE(harnack_ratio(eval_expression(g, "x")).has_value());
    }

    TEST_CASE("concentration fraction")
    {
        const auto g = make_grid(0.0, 1.0, 201);
        CHECK(concentration_fraction(Field::constant(g, 1.0), {100}, 0.05) == doctest::Approx(0.1).epsilon(1e-12));
        auto spike = Field::zeros(g);
        spike[100] = 7.0;
        CHECK(concentration_fraction(spike, {100}, 0.05) == doctest::Approx(1.0));
        // overlapping windows are counted once
        CHECK(concentration_fraction(Field::constant(g, 1.0), {100, 102}, 0.05) ==
              doctest::Approx(0.11).epsilon(1e-12));
        const auto w = window_masses(Field::constant(g, 2.0), {0, 100}, 0.05);
        CHECK(w[0] == doctest::Approx(0.1));
        CHECK(w[1] == doctest::Approx(0.2));
        CHECK_THROWS_AS(concentration_fraction(Field::zeros(g), {100}, 0.05), Error);
    }

    TEST_CASE("dissipation identity with non-diffusing I is second order")
    {
        const double e1 = balance_defect(lyapunov_series("sim2b", 2e-3, 1.0), 0.1);
        const double e2 = balance_defect(lyapunov_series("sim2b", 1e-3, 1.0), 0.1);
        INFO("defects " << e1 << " " << e2);
        CHECK(e1 / e2 >= 3.5);
        CHECK(e1 / e2 <= 4.5);
    }

    TEST_CASE("three-term balance with non-diffusing I is second order")
    {
        const double e1 = balance_defect(lyapunov_series("sim4a", 2e-3, 1.0), 0.1);
        const double e2 = balance_defect(lyapunov_series("sim4a", 1e-3, 1.0), 0.1);
        INFO("defects " << e1 << " " << e2);
        CHECK(e1 / e2 >= 3.5);
        CHECK(e1 / e2 <= 4.5);
    }

    TEST_CASE("V is nonincreasing where the theory says so")
    {
        for (const char* p : {"sim2a", "sim2b", "sim3b"}) {
            const double dt = 1e-3;
            const auto s    = lyapunov_series(p, dt, 5.0);
            double worst    = -1.0;
            for (std::size_t k = 1; k < s.V.size(); ++k) {
                worst = std::max(worst, s.V[k] - s.V[k - 1]);
            }
            INFO(std::string(p) << " largest increase " << worst);
            CHECK(worst <= 10.0 * dt * dt);
        }
    }
}
