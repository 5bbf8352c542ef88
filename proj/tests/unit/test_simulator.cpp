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
#include "sislab/error.hpp"
#include "sislab/model.hpp"
#include "sislab/simulator.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace sislab;

namespace
{

Scenario scenario(const char* preset, int nx = 201)
{
    auto cfg = preset_config(preset);
    cfg.nx   = nx;
    return build_scenario(cfg);
}

Trajectory short_run(const Scenario& sc, double T, double dt = 1e-3, double every = 0.25)
{
    RunOptions o;
    o.dt             = dt;
    o.T              = T;
    o.snapshot_every = every;
    o.steady_tol     = 0.0;
    return run(sc.spec, sc.S0, sc.I0, o);
}

double max_error(const State& a, const State& b)
{
    return std::max(max_diff(a.S, b.S), max_diff(a.I, b.I));
}

const char* const k_presets[] = {"sim1a", "sim1b", "sim1c", "sim2a", "sim2b", "sim2c",
                                 "sim3a", "sim3b", "sim3c", "sim4a", "sim4b"};

} // namespace

TEST_SUITE("model")
{
    TEST_CASE("incidence functions")
    {
        CHECK(reaction_mass_action(0.0, 5.0, 2.0, 1.0) == 0.0);
        CHECK(reaction_mass_action(3.0, 0.0, 2.0, 1.0) == 0.0);
        CHECK(reaction_mass_action(2.0, 1.5, 2.0, 4.0) == 6.0);
        // net growth beta S I - gamma I vanishes at S = gamma / beta
        CHECK(reaction_mass_action(2.0, 1.5, 2.0, 4.0) - 4.0 * 1.5 == 0.0);
        CHECK(reaction_std_incidence(0.0, 0.0, 2.0, 1.0) == 0.0);
        CHECK(reaction_std_incidence(1.0, 1.0, 2.0, 1.0) == 1.0);
        for (double S : {0.0, 0.1, 1.0, 7.0}) {
            for (double I : {0.0, 0.2, 3.0}) {
                CHECK(reaction_std_incidence(S, I, 2.0, 1.0) <= 2.0 * std::min(S, I) + 1e-15);
            }
        }
    }

    TEST_CASE("variant names round-trip and diffusion patterns are enforced")
    {
        for (auto v : {Variant::Full, Variant::MassAction_dS0, Variant::MassAction_dI0, Variant::StdIncidence_dS0,
                       Variant::StdIncidence_dI0}) {
            CHECK(parse_variant(variant_name(v)) == v);
        }
        CHECK_THROWS_AS(parse_variant("SIR"), Error);
        auto sc      = scenario("sim1b", 21);
        sc.spec.d_S  = 0.5;
        CHECK_THROWS_AS(validate(sc.spec), Error);
        sc.spec.d_S     = 0.0;
        sc.spec.variant = Variant::MassAction_dI0;
        CHECK_THROWS_AS(validate(sc.spec), Error);
        auto sc2           = scenario("sim1b", 21);
        sc2.spec.gamma[3] = 0.0;
        CHECK_THROWS_AS(validate(sc2.spec), Error);
    }

    TEST_CASE("initial data checks")
    {
        auto sc = scenario("sim1b", 21);
        auto S  = sc.S0;
        S[2]    = -1e-3;
        CHECK_THROWS_AS(validate_initial_data(sc.spec, S, sc.I0), Error);
        CHECK_THROWS_AS(validate_initial_data(sc.spec, sc.S0, Field::zeros(sc.S0.grid_ptr())), Error);
    }
}

TEST_SUITE("simulator")
{
    TEST_CASE("pure diffusion conserves mass")
    {
        auto sc                     = scenario("sim1b", 101);
        sc.spec.variant             = Variant::Full;
        sc.spec.d_S                 = 0.3;
        sc.spec.reaction_enabled    = false;
        Stepper stepper(sc.spec, 1e-3);
        State st{0.0, sc.S0, sc.I0, Field::zeros(sc.S0.grid_ptr())};
        const double N = integrate(st.S) + integrate(st.I);
        for (int k = 0; k < 1000; ++k) {
            stepper.advance(st);
        }
        CHECK(std::abs(integrate(st.S) + integrate(st.I) - N) <= 1e-13 * N);
    }

    TEST_CASE("reaction alone keeps S + I nodewise")
    {
        for (auto inc : {RiskMode::MassAction, RiskMode::StdIncidence}) {
            auto sc                = scenario("sim1b", 31);
            sc.spec.variant        = Variant::Full;
            sc.spec.full_incidence = inc;
            sc.spec.d_S = sc.spec.d_I = 0.0;
            Stepper stepper(sc.spec, 1e-2);
            State st{0.0, sc.S0, sc.I0, Field::zeros(sc.S0.grid_ptr())};
            for (int k = 0; k < 200; ++k) {
                stepper.advance(st);
            }
            for (std::size_t i = 0; i < st.S.size(); ++i) {
                CHECK(st.S[i] + st.I[i] == doctest::Approx(sc.S0[i] + sc.I0[i]).epsilon(1e-14));
            }
        }
    }

    // On a coarse grid d dt / dx^2 stays O(1); on fine grids the local defect
    // shows the usual stiff order reduction while the global error does not.
    TEST_CASE("local error of one step is third order")
    {
        for (const char* p : {"sim1b", "sim2b", "sim3b"}) {
            const auto sc = scenario(p, 21);
            State s0{0.0, sc.S0, sc.I0, Field::zeros(sc.S0.grid_ptr())};
            auto defect = [&](double dt) {
                const auto one = step(sc.spec, s0, dt);
                const auto two = step(sc.spec, step(sc.spec, s0, 0.5 * dt), 0.5 * dt);
                return max_error(one, two);
            };
            const double ratio = defect(2.5e-4) / defect(1.25e-4);
            INFO(std::string(p) << " local defect ratio " << ratio);
            CHECK(ratio >= 7.0);
            CHECK(ratio <= 9.0);
        }
    }

    TEST_CASE("wall order reduction of the local defect")
    {
        // plain Strang behaves like dt^1.5 at the walls when d dt / dx^2 is large
        auto sc    = scenario("sim1b");
        auto plain = sc;
        plain.spec.boundary_correction = false;
        auto ratio = [](const Scenario& s) {
            State s0{0.0, s.S0, s.I0, Field::zeros(s.S0.grid_ptr())};
            auto defect = [&](double dt) {
                return max_error(step(s.spec, s0, dt), step(s.spec, step(s.spec, s0, 0.5 * dt), 0.5 * dt));
            };
            return defect(2e-3) / defect(1e-3);
        };
        const double rp = ratio(plain), rc = ratio(sc);
        INFO("plain " << rp << " corrected " << rc);
        CHECK(rp == doctest::Approx(std::pow(2.0, 1.5)).epsilon(0.05));
        CHECK(rc > 4.4);
    }

    TEST_CASE("second-order convergence in time")
    {
        for (const char* p : {"sim1b", "sim2b", "sim3b"}) {
            const auto sc  = scenario(p);
            const auto ref = short_run(sc, 1.0, 2.5e-4, 1.0).snapshots.back();
            const double e1 = max_error(short_run(sc, 1.0, 2e-3, 1.0).snapshots.back(), ref);
            const double e2 = max_error(short_run(sc, 1.0, 1e-3, 1.0).snapshots.back(), ref);
            INFO(std::string(p) << " error ratio " << e1 / e2);
            CHECK(e1 / e2 >= 3.6);
            CHECK(e1 / e2 <= 4.6);
        }
    }

    TEST_CASE("plain Strang loses order at the walls, the corrected splitting does not")
    {
        auto sc        = scenario("sim1b");
        auto plain     = sc;
        plain.spec.boundary_correction = false;
        auto ratio = [](const Scenario& s) {
            const auto ref = short_run(s, 1.0, 2.5e-4, 1.0).snapshots.back();
            return max_error(short_run(s, 1.0, 2e-3, 1.0).snapshots.back(), ref) /
                   max_error(short_run(s, 1.0, 1e-3, 1.0).snapshots.back(), ref);
        };
        const double rp = ratio(plain), rc = ratio(sc);
        INFO("plain " << rp << " corrected " << rc);
        CHECK(rp < 3.5);
        CHECK(rc >= 3.6);
        // both converge to the same solution
        const auto a = short_run(plain, 1.0, 2.5e-4, 1.0).snapshots.back();
        const auto b = short_run(sc, 1.0, 2.5e-4, 1.0).snapshots.back();
        CHECK(max_error(a, b) < 1e-6);
    }

    TEST_CASE("invariants along every preset")
    {
        for (const char* p : k_presets) {
            const auto sc = scenario(p, 101);
            const auto tr = short_run(sc, 3.0);
            INFO(std::string(p));
            for (const auto& st : tr.snapshots) {
                CHECK(std::abs(integrate(st.S) + integrate(st.I) - tr.N) <= 1e-12 * tr.N);
                CHECK(min_value(st.S) >= 0.0);
                CHECK(min_value(st.I) >= 0.0);
            }
            CHECK_FALSE(tr.clipping_flagged);
        }
    }

    TEST_CASE("the non-diffusing susceptible class follows its exponential form")
    {
        for (const char* p : {"sim1a", "sim1b", "sim1c"}) {
            const auto sc = scenario(p);
            const auto tr = short_run(sc, 5.0);
            const auto r  = ratio_r(sc.spec);
            double scale  = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                scale = std::max(scale, std::abs(sc.S0[i] - r[i]));
            }
            double worst = 0.0;
            for (const auto& st : tr.snapshots) {
                for (std::size_t i = 0; i < r.size(); ++i) {
                    const double pred = r[i] + (sc.S0[i] - r[i]) * std::exp(-sc.spec.beta[i] * st.J[i]);
                    worst             = std::max(worst, std::abs(st.S[i] - pred));
                }
            }
            INFO(std::string(p));
            CHECK(worst <= 1e-12 * scale);
        }
    }

    TEST_CASE("a non-diffusing infected class keeps its initial support")
    {
        auto cfg    = preset_config("sim2b");
        cfg.I0_expr = "max(cos(pi*x), 0)";
        const auto sc = build_scenario(cfg);
        const auto tr = short_run(sc, 2.0);
        for (std::size_t i = 0; i < sc.I0.size(); ++i) {
            if (sc.I0[i] == 0.0) {
                CHECK(tr.snapshots.back().I[i] == 0.0);
            }
            else {
                CHECK(tr.snapshots.back().I[i] > 0.0);
            }
        }
    }

    TEST_CASE("oversized steps are rejected under standard incidence")
    {
        const auto sc = scenario("sim3b", 51);
        State st{0.0, sc.S0, sc.I0, Field::zeros(sc.S0.grid_ptr())};
        CHECK(dt_bound(sc.spec, st) > 0.0);
        Stepper big(sc.spec, 2.0 * dt_bound(sc.spec, st));
        try {
            big.advance(st);
            FAIL("expected a rejected step");
        }
        catch (const Error& e) {
            CHECK(e.code() == ErrorCode::StepRejected);
        }
    }

    TEST_CASE("steady detection")
    {
        const auto sc = scenario("sim1b");
        RunOptions o;
        const auto tr = run(sc.spec, sc.S0, sc.I0, o);
        CHECK(tr.steady_reached);
        CHECK(tr.snapshots.back().t < 50.0);
        CHECK(std::abs(integrate(tr.snapshots.back().I) - 2.5) < 0.025);
    }

    TEST_CASE("implicit diffusion schemes agree with the exact propagator")
    {
        const auto sc = scenario("sim1b", 101);
        const auto ex = short_run(sc, 1.0, 1e-3, 1.0).snapshots.back();
        for (auto s : {DiffusionScheme::CrankNicolson, DiffusionScheme::BackwardEuler}) {
            auto alt        = sc;
            alt.spec.scheme = s;
            const auto tr   = short_run(alt, 1.0, 1e-3, 1.0);
            CHECK(max_error(tr.snapshots.back(), ex) < 1e-2);
            CHECK(std::abs(integrate(tr.snapshots.back().S) + integrate(tr.snapshots.back().I) - tr.N) < 1e-12);
        }
    }
}
