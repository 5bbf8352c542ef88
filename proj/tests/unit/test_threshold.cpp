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
#include "oracles.hpp"

#include "sislab/config.hpp"
#include "sislab/model.hpp"
#include "sislab/threshold.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>

using namespace sislab;

namespace
{

struct Instance {
    Field S0, r, beta;
    double d_I;
};

Instance from_preset(const char* name, int nx)
{
    auto cfg      = preset_config(name);
    cfg.nx        = nx;
    const auto sc = build_scenario(cfg);
    return {sc.S0, ratio_r(sc.spec), sc.spec.beta, sc.spec.d_I};
}

Instance from_expressions(const char* S0, const char* beta, const char* gamma, double d_I, int nx)
{
    const auto g = make_grid(0.0, 1.0, nx);
    ModelSpec spec;
    spec.beta  = eval_expression(g, beta);
    spec.gamma = eval_expression(g, gamma);
    spec.d_I   = d_I;
    return {eval_expression(g, S0), ratio_r(spec), spec.beta, d_I};
}

void check_bracket(const ThresholdResult& res)
{
    CHECK(res.lower_bound <= res.n_star * (1.0 + 1e-12));
    CHECK(res.n_star <= res.upper_bound * (1.0 + 1e-12));
    CHECK(res.sigma_at_opt <= 1e-8);
    CHECK(min_value(res.lambda_star) >= 0.0);
    CHECK(max_value(res.lambda_star) <= 1.0);
}

} // namespace

TEST_SUITE("threshold")
{
    TEST_CASE("constant beta gives N* = int r")
    {
        const auto in  = from_preset("sim1b", 101);
        const auto res = critical_population(in.S0, in.r, in.beta, in.d_I);
        check_bracket(res);
        CHECK(std::abs(res.n_star - integrate(in.r)) <= 1e-3 * integrate(in.r));
        CHECK(res.converged);
    }

    TEST_CASE("S0 below r gives N* = int r")
    {
        auto in = from_preset("sim1c", 101);
        for (std::size_t i = 0; i < in.S0.size(); ++i) {
            in.S0[i] = 0.6 * in.r[i];
        }
        const auto res = critical_population(in.S0, in.r, in.beta, in.d_I);
        check_bracket(res);
        CHECK(std::abs(res.n_star - integrate(in.r)) <= 1e-3 * integrate(in.r));
    }

    TEST_CASE("strict inequality instance sits below the upper bound")
    {
        const auto in  = from_preset("sim1c", 101);
        const auto res = critical_population(in.S0, in.r, in.beta, in.d_I);
        check_bracket(res);
        CHECK(res.converged);
        CHECK(res.n_star <= 0.995 * res.upper_bound);
        CHECK(res.n_star > res.lower_bound * 1.005);
    }

    TEST_CASE("bounds hold on assorted instances")
    {
        const char* const cases[][3] = {
            {"2 + cos(pi*x)", "1 + x*x", "1.5"},
            {"3*x", "2 + sin(3*x)", "1 + x"},
            {"1 + 0.5*cos(2*pi*x)", "4*exp(-x)", "2"},
        };
        for (const auto& c : cases) {
            INFO(std::string(c[1]));
            const auto in  = from_expressions(c[0], c[1], c[2], 0.5, 61);
            const auto res = critical_population(in.S0, in.r, in.beta, in.d_I);
            check_bracket(res);
        }
    }

    TEST_CASE("eight-cell optimum matches an exhaustive oracle")
    {
        const Instance cases[] = {
            from_preset("sim1c", 41),
            from_expressions("2 + cos(pi*x)", "1 + x*x", "1.5", 0.5, 41),
            from_expressions("3*x", "2 + sin(3*x)", "1 + x", 1.0, 41),
        };
        for (const auto& in : cases) {
            ThresholdOptions o;
            o.cells        = 8;
            const auto res = critical_population(in.S0, in.r, in.beta, in.d_I, o);
            const auto orc = oracle::cell_threshold_oracle(in.S0, in.r, in.beta, in.d_I, 8);
            INFO("solver " << res.n_star << " oracle " << orc.n_star);
            check_bracket(res);
            CHECK(std::abs(res.n_star - orc.n_star) <= 5e-3 * orc.n_star);
            // feasibility of the solver's lambda, judged by the dense eigensolver
            std::vector<double> h(in.S0.size());
            for (std::size_t i = 0; i < h.size(); ++i) {
                h[i] = in.beta[i] * res.lambda_star[i] * (in.S0[i] - in.r[i]);
            }
            CHECK(oracle::dense_sigma_sym(in.d_I, h, in.S0.grid()) <= 1e-8);
        }
    }

    TEST_CASE("N* does not decrease with d_I")
    {
        auto in     = from_preset("sim1c", 61);
        double prev = 0.0;
        for (double d : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const auto res = critical_population(in.S0, in.r, in.beta, d);
            INFO("d_I " << d << " N* " << res.n_star);
            CHECK(res.converged);
            CHECK(res.n_star >= prev - 1e-9);
            prev = res.n_star;
        }
    }

    TEST_CASE("cell partition")
    {
        const auto g = make_grid(0.0, 1.0, 9);
        const auto c = cell_of_nodes(*g, 4);
        CHECK(c.front() == 0);
        CHECK(c.back() == 3);
        CHECK(std::is_sorted(c.begin(), c.end()));
        CHECK_THROWS(cell_of_nodes(*g, 0));
    }
}
