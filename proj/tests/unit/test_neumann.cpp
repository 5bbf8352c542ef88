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
#include "sislab/error.hpp"
#include "sislab/neumann.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sislab;
using std::numbers::pi;

namespace
{

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) {
        x = u(rng);
    }
    return v;
}

} // namespace

TEST_SUITE("neumann")
{
    TEST_CASE("constants lie in the kernel")
    {
        const auto g = make_grid(0.0, 1.0, 37);
        const auto Lc = apply(neumann_laplacian(*g), Field::constant(g, 2.5));
        CHECK(max_abs(Lc.values()) < 1e-9);
    }

    TEST_CASE("cosine is an approximate eigenfunction")
    {
        const auto g  = make_grid(0.0, 1.0, 201);
        const auto f  = eval_expression(g, "cos(pi*x)");
        const auto Lf = apply(neumann_laplacian(*g), f);
        double err    = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            err = std::max(err, std::abs(Lf[i] + pi * pi * f[i]));
        }
        CHECK(err <= 1e-3);
    }

    TEST_CASE("quadratics are differentiated exactly at interior nodes")
    {
        const auto g  = make_grid(0.0, 2.0, 41);
        const auto Lf = apply(neumann_laplacian(*g), eval_expression(g, "x^2"));
        for (std::size_t i = 1; i + 1 < g->size(); ++i) {
            CHECK(Lf[i] == doctest::Approx(2.0).epsilon(1e-10));
        }
    }

    TEST_CASE("flux balance and weighted symmetry for random fields")
    {
        for (int nx : {3, 4, 17, 200}) {
            const auto g = make_grid(-1.0, 2.0, nx);
            const auto L = neumann_laplacian(*g);
            const Field f(g, random_values(g->size(), 11u + static_cast<unsigned>(nx)));
            const Field h(g, random_values(g->size(), 99u + static_cast<unsigned>(nx)));
            const auto Lf = apply(L, f);
            const auto Lh = apply(L, h);
            const double scale = max_abs(Lf.values()) + 1.0;
            CHECK(std::abs(integrate(Lf)) <= 1e-13 * scale);
            CHECK(std::abs(inner(Lf, h) - inner(f, Lh)) <= 1e-12 * scale);
            // summation by parts
            CHECK(std::abs(inner(Lf, f) + gradient_energy(f)) <= 1e-12 * scale);
        }
    }

    TEST_CASE("gradient energy examples")
    {
        const auto g = make_grid(0.0, 1.0, 201);
        CHECK(gradient_energy(Field::constant(g, 4.0)) == 0.0);
        CHECK(std::abs(gradient_energy(eval_expression(g, "cos(pi*x)")) - pi * pi / 2.0) < 1e-3);
        CHECK(gradient_energy(eval_expression(g, "x")) == doctest::Approx(1.0).epsilon(1e-13));
    }

    TEST_CASE("shifted solves")
    {
        const auto g   = make_grid(0.0, 1.0, 50);
        const auto L   = neumann_laplacian(*g);
        const Field rhs(g, random_values(g->size(), 3));
        const auto same = solve_shifted(L, 0.0, rhs);
        CHECK(max_diff(same, rhs) == 0.0);
        const auto c = solve_shifted(L, 0.37, Field::constant(g, 1.25));
        CHECK(max_diff(c, Field::constant(g, 1.25)) < 1e-12);

        // residual check on a random diagonally dominant system
        TridiagonalMatrix A;
        A.lower = random_values(49, 5);
        A.upper = random_values(49, 6);
        A.diag  = random_values(50, 7, 3.0, 4.0);
        const auto b = random_values(50, 8);
        const auto x = solve_tridiagonal(A, b);
        std::vector<double> Ax(50);
        apply(A, x, Ax);
        double res = 0.0;
        for (std::size_t i = 0; i < 50; ++i) {
            res = std::max(res, std::abs(Ax[i] - b[i]));
        }
        CHECK(res <= 1e-12);
    }

    TEST_CASE("singular pivots are reported")
    {
        TridiagonalMatrix A;
        A.diag  = {1.0, 1.0};
        A.lower = {1.0};
        A.upper = {1.0};
        CHECK_THROWS_AS(solve_tridiagonal(A, std::vector<double>{1.0, 2.0}), Error);
    }

    TEST_CASE("the cosine-transform propagator matches the dense exponential")
    {
        for (int nx : {5, 33, 65}) {
            const auto g = make_grid(0.0, 1.0, nx);
            const auto u0 = random_values(g->size(), 21, 0.0, 2.0);
            for (double d : {1e-3, 0.5, 20.0}) {
                DiffusionStepper step(*g, d, 0.01, DiffusionScheme::Exact);
                auto u = u0;
                step.advance(u);
                const auto ref = oracle::dense_heat(d, 0.01, *g, u0);
                double err = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    err = std::max(err, std::abs(u[i] - ref[i]));
                }
                CHECK(err <= 1e-12);
            }
        }
    }

    TEST_CASE("the propagator with a constant source matches the dense solution")
    {
        const auto g  = make_grid(0.0, 2.0, 41);
        const auto u0 = random_values(g->size(), 31, 0.0, 2.0);
        const auto q  = random_values(g->size(), 32);
        for (double d : {0.0, 0.1, 3.0}) {
            for (auto scheme : {DiffusionScheme::Exact}) {
                DiffusionStepper step(*g, d, 0.02, scheme);
                auto u = u0;
                step.advance(u, q);
                const auto ref = oracle::dense_heat(d, 0.02, *g, u0, &q);
                double err     = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    err = std::max(err, std::abs(u[i] - ref[i]));
                }
                CHECK(err <= 1e-12);
            }
        }
    }

    TEST_CASE("every scheme conserves mass and keeps constants")
    {
        const auto g = make_grid(0.0, 1.0, 101);
        for (auto scheme : {DiffusionScheme::Exact, DiffusionScheme::CrankNicolson, DiffusionScheme::BackwardEuler}) {
            DiffusionStepper step(*g, 1.0, 1e-3, scheme);
            Field u(g, random_values(g->size(), 41, 0.0, 3.0));
            const double m0 = integrate(u);
            for (int k = 0; k < 1000; ++k) {
                step.advance(u.values());
            }
            CHECK(std::abs(integrate(u) - m0) <= 1e-13 * m0);
            Field c = Field::constant(g, 0.7);
            step.advance(c.values());
            CHECK(max_diff(c, Field::constant(g, 0.7)) < 1e-13);
        }
    }

    TEST_CASE("implicit schemes converge to the exact propagator")
    {
        const auto g  = make_grid(0.0, 1.0, 51);
        const auto u0 = eval_expression(g, "1 + cos(pi*x) + 0.3*cos(3*pi*x)");
        auto run = [&](DiffusionScheme s, int steps) {
            DiffusionStepper step(*g, 0.2, 0.1 / steps, s);
            Field u = u0;
            for (int k = 0; k < steps; ++k) {
                step.advance(u.values());
            }
            return u;
        };
        const auto ref = run(DiffusionScheme::Exact, 1);
        const double cn1 = max_diff(run(DiffusionScheme::CrankNicolson, 20), ref);
        const double cn2 = max_diff(run(DiffusionScheme::CrankNicolson, 40), ref);
        const double be1 = max_diff(run(DiffusionScheme::BackwardEuler, 20), ref);
        const double be2 = max_diff(run(DiffusionScheme::BackwardEuler, 40), ref);
        CHECK(cn1 / cn2 == doctest::Approx(4.0).epsilon(0.05));
        CHECK(be1 / be2 == doctest::Approx(2.0).epsilon(0.05));
    }

    TEST_CASE("exact propagator preserves nonnegativity")
    {
        const auto g = make_grid(0.0, 1.0, 201);
        DiffusionStepper step(*g, 1.0, 1e-3);
        std::vector<double> u(g->size(), 0.0);
        u[100] = 1.0;
        for (int k = 0; k < 50; ++k) {
            step.advance(u);
        }
        for (double v : u) {
            CHECK(v >= -1e-15);
        }
    }
}
