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
#ifndef SISLAB_NEUMANN_HPP
#define SISLAB_NEUMANN_HPP

#include "sislab/grid.hpp"

#include <memory>
#include <span>
#include <vector>

namespace sislab
{

/// Row i holds lower[i-1], diag[i], upper[i].
struct TridiagonalMatrix {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    std::size_t size() const
    {
        return diag.size();
    }
};

/**
 * Ghost-point Neumann Laplacian: interior rows (1, -2, 1)/dx^2, boundary rows
 * (-2, 2)/dx^2. Rows sum to zero and W L is symmetric for the trapezoid weights W.
 */
TridiagonalMatrix neumann_laplacian(const Grid& grid);

void apply(const TridiagonalMatrix& A, std::span<const double> x, std::span<double> y);
Field apply(const TridiagonalMatrix& A, const Field& f);

/// Thomas elimination. Throws Error(Domain) when a pivot drops below 1e-14 in magnitude.
std::vector<double> solve_tridiagonal(const TridiagonalMatrix& A, std::span<const double> rhs);

/// Solves (Id - alpha L) u = rhs; alpha = 0 returns rhs.
Field solve_shifted(const TridiagonalMatrix& L, double alpha, const Field& rhs);

/// Sum over cell edges of dx ((f[i+1] - f[i]) / dx)^2; equals -<L f, f>_w exactly.
double gradient_energy(const Field& f);
double gradient_energy(const Grid& grid, std::span<const double> f);

enum class DiffusionScheme
{
    /// exp(d dt L) through the discrete cosine basis of L.
    Exact,
    CrankNicolson,
    BackwardEuler,
};

/**
 * Advances u_t = d L u over a fixed step. The exact scheme diagonalises L with
 * a type-I DCT, so the propagator is exact for the semi-discrete system and
 * conserves quadrature mass to roundoff.
 */
class DiffusionStepper
{
public:
    DiffusionStepper(const Grid& grid, double d, double dt, DiffusionScheme scheme = DiffusionScheme::Exact);
    ~DiffusionStepper();
    DiffusionStepper(const DiffusionStepper&)            = delete;
    DiffusionStepper& operator=(const DiffusionStepper&) = delete;

    void advance(std::span<double> u);
    /// Same, for u_t = d L u + q with q held fixed over the step.
    void advance(std::span<double> u, std::span<const double> q);

private:
    struct Plan;
    DiffusionScheme m_scheme;
    double m_alpha;
    double m_dt;
    TridiagonalMatrix m_L;
    TridiagonalMatrix m_implicit;
    std::vector<double> m_decay;
    std::vector<double> m_source;
    std::vector<double> m_work;
    std::unique_ptr<Plan> m_plan;
};

} // namespace sislab

#endif // SISLAB_NEUMANN_HPP
