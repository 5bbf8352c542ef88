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
#include "sislab/neumann.hpp"
#include "sislab/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace sislab
{

TridiagonalMatrix neumann_laplacian(const Grid& grid)
{
    const std::size_t n = grid.size();
    const double c      = 1.0 / (grid.dx * grid.dx);
    TridiagonalMatrix L;
    L.lower.assign(n - 1, c);
    L.upper.assign(n - 1, c);
    L.diag.assign(n, -2.0 * c);
    L.upper.front() = 2.0 * c;
    L.lower.back()  = 2.0 * c;
    return L;
}

void apply(const TridiagonalMatrix& A, std::span<const double> x, std::span<double> y)
{
    const std::size_t n = A.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = A.diag[i] * x[i];
        if (i > 0) {
            s += A.lower[i - 1] * x[i - 1];
        }
        if (i + 1 < n) {
            s += A.upper[i] * x[i + 1];
        }
        y[i] = s;
    }
}

Field apply(const TridiagonalMatrix& A, const Field& f)
{
    require(A.size() == f.size(), "matrix and field sizes differ");
    std::vector<double> y(f.size());
    apply(A, f.values(), y);
    return Field(f.grid_ptr(), std::move(y));
}

std::vector<double> solve_tridiagonal(const TridiagonalMatrix& A, std::span<const double> rhs)
{
    const std::size_t n = A.size();
    require(rhs.size() == n, "right-hand side size differs from the matrix");
    std::vector<double> c(n), x(n);
    double pivot = A.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (std::abs(pivot) < 1e-14) {
            throw Error(ErrorCode::Domain, "tridiagonal pivot " + std::to_string(pivot) + " at row " +
                                               std::to_string(i) + " is below 1e-14");
        }
        c[i] = i + 1 < n ? A.upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - (i > 0 ? A.lower[i - 1] * x[i - 1] : 0.0)) / pivot;
        if (i + 1 == n) {
            break;
        }
        pivot = A.diag[i + 1] - A.lower[i] * c[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= c[i] * x[i + 1];
    }
    return x;
}

namespace
{

TridiagonalMatrix shifted(const TridiagonalMatrix& L, double alpha)
{
    TridiagonalMatrix A = L;
    for (auto& v : A.lower) {
        v *= -alpha;
    }
    for (auto& v : A.upper) {
        v *= -alpha;
    }
    for (auto& v : A.diag) {
        v = 1.0 - alpha * v;
    }
    return A;
}

} // namespace

Field solve_shifted(const TridiagonalMatrix& L, double alpha, const Field& rhs)
{
    require(alpha >= 0.0, "solve_shifted needs alpha >= 0");
    require(L.size() == rhs.size(), "matrix and field sizes differ");
    if (alpha == 0.0) {
        return rhs;
    }
    return Field(rhs.grid_ptr(), solve_tridiagonal(shifted(L, alpha), rhs.values()));
}

double gradient_energy(const Grid& grid, std::span<const double> f)
{
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        const double g = (f[i + 1] - f[i]) / grid.dx;
        e += grid.dx * g * g;
    }
    return e;
}

double gradient_energy(const Field& f)
{
    return gradient_energy(f.grid(), f.values());
}

// FFTW planning is not thread-safe; executing distinct plans concurrently is.
struct DiffusionStepper::Plan {
    fftw_plan plan = nullptr;
    double* in     = nullptr;
    double* out    = nullptr;

    static std::mutex& planner_mutex()
    {
        static std::mutex m;
        return m;
    }

    explicit Plan(int n)
    {
        std::lock_guard lock(planner_mutex());
        in   = fftw_alloc_real(static_cast<std::size_t>(n));
        out  = fftw_alloc_real(static_cast<std::size_t>(n));
        plan = fftw_plan_r2r_1d(n, in, out, FFTW_REDFT00, FFTW_ESTIMATE);
        if (plan == nullptr) {
            throw Error(ErrorCode::Internal, "could not create cosine transform plan");
        }
    }

    ~Plan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(in);
        fftw_free(out);
    }
};

DiffusionStepper::DiffusionStepper(const Grid& grid, double d, double dt, DiffusionScheme scheme)
    : m_scheme(scheme)
    , m_alpha(d * dt)
    , m_dt(dt)
    , m_L(neumann_laplacian(grid))
{
    require(d >= 0.0 && dt > 0.0, "diffusion step needs d >= 0 and dt > 0");
    const std::size_t n = grid.size();
    m_work.resize(n);
    switch (scheme) {
    case DiffusionScheme::Exact: {
        const std::size_t m = n - 1;
        m_decay.resize(n);
        m_source.resize(n);
        const double scale = 1.0 / (2.0 * static_cast<double>(m));
        for (std::size_t k = 0; k < n; ++k) {
            const double s = std::sin(std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(m)));
            const double z = -m_alpha * 4.0 * s * s / (grid.dx * grid.dx);
            m_decay[k]     = std::exp(z) * scale;
            // dt phi1(z): the exact response to a constant source
            m_source[k] = (z == 0.0 ? dt : dt * std::expm1(z) / z) * scale;
        }
        m_plan = std::make_unique<Plan>(static_cast<int>(n));
        break;
    }
    case DiffusionScheme::CrankNicolson:
        m_implicit = shifted(m_L, 0.5 * m_alpha);
        break;
    case DiffusionScheme::BackwardEuler:
        m_implicit = shifted(m_L, m_alpha);
        break;
    }
}

DiffusionStepper::~DiffusionStepper() = default;

void DiffusionStepper::advance(std::span<double> u)
{
    if (m_alpha == 0.0) {
        return;
    }
    const std::size_t n = u.size();
    switch (m_scheme) {
    case DiffusionScheme::Exact: {
        std::copy(u.begin(), u.end(), m_plan->in);
        fftw_execute(m_plan->plan);
        for (std::size_t k = 0; k < n; ++k) {
            m_plan->in[k] = m_plan->out[k] * m_decay[k];
        }
        fftw_execute(m_plan->plan);
        std::copy(m_plan->out, m_plan->out + n, u.begin());
        break;
    }
    case DiffusionScheme::CrankNicolson:
    case DiffusionScheme::BackwardEuler: {
        // Solve for the increment: its mass error scales with |L u|, not |u|.
        apply(m_L, u, m_work);
        for (std::size_t i = 0; i < n; ++i) {
            m_work[i] *= m_alpha;
        }
        const auto du = solve_tridiagonal(m_implicit, m_work);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += du[i];
        }
        break;
    }
    }
}

void DiffusionStepper::advance(std::span<double> u, std::span<const double> q)
{
    const std::size_t n = u.size();
    require(q.size() == n, "diffusion source length mismatch");
    if (m_alpha == 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += m_dt * q[i];
        }
        return;
    }
    switch (m_scheme) {
    case DiffusionScheme::Exact: {
        std::copy(q.begin(), q.end(), m_plan->in);
        fftw_execute(m_plan->plan);
        std::copy(m_plan->out, m_plan->out + n, m_work.begin());
        std::copy(u.begin(), u.end(), m_plan->in);
        fftw_execute(m_plan->plan);
        for (std::size_t k = 0; k < n; ++k) {
            m_plan->in[k] = m_plan->out[k] * m_decay[k] + m_work[k] * m_source[k];
        }
        fftw_execute(m_plan->plan);
        std::copy(m_plan->out, m_plan->out + n, u.begin());
        break;
    }
    case DiffusionScheme::CrankNicolson:
    case DiffusionScheme::BackwardEuler: {
        apply(m_L, u, m_work);
        for (std::size_t i = 0; i < n; ++i) {
            m_work[i] = m_alpha * m_work[i] + m_dt * q[i];
        }
        const auto du = solve_tridiagonal(m_implicit, m_work);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += du[i];
        }
        break;
    }
    }
}

} // namespace sislab
