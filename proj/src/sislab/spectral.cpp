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
#include "sislab/spectral.hpp"
#include "sislab/error.hpp"
#include "sislab/neumann.hpp"
#include "sislab/symtri.hpp"

#include <cmath>
#include <numbers>

namespace sislab
{

namespace
{

// W^{1/2} (d L + diag h) W^{-1/2}
SymTridiagonal symmetrized(double d, const Field& h)
{
    const auto& g = h.grid();
    const auto L  = neumann_laplacian(g);
    SymTridiagonal S;
    S.diag.resize(h.size());
    S.off.resize(h.size() - 1);
    for (std::size_t i = 0; i < h.size(); ++i) {
        S.diag[i] = d * L.diag[i] + h[i];
    }
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
        S.off[i] = d * L.upper[i] * std::sqrt(g.weights[i] / g.weights[i + 1]);
    }
    return S;
}

} // namespace

EigenResult principal_eigenvalue(double d, const Field& h, const SpectralOptions& opts)
{
    require(d > 0.0, "principal eigenvalue needs d > 0; use the small-d limit for d -> 0");
    require(opts.tol > 0.0, "eigen tolerance must be positive");
    const auto& g = h.grid();

    const auto top = largest_eigenpair(symmetrized(d, h), 0.25 * opts.tol, opts.max_iter);

    std::vector<double> phi(h.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        phi[i] = top.vector[i] / std::sqrt(g.weights[i]);
    }
    if (phi[0] < 0.0) {
        for (double& v : phi) {
            v = -v;
        }
    }

    EigenResult res;
    res.phi        = Field(h.grid_ptr(), std::move(phi));
    res.iterations = top.iterations;
    // Variational value; equals the Rayleigh quotient by discrete summation by parts.
    double hphi2 = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        hphi2 += g.weights[i] * h[i] * res.phi[i] * res.phi[i];
    }
    res.sigma = hphi2 - d * gradient_energy(res.phi);

    const auto Lphi = apply(neumann_laplacian(g), res.phi);
    double r        = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        r = std::max(r, std::abs(d * Lphi[i] + (h[i] - res.sigma) * res.phi[i]));
    }
    const double scale = 4.0 * d / (g.dx * g.dx) + max_abs(h.values()) + std::abs(res.sigma);
    res.residual       = r / (scale * max_abs(res.phi.values()));

    if (!top.converged || res.residual > opts.tol) {
        throw Error(ErrorCode::NoConvergence, "principal eigenvalue did not converge after " +
                                                  std::to_string(top.iterations) + " iterations, residual " +
                                                  std::to_string(res.residual));
    }
    return res;
}

bool sigma_monotonicity_check(const Field& h, const std::vector<double>& d_list, std::vector<double>* sigmas,
                              const SpectralOptions& opts)
{
    require(max_value(h) - min_value(h) > 1e-12, "sigma is independent of d for constant h");
    require(!d_list.empty(), "d list is empty");
    for (std::size_t k = 0; k < d_list.size(); ++k) {
        require(d_list[k] > 0.0 && (k == 0 || d_list[k] > d_list[k - 1]), "d list must be strictly increasing positives");
    }
    if (sigmas != nullptr) {
        sigmas->clear();
    }
    bool decreasing = true;
    double prev     = 0.0;
    for (std::size_t k = 0; k < d_list.size(); ++k) {
        const double s = principal_eigenvalue(d_list[k], h, opts).sigma;
        if (sigmas != nullptr) {
            sigmas->push_back(s);
        }
        if (k > 0 && !(s < prev)) {
            decreasing = false;
        }
        prev = s;
    }
    return decreasing;
}

double sigma_small_d_limit(const Field& h)
{
    return max_value(h);
}

double sigma_large_d_limit(const Field& h)
{
    return mean_value(h);
}

double first_neumann_eigenvalue(double a, double b)
{
    require(b > a, "interval needs b > a");
    return std::numbers::pi * std::numbers::pi / ((b - a) * (b - a));
}

Field normalize_max_one(const Field& phi)
{
    const double m = max_value(phi);
    require(m > 0.0, "eigenfunction must have a positive maximum");
    std::vector<double> v(phi.vector());
    for (double& x : v) {
        x /= m;
    }
    return Field(phi.grid_ptr(), std::move(v));
}

Field sigma_sensitivity(double d, const Field& h, const SpectralOptions& opts)
{
    const auto res = principal_eigenvalue(d, h, opts);
    std::vector<double> s(h.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = res.phi[i] * res.phi[i];
    }
    return Field(h.grid_ptr(), std::move(s));
}

double basic_reproduction_number(double d_I, const Field& beta, const Field& gamma, const SpectralOptions& opts)
{
    require(d_I > 0.0, "basic reproduction number needs d_I > 0");
    require(same_grid(beta, gamma), "beta and gamma must share a grid");
    const auto& g = beta.grid();
    const auto L  = neumann_laplacian(g);
    const std::size_t n = beta.size();
    for (std::size_t i = 0; i < n; ++i) {
        require(beta[i] > 0.0 && gamma[i] > 0.0, "beta and gamma must be positive");
    }

    // -C with C = D^{-1} W (-d L + gamma) D^{-1}, D = sqrt(w beta); its top eigenvalue is -1/R0.
    SymTridiagonal A;
    A.diag.resize(n);
    A.off.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        A.diag[i] = (d_I * L.diag[i] - gamma[i]) / beta[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        A.off[i] = d_I * g.weights[i] * L.upper[i] /
                   std::sqrt(g.weights[i] * beta[i] * g.weights[i + 1] * beta[i + 1]);
    }
    const auto top = largest_eigenpair(A, 0.25 * opts.tol, opts.max_iter);
    if (!top.converged) {
        throw Error(ErrorCode::NoConvergence, "reproduction number iteration did not converge, residual " +
                                                  std::to_string(top.residual));
    }
    require(top.lambda < 0.0, "reproduction number pencil is not definite", ErrorCode::Internal);
    return -1.0 / top.lambda;
}

} // namespace sislab
