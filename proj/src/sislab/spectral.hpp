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
#ifndef SISLAB_SPECTRAL_HPP
#define SISLAB_SPECTRAL_HPP

#include "sislab/grid.hpp"

#include <vector>

namespace sislab
{

/// Principal eigenpair of d L + diag(h) under the Neumann stencil.
struct EigenResult {
    double sigma = 0.0;
    /// Positive at every node, <phi, phi>_w = 1.
    Field phi;
    int iterations = 0;
    /// max |d L phi + h phi - sigma phi| divided by (4 d / dx^2 + max |h| + |sigma|) max |phi|.
    double residual = 0.0;
};

struct SpectralOptions {
    double tol   = 1e-12;
    int max_iter = 10000;
};

/// Throws InvalidArgument for d <= 0 and NoConvergence with the last residual.
EigenResult principal_eigenvalue(double d, const Field& h, const SpectralOptions& opts = {});

/// sigma(d, h) for each d; true iff strictly decreasing. h must be nonconstant.
bool sigma_monotonicity_check(const Field& h, const std::vector<double>& d_list, std::vector<double>* sigmas = nullptr,
                              const SpectralOptions& opts = {});

/// The d -> 0+ limit, max h.
double sigma_small_d_limit(const Field& h);
/// The d -> infinity limit, the domain average of h.
double sigma_large_d_limit(const Field& h);

/// First positive eigenvalue of -Laplacian on [a, b] with Neumann conditions.
double first_neumann_eigenvalue(double a, double b);

/// Rescales phi so that its maximum equals 1.
Field normalize_max_one(const Field& phi);

/// d sigma / d h(x) = phi(x)^2 under unit L2 normalisation; d sigma / d h_i = w_i phi_i^2.
Field sigma_sensitivity(double d, const Field& h, const SpectralOptions& opts = {});

/**
 * sup of int beta phi^2 / int (d_I |grad phi|^2 + gamma phi^2), as the reciprocal of the
 * smallest eigenvalue of the symmetrised pencil.
 */
double basic_reproduction_number(double d_I, const Field& beta, const Field& gamma, const SpectralOptions& opts = {});

} // namespace sislab

#endif // SISLAB_SPECTRAL_HPP
