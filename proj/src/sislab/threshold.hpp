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
#ifndef SISLAB_THRESHOLD_HPP
#define SISLAB_THRESHOLD_HPP

#include "sislab/grid.hpp"
#include "sislab/spectral.hpp"

#include <cstdint>
#include <vector>

namespace sislab
{

struct ThresholdOptions {
    /// Relative tolerance on the KKT residual and on the objective.
    double tol = 1e-6;
    /// Constraint tolerance on sigma.
    double feas_tol = 1e-8;
    int max_iter    = 4000;
    /// 0 optimises lambda nodewise; k > 0 restricts it to k equal piecewise-constant cells.
    int cells          = 0;
    int random_starts  = 1;
    std::uint64_t seed = 20260101;
    SpectralOptions eigen{1e-12, 10000};
};

struct ThresholdResult {
    double n_star = 0.0;
    /// Values in [0, 1].
    Field lambda_star;
    double sigma_at_opt = 0.0;
    /// int r.
    double lower_bound = 0.0;
    /// int max(S0, r).
    double upper_bound = 0.0;
    bool converged     = false;
    double kkt_residual = 0.0;
    int iterations      = 0;
    /// Index of the winning start; -1 when the lambda = 0 baseline won.
    int best_start      = -1;
};

/**
 * Maximises int (lambda S0 + (1 - lambda) r) over 0 <= lambda <= 1 subject to
 * sigma(d_I, beta lambda (S0 - r)) <= 0. lambda = 0 is always feasible, so the
 * result is the best feasible iterate over all starts.
 *
 * Each start runs sequential linear programming in a box trust region: the
 * linearised problem has one constraint and is solved exactly. converged means
 * the projected KKT residual, complementarity included, is below opts.tol.
 */
ThresholdResult critical_population(const Field& S0, const Field& r, const Field& beta, double d_I,
                                    const ThresholdOptions& opts = {});

/// sigma(d_I, beta lambda (S0 - r)).
double threshold_constraint(const Field& lambda, const Field& S0, const Field& r, const Field& beta, double d_I,
                            const SpectralOptions& eig = {});

/// Cell index of every node for a k-cell piecewise-constant parametrisation.
std::vector<int> cell_of_nodes(const Grid& grid, int cells);

} // namespace sislab

#endif // SISLAB_THRESHOLD_HPP
