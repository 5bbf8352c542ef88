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
#ifndef SISLAB_SYMTRI_HPP
#define SISLAB_SYMTRI_HPP

#include <cstddef>
#include <vector>

namespace sislab
{

/// Symmetric tridiagonal matrix; off[i] couples rows i and i+1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const
    {
        return diag.size();
    }
};

/// Number of eigenvalues strictly below x (Sturm sequence count).
std::size_t count_below(const SymTridiagonal& A, double x);

/// Gershgorin enclosure [lo, hi] of the spectrum.
void gershgorin(const SymTridiagonal& A, double& lo, double& hi);

struct TopEigenpair {
    double lambda = 0.0;
    /// Unit Euclidean norm; positive when the off-diagonals are positive.
    std::vector<double> vector;
    int iterations      = 0;
    double residual     = 0.0;
    bool converged      = false;
};

/**
 * Largest eigenpair. The eigenvalue is bracketed by Sturm bisection, then
 * inverse iteration runs with a shift just above it, where mu I - A is
 * positive definite. The eigenvalue returned is the Rayleigh quotient.
 * rel_tol applies to the max-norm residual relative to the Gershgorin radius times max|x|.
 */
TopEigenpair largest_eigenpair(const SymTridiagonal& A, double rel_tol, int max_iter);

} // namespace sislab

#endif // SISLAB_SYMTRI_HPP
