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
#include "sislab/symtri.hpp"
#include "sislab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sislab
{

std::size_t count_below(const SymTridiagonal& A, double x)
{
    const std::size_t n = A.size();
    std::size_t count   = 0;
    double q            = A.diag[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (q == 0.0) {
            q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
        }
        if (q < 0.0) {
            ++count;
        }
        if (i + 1 == n) {
            break;
        }
        q = A.diag[i + 1] - x - A.off[i] * A.off[i] / q;
    }
    return count;
}

void gershgorin(const SymTridiagonal& A, double& lo, double& hi)
{
    const std::size_t n = A.size();
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) {
            r += std::abs(A.off[i - 1]);
        }
        if (i + 1 < n) {
            r += std::abs(A.off[i]);
        }
        lo = std::min(lo, A.diag[i] - r);
        hi = std::max(hi, A.diag[i] + r);
    }
}

namespace
{

void multiply(const SymTridiagonal& A, const std::vector<double>& x, std::vector<double>& y)
{
    const std::size_t n = A.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = A.diag[i] * x[i];
        if (i > 0) {
            s += A.off[i - 1] * x[i - 1];
        }
        if (i + 1 < n) {
            s += A.off[i] * x[i + 1];
        }
        y[i] = s;
    }
}

// Solves (mu I - A) x = b in place by Thomas elimination.
void solve_shifted_spd(const SymTridiagonal& A, double mu, std::vector<double>& b, std::vector<double>& c)
{
    const std::size_t n = A.size();
    double pivot        = mu - A.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (!(pivot > 0.0)) {
            throw Error(ErrorCode::NoConvergence, "inverse iteration lost positive definiteness");
        }
        c[i] = i + 1 < n ? -A.off[i] / pivot : 0.0;
        b[i] = (b[i] + (i > 0 ? A.off[i - 1] * b[i - 1] : 0.0)) / pivot;
        if (i + 1 == n) {
            break;
        }
        pivot = mu - A.diag[i + 1] + A.off[i] * c[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        b[i] -= c[i] * b[i + 1];
    }
}

double normalize(std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    s = std::sqrt(s);
    for (double& x : v) {
        x /= s;
    }
    return s;
}

} // namespace

TopEigenpair largest_eigenpair(const SymTridiagonal& A, double rel_tol, int max_iter)
{
    const std::size_t n = A.size();
    require(n >= 1 && A.off.size() + 1 == n, "malformed symmetric tridiagonal matrix");

    double lo, hi;
    gershgorin(A, lo, hi);
    const double scale = std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});
    // The largest eigenvalue lies in [lo, hi]: count_below(hi) == n always.
    for (int k = 0; k < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * scale; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (count_below(A, mid) == n) {
            hi = mid;
        }
        else {
            lo = mid;
        }
    }

    TopEigenpair out;
    const double mu = hi + 1e-11 * scale;
    std::vector<double> x(n, 1.0), y(n), c(n);
    normalize(x);
    for (int it = 1; it <= max_iter; ++it) {
        solve_shifted_spd(A, mu, x, c);
        normalize(x);
        multiply(A, x, y);
        double rq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rq += x[i] * y[i];
        }
        double res = 0.0, xmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            res  = std::max(res, std::abs(y[i] - rq * x[i]));
            xmax = std::max(xmax, std::abs(x[i]));
        }
        out.lambda     = rq;
        out.iterations = it;
        // relative to max|x|, not the 2-norm, to match what callers report
        out.residual = res / (scale * xmax);
        if (out.residual <= rel_tol) {
            out.converged = true;
            break;
        }
    }
    out.vector = std::move(x);
    return out;
}

} // namespace sislab
