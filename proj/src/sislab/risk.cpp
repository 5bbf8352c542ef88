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
#include "sislab/risk.hpp"
#include "sislab/error.hpp"

#include <cmath>

namespace sislab
{

std::vector<double> indicator(const Field& beta, const Field& gamma, double N, RiskMode mode)
{
    require(same_grid(beta, gamma), "beta and gamma must share a grid");
    for (std::size_t i = 0; i < beta.size(); ++i) {
        require(beta[i] > 0.0 && gamma[i] > 0.0, "beta and gamma must be positive at every node");
    }
    const double scale = mode == RiskMode::MassAction ? N / beta.grid().length() : 1.0;
    if (mode == RiskMode::MassAction) {
        require(N > 0.0, "total population N must be positive");
    }
    std::vector<double> ind(beta.size());
    for (std::size_t i = 0; i < ind.size(); ++i) {
        ind[i] = scale * beta[i] - gamma[i];
    }
    return ind;
}

RiskProfile risk_sets(const Field& beta, const Field& gamma, double N, RiskMode mode, double tol_zero, const Field* I0)
{
    const auto ind = indicator(beta, gamma, N, mode);

    RiskProfile p;
    p.mode     = mode;
    p.tol_zero = tol_zero >= 0.0 ? tol_zero : 1e-9 * max_abs(ind);
    const auto& w = beta.grid().weights;
    for (std::size_t i = 0; i < ind.size(); ++i) {
        if (ind[i] > p.tol_zero) {
            p.h_plus.push_back(i);
        }
        else if (ind[i] < -p.tol_zero) {
            p.h_minus.push_back(i);
        }
        else {
            p.h_zero.push_back(i);
            p.h_zero_measure += w[i];
        }
    }
    if (I0 != nullptr) {
        std::vector<double> r(beta.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = gamma[i] / beta[i];
        }
        auto rm         = rmin_set(Field(beta.grid_ptr(), std::move(r)), *I0);
        p.r_tilde_min   = rm.r_tilde_min;
        p.min_set       = std::move(rm.min_set);
    }
    return p;
}

RminResult rmin_set(const Field& r, const Field& I0, double tol_zero)
{
    require(same_grid(r, I0), "r and I0 must share a grid");
    RminResult out;
    bool any = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
        require(I0[i] >= 0.0, "I0 must be nonnegative");
        if (I0[i] > 0.0 && (!any || r[i] < out.r_tilde_min)) {
            out.r_tilde_min = r[i];
            any             = true;
        }
    }
    require(any, "I0 vanishes identically; the infected initial data must be nontrivial");

    const double tol = tol_zero >= 0.0 ? tol_zero : 1e-9 * max_abs(r.values());
    // Closure of the support: a node qualifies if it or a neighbour carries I0 > 0.
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool in_closure = I0[i] > 0.0 || (i > 0 && I0[i - 1] > 0.0) || (i + 1 < n && I0[i + 1] > 0.0);
        if (in_closure && std::abs(r[i] - out.r_tilde_min) <= tol) {
            out.min_set.push_back(i);
        }
    }
    return out;
}

std::vector<bool> mask_of(const std::vector<std::size_t>& nodes, std::size_t n)
{
    std::vector<bool> m(n, false);
    for (auto i : nodes) {
        m[i] = true;
    }
    return m;
}

} // namespace sislab
