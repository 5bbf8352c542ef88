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
#ifndef SISLAB_RISK_HPP
#define SISLAB_RISK_HPP

#include "sislab/grid.hpp"

#include <vector>

namespace sislab
{

enum class RiskMode
{
    MassAction,
    StdIncidence,
};

/**
 * Partition of the nodes into high-, moderate- and low-risk sites.
 *
 * The indicator is (N/|Omega|) beta - gamma in mass-action mode and beta - gamma
 * under standard incidence. Values within +-tol_zero of zero land in h_zero.
 */
struct RiskProfile {
    RiskMode mode = RiskMode::StdIncidence;
    std::vector<std::size_t> h_plus;
    std::vector<std::size_t> h_zero;
    std::vector<std::size_t> h_minus;
    double tol_zero = 0.0;
    /// Only filled when initial infected data was supplied.
    double r_tilde_min = 0.0;
    std::vector<std::size_t> min_set;
    /// Quadrature weight-sum of the h_zero nodes.
    double h_zero_measure = 0.0;
};

struct RminResult {
    double r_tilde_min = 0.0;
    std::vector<std::size_t> min_set;
};

/// Pass tol_zero < 0 for the default 1e-9 * max |indicator|.
RiskProfile risk_sets(const Field& beta, const Field& gamma, double N, RiskMode mode, double tol_zero = -1.0,
                      const Field* I0 = nullptr);

/**
 * Minimum of r over {I0 > 0} and the nodes of the support where r is within
 * tol_zero of it. tol_zero < 0 selects 1e-9 * max |r|. Throws if I0 vanishes.
 */
RminResult rmin_set(const Field& r, const Field& I0, double tol_zero = -1.0);

std::vector<double> indicator(const Field& beta, const Field& gamma, double N, RiskMode mode);

/// Boolean mask of length n marking the listed nodes.
std::vector<bool> mask_of(const std::vector<std::size_t>& nodes, std::size_t n);

} // namespace sislab

#endif // SISLAB_RISK_HPP
