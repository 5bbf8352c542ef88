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
#include "sislab/grid.hpp"
#include "sislab/error.hpp"
#include "sislab/expression.hpp"

#include <algorithm>
#include <cmath>

namespace sislab
{

Grid build_grid(double a, double b, int nx)
{
    require(nx >= 3, "grid needs at least 3 nodes, got " + std::to_string(nx));
    require(std::isfinite(a) && std::isfinite(b) && b > a, "grid needs b > a");

    Grid g;
    g.a  = a;
    g.b  = b;
    g.nx = nx;
    g.dx = (b - a) / (nx - 1);
    g.nodes.resize(static_cast<std::size_t>(nx));
    g.weights.assign(static_cast<std::size_t>(nx), g.dx);
    for (int i = 0; i < nx; ++i) {
        g.nodes[static_cast<std::size_t>(i)] = a + i * g.dx;
    }
    g.nodes.back()    = b;
    g.weights.front() = 0.5 * g.dx;
    g.weights.back()  = 0.5 * g.dx;
    return g;
}

GridPtr make_grid(double a, double b, int nx)
{
    return std::make_shared<const Grid>(build_grid(a, b, nx));
}

Field::Field(GridPtr grid, std::vector<double> values)
    : m_grid(std::move(grid))
    , m_values(std::move(values))
{
    require(m_grid != nullptr, "field needs a grid");
    require(m_values.size() == m_grid->size(), "field length " + std::to_string(m_values.size()) +
                                                    " does not match grid size " + std::to_string(m_grid->size()));
}

Field Field::constant(GridPtr grid, double value)
{
    const auto n = grid->size();
    return Field(std::move(grid), std::vector<double>(n, value));
}

double integrate(const Field& f)
{
    const auto& w = f.grid().weights;
    double sum    = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        sum += w[i] * f[i];
    }
    return sum;
}

double inner(const Field& f, const Field& g)
{
    const auto& w = f.grid().weights;
    double sum    = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        sum += w[i] * f[i] * g[i];
    }
    return sum;
}

double max_value(const Field& f)
{
    return *std::max_element(f.values().begin(), f.values().end());
}

double min_value(const Field& f)
{
    return *std::min_element(f.values().begin(), f.values().end());
}

double mean_value(const Field& f)
{
    return integrate(f) / f.grid().length();
}

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double max_diff(const Field& f, const Field& g)
{
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        m = std::max(m, std::abs(f[i] - g[i]));
    }
    return m;
}

bool same_grid(const Field& f, const Field& g)
{
    return f.grid_ptr() == g.grid_ptr() || (f.grid().nx == g.grid().nx && f.grid().a == g.grid().a &&
                                            f.grid().b == g.grid().b);
}

Field eval_expression(const GridPtr& grid, std::string_view expression)
{
    const auto expr = Expression::parse(expression);
    std::vector<double> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = expr.evaluate(grid->nodes[i]);
    }
    return Field(grid, std::move(values));
}

Field field_from_table(const GridPtr& grid, std::span<const double> xs, std::span<const double> ys)
{
    require(!xs.empty() && xs.size() == ys.size(), "tabulated field needs matching, non-empty x and value columns");
    for (std::size_t k = 1; k < xs.size(); ++k) {
        require(xs[k] > xs[k - 1], "tabulated field x values must be strictly increasing");
    }
    std::vector<double> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = grid->nodes[i];
        if (x <= xs.front()) {
            values[i] = ys.front();
        }
        else if (x >= xs.back()) {
            values[i] = ys.back();
        }
        else {
            const auto it  = std::upper_bound(xs.begin(), xs.end(), x);
            const auto k   = static_cast<std::size_t>(it - xs.begin());
            const double s = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            values[i]      = (1.0 - s) * ys[k - 1] + s * ys[k];
        }
    }
    return Field(grid, std::move(values));
}

} // namespace sislab
