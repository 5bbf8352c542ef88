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
#ifndef SISLAB_GRID_HPP
#define SISLAB_GRID_HPP

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace sislab
{

/**
 * Uniform 1D mesh of [a, b] with composite trapezoid weights.
 *
 * nodes[0] = a, nodes[nx-1] = b; interior weights are dx, the two endpoint
 * weights dx/2, so the weights sum to b - a.
 */
struct Grid {
    double a  = 0.0;
    double b  = 1.0;
    int nx    = 0;
    double dx = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    double length() const
    {
        return b - a;
    }
    std::size_t size() const
    {
        return nodes.size();
    }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws InvalidArgument unless b > a and nx >= 3.
Grid build_grid(double a, double b, int nx);
GridPtr make_grid(double a, double b, int nx);

/// Real-valued grid function. Nonnegativity is checked by the callers that need it.
class Field
{
public:
    Field() = default;
    Field(GridPtr grid, std::vector<double> values);

    static Field constant(GridPtr grid, double value);
    static Field zeros(GridPtr grid)
    {
        return constant(std::move(grid), 0.0);
    }

    const Grid& grid() const
    {
        return *m_grid;
    }
    const GridPtr& grid_ptr() const
    {
        return m_grid;
    }
    std::size_t size() const
    {
        return m_values.size();
    }
    bool empty() const
    {
        return m_values.empty();
    }

    double operator[](std::size_t i) const
    {
        return m_values[i];
    }
    double& operator[](std::size_t i)
    {
        return m_values[i];
    }

    std::span<const double> values() const
    {
        return m_values;
    }
    std::span<double> values()
    {
        return m_values;
    }
    const std::vector<double>& vector() const
    {
        return m_values;
    }

private:
    GridPtr m_grid;
    std::vector<double> m_values;
};

/// Composite-trapezoid approximation of the integral over the domain.
double integrate(const Field& f);
/// Quadrature inner product <f, g>_w.
double inner(const Field& f, const Field& g);

double max_value(const Field& f);
double min_value(const Field& f);
/// Domain average (integral divided by |Omega|).
double mean_value(const Field& f);
double max_abs(std::span<const double> v);
/// Max-norm of f - g.
double max_diff(const Field& f, const Field& g);

bool same_grid(const Field& f, const Field& g);

/// Evaluates a coefficient expression (see expression.hpp) at every node.
Field eval_expression(const GridPtr& grid, std::string_view expression);

/**
 * Builds a field from tabulated (x, value) pairs by piecewise-linear
 * interpolation; nodes outside the table take the nearest end value.
 */
Field field_from_table(const GridPtr& grid, std::span<const double> xs, std::span<const double> ys);

} // namespace sislab

#endif // SISLAB_GRID_HPP
