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
#include "sislab/threshold.hpp"
#include "sislab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sislab
{

std::vector<int> cell_of_nodes(const Grid& grid, int cells)
{
    require(cells >= 1, "cell count must be positive");
    std::vector<int> c(grid.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double s = (grid.nodes[i] - grid.a) / grid.length();
        c[i]           = std::min(cells - 1, static_cast<int>(s * cells));
    }
    return c;
}

double threshold_constraint(const Field& lambda, const Field& S0, const Field& r, const Field& beta, double d_I,
                            const SpectralOptions& eig)
{
    std::vector<double> h(S0.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] = beta[i] * lambda[i] * (S0[i] - r[i]);
    }
    return principal_eigenvalue(d_I, Field(S0.grid_ptr(), std::move(h)), eig).sigma;
}

namespace
{

// Decision variables are either nodal values or cell values; expand() maps them to nodes.
class Problem
{
public:
    Problem(const Field& S0, const Field& r, const Field& beta, double d_I, const ThresholdOptions& opts)
        : m_grid(S0.grid_ptr())
        , m_beta(beta)
        , m_d(d_I)
        , m_opts(opts)
    {
        const std::size_t n = S0.size();
        m_g.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            m_g[i] = S0[i] - r[i];
        }
        if (opts.cells > 0) {
            m_cell = cell_of_nodes(*m_grid, opts.cells);
            m_mass.assign(static_cast<std::size_t>(opts.cells), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                m_mass[static_cast<std::size_t>(m_cell[i])] += m_grid->weights[i];
            }
        }
        else {
            m_mass = m_grid->weights;
        }
    }

    std::size_t dim() const
    {
        return m_mass.size();
    }
    const std::vector<double>& mass() const
    {
        return m_mass;
    }

    std::vector<double> expand(const std::vector<double>& v) const
    {
        if (m_cell.empty()) {
            return v;
        }
        std::vector<double> out(m_g.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = v[static_cast<std::size_t>(m_cell[i])];
        }
        return out;
    }

    // Objective gain int lambda (S0 - r).
    double gain(const std::vector<double>& v) const
    {
        const auto lam = expand(v);
        double s       = 0.0;
        for (std::size_t i = 0; i < lam.size(); ++i) {
            s += m_grid->weights[i] * lam[i] * m_g[i];
        }
        return s;
    }

    struct Eval {
        double sigma = 0.0;
        std::vector<double> phi2;
    };

    Eval eval(const std::vector<double>& v) const
    {
        const auto lam = expand(v);
        std::vector<double> h(lam.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
            h[i] = m_beta[i] * lam[i] * m_g[i];
        }
        const auto res = principal_eigenvalue(m_d, Field(m_grid, std::move(h)), m_opts.eigen);
        Eval e;
        e.sigma = res.sigma;
        e.phi2.resize(lam.size());
        for (std::size_t i = 0; i < lam.size(); ++i) {
            e.phi2[i] = res.phi[i] * res.phi[i];
        }
        return e;
    }

    // Gradients in the weighted inner product: nodal values, or cell averages.
    std::vector<double> reduce(const std::vector<double>& nodal) const
    {
        if (m_cell.empty()) {
            return nodal;
        }
        std::vector<double> out(m_mass.size(), 0.0);
        for (std::size_t i = 0; i < nodal.size(); ++i) {
            out[static_cast<std::size_t>(m_cell[i])] += m_grid->weights[i] * nodal[i];
        }
        for (std::size_t c = 0; c < out.size(); ++c) {
            out[c] /= m_mass[c];
        }
        return out;
    }

    std::vector<double> grad_gain() const
    {
        return reduce(m_g);
    }

    std::vector<double> grad_sigma(const Eval& e) const
    {
        std::vector<double> nodal(m_g.size());
        for (std::size_t i = 0; i < nodal.size(); ++i) {
            nodal[i] = m_beta[i] * e.phi2[i] * m_g[i];
        }
        return reduce(nodal);
    }

    GridPtr grid() const
    {
        return m_grid;
    }

private:
    GridPtr m_grid;
    const Field& m_beta;
    double m_d;
    const ThresholdOptions& m_opts;
    std::vector<double> m_g;
    std::vector<int> m_cell;
    std::vector<double> m_mass;
};

double wnorm(const std::vector<double>& a, const std::vector<double>& mass)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += mass[i] * a[i] * a[i];
    }
    return std::sqrt(s);
}

struct Candidate {
    std::vector<double> x;
    double gain  = 0.0;
    double sigma = 0.0;
    double kkt   = 0.0;
    int iterations = 0;
    bool converged = false;
};

double dot_mass(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& mass)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += mass[i] * a[i] * b[i];
    }
    return s;
}

struct Point {
    std::vector<double> x;
    Problem::Eval e;
};

// Pulls x back along the ray to 0 until sigma <= 0. sigma(t x) is convex in t
// and vanishes at t = 0, so Newton from the infeasible side decreases
// monotonically onto the crossing; bisection covers the degenerate cases.
Point restore(const Problem& P, const std::vector<double>& x, double feas_tol)
{
    auto e = P.eval(x);
    if (e.sigma <= 0.0) {
        return {x, std::move(e)};
    }
    auto scaled = [&](double t) {
        std::vector<double> y(x);
        for (double& v : y) {
            v *= t;
        }
        return y;
    };
    double t = 1.0, lo = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double slope = dot_mass(P.grad_sigma(e), x, P.mass());
        double next        = slope > 0.0 ? t - e.sigma / slope : 0.5 * (lo + t);
        if (!(next > lo && next < t)) {
            next = 0.5 * (lo + t);
        }
        auto en = P.eval(scaled(next));
        if (en.sigma <= 0.0) {
            // overshoot, only possible through rounding: keep the feasible side
            lo = next;
            if (en.sigma >= -0.1 * feas_tol) {
                return {scaled(next), std::move(en)};
            }
            continue;
        }
        t = next;
        e = std::move(en);
        if (e.sigma <= 0.1 * feas_tol) {
            break;
        }
    }
    if (e.sigma > feas_tol) {
        // did not settle; fall back to the last known feasible scale
        auto el = P.eval(scaled(lo));
        return {scaled(lo), std::move(el)};
    }
    return {scaled(t), std::move(e)};
}

struct Stationarity {
    double mu  = 0.0;
    double kkt = 0.0;
};

// KKT measure at a feasible x: the larger of the projected-gradient step of the
// Lagrangian gain - mu sigma (direction scaled by |grad gain|) and the
// complementarity mu |sigma| / scale. mu >= 0 is picked to make it smallest.
Stationarity stationarity(const Problem& P, const std::vector<double>& x, const Problem::Eval& e, double scale)
{
    const auto& mass = P.mass();
    const auto gF    = P.grad_gain();
    const auto gS    = P.grad_sigma(e);
    const double gn  = wnorm(gF, mass);
    double volume    = 0.0;
    for (double m : mass) {
        volume += m;
    }
    if (gn == 0.0) {
        return {0.0, 0.0};
    }
    auto measure = [&](double mu) {
        std::vector<double> step(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            step[i] = std::clamp(x[i] + (gF[i] - mu * gS[i]) / gn, 0.0, 1.0) - x[i];
        }
        const double stat = wnorm(step, mass) / std::sqrt(volume);
        const double comp = mu * std::max(-e.sigma, 0.0) / std::max(scale, 1e-12);
        return std::max(stat, comp);
    };

    // least-squares multiplier over the components that can move, refined a few times
    auto ls = [&](const std::vector<bool>& use) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (use[i]) {
                num += mass[i] * gF[i] * gS[i];
                den += mass[i] * gS[i] * gS[i];
            }
        }
        return den > 0.0 ? std::max(0.0, num / den) : 0.0;
    };
    std::vector<bool> use(x.size(), true);
    const double mu_all = ls(use);
    double best_mu = mu_all, best = measure(mu_all);
    double mu = mu_all;
    for (int k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = gF[i] - mu * gS[i];
            use[i]         = (x[i] > 0.0 && x[i] < 1.0) || (x[i] <= 0.0 && d > 0.0) || (x[i] >= 1.0 && d < 0.0);
        }
        mu = ls(use);
        const double m = measure(mu);
        if (m < best) {
            best    = m;
            best_mu = mu;
        }
    }
    // golden-section polish on [0, 4 max(mu)]
    double a = 0.0, b = 4.0 * std::max({mu_all, best_mu, 1e-300});
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = measure(c), fd = measure(d);
    for (int k = 0; k < 80; ++k) {
        if (fc < fd) {
            b  = d;
            d  = c;
            fd = fc;
            c  = b - ratio * (b - a);
            fc = measure(c);
        }
        else {
            a  = c;
            c  = d;
            fc = fd;
            d  = a + ratio * (b - a);
            fd = measure(d);
        }
    }
    for (double m : {0.0, c, d}) {
        const double v = measure(m);
        if (v < best) {
            best    = v;
            best_mu = m;
        }
    }
    return {best_mu, best};
}

// Maximises sum a_i y_i over l <= y <= u subject to sum b_i y_i <= c. One
// constraint makes this a fractional knapsack: raising the multiplier nu
// flips items at nu = a_i / b_i, each flip lowering sum b y, and the item
// that crosses c is left fractional.
std::vector<double> knapsack(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& l,
                             const std::vector<double>& u, double c)
{
    const std::size_t n = a.size();
    std::vector<double> y(n);
    double G = 0.0;
    std::vector<std::pair<double, std::size_t>> flips;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = a[i] > 0.0 ? u[i] : l[i];
        G += b[i] * y[i];
        if (b[i] != 0.0 && u[i] > l[i]) {
            const double at = a[i] / b[i];
            // items that flip for some nu > 0
            if ((b[i] > 0.0 && a[i] > 0.0) || (b[i] < 0.0 && a[i] <= 0.0 && at > 0.0)) {
                flips.emplace_back(at, i);
            }
        }
    }
    if (G <= c) {
        return y;
    }
    std::sort(flips.begin(), flips.end());
    for (const auto& [at, i] : flips) {
        const double target = b[i] > 0.0 ? l[i] : u[i];
        const double drop   = b[i] * (y[i] - target);
        if (G - drop <= c) {
            y[i] += (c - G) / b[i];
            y[i] = std::clamp(y[i], l[i], u[i]);
            return y;
        }
        G -= drop;
        y[i] = target;
    }
    return y;
}

// Sequential linear programming in a box trust region. sigma is convex, so the
// linearised constraint only overshoots by O(radius^2), which the radial
// restoration removes at second-order cost.
Candidate optimize_from(const Problem& P, const std::vector<double>& x0, const ThresholdOptions& opts, double scale)
{
    const auto& mass = P.mass();
    const auto gF    = P.grad_gain();
    const std::size_t n = mass.size();
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = mass[i] * gF[i];
    }

    Candidate out;
    auto cur      = restore(P, x0, opts.feas_tol);
    double gain   = P.gain(cur.x);
    double radius = 0.25;
    int it        = 0;
    Stationarity st;
    std::vector<double> b(n), l(n), u(n);
    for (; it < opts.max_iter; ++it) {
        st = stationarity(P, cur.x, cur.e, scale);
        if (st.kkt <= opts.tol) {
            out.converged = true;
            break;
        }
        const auto gS = P.grad_sigma(cur.e);
        double c      = -cur.e.sigma;
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = mass[i] * gS[i];
            c += b[i] * cur.x[i];
            l[i] = std::max(0.0, cur.x[i] - radius);
            u[i] = std::min(1.0, cur.x[i] + radius);
        }
        const auto y = knapsack(a, b, l, u, c);
        double predicted = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            predicted += a[i] * (y[i] - cur.x[i]);
        }
        if (predicted <= 1e-16 * scale) {
            radius *= 0.25;
            if (radius < 1e-14) {
                break;
            }
            continue;
        }
        auto next     = restore(P, y, opts.feas_tol);
        const double g = P.gain(next.x);
        const double rho = (g - gain) / predicted;
        if (rho > 0.1) {
            cur  = std::move(next);
            gain = g;
            if (rho > 0.75) {
                radius = std::min(2.0 * radius, 1.0);
            }
        }
        else {
            radius *= 0.25;
            if (radius < 1e-14) {
                break;
            }
        }
    }
    if (!out.converged) {
        st            = stationarity(P, cur.x, cur.e, scale);
        out.converged = st.kkt <= opts.tol;
    }
    out.kkt        = st.kkt;
    out.iterations = it;
    out.sigma      = cur.e.sigma;
    out.gain       = gain;
    out.x          = std::move(cur.x);
    return out;
}

} // namespace

ThresholdResult critical_population(const Field& S0, const Field& r, const Field& beta, double d_I,
                                    const ThresholdOptions& opts)
{
    require(d_I > 0.0, "critical population needs d_I > 0");
    require(same_grid(S0, r) && same_grid(S0, beta), "S0, r and beta must share a grid");
    for (std::size_t i = 0; i < S0.size(); ++i) {
        require(S0[i] >= 0.0, "S0 must be nonnegative");
        require(r[i] > 0.0 && beta[i] > 0.0, "r and beta must be positive");
    }
    require(opts.cells >= 0, "cell count must be nonnegative");

    const Problem P(S0, r, beta, d_I, opts);
    const std::size_t dim = P.dim();

    ThresholdResult res;
    res.lower_bound = integrate(r);
    std::vector<double> upper(S0.size());
    for (std::size_t i = 0; i < upper.size(); ++i) {
        upper[i] = std::max(S0[i], r[i]);
    }
    res.upper_bound = integrate(Field(S0.grid_ptr(), upper));
    const double scale = std::max(res.upper_bound - res.lower_bound, 1e-3 * std::abs(res.lower_bound) + 1e-12);

    std::vector<std::vector<double>> starts;
    starts.emplace_back(dim, 0.0);
    {
        const auto gF = P.grad_gain();
        std::vector<double> ind(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            ind[i] = gF[i] > 0.0 ? 1.0 : 0.0;
        }
        starts.push_back(std::move(ind));
    }
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < opts.random_starts; ++k) {
        std::vector<double> v(dim);
        for (double& x : v) {
            x = unif(rng);
        }
        starts.push_back(std::move(v));
    }

    // lambda = 0 is feasible with gain 0; every candidate must beat it.
    Candidate best;
    best.x         = std::vector<double>(dim, 0.0);
    best.gain      = 0.0;
    best.sigma     = 0.0;
    best.kkt       = stationarity(P, best.x, P.eval(best.x), scale).kkt;
    best.converged = best.kkt <= opts.tol;
    int best_index = -1;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        auto c = optimize_from(P, starts[s], opts, scale);
        res.iterations += c.iterations;
        // gains within tol * scale are ties; a certified point wins a tie
        const bool better = c.gain > best.gain + opts.tol * scale;
        const bool tie    = std::abs(c.gain - best.gain) <= opts.tol * scale &&
                         (c.converged > best.converged || (c.converged == best.converged && c.gain > best.gain));
        if (c.sigma <= opts.feas_tol && (better || tie)) {
            best       = std::move(c);
            best_index = static_cast<int>(s);
        }
    }

    res.lambda_star  = Field(S0.grid_ptr(), P.expand(best.x));
    res.sigma_at_opt = best.sigma;
    res.n_star       = res.lower_bound + best.gain;
    res.kkt_residual = best.kkt;
    res.converged    = best.converged;
    res.best_start   = best_index;
    return res;
}

} // namespace sislab
