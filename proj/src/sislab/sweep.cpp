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
#include "sislab/sweep.hpp"
#include "sislab/error.hpp"
#include "sislab/output.hpp"
#include "sislab/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace sislab
{

std::optional<std::size_t> detect_knee(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() < 3) {
        return std::nullopt;
    }
    double best = 0.0, scale = 0.0;
    std::optional<std::size_t> at;
    for (double v : y) {
        scale = std::max(scale, std::abs(v));
    }
    const double span = x.back() - x.front();
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double left  = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        const double right = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        const double d2    = 2.0 * (right - left) / (x[i + 1] - x[i - 1]);
        if (std::abs(d2) > best) {
            best = std::abs(d2);
            at   = i;
        }
    }
    // Flat: curvature negligible against the value scale over the swept range.
    if (!at || best * span * span <= 1e-9 * std::max(scale, 1e-300)) {
        return std::nullopt;
    }
    return at;
}

namespace
{

double observe(const Trajectory& traj, const std::string& observable)
{
    const auto& last = traj.snapshots.back();
    if (observable == "I_mass_at_T") {
        return integrate(last.I);
    }
    if (observable == "final_sup_I") {
        return max_value(last.I);
    }
    const auto& c = traj.diagnostics.back().concentration_fraction;
    require(c.has_value(), "concentration_fraction is only recorded for MassAction_dI0 runs");
    return *c;
}

} // namespace

SweepResult run_sweep(const RunConfig& cfg, int jobs)
{
    require(!cfg.sweep_parameter.empty(), "sweep.parameter is not set");
    require(cfg.sweep_lo < cfg.sweep_hi, "sweep needs sweep.lo < sweep.hi");
    require(cfg.sweep_count >= 2, "sweep needs sweep.count >= 2");
    require(jobs >= 1, "--jobs must be at least 1");

    SweepResult res;
    res.parameter  = cfg.sweep_parameter;
    res.observable = cfg.sweep_observable;
    const auto count = static_cast<std::size_t>(cfg.sweep_count);
    res.rows.resize(count);

    const bool is_param = cfg.params.count(cfg.sweep_parameter) > 0;
    const std::string key = is_param ? "param." + cfg.sweep_parameter : cfg.sweep_parameter;
    {
        // Fail fast on an unknown key before spawning work.
        RunConfig probe = cfg;
        set_key(probe, key, shortest(cfg.sweep_lo));
    }

    auto work = [&](std::size_t k) {
        auto& row = res.rows[k];
        row.param = cfg.sweep_lo + (cfg.sweep_hi - cfg.sweep_lo) * static_cast<double>(k) /
                                       static_cast<double>(count - 1);
        try {
            RunConfig c = cfg;
            set_key(c, key, shortest(row.param));
            const auto sc = build_scenario(c);
            row.N         = integrate(sc.S0) + integrate(sc.I0);
            const auto tr = run(sc.spec, sc.S0, sc.I0, sc.options);
            row.value     = observe(tr, cfg.sweep_observable);
            row.ok        = true;
        }
        catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            work(k);
        }
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    std::vector<double> xs, ys;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < count; ++k) {
        if (res.rows[k].ok) {
            xs.push_back(res.rows[k].param);
            ys.push_back(res.rows[k].value);
            idx.push_back(k);
        }
    }
    if (const auto knee = detect_knee(xs, ys)) {
        res.knee_index = idx[*knee];
    }
    return res;
}

} // namespace sislab
