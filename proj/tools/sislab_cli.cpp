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

// Command-line front end. Talks to the library only through the C API.

#include "sislab/sislab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace
{

constexpr int exit_pass    = 0;
constexpr int exit_error   = 1;
constexpr int exit_verify  = 2;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(sislab_status s, const std::string& what)
{
    if (s != SISLAB_OK) {
        throw Failure(what + ": " + sislab_status_name(s) + ": " + sislab_last_error());
    }
}

struct StringDeleter {
    void operator()(char* p) const
    {
        sislab_free_string(p);
    }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ConfigDeleter {
    void operator()(sislab_config* p) const
    {
        sislab_config_destroy(p);
    }
};
struct TrajectoryDeleter {
    void operator()(sislab_trajectory* p) const
    {
        sislab_trajectory_destroy(p);
    }
};
struct SweepDeleter {
    void operator()(sislab_sweep* p) const
    {
        sislab_sweep_destroy(p);
    }
};
using Config     = std::unique_ptr<sislab_config, ConfigDeleter>;
using Trajectory = std::unique_ptr<sislab_trajectory, TrajectoryDeleter>;
using Sweep      = std::unique_ptr<sislab_sweep, SweepDeleter>;

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config_path, "key = value configuration file");
    sub->add_option("--set", c.overrides, "override one key, e.g. --set d_I=2 or --set preset=sim1b")
        ->allow_extra_args(false);
}

Config make_config(const Common& c)
{
    sislab_config* raw = nullptr;
    if (c.config_path.empty()) {
        check(sislab_config_create(&raw), "config");
    }
    else {
        check(sislab_config_load(c.config_path.c_str(), &raw), "config " + c.config_path);
    }
    Config cfg(raw);
    for (const auto& o : c.overrides) {
        check(sislab_config_override(cfg.get(), o.c_str()), "--set " + o);
    }
    check(sislab_config_validate(cfg.get()), "config");
    return cfg;
}

std::string config_value(const sislab_config* cfg, const char* key)
{
    char* raw = nullptr;
    check(sislab_config_get(cfg, key, &raw), key);
    OwnedString s(raw);
    return s.get();
}

void print(char* raw_json)
{
    OwnedString s(raw_json);
    std::printf("%s\n", s.get());
}

Trajectory simulate(const sislab_config* cfg)
{
    sislab_trajectory* raw = nullptr;
    check(sislab_simulate(cfg, &raw), "simulate");
    return Trajectory(raw);
}

int cmd_simulate(const Common& c)
{
    auto cfg       = make_config(c);
    auto traj      = simulate(cfg.get());
    const auto dir = config_value(cfg.get(), "output_dir");
    check(sislab_trajectory_write_csv(traj.get(), dir.c_str()), "write csv");
    for (const char* kind : {"final_profiles", "mass_series", "lyapunov_series"}) {
        const auto path = dir + "/" + kind + ".svg";
        if (sislab_trajectory_write_svg(traj.get(), path.c_str(), kind) != SISLAB_OK) {
            std::fprintf(stderr, "note: %s skipped (%s)\n", kind, sislab_last_error());
        }
    }
    char* text = nullptr;
    check(sislab_config_format(cfg.get(), &text), "format config");
    OwnedString owned(text);
    std::ofstream(dir + "/config.txt") << owned.get();

    char* json  = nullptr;
    int clipped = 0;
    check(sislab_trajectory_summary(traj.get(), &json, &clipped), "summary");
    print(json);
    if (clipped) {
        std::fprintf(stderr, "positivity clipping removed more than 1e-8 of the total mass\n");
        return exit_verify;
    }
    return exit_pass;
}

int cmd_eigen(const Common& c)
{
    auto cfg   = make_config(c);
    char* json = nullptr;
    int pass   = 0;
    check(sislab_eigen_report(cfg.get(), &json, &pass), "eigen");
    print(json);
    return pass ? exit_pass : exit_verify;
}

int cmd_threshold(const Common& c)
{
    auto cfg   = make_config(c);
    char* json = nullptr;
    int pass   = 0;
    check(sislab_threshold_report(cfg.get(), &json, &pass), "threshold");
    print(json);
    return pass ? exit_pass : exit_verify;
}

int cmd_classify(const Common& c)
{
    auto cfg        = make_config(c);
    const auto path = config_value(cfg.get(), "trajectory");
    Trajectory traj;
    if (path.empty()) {
        traj = simulate(cfg.get());
    }
    else {
        sislab_trajectory* raw = nullptr;
        check(sislab_trajectory_load(cfg.get(), path.c_str(), &raw), "load trajectory " + path);
        traj.reset(raw);
    }
    char* json = nullptr;
    int pass   = 0;
    check(sislab_classify(cfg.get(), traj.get(), &json, &pass), "classify");
    print(json);
    if (pass < 0) {
        std::fprintf(stderr, "note: no verifiable prediction for this regime\n");
    }
    return pass == 0 ? exit_verify : exit_pass;
}

int cmd_sweep(const Common& c, int jobs)
{
    auto cfg            = make_config(c);
    sislab_sweep* raw   = nullptr;
    check(sislab_sweep_run(cfg.get(), jobs, &raw), "sweep");
    Sweep sweep(raw);
    const auto dir = config_value(cfg.get(), "output_dir");
    check(sislab_sweep_write_csv(sweep.get(), (dir + "/sweep.csv").c_str()), "write sweep csv");
    check(sislab_sweep_write_svg(sweep.get(), (dir + "/sweep.svg").c_str()), "write sweep svg");
    char* json = nullptr;
    check(sislab_sweep_json(sweep.get(), &json), "sweep json");
    print(json);

    int failed = 0;
    for (size_t i = 0; i < sislab_sweep_size(sweep.get()); ++i) {
        int ok = 1;
        check(sislab_sweep_row(sweep.get(), i, nullptr, nullptr, nullptr, &ok), "sweep row");
        failed += ok ? 0 : 1;
    }
    if (failed > 0) {
        std::fprintf(stderr, "%d sweep point(s) failed\n", failed);
        return exit_verify;
    }
    return exit_pass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sislab: numerical lab for degenerate SIS reaction-diffusion models"};
    app.set_version_flag("--version", std::string(sislab_version()));
    app.require_subcommand(1);

    Common sim, eig, thr, cls, swp;
    int jobs = 1;
    add_common(app.add_subcommand("simulate", "run a scenario, write CSV and SVG to output_dir"), sim);
    add_common(app.add_subcommand("eigen", "principal eigenvalue of d L + beta - gamma and R0"), eig);
    add_common(app.add_subcommand("threshold", "critical population N* by constrained optimisation"), thr);
    add_common(app.add_subcommand("classify", "predict the long-time regime and check a trajectory"), cls);
    auto* sweep_cmd = app.add_subcommand("sweep", "one simulation per parameter value, with knee detection");
    add_common(sweep_cmd, swp);
    sweep_cmd->add_option("--jobs", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_error;
    }

    try {
        if (app.got_subcommand("simulate")) {
            return cmd_simulate(sim);
        }
        if (app.got_subcommand("eigen")) {
            return cmd_eigen(eig);
        }
        if (app.got_subcommand("threshold")) {
            return cmd_threshold(thr);
        }
        if (app.got_subcommand("classify")) {
            return cmd_classify(cls);
        }
        return cmd_sweep(swp, jobs);
    }
    catch (const Failure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_error;
    }
    catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_error;
    }
}
