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
#include "sislab/config.hpp"
#include "sislab/error.hpp"
#include "sislab/output.hpp"
#include "sislab/sweep.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sislab;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("sislab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

std::vector<std::string> cells(const std::string& line)
{
    std::vector<std::string> out(1);
    for (char c : line) {
        if (c == ',') {
            out.emplace_back();
        }
        else {
            out.back() += c;
        }
    }
    return out;
}

std::string message_of(const std::string& text)
{
    try {
        parse_config(text);
    }
    catch (const Error& e) {
        return e.what();
    }
    return {};
}

Trajectory short_run(const char* preset, int nx, double T)
{
    auto cfg           = preset_config(preset);
    cfg.nx             = nx;
    cfg.T              = T;
    cfg.snapshot_every = T / 4;
    const auto sc      = build_scenario(cfg);
    return run(sc.spec, sc.S0, sc.I0, sc.options);
}

} // namespace

TEST_SUITE("config")
{
    TEST_CASE("presets carry the published parameters verbatim")
    {
        struct Golden {
            const char* name;
            const char* model;
            const char* beta;
            const char* gamma;
            double d_S, d_I;
        };
        const Golden table[] = {
            {"sim1a", "MassAction_dS0", "0.5", "4 - pi*sin(pi*x)", 0, 1},
            {"sim1b", "MassAction_dS0", "2", "4 - pi*sin(pi*x)", 0, 1},
            {"sim1c", "MassAction_dS0", "0.5*(1 + x)", "4 - pi*sin(pi*x)", 0, 1},
            {"sim2a", "MassAction_dI0", "0.2", "4 - pi*sin(pi*x)", 1, 0},
            {"sim2b", "MassAction_dI0", "1", "4 - pi*sin(pi*x)", 1, 0},
            {"sim2c", "MassAction_dI0", "2", "14 - 4*pi*sin(4*pi*x)", 1, 0},
            {"sim3a", "StdIncidence_dS0", "1 + sin(pi*x)", "1.5", 0, 1},
            {"sim3b", "StdIncidence_dS0", "2.5 + sin(pi*x)", "1.5 + sin(pi*x)", 0, 1},
            {"sim3c", "StdIncidence_dS0", "2 - sin(pi*x)", "1", 0, 1},
            {"sim4a", "StdIncidence_dI0", "2 - abs(x-0.5)^0.5", "1.5", 1, 0},
            {"sim4b", "StdIncidence_dI0", "2 - sin(pi*x)", "1.5", 1, 0},
        };
        CHECK(preset_names().size() == std::size(table));
        for (const auto& gold : table) {
            INFO(std::string(gold.name));
            const auto c = preset_config(gold.name);
            CHECK(c.model == gold.model);
            CHECK(c.beta_expr == gold.beta);
            CHECK(c.gamma_expr == gold.gamma);
            CHECK(c.S0_expr == "2 + cos(pi*x)");
            if (std::string(gold.name) == "sim1c") {
                CHECK(c.I0_expr == "max({a} + cos(pi*x), 0)");
                CHECK(c.params.at("a") == 0.8);
                CHECK(c.T == 40.0);
            }
            else {
                CHECK(c.I0_expr == "1.5 + cos(pi*x)");
            }
            CHECK(*c.d_S == gold.d_S);
            CHECK(*c.d_I == gold.d_I);
            const auto sc = build_scenario(c);
            // a + cos(pi x) is cut at zero past x0 = acos(-a)/pi.
            const double x0 = std::acos(-0.8) / M_PI;
            const double N  = std::string(gold.name) == "sim1c" ? 2.0 + 0.8 * x0 + 0.6 / M_PI : 3.5;
            CHECK(integrate(sc.S0) + integrate(sc.I0) == doctest::Approx(N).epsilon(1e-4));
        }
    }

    TEST_CASE("parse errors name the offending line")
    {
        try {
            parse_config("preset = sim1b\n\n# fine\nnx 20\n");
            FAIL("no error");
        }
        catch (const ParseError& e) {
            CHECK(e.position() == 4);
            CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        }
        try {
            parse_config("preset = sim1b\ndt = fast\n");
            FAIL("no error");
        }
        catch (const ParseError& e) {
            CHECK(e.position() == 2);
            CHECK(std::string(e.what()).find("'fast'") != std::string::npos);
        }
    }

    TEST_CASE("unknown keys and presets are rejected")
    {
        const auto unknown = message_of("preset = sim1b\nbogus = 1\n");
        CHECK(unknown.find("line 2") != std::string::npos);
        CHECK(unknown.find("unknown key 'bogus'") != std::string::npos);
        const auto preset = message_of("preset = sim9z\n");
        CHECK(preset.find("unknown preset 'sim9z'") != std::string::npos);
        CHECK(preset.find("sim4b") != std::string::npos);
    }

    TEST_CASE("an empty file lists the required keys")
    {
        const auto msg = message_of("");
        for (const char* k : {"model", "beta", "gamma", "S0", "I0", "d_S", "d_I"}) {
            CHECK(msg.find(k) != std::string::npos);
        }
        CHECK(message_of("# only a comment\n\n") == msg);
    }

    TEST_CASE("preset first, then individual keys, whatever the order")
    {
        const auto c = parse_config("d_I = 2\nnx = 51\npreset = sim1b\nsplitting = strang\n");
        CHECK(c.beta_expr == "2");
        CHECK(*c.d_I == 2.0);
        CHECK(c.nx == 51);
        CHECK(c.splitting == "strang");
        auto o = preset_config("sim2b");
        apply_override(o, "beta=3");
        apply_override(o, "param.k = 0.25");
        CHECK(o.beta_expr == "3");
        CHECK(o.params.at("k") == 0.25);
        CHECK_THROWS_AS(apply_override(o, "beta"), Error);
        CHECK_THROWS_AS(set_key(o, "splitting", "lie"), Error);
    }

    TEST_CASE("formatted config parses back to itself")
    {
        for (const auto& name : preset_names()) {
            INFO(name);
            auto c = preset_config(name);
            c.dt   = 0.1 + 0.2; // not a short decimal
            const auto text = format_config(c);
            CHECK(format_config(parse_config(text)) == text);
            CHECK(parse_config(text).dt == c.dt);
        }
    }

    TEST_CASE("parameter substitution")
    {
        CHECK(substitute_params("{a} + cos(pi*x)", {{"a", 0.5}}) == "(0.5) + cos(pi*x)");
        CHECK(substitute_params("x", {}) == "x");
        CHECK_THROWS_AS(substitute_params("{b}", {{"a", 1.0}}), Error);
        CHECK_THROWS_AS(substitute_params("{a", {{"a", 1.0}}), Error);
    }
}

TEST_SUITE("output")
{
    TEST_CASE("shortest decimals round-trip")
    {
        std::mt19937_64 rng(7);
        for (int k = 0; k < 20000; ++k) {
            const std::uint64_t bits = rng();
            double v;
            std::memcpy(&v, &bits, sizeof v);
            if (!std::isfinite(v)) {
                continue;
            }
            const auto s = shortest(v);
            double back  = 0.0;
            std::from_chars(s.data(), s.data() + s.size(), back);
            REQUIRE(std::memcmp(&back, &v, sizeof v) == 0);
        }
        CHECK(shortest(0.1) == "0.1");
        CHECK(shortest(2.5) == "2.5");
    }

    TEST_CASE("one snapshot on three nodes gives three rows")
    {
        auto cfg = preset_config("sim1b");
        cfg.nx   = 3;
        const auto sc = build_scenario(cfg);
        Trajectory tr;
        tr.spec = sc.spec;
        tr.snapshots.push_back({0.0, sc.S0, sc.I0, Field::zeros(sc.S0.grid_ptr())});
        tr.diagnostics.push_back({});
        const auto dir = scratch("three");
        emit_csv(tr, dir.string());
        const auto rows = lines_of(slurp(dir / "profiles.csv"));
        REQUIRE(rows.size() == 4);
        CHECK(rows[0] == "t,x,S,I");
        CHECK(rows[2].rfind("0,0.5,", 0) == 0);
        CHECK(lines_of(slurp(dir / "diagnostics.csv")).size() == 2);
    }

    TEST_CASE("profiles reload bit for bit")
    {
        for (const char* p : {"sim1b", "sim2b", "sim4a"}) {
            INFO(p);
            const auto tr  = short_run(p, 41, 0.4);
            const auto dir = scratch(std::string("reload_") + p);
            emit_csv(tr, dir.string());
            const auto back = load_trajectory(dir.string(), tr.spec);
            REQUIRE(back.snapshots.size() == tr.snapshots.size());
            for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
                CHECK(back.snapshots[k].t == tr.snapshots[k].t);
                CHECK(back.snapshots[k].S.vector() == tr.snapshots[k].S.vector());
                CHECK(back.snapshots[k].I.vector() == tr.snapshots[k].I.vector());
            }
        }
    }

    TEST_CASE("diagnostics a variant does not define are empty cells")
    {
        const auto tr  = short_run("sim1b", 21, 0.2);
        const auto dir = scratch("empty_cells");
        emit_csv(tr, dir.string());
        const auto rows = lines_of(slurp(dir / "diagnostics.csv"));
        REQUIRE(rows.size() >= 2);
        const auto c = cells(rows[1]);
        REQUIRE(c.size() == 7);
        CHECK(c[2].empty());
        CHECK(c[3].empty());
        CHECK(c[5].empty());
        CHECK_FALSE(c[1].empty());
        CHECK_FALSE(c[4].empty());

        const auto tr2 = short_run("sim2b", 21, 0.2);
        emit_csv(tr2, dir.string());
        for (const auto& cell : cells(lines_of(slurp(dir / "diagnostics.csv"))[1])) {
            CHECK_FALSE(cell.empty());
        }
    }

    TEST_CASE("identical configs write identical bytes")
    {
        const auto a = scratch("det_a"), b = scratch("det_b");
        emit_csv(short_run("sim3b", 51, 0.5), a.string());
        emit_csv(short_run("sim3b", 51, 0.5), b.string());
        for (const char* f : {"profiles.csv", "diagnostics.csv"}) {
            CHECK(slurp(a / f) == slurp(b / f));
        }
    }

    TEST_CASE("svg plots")
    {
        const auto dir = scratch("svg");
        const auto tr  = short_run("sim1b", 21, 0.2);
        const auto fp  = (dir / "profiles.svg").string();
        emit_svg(tr, fp, SvgKind::FinalProfiles);
        const auto svg = slurp(fp);
        CHECK(svg.rfind("<?xml", 0) == 0);
        std::size_t polylines = 0;
        for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) {
            ++polylines;
        }
        CHECK(polylines == 2);
        try {
            emit_svg(tr, (dir / "v.svg").string(), SvgKind::LyapunovSeries);
            FAIL("no error");
        }
        catch (const Error& e) {
            CHECK(std::string(e.what()) == "no data for kind");
        }
        std::ofstream(dir / "plain_file") << "x";
        CHECK_THROWS_AS(emit_svg(tr, (dir / "plain_file" / "x.svg").string(), SvgKind::MassSeries), Error);
        CHECK_THROWS_AS(parse_svg_kind("pie_chart"), Error);
    }
}

TEST_SUITE("sweep")
{
    TEST_CASE("knee detection")
    {
        CHECK_FALSE(detect_knee({0.0, 1.0}, {3.0, 3.0}).has_value());
        CHECK_FALSE(detect_knee({0.0, 1.0, 2.0, 3.0}, {1.0, 1.0, 1.0, 1.0}).has_value());
        CHECK_FALSE(detect_knee({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0}).has_value());
        std::vector<double> x, y;
        for (int k = 0; k <= 20; ++k) {
            x.push_back(0.05 * k);
            y.push_back(std::max(0.0, x.back() - 0.6));
        }
        const auto knee = detect_knee(x, y);
        REQUIRE(knee.has_value());
        CHECK(*knee == 12);
    }

    TEST_CASE("a two point sweep reports no knee")
    {
        auto cfg             = preset_config("sim1b");
        cfg.nx               = 21;
        cfg.T                = 0.5;
        cfg.sweep_parameter  = "d_I";
        cfg.sweep_lo         = 1.0;
        cfg.sweep_hi         = 2.0;
        cfg.sweep_count      = 2;
        cfg.sweep_observable = "I_mass_at_T";
        const auto res       = run_sweep(cfg);
        REQUIRE(res.rows.size() == 2);
        CHECK(res.rows[0].ok);
        CHECK(res.rows[1].ok);
        CHECK_FALSE(res.knee_index.has_value());
    }

    TEST_CASE("extinction at small N holds for every d_I")
    {
        auto cfg             = preset_config("sim1a");
        cfg.nx               = 51;
        cfg.sweep_parameter  = "d_I";
        cfg.sweep_observable = "final_sup_I";
        for (auto [lo, hi, n] : {std::tuple{0.1, 10.0, 3}, std::tuple{1.0, 10.0, 2}}) {
            cfg.sweep_lo    = lo;
            cfg.sweep_hi    = hi;
            cfg.sweep_count = n;
            const auto res  = run_sweep(cfg, 3);
            for (const auto& row : res.rows) {
                INFO("d_I = " << row.param);
                REQUIRE(row.ok);
                CHECK(row.value <= 1e-3);
            }
        }
    }

    TEST_CASE("parallel and serial sweeps agree exactly")
    {
        auto cfg        = preset_config("sim1c");
        cfg.nx          = 31;
        cfg.T           = 2.0;
        cfg.sweep_count = 6;
        const auto one  = run_sweep(cfg, 1);
        const auto four = run_sweep(cfg, 4);
        REQUIRE(one.rows.size() == 6);
        for (std::size_t k = 0; k < 6; ++k) {
            CHECK(one.rows[k].param == four.rows[k].param);
            CHECK(one.rows[k].value == four.rows[k].value);
            if (k > 0) {
                CHECK(one.rows[k].param > one.rows[k - 1].param);
                CHECK(one.rows[k].N > one.rows[k - 1].N);
            }
        }
    }

    TEST_CASE("a failing point is recorded and the sweep goes on")
    {
        auto cfg             = preset_config("sim3b");
        cfg.nx               = 21;
        cfg.T                = 1.0;
        cfg.sweep_parameter  = "dt";
        cfg.sweep_lo         = 1e-3;
        cfg.sweep_hi         = 1.0;
        cfg.sweep_count      = 2;
        const auto res       = run_sweep(cfg, 2);
        REQUIRE(res.rows.size() == 2);
        CHECK(res.rows[0].ok);
        CHECK_FALSE(res.rows[1].ok);
        CHECK_FALSE(res.rows[1].error.empty());
        auto bad            = cfg;
        bad.sweep_parameter = "no_such_key";
        CHECK_THROWS_AS(run_sweep(bad), Error);
        bad.sweep_parameter = "dt";
        bad.sweep_count     = 1;
        CHECK_THROWS_AS(run_sweep(bad), Error);
    }
}
