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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sislab
{

namespace
{

constexpr std::string_view k_S0_default = "2 + cos(pi*x)";
constexpr std::string_view k_I0_default = "1.5 + cos(pi*x)";

RunConfig preset(std::string model, std::string beta, std::string gamma, double d_S, double d_I)
{
    RunConfig c;
    c.model      = std::move(model);
    c.beta_expr  = std::move(beta);
    c.gamma_expr = std::move(gamma);
    c.S0_expr    = k_S0_default;
    c.I0_expr    = k_I0_default;
    c.d_S        = d_S;
    c.d_I        = d_I;
    return c;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, std::string_view v)
{
    const auto s = trim(v);
    double out   = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::InvalidArgument, "key '" + std::string(key) + "' expects a number, got '" + s + "'");
    }
    return out;
}

int to_int(std::string_view key, std::string_view v)
{
    const auto s = trim(v);
    int out      = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::InvalidArgument, "key '" + std::string(key) + "' expects an integer, got '" + s + "'");
    }
    return out;
}

std::string num(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{"sim1a", "sim1b", "sim1c", "sim2a", "sim2b", "sim2c",
                                                "sim3a", "sim3b", "sim3c", "sim4a", "sim4b"};
    return names;
}

RunConfig preset_config(std::string_view name)
{
    RunConfig c;
    if (name == "sim1a") {
        c = preset("MassAction_dS0", "0.5", "4 - pi*sin(pi*x)", 0.0, 1.0);
    }
    else if (name == "sim1b") {
        c = preset("MassAction_dS0", "2", "4 - pi*sin(pi*x)", 0.0, 1.0);
    }
    else if (name == "sim1c") {
        // beta = 0.5(1+x) against the sim1 gamma puts int r near 2.82.
        c            = preset("MassAction_dS0", "0.5*(1 + x)", "4 - pi*sin(pi*x)", 0.0, 1.0);
        c.I0_expr    = "max({a} + cos(pi*x), 0)";
        c.params["a"] = 0.8;
        c.T          = 40.0;
        c.steady_tol = 0.0;
        c.sweep_parameter  = "a";
        c.sweep_lo         = 0.2;
        c.sweep_hi         = 1.2;
        c.sweep_count      = 21;
        c.sweep_observable = "I_mass_at_T";
    }
    else if (name == "sim2a") {
        c = preset("MassAction_dI0", "0.2", "4 - pi*sin(pi*x)", 1.0, 0.0);
    }
    else if (name == "sim2b") {
        c = preset("MassAction_dI0", "1", "4 - pi*sin(pi*x)", 1.0, 0.0);
    }
    else if (name == "sim2c") {
        c = preset("MassAction_dI0", "2", "14 - 4*pi*sin(4*pi*x)", 1.0, 0.0);
    }
    else if (name == "sim3a") {
        c = preset("StdIncidence_dS0", "1 + sin(pi*x)", "1.5", 0.0, 1.0);
    }
    else if (name == "sim3b") {
        c = preset("StdIncidence_dS0", "2.5 + sin(pi*x)", "1.5 + sin(pi*x)", 0.0, 1.0);
    }
    else if (name == "sim3c") {
        c = preset("StdIncidence_dS0", "2 - sin(pi*x)", "1", 0.0, 1.0);
    }
    else if (name == "sim4a") {
        c = preset("StdIncidence_dI0", "2 - abs(x-0.5)^0.5", "1.5", 1.0, 0.0);
    }
    else if (name == "sim4b") {
        c = preset("StdIncidence_dI0", "2 - sin(pi*x)", "1.5", 1.0, 0.0);
    }
    else {
        std::string list;
        for (const auto& n : preset_names()) {
            list += (list.empty() ? "" : ", ") + n;
        }
        throw Error(ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'; available: " + list);
    }
    c.preset = std::string(name);
    return c;
}

std::vector<std::string> known_keys()
{
    return {"preset",     "model",          "beta",         "gamma",       "S0",          "I0",
            "d_S",        "d_I",            "nx",           "x_min",       "x_max",       "dt",
            "T",          "snapshot_every", "steady_tol",   "eps_reg",     "eps_radius",  "verify_tol",
            "scheme",     "splitting",      "output_dir",     "trajectory",   "sweep.parameter", "sweep.lo", "sweep.hi",
            "sweep.count", "sweep.observable", "param.<name>"};
}

void set_key(RunConfig& c, std::string_view key_in, std::string_view value_in)
{
    const auto key   = trim(key_in);
    const auto value = trim(value_in);
    if (key == "preset") {
        c = preset_config(value);
    }
    else if (key == "model") {
        parse_variant(value);
        c.model = value;
    }
    else if (key == "beta") {
        c.beta_expr = value;
    }
    else if (key == "gamma") {
        c.gamma_expr = value;
    }
    else if (key == "S0") {
        c.S0_expr = value;
    }
    else if (key == "I0") {
        c.I0_expr = value;
    }
    else if (key == "d_S") {
        c.d_S = to_double(key, value);
    }
    else if (key == "d_I") {
        c.d_I = to_double(key, value);
    }
    else if (key == "nx") {
        c.nx = to_int(key, value);
    }
    else if (key == "x_min") {
        c.x_min = to_double(key, value);
    }
    else if (key == "x_max") {
        c.x_max = to_double(key, value);
    }
    else if (key == "dt") {
        c.dt = to_double(key, value);
    }
    else if (key == "T") {
        c.T = to_double(key, value);
    }
    else if (key == "snapshot_every") {
        c.snapshot_every = to_double(key, value);
    }
    else if (key == "steady_tol") {
        c.steady_tol = to_double(key, value);
    }
    else if (key == "eps_reg") {
        c.eps_reg = to_double(key, value);
    }
    else if (key == "eps_radius") {
        c.eps_radius = to_double(key, value);
    }
    else if (key == "verify_tol") {
        c.verify_tol = to_double(key, value);
    }
    else if (key == "scheme") {
        require(value == "exact" || value == "crank_nicolson" || value == "backward_euler",
                "scheme must be exact, crank_nicolson or backward_euler");
        c.scheme = value;
    }
    else if (key == "splitting") {
        require(value == "corrected" || value == "strang", "splitting must be corrected or strang");
        c.splitting = value;
    }
    else if (key == "output_dir") {
        c.output_dir = value;
    }
    else if (key == "trajectory") {
        c.trajectory = value;
    }
    else if (key == "sweep.parameter") {
        c.sweep_parameter = value;
    }
    else if (key == "sweep.lo") {
        c.sweep_lo = to_double(key, value);
    }
    else if (key == "sweep.hi") {
        c.sweep_hi = to_double(key, value);
    }
    else if (key == "sweep.count") {
        c.sweep_count = to_int(key, value);
    }
    else if (key == "sweep.observable") {
        require(value == "I_mass_at_T" || value == "final_sup_I" || value == "concentration_fraction",
                "sweep.observable must be I_mass_at_T, final_sup_I or concentration_fraction");
        c.sweep_observable = value;
    }
    else if (key.starts_with("param.") && key.size() > 6) {
        c.params[key.substr(6)] = to_double(key, value);
    }
    else {
        throw Error(ErrorCode::InvalidArgument, "unknown key '" + key + "'");
    }
}

void apply_override(RunConfig& cfg, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    require(eq != std::string_view::npos, "override '" + std::string(assignment) + "' is not of the form key=value");
    set_key(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string get_key(const RunConfig& c, std::string_view key)
{
    auto opt = [](const std::optional<double>& v) {
        return v ? num(*v) : std::string();
    };
    if (key == "preset") return c.preset.value_or("");
    if (key == "model") return c.model;
    if (key == "beta") return c.beta_expr;
    if (key == "gamma") return c.gamma_expr;
    if (key == "S0") return c.S0_expr;
    if (key == "I0") return c.I0_expr;
    if (key == "d_S") return opt(c.d_S);
    if (key == "d_I") return opt(c.d_I);
    if (key == "nx") return std::to_string(c.nx);
    if (key == "x_min") return num(c.x_min);
    if (key == "x_max") return num(c.x_max);
    if (key == "dt") return num(c.dt);
    if (key == "T") return num(c.T);
    if (key == "snapshot_every") return num(c.snapshot_every);
    if (key == "steady_tol") return num(c.steady_tol);
    if (key == "eps_reg") return num(c.eps_reg);
    if (key == "eps_radius") return num(c.eps_radius);
    if (key == "verify_tol") return num(c.verify_tol);
    if (key == "scheme") return c.scheme;
    if (key == "splitting") return c.splitting;
    if (key == "output_dir") return c.output_dir;
    if (key == "trajectory") return c.trajectory;
    if (key == "sweep.parameter") return c.sweep_parameter;
    if (key == "sweep.lo") return num(c.sweep_lo);
    if (key == "sweep.hi") return num(c.sweep_hi);
    if (key == "sweep.count") return std::to_string(c.sweep_count);
    if (key == "sweep.observable") return c.sweep_observable;
    if (key.starts_with("param.")) {
        const auto it = c.params.find(std::string(key.substr(6)));
        require(it != c.params.end(), "parameter '" + std::string(key) + "' is not set");
        return num(it->second);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text)
{
    struct Line {
        std::size_t number;
        std::string key, value;
    };
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos    = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++number;
        auto raw = text.substr(pos, end - pos);
        pos      = end + 1;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        const auto line = trim(raw);
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(number) + ": expected 'key = value', got '" + line + "'",
                             number);
        }
        lines.push_back({number, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
        if (end == text.size()) {
            break;
        }
    }

    RunConfig cfg;
    auto apply = [&](const Line& l) {
        try {
            set_key(cfg, l.key, l.value);
        }
        catch (const Error& e) {
            throw ParseError("config line " + std::to_string(l.number) + ": " + e.what(), l.number);
        }
    };
    for (const auto& l : lines) {
        if (l.key == "preset") {
            apply(l);
        }
    }
    for (const auto& l : lines) {
        if (l.key != "preset") {
            apply(l);
        }
    }
    check_complete(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void check_complete(const RunConfig& c)
{
    std::vector<std::string> missing;
    if (c.model.empty()) missing.emplace_back("model");
    if (c.beta_expr.empty()) missing.emplace_back("beta");
    if (c.gamma_expr.empty()) missing.emplace_back("gamma");
    if (c.S0_expr.empty()) missing.emplace_back("S0");
    if (c.I0_expr.empty()) missing.emplace_back("I0");
    if (!c.d_S) missing.emplace_back("d_S");
    if (!c.d_I) missing.emplace_back("d_I");
    if (!missing.empty()) {
        std::string list;
        for (const auto& k : missing) {
            list += (list.empty() ? "" : ", ") + k;
        }
        throw Error(ErrorCode::InvalidArgument,
                    "configuration is missing required keys: " + list + " (or give preset = <name>)");
    }
}

std::string substitute_params(std::string_view expr, const std::map<std::string, double>& params)
{
    std::string out;
    std::size_t i = 0;
    while (i < expr.size()) {
        if (expr[i] != '{') {
            out += expr[i++];
            continue;
        }
        const auto close = expr.find('}', i);
        require(close != std::string_view::npos, "unterminated '{' in expression '" + std::string(expr) + "'");
        const std::string name(expr.substr(i + 1, close - i - 1));
        const auto it = params.find(name);
        require(it != params.end(), "expression uses {" + name + "} but param." + name + " is not set");
        out += "(" + num(it->second) + ")";
        i = close + 1;
    }
    return out;
}

Scenario build_scenario(const RunConfig& cfg)
{
    check_complete(cfg);
    const auto grid = make_grid(cfg.x_min, cfg.x_max, cfg.nx);
    Scenario sc;
    sc.spec.variant = parse_variant(cfg.model);
    sc.spec.beta    = eval_expression(grid, substitute_params(cfg.beta_expr, cfg.params));
    sc.spec.gamma   = eval_expression(grid, substitute_params(cfg.gamma_expr, cfg.params));
    sc.spec.d_S     = *cfg.d_S;
    sc.spec.d_I     = *cfg.d_I;
    sc.spec.eps_reg = cfg.eps_reg;
    sc.spec.scheme  = cfg.scheme == "crank_nicolson"   ? DiffusionScheme::CrankNicolson
                      : cfg.scheme == "backward_euler" ? DiffusionScheme::BackwardEuler
                                                       : DiffusionScheme::Exact;
    sc.spec.boundary_correction = cfg.splitting == "corrected";
    validate(sc.spec);
    sc.S0 = eval_expression(grid, substitute_params(cfg.S0_expr, cfg.params));
    sc.I0 = eval_expression(grid, substitute_params(cfg.I0_expr, cfg.params));
    validate_initial_data(sc.spec, sc.S0, sc.I0);
    sc.options.dt             = cfg.dt;
    sc.options.T              = cfg.T;
    sc.options.snapshot_every = cfg.snapshot_every;
    sc.options.steady_tol     = cfg.steady_tol;
    sc.options.eps_radius     = cfg.eps_radius;
    return sc;
}

std::string format_config(const RunConfig& c)
{
    std::ostringstream os;
    for (const auto& k : known_keys()) {
        if (k == "param.<name>") {
            for (const auto& [name, v] : c.params) {
                os << "param." << name << " = " << num(v) << "\n";
            }
            continue;
        }
        const auto v = get_key(c, k);
        if (!v.empty()) {
            os << k << " = " << v << "\n";
        }
    }
    return os.str();
}

} // namespace sislab
