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
#include "sislab/output.hpp"
#include "sislab/error.hpp"
#include "sislab/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sislab
{

std::string shortest(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace
{

std::ofstream open_out(const std::string& path)
{
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    }
    return out;
}

void close_checked(std::ofstream& out, const std::string& path)
{
    out.close();
    if (!out) {
        throw Error(ErrorCode::Io, "error while writing '" + path + "'");
    }
}

std::string opt(const std::optional<double>& v)
{
    return v ? shortest(*v) : std::string();
}

double parse_num(std::string_view s, const std::string& path, std::size_t line)
{
    double v       = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(path + " line " + std::to_string(line) + ": bad number '" + std::string(s) + "'", line);
    }
    return v;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace

void emit_csv(const Trajectory& traj, const std::string& dir)
{
    const std::string prof = (std::filesystem::path(dir) / "profiles.csv").string();
    const std::string diag = (std::filesystem::path(dir) / "diagnostics.csv").string();
    {
        auto out = open_out(prof);
        out << "t,x,S,I\n";
        for (const auto& s : traj.snapshots) {
            const auto& nodes = s.S.grid().nodes;
            const auto t      = shortest(s.t);
            for (std::size_t i = 0; i < s.S.size(); ++i) {
                out << t << ',' << shortest(nodes[i]) << ',' << shortest(s.S[i]) << ',' << shortest(s.I[i]) << '\n';
            }
        }
        close_checked(out, prof);
    }
    {
        auto out = open_out(diag);
        out << "t,total_mass,lyapunov,lyapunov_dissipation,harnack_ratio,concentration_fraction,sup_change_rate\n";
        for (const auto& d : traj.diagnostics) {
            out << shortest(d.t) << ',' << shortest(d.total_mass) << ',' << opt(d.lyapunov) << ','
                << opt(d.lyapunov_dissipation) << ',' << opt(d.harnack_ratio) << ',' << opt(d.concentration_fraction)
                << ',' << shortest(d.sup_change_rate) << '\n';
        }
        close_checked(out, diag);
    }
}

Trajectory load_trajectory(const std::string& dir, const ModelSpec& spec)
{
    const std::string path = (std::filesystem::path(dir) / "profiles.csv").string();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    }
    const auto grid     = spec.beta.grid_ptr();
    const std::size_t n = grid->size();

    std::string line;
    std::getline(in, line);
    require(line.rfind("t,x,S,I", 0) == 0, path + ": unexpected header '" + line + "'", ErrorCode::Parse);

    std::vector<double> times;
    std::vector<std::vector<double>> S, I;
    std::size_t lineno = 1;
    std::size_t node   = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::string_view rest(line);
        double cols[4];
        for (int k = 0; k < 4; ++k) {
            const auto comma = rest.find(',');
            const auto field = k < 3 ? rest.substr(0, comma) : rest;
            if (k < 3 && comma == std::string_view::npos) {
                throw ParseError(path + " line " + std::to_string(lineno) + ": expected 4 columns", lineno);
            }
            cols[k] = parse_num(field, path, lineno);
            if (k < 3) {
                rest = rest.substr(comma + 1);
            }
        }
        if (node == 0) {
            times.push_back(cols[0]);
            S.emplace_back(n);
            I.emplace_back(n);
        }
        require(cols[0] == times.back(), path + " line " + std::to_string(lineno) + ": snapshot is not " +
                                             std::to_string(n) + " rows long", ErrorCode::Parse);
        require(std::abs(cols[1] - grid->nodes[node]) <= 1e-9 * (1.0 + std::abs(grid->nodes[node])),
                path + " line " + std::to_string(lineno) + ": x does not match the configured grid", ErrorCode::Parse);
        S.back()[node] = cols[2];
        I.back()[node] = cols[3];
        node           = (node + 1) % n;
    }
    require(node == 0 && !times.empty(), path + ": truncated or empty profile data", ErrorCode::Parse);

    Trajectory traj;
    traj.spec = spec;
    Field S0(grid, S.front()), I0(grid, I.front());
    traj.N = integrate(S0) + integrate(I0);
    if (times.size() > 1) {
        traj.dt = times[1] - times[0];
    }
    const DiagnosticsContext ctx(spec, S0, I0);
    std::vector<double> J(n, 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0) {
            const double h = times[k] - times[k - 1];
            for (std::size_t i = 0; i < n; ++i) {
                J[i] += 0.5 * h * (I[k - 1][i] + I[k][i]);
            }
        }
        State st{times[k], Field(grid, S[k]), Field(grid, I[k]), Field(grid, J)};
        auto rec = ctx.record(st.t, st.S, st.I);
        if (k > 0) {
            const auto& prev    = traj.snapshots.back();
            rec.sup_change_rate = std::max(max_diff(st.S, prev.S), max_diff(st.I, prev.I)) / (st.t - prev.t);
        }
        traj.snapshots.push_back(std::move(st));
        traj.diagnostics.push_back(rec);
    }
    return traj;
}

SvgKind parse_svg_kind(const std::string& name)
{
    if (name == "final_profiles") return SvgKind::FinalProfiles;
    if (name == "mass_series") return SvgKind::MassSeries;
    if (name == "lyapunov_series") return SvgKind::LyapunovSeries;
    if (name == "sweep_curve") return SvgKind::SweepCurve;
    throw Error(ErrorCode::InvalidArgument,
                "unknown plot kind '" + name + "'; expected final_profiles, mass_series, lyapunov_series or sweep_curve");
}

std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series, const double* marker_x, const std::string& marker_label)
{
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 55;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) {
                continue;
            }
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    }
    require(std::isfinite(x0) && std::isfinite(y0), "no data for kind", ErrorCode::InvalidArgument);
    if (x1 == x0) {
        x1 = x0 + 1.0;
    }
    if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y1))) {
        y0 -= 0.5 * std::max(1.0, std::abs(y0));
        y1 += 0.5 * std::max(1.0, std::abs(y1));
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream os;
    os.precision(6);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << escape(title) << "</text>\n"
       << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\"><rect x=\"" << L << "\" y=\"" << T << "\" width=\""
       << W - L - R << "\" height=\"" << H - T - B << "\"/></g>\n"
       << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0;
        const double yv = y0 + (y1 - y0) * k / 4.0;
        os << "<line x1=\"" << px(xv) << "\" y1=\"" << H - B << "\" x2=\"" << px(xv) << "\" y2=\"" << H - B + 5
           << "\" stroke=\"black\"/>"
           << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << xv << "</text>\n"
           << "<line x1=\"" << L - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << L << "\" y2=\"" << py(yv)
           << "\" stroke=\"black\"/>"
           << "<text x=\"" << L - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(xlabel)
       << "</text>\n"
       << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << (T + H - B) / 2 << ")\">" << escape(ylabel) << "</text>\n</g>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        os << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t k = 0; k < ser.x.size(); ++k) {
            if (std::isfinite(ser.x[k]) && std::isfinite(ser.y[k])) {
                os << px(ser.x[k]) << ',' << py(ser.y[k]) << ' ';
            }
        }
        os << "\"/>\n<text x=\"" << W - R - 8 << "\" y=\"" << T + 16 + 15 * static_cast<double>(s)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << ser.color << "\">"
           << escape(ser.label) << "</text>\n";
    }
    if (marker_x != nullptr) {
        os << "<line x1=\"" << px(*marker_x) << "\" y1=\"" << T << "\" x2=\"" << px(*marker_x) << "\" y2=\""
           << H - B << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n"
           << "<text x=\"" << px(*marker_x) + 4 << "\" y=\"" << T + 14
           << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"gray\">" << escape(marker_label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void emit_svg(const Trajectory& traj, const std::string& path, SvgKind kind)
{
    require(!traj.snapshots.empty(), "no data for kind");
    std::string svg;
    switch (kind) {
    case SvgKind::FinalProfiles: {
        const auto& s   = traj.snapshots.back();
        const auto& xs  = s.S.grid().nodes;
        svg = render_svg("profiles at t = " + shortest(s.t), "x", "density",
                         {{"S", "#1f77b4", xs, s.S.vector()}, {"I", "#d62728", xs, s.I.vector()}});
        break;
    }
    case SvgKind::MassSeries: {
        Series total{"S+I", "#333333", {}, {}}, inf{"I", "#d62728", {}, {}};
        for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
            const auto& s = traj.snapshots[k];
            total.x.push_back(s.t);
            total.y.push_back(traj.diagnostics[k].total_mass);
            inf.x.push_back(s.t);
            inf.y.push_back(integrate(s.I));
        }
        svg = render_svg("mass", "t", "integral", {total, inf});
        break;
    }
    case SvgKind::LyapunovSeries: {
        Series v{"V", "#2ca02c", {}, {}};
        for (const auto& d : traj.diagnostics) {
            if (d.lyapunov) {
                v.x.push_back(d.t);
                v.y.push_back(*d.lyapunov);
            }
        }
        require(!v.x.empty(), "no data for kind");
        svg = render_svg("Lyapunov functional", "t", "V", {v});
        break;
    }
    case SvgKind::SweepCurve:
        throw Error(ErrorCode::InvalidArgument, "sweep_curve plots a sweep table, not a trajectory");
    }
    auto out = open_out(path);
    out << svg;
    close_checked(out, path);
}

void emit_sweep_svg(const SweepResult& sweep, const std::string& path)
{
    Series s{sweep.observable, "#9467bd", {}, {}};
    for (const auto& row : sweep.rows) {
        if (row.ok) {
            s.x.push_back(row.N);
            s.y.push_back(row.value);
        }
    }
    require(!s.x.empty(), "no data for kind");
    std::string svg;
    if (sweep.knee_index) {
        const double k = sweep.rows[*sweep.knee_index].N;
        svg = render_svg("sweep over " + sweep.parameter, "N", sweep.observable, {s}, &k, "knee N = " + shortest(k));
    }
    else {
        svg = render_svg("sweep over " + sweep.parameter, "N", sweep.observable, {s});
    }
    auto out = open_out(path);
    out << svg;
    close_checked(out, path);
}

void emit_sweep_csv(const SweepResult& sweep, const std::string& path)
{
    auto out = open_out(path);
    out << "param,N,value,error\n";
    for (const auto& row : sweep.rows) {
        out << shortest(row.param) << ',' << shortest(row.N) << ',' << (row.ok ? shortest(row.value) : "") << ','
            << row.error << '\n';
    }
    close_checked(out, path);
}

} // namespace sislab
