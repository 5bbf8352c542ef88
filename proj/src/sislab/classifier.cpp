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
#include "sislab/classifier.hpp"
#include "sislab/diagnostics.hpp"
#include "sislab/error.hpp"
#include "sislab/risk.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace sislab
{

std::string_view regime_name(Regime t)
{
    static constexpr std::array<std::string_view, 10> names{
        "mass_dS0_extinction",     "mass_dS0_endemic",       "mass_dI0_extinction",
        "mass_dI0_concentration",  "std_dS0_extinction_low_risk", "std_dS0_endemic",
        "std_dS0_extinction_neutral", "std_dS0_subsequential_extinction", "std_dI0_persistence",
        "indeterminate",
    };
    return names[static_cast<std::size_t>(t)];
}

IntegrabilityReport integrability_check(const Field& beta, const Field& gamma, const std::vector<bool>& nodes,
                                        double cap)
{
    const auto& g       = beta.grid();
    const std::size_t m = g.size() - 1;
    IntegrabilityReport rep;
    for (int s : {4, 2, 1}) {
        if (m % static_cast<std::size_t>(s) == 0) {
            rep.strides.push_back(s);
        }
    }
    for (int s : rep.strides) {
        const auto st = static_cast<std::size_t>(s);
        double q      = 0.0;
        for (std::size_t i = 0; i <= m; i += st) {
            if (!nodes[i]) {
                continue;
            }
            const double w   = (i == 0 || i == m ? 0.5 : 1.0) * g.dx * s;
            const double gap = beta[i] - gamma[i];
            q += w * (gap > 0.0 ? std::min(1.0 / gap, cap) : cap);
        }
        rep.quadratures.push_back(q);
    }
    const double coarse = rep.quadratures.front();
    const double fine   = rep.quadratures.back();
    rep.growth          = coarse > 0.0 ? fine / coarse : 1.0;
    rep.divergent       = rep.growth > 2.0;
    return rep;
}

namespace
{

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string describe(const IntegrabilityReport& rep)
{
    std::string s = "integral of 1/(beta-gamma) at spacings";
    for (std::size_t k = 0; k < rep.strides.size(); ++k) {
        s += " " + std::to_string(rep.strides[k]) + "dx:" + fmt(rep.quadratures[k]);
    }
    s += ", growth " + fmt(rep.growth) + (rep.divergent ? " (> 2, treated as divergent)" : " (<= 2, treated as finite)");
    return s;
}

} // namespace

RegimePrediction predict_regime(const ModelSpec& spec, const Field& S0, const Field& I0, const ClassifierOptions& opts)
{
    validate(spec);
    require(spec.variant != Variant::Full, "no regime result covers the Full model; choose a degenerate variant");
    validate_initial_data(spec, S0, I0);

    const auto& grid   = S0.grid();
    const double area  = grid.length();
    const auto r       = ratio_r(spec);
    const DiagnosticsContext ctx(spec, S0, I0);
    const auto& risk   = ctx.risk();
    const auto& supp   = ctx.I0_support();
    const std::size_t n = S0.size();

    RegimePrediction p;
    p.N = integrate(S0) + integrate(I0);
    const double int_r = integrate(r);
    std::ostringstream notes;
    notes << "N=" << fmt(p.N) << "; int r=" << fmt(int_r) << "; H+ nodes=" << risk.h_plus.size()
          << ", H0 nodes=" << risk.h_zero.size() << " (weight " << fmt(risk.h_zero_measure)
          << ", band " << fmt(risk.tol_zero) << "), H- nodes=" << risk.h_minus.size();

    switch (spec.variant) {
    case Variant::MassAction_dS0: {
        if (p.N < int_r) {
            p.regime = Regime::MassDS0Extinction;
            break;
        }
        bool beta_const = max_value(spec.beta) - min_value(spec.beta) <= 1e-12 * max_value(spec.beta);
        bool sign_const = true;
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            pos = pos || S0[i] - r[i] > 0.0;
            neg = neg || S0[i] - r[i] < 0.0;
        }
        sign_const = !(pos && neg);
        bool endemic = p.N > int_r && (beta_const || sign_const);
        if (!endemic && p.N > int_r) {
            p.n_star = opts.n_star ? *opts.n_star
                                   : critical_population(S0, r, spec.beta, spec.d_I, opts.threshold).n_star;
            notes << "; N*=" << fmt(*p.n_star);
            endemic = p.N > *p.n_star;
        }
        if (endemic) {
            p.regime     = Regime::MassDS0Endemic;
            p.predicted_S = r;
            p.predicted_I = Field::constant(S0.grid_ptr(), (p.N - int_r) / area);
            p.predicted_I_mass = p.N - int_r;
        }
        else {
            notes << "; int r <= N <= N* with nonconstant beta and sign-changing S0-r leaves the outcome open";
        }
        break;
    }
    case Variant::MassAction_dI0: {
        bool any = false;
        for (auto i : risk.h_plus) {
            any = any || supp[i];
        }
        if (!any) {
            p.regime     = Regime::MassDI0Extinction;
            p.predicted_S = Field::constant(S0.grid_ptr(), p.N / area);
            p.predicted_I = Field::zeros(S0.grid_ptr());
            p.predicted_I_mass = 0.0;
        }
        else {
            p.regime              = Regime::MassDI0Concentration;
            p.predicted_I_mass     = p.N - area * risk.r_tilde_min;
            p.concentration_target = risk.min_set;
            notes << "; r_tilde_min=" << fmt(risk.r_tilde_min) << " at " << risk.min_set.size() << " node(s)";
        }
        break;
    }
    case Variant::StdIncidence_dS0: {
        if (!risk.h_minus.empty()) {
            p.regime     = Regime::StdDS0ExtinctionLowRisk;
            p.predicted_I = Field::zeros(S0.grid_ptr());
            p.predicted_I_mass = 0.0;
            break;
        }
        if (risk.h_zero.empty()) {
            std::vector<double> q(n);
            for (std::size_t i = 0; i < n; ++i) {
                q[i] = spec.beta[i] / (spec.beta[i] - spec.gamma[i]);
            }
            const double I_star = p.N / integrate(Field(S0.grid_ptr(), q));
            std::vector<double> s(n);
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = I_star * spec.gamma[i] / (spec.beta[i] - spec.gamma[i]);
            }
            p.regime          = Regime::StdDS0Endemic;
            p.predicted_I      = Field::constant(S0.grid_ptr(), I_star);
            p.predicted_S      = Field(S0.grid_ptr(), std::move(s));
            p.predicted_I_mass = I_star * area;
            notes << "; I*=" << fmt(I_star);
            break;
        }
        if (risk.h_zero_measure > 2.0 * grid.dx) {
            p.regime     = Regime::StdDS0ExtinctionNeutral;
            p.predicted_I = Field::zeros(S0.grid_ptr());
            p.predicted_I_mass = 0.0;
            notes << "; H0 treated as having positive measure (weight > 2dx)";
            break;
        }
        std::vector<bool> off_zero(n, true);
        for (auto i : risk.h_zero) {
            off_zero[i] = false;
        }
        const auto rep = integrability_check(spec.beta, spec.gamma, off_zero);
        notes << "; " << describe(rep);
        if (rep.divergent) {
            p.regime     = Regime::StdDS0SubseqExtinction;
            p.predicted_I = Field::zeros(S0.grid_ptr());
            p.predicted_I_mass = 0.0;
        }
        else {
            notes << "; H0 is negligible but 1/(beta-gamma) looks integrable, no regime result applies";
        }
        break;
    }
    case Variant::StdIncidence_dI0: {
        std::vector<bool> hp(n, false);
        for (auto i : risk.h_plus) {
            hp[i] = supp[i];
        }
        const auto rep = integrability_check(spec.beta, spec.gamma, hp);
        notes << "; " << describe(rep);
        if (rep.divergent) {
            notes << "; 1/(beta-gamma) does not look integrable on the high-risk support, no regime result applies";
            break;
        }
        std::vector<double> k(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (hp[i]) {
                k[i] = (spec.beta[i] - spec.gamma[i]) / spec.gamma[i];
                p.support_nodes.push_back(i);
            }
        }
        const double S_star = p.N / (area + integrate(Field(S0.grid_ptr(), k)));
        std::vector<double> I(n);
        for (std::size_t i = 0; i < n; ++i) {
            I[i] = k[i] * S_star;
        }
        p.regime          = Regime::StdDI0Persistence;
        p.predicted_S      = Field::constant(S0.grid_ptr(), S_star);
        p.predicted_I      = Field(S0.grid_ptr(), std::move(I));
        p.predicted_I_mass = p.N - S_star * area;
        notes << "; S*=" << fmt(S_star);
        break;
    }
    case Variant::Full:
        break;
    }
    p.notes = notes.str();
    return p;
}

Field estimate_lambda_star(const Trajectory& traj, const Field& r, const Field& beta)
{
    require(!traj.snapshots.empty(), "empty trajectory");
    (void)r;
    const auto& J = traj.snapshots.back().J;
    std::vector<double> lam(J.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        lam[i] = std::exp(-beta[i] * J[i]);
    }
    return Field(J.grid_ptr(), std::move(lam));
}

namespace
{

double sup_rel(const Field& a, const Field& b, double scale)
{
    return max_diff(a, b) / scale;
}

} // namespace

OutcomeReport verify_outcome(const Trajectory& traj, const RegimePrediction& pred, double tol)
{
    require(!traj.snapshots.empty(), "empty trajectory");
    require(tol > 0.0, "verification tolerance must be positive");
    OutcomeReport rep;
    rep.prediction = pred;
    rep.tolerance  = tol;

    const auto& last   = traj.snapshots.back();
    const double area  = last.S.grid().length();
    const double dens  = traj.N / area;
    const double T_end = last.t;
    rep.verified_t     = T_end;

    auto add = [&](std::string name, double v) {
        rep.measured_errors.emplace_back(std::move(name), v);
    };
    rep.measurements.emplace_back("t_final", T_end);
    rep.measurements.emplace_back("I_mass_final", integrate(last.I));
    rep.measurements.emplace_back("sup_I_final", max_value(last.I));
    rep.measurements.emplace_back("steady_reached", traj.steady_reached ? 1.0 : 0.0);

    // Snapshot indices of the trailing half of the run.
    std::vector<std::size_t> trailing;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        if (traj.snapshots[k].t >= 0.5 * T_end) {
            trailing.push_back(k);
        }
    }

    switch (pred.regime) {
    case Regime::MassDS0Extinction:
    case Regime::StdDS0ExtinctionLowRisk:
    case Regime::StdDS0ExtinctionNeutral:
        add("sup_I_over_density", max_value(last.I) / dens);
        break;
    case Regime::StdDS0SubseqExtinction: {
        double best = std::numeric_limits<double>::infinity();
        for (auto k : trailing) {
            const double v = max_value(traj.snapshots[k].I) / dens;
            if (v < best) {
                best           = v;
                rep.verified_t = traj.snapshots[k].t;
            }
        }
        add("sup_I_over_density", best);
        break;
    }
    case Regime::MassDS0Endemic:
        add("I_mass_rel", std::abs(integrate(last.I) - *pred.predicted_I_mass) / *pred.predicted_I_mass);
        add("S_minus_r_rel", sup_rel(last.S, *pred.predicted_S, max_value(*pred.predicted_S)));
        break;
    case Regime::MassDI0Extinction:
        add("S_uniform_rel", sup_rel(last.S, *pred.predicted_S, dens));
        add("I_mass_over_N", integrate(last.I) / traj.N);
        break;
    case Regime::MassDI0Concentration: {
        double best_frac = -1.0;
        std::size_t best_k = trailing.back();
        for (auto k : trailing) {
            const double f = concentration_fraction(traj.snapshots[k].I, pred.concentration_target);
            if (f > best_frac) {
                best_frac = f;
                best_k    = k;
            }
        }
        const auto& s  = traj.snapshots[best_k];
        rep.verified_t = s.t;
        add("I_mass_rel", std::abs(integrate(s.I) - *pred.predicted_I_mass) / *pred.predicted_I_mass);
        add("concentration_deficit", std::max(0.0, 0.9 - best_frac));
        rep.measurements.emplace_back("concentration_fraction", best_frac);
        const auto masses = window_masses(s.I, pred.concentration_target);
        for (std::size_t j = 0; j < masses.size(); ++j) {
            rep.measurements.emplace_back("window_mass_x=" + fmt(s.I.grid().nodes[pred.concentration_target[j]]),
                                          masses[j]);
        }
        break;
    }
    case Regime::StdDS0Endemic: {
        const double I_star = (*pred.predicted_I)[0];
        add("I_uniform_rel", sup_rel(last.I, *pred.predicted_I, I_star));
        break;
    }
    case Regime::StdDI0Persistence: {
        const double S_star = (*pred.predicted_S)[0];
        add("S_uniform_rel", sup_rel(last.S, *pred.predicted_S, S_star));
        const auto& Ip = *pred.predicted_I;
        const double scale = std::max(max_value(Ip), 1e-300);
        const auto on = mask_of(pred.support_nodes, Ip.size());
        double on_err = 0.0, off_sup = 0.0;
        for (std::size_t i = 0; i < Ip.size(); ++i) {
            if (on[i]) {
                on_err = std::max(on_err, std::abs(last.I[i] - Ip[i]) / scale);
            }
            else {
                off_sup = std::max(off_sup, last.I[i]);
            }
        }
        add("I_profile_rel_on_support", on_err);
        add("sup_I_off_support_over_S_star", off_sup / S_star);
        break;
    }
    case Regime::Indeterminate:
        break;
    }

    rep.has_verdict = pred.regime != Regime::Indeterminate;
    rep.pass        = rep.has_verdict && std::all_of(rep.measured_errors.begin(), rep.measured_errors.end(),
                                                     [&](const auto& e) { return e.second <= tol; });
    return rep;
}

std::string report_json(const OutcomeReport& report)
{
    nlohmann::ordered_json j;
    j["regime"] = std::string(regime_name(report.prediction.regime));
    j["N"]       = report.prediction.N;
    if (report.prediction.n_star) {
        j["n_star"] = *report.prediction.n_star;
    }
    if (report.prediction.predicted_I_mass) {
        j["predicted_I_mass"] = *report.prediction.predicted_I_mass;
    }
    j["notes"]       = report.prediction.notes;
    j["tolerance"]   = report.tolerance;
    j["verified_t"]  = report.verified_t;
    j["has_verdict"] = report.has_verdict;
    j["pass"]        = report.pass;
    auto& errs       = j["measured_errors"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.measured_errors) {
        errs[k] = v;
    }
    auto& meas = j["measurements"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.measurements) {
        meas[k] = v;
    }
    return j.dump(2);
}

} // namespace sislab
