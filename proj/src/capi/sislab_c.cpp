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
#include "sislab/sislab.h"

#include "sislab/classifier.hpp"
#include "sislab/config.hpp"
#include "sislab/error.hpp"
#include "sislab/output.hpp"
#include "sislab/simulator.hpp"
#include "sislab/spectral.hpp"
#include "sislab/sweep.hpp"
#include "sislab/threshold.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

struct sislab_grid {
    sislab::GridPtr grid;
};

struct sislab_field {
    sislab::Field field;
};

struct sislab_config {
    sislab::RunConfig cfg;
};

struct sislab_trajectory {
    sislab::Trajectory traj;
};

struct sislab_sweep {
    sislab::SweepResult result;
};

namespace
{

thread_local std::string g_last_error;

sislab_status fail(sislab_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

// Runs body and turns exceptions into status codes. Nothing may escape the C boundary.
template <class F>
sislab_status guarded(F&& body)
{
    try {
        body();
        return SISLAB_OK;
    }
    catch (const sislab::Error& e) {
        return fail(static_cast<sislab_status>(static_cast<int>(e.code())), e.what());
    }
    catch (const std::bad_alloc&) {
        return fail(SISLAB_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception& e) {
        return fail(SISLAB_ERR_INTERNAL, e.what());
    }
    catch (...) {
        return fail(SISLAB_ERR_INTERNAL, "unknown failure");
    }
}

void need(const void* p, const char* what)
{
    if (p == nullptr) {
        throw sislab::Error(sislab::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
    }
}

char* dup_string(const std::string& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void copy_out(std::span<const double> src, double* out, std::size_t n, const char* what)
{
    need(out, what);
    sislab::require(n == src.size(), std::string(what) + ": buffer holds " + std::to_string(n) + " values, need " +
                                         std::to_string(src.size()));
    std::copy(src.begin(), src.end(), out);
}

// The threshold and eigen summaries act on the diffusing infected class when there is one.
double eigen_rate(const sislab::ModelSpec& spec)
{
    return spec.d_I > 0.0 ? spec.d_I : spec.d_S;
}

} // namespace

extern "C" {

const char* sislab_version(void)
{
    return "0.1.0";
}

const char* sislab_last_error(void)
{
    return g_last_error.c_str();
}

const char* sislab_status_name(sislab_status status)
{
    switch (status) {
    case SISLAB_OK:
        return "ok";
    case SISLAB_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case SISLAB_ERR_PARSE:
        return "parse error";
    case SISLAB_ERR_DOMAIN:
        return "domain error";
    case SISLAB_ERR_NO_CONVERGENCE:
        return "no convergence";
    case SISLAB_ERR_IO:
        return "i/o error";
    case SISLAB_ERR_STEP_REJECTED:
        return "step rejected";
    case SISLAB_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void sislab_free_string(char* s)
{
    std::free(s);
}

sislab_status sislab_grid_create(double a, double b, int nx, sislab_grid** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new sislab_grid{sislab::make_grid(a, b, nx)};
    });
}

void sislab_grid_destroy(sislab_grid* grid)
{
    delete grid;
}

size_t sislab_grid_size(const sislab_grid* grid)
{
    return grid == nullptr ? 0 : grid->grid->size();
}

sislab_status sislab_grid_nodes(const sislab_grid* grid, double* out, size_t n)
{
    return guarded([&] {
        need(grid, "grid");
        copy_out(grid->grid->nodes, out, n, "nodes");
    });
}

sislab_status sislab_field_from_expression(const sislab_grid* grid, const char* expr, sislab_field** out)
{
    return guarded([&] {
        need(grid, "grid");
        need(expr, "expr");
        need(out, "out");
        *out = new sislab_field{sislab::eval_expression(grid->grid, expr)};
    });
}

sislab_status sislab_field_from_values(const sislab_grid* grid, const double* values, size_t n, sislab_field** out)
{
    return guarded([&] {
        need(grid, "grid");
        need(values, "values");
        need(out, "out");
        *out = new sislab_field{sislab::Field(grid->grid, std::vector<double>(values, values + n))};
    });
}

void sislab_field_destroy(sislab_field* field)
{
    delete field;
}

size_t sislab_field_size(const sislab_field* field)
{
    return field == nullptr ? 0 : field->field.size();
}

sislab_status sislab_field_values(const sislab_field* field, double* out, size_t n)
{
    return guarded([&] {
        need(field, "field");
        copy_out(field->field.values(), out, n, "values");
    });
}

sislab_status sislab_field_integral(const sislab_field* field, double* out)
{
    return guarded([&] {
        need(field, "field");
        need(out, "out");
        *out = sislab::integrate(field->field);
    });
}

sislab_status sislab_principal_eigenvalue(double d, const sislab_field* h, double tol, double* sigma,
                                          double* residual, sislab_field** phi)
{
    return guarded([&] {
        need(h, "h");
        need(sigma, "sigma");
        sislab::SpectralOptions opts;
        if (tol > 0.0) {
            opts.tol = tol;
        }
        auto res = sislab::principal_eigenvalue(d, h->field, opts);
        *sigma   = res.sigma;
        if (residual != nullptr) {
            *residual = res.residual;
        }
        if (phi != nullptr) {
            *phi = new sislab_field{sislab::normalize_max_one(res.phi)};
        }
    });
}

sislab_status sislab_reproduction_number(double d_I, const sislab_field* beta, const sislab_field* gamma, double* r0)
{
    return guarded([&] {
        need(beta, "beta");
        need(gamma, "gamma");
        need(r0, "r0");
        *r0 = sislab::basic_reproduction_number(d_I, beta->field, gamma->field);
    });
}

sislab_status sislab_critical_population(const sislab_field* S0, const sislab_field* r, const sislab_field* beta,
                                         double d_I, int cells, sislab_threshold_result* out,
                                         sislab_field** lambda_star)
{
    return guarded([&] {
        need(S0, "S0");
        need(r, "r");
        need(beta, "beta");
        need(out, "out");
        sislab::ThresholdOptions opts;
        opts.cells     = cells;
        const auto res = sislab::critical_population(S0->field, r->field, beta->field, d_I, opts);
        *out = sislab_threshold_result{res.n_star,       res.lower_bound,       res.upper_bound, res.sigma_at_opt,
                                       res.kkt_residual, res.converged ? 1 : 0, res.iterations};
        if (lambda_star != nullptr) {
            *lambda_star = new sislab_field{res.lambda_star};
        }
    });
}

sislab_status sislab_config_create(sislab_config** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new sislab_config{};
    });
}

sislab_status sislab_config_preset(const char* name, sislab_config** out)
{
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = new sislab_config{sislab::preset_config(name)};
    });
}

sislab_status sislab_config_load(const char* path, sislab_config** out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new sislab_config{sislab::load_config(path)};
    });
}

sislab_status sislab_config_parse(const char* text, sislab_config** out)
{
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new sislab_config{sislab::parse_config(text)};
    });
}

void sislab_config_destroy(sislab_config* cfg)
{
    delete cfg;
}

sislab_status sislab_config_set(sislab_config* cfg, const char* key, const char* value)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(key, "key");
        need(value, "value");
        sislab::set_key(cfg->cfg, key, value);
    });
}

sislab_status sislab_config_override(sislab_config* cfg, const char* assignment)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(assignment, "assignment");
        sislab::apply_override(cfg->cfg, assignment);
    });
}

sislab_status sislab_config_get(const sislab_config* cfg, const char* key, char** value)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(key, "key");
        need(value, "value");
        *value = dup_string(sislab::get_key(cfg->cfg, key));
    });
}

sislab_status sislab_config_format(const sislab_config* cfg, char** text)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(text, "text");
        *text = dup_string(sislab::format_config(cfg->cfg));
    });
}

sislab_status sislab_config_validate(const sislab_config* cfg)
{
    return guarded([&] {
        need(cfg, "cfg");
        sislab::check_complete(cfg->cfg);
        (void)sislab::build_scenario(cfg->cfg);
    });
}

sislab_status sislab_eigen_report(const sislab_config* cfg, char** json, int* pass)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(json, "json");
        need(pass, "pass");
        const auto sc = sislab::build_scenario(cfg->cfg);
        const double d = eigen_rate(sc.spec);
        sislab::Field h(sc.spec.beta.grid_ptr(), sc.spec.beta.vector());
        for (std::size_t i = 0; i < h.size(); ++i) {
            h[i] = sc.spec.beta[i] - sc.spec.gamma[i];
        }
        const auto eig  = sislab::principal_eigenvalue(d, h);
        const double r0 = sislab::basic_reproduction_number(d, sc.spec.beta, sc.spec.gamma);
        const auto phi  = sislab::normalize_max_one(eig.phi);

        // sigma(d, beta - gamma) and R0 - 1 carry the same sign.
        const bool sign_ok = (eig.sigma > 0.0) == (r0 > 1.0) || std::abs(eig.sigma) < 1e-10;
        const bool res_ok  = eig.residual <= 1e-8;
        *pass              = sign_ok && res_ok ? 1 : 0;

        nlohmann::ordered_json j;
        j["d"]                   = d;
        j["sigma"]               = eig.sigma;
        j["residual"]            = eig.residual;
        j["iterations"]          = eig.iterations;
        j["R0"]                  = r0;
        j["h_max"]               = sislab::sigma_small_d_limit(h);
        j["h_mean"]              = sislab::sigma_large_d_limit(h);
        j["sign_consistent"]     = sign_ok;
        j["x"]                   = h.grid().nodes;
        j["phi"]                 = phi.vector();
        *json                    = dup_string(j.dump(2));
    });
}

sislab_status sislab_threshold_report(const sislab_config* cfg, char** json, int* pass)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(json, "json");
        need(pass, "pass");
        const auto sc  = sislab::build_scenario(cfg->cfg);
        const auto r   = sislab::ratio_r(sc.spec);
        const auto res = sislab::critical_population(sc.S0, r, sc.spec.beta, eigen_rate(sc.spec));
        const double slack = 1e-9 * std::max(1.0, res.upper_bound);
        const bool bracket = res.n_star >= res.lower_bound - slack && res.n_star <= res.upper_bound + slack;
        *pass              = bracket && res.converged ? 1 : 0;

        nlohmann::ordered_json j;
        j["N_star"]       = res.n_star;
        j["lower_bound"]  = res.lower_bound;
        j["upper_bound"]  = res.upper_bound;
        j["N"]            = sislab::integrate(sc.S0) + sislab::integrate(sc.I0);
        j["sigma_at_opt"] = res.sigma_at_opt;
        j["kkt_residual"] = res.kkt_residual;
        j["converged"]    = res.converged;
        j["iterations"]   = res.iterations;
        j["bracket_ok"]   = bracket;
        j["x"]            = r.grid().nodes;
        j["lambda_star"]  = res.lambda_star.vector();
        *json             = dup_string(j.dump(2));
    });
}

sislab_status sislab_simulate(const sislab_config* cfg, sislab_trajectory** out)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        const auto sc = sislab::build_scenario(cfg->cfg);
        *out          = new sislab_trajectory{sislab::run(sc.spec, sc.S0, sc.I0, sc.options)};
    });
}

sislab_status sislab_trajectory_load(const sislab_config* cfg, const char* dir, sislab_trajectory** out)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(dir, "dir");
        need(out, "out");
        const auto sc = sislab::build_scenario(cfg->cfg);
        *out          = new sislab_trajectory{sislab::load_trajectory(dir, sc.spec)};
    });
}

void sislab_trajectory_destroy(sislab_trajectory* traj)
{
    delete traj;
}

size_t sislab_trajectory_snapshot_count(const sislab_trajectory* traj)
{
    return traj == nullptr ? 0 : traj->traj.snapshots.size();
}

sislab_status sislab_trajectory_snapshot(const sislab_trajectory* traj, size_t index, double* t, double* S, double* I,
                                         size_t n)
{
    return guarded([&] {
        need(traj, "traj");
        sislab::require(index < traj->traj.snapshots.size(), "snapshot index out of range");
        const auto& st = traj->traj.snapshots[index];
        if (t != nullptr) {
            *t = st.t;
        }
        if (S != nullptr) {
            copy_out(st.S.values(), S, n, "S");
        }
        if (I != nullptr) {
            copy_out(st.I.values(), I, n, "I");
        }
    });
}

sislab_status sislab_trajectory_summary(const sislab_trajectory* traj, char** json, int* clipping_flagged)
{
    return guarded([&] {
        need(traj, "traj");
        need(json, "json");
        const auto& tr = traj->traj;
        sislab::require(!tr.snapshots.empty(), "trajectory has no snapshots");
        const auto& last = tr.snapshots.back();
        double mass_dev  = 0.0;
        for (const auto& st : tr.snapshots) {
            mass_dev = std::max(mass_dev, std::abs(sislab::integrate(st.S) + sislab::integrate(st.I) - tr.N));
        }
        nlohmann::ordered_json j;
        j["model"]                = std::string(sislab::variant_name(tr.spec.variant));
        j["N"]                    = tr.N;
        j["dt"]                   = tr.dt;
        j["t_final"]              = last.t;
        j["snapshots"]            = tr.snapshots.size();
        j["steady_reached"]       = tr.steady_reached;
        j["I_mass_final"]         = sislab::integrate(last.I);
        j["sup_I_final"]          = sislab::max_value(last.I);
        j["max_mass_deviation"]   = mass_dev;
        j["max_clipped_fraction"] = tr.max_clipped_fraction;
        j["clipping_flagged"]     = tr.clipping_flagged;
        *json                     = dup_string(j.dump(2));
        if (clipping_flagged != nullptr) {
            *clipping_flagged = tr.clipping_flagged ? 1 : 0;
        }
    });
}

sislab_status sislab_trajectory_write_csv(const sislab_trajectory* traj, const char* dir)
{
    return guarded([&] {
        need(traj, "traj");
        need(dir, "dir");
        sislab::emit_csv(traj->traj, dir);
    });
}

sislab_status sislab_trajectory_write_svg(const sislab_trajectory* traj, const char* path, const char* kind)
{
    return guarded([&] {
        need(traj, "traj");
        need(path, "path");
        need(kind, "kind");
        const auto k = sislab::parse_svg_kind(kind);
        sislab::require(k != sislab::SvgKind::SweepCurve, "sweep_curve is drawn from a sweep, not a trajectory");
        sislab::emit_svg(traj->traj, path, k);
    });
}

sislab_status sislab_classify(const sislab_config* cfg, const sislab_trajectory* traj, char** json, int* pass)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(traj, "traj");
        need(json, "json");
        need(pass, "pass");
        const auto sc   = sislab::build_scenario(cfg->cfg);
        const auto pred = sislab::predict_regime(sc.spec, sc.S0, sc.I0);
        const auto rep  = sislab::verify_outcome(traj->traj, pred, cfg->cfg.verify_tol);
        *pass           = rep.has_verdict ? (rep.pass ? 1 : 0) : -1;
        *json           = dup_string(sislab::report_json(rep));
    });
}

sislab_status sislab_sweep_run(const sislab_config* cfg, int jobs, sislab_sweep** out)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        *out = new sislab_sweep{sislab::run_sweep(cfg->cfg, jobs)};
    });
}

void sislab_sweep_destroy(sislab_sweep* sweep)
{
    delete sweep;
}

size_t sislab_sweep_size(const sislab_sweep* sweep)
{
    return sweep == nullptr ? 0 : sweep->result.rows.size();
}

sislab_status sislab_sweep_row(const sislab_sweep* sweep, size_t index, double* param, double* N, double* value,
                               int* ok)
{
    return guarded([&] {
        need(sweep, "sweep");
        sislab::require(index < sweep->result.rows.size(), "sweep row index out of range");
        const auto& row = sweep->result.rows[index];
        if (param != nullptr) {
            *param = row.param;
        }
        if (N != nullptr) {
            *N = row.N;
        }
        if (value != nullptr) {
            *value = row.ok ? row.value : std::numeric_limits<double>::quiet_NaN();
        }
        if (ok != nullptr) {
            *ok = row.ok ? 1 : 0;
        }
    });
}

sislab_status sislab_sweep_knee(const sislab_sweep* sweep, int* found, double* param, double* N)
{
    return guarded([&] {
        need(sweep, "sweep");
        need(found, "found");
        const auto& res = sweep->result;
        *found          = res.knee_index ? 1 : 0;
        if (res.knee_index) {
            if (param != nullptr) {
                *param = res.rows[*res.knee_index].param;
            }
            if (N != nullptr) {
                *N = res.rows[*res.knee_index].N;
            }
        }
    });
}

sislab_status sislab_sweep_json(const sislab_sweep* sweep, char** json)
{
    return guarded([&] {
        need(sweep, "sweep");
        need(json, "json");
        const auto& res = sweep->result;
        nlohmann::ordered_json j;
        j["parameter"]  = res.parameter;
        j["observable"] = res.observable;
        auto rows       = nlohmann::ordered_json::array();
        int failed      = 0;
        for (const auto& row : res.rows) {
            nlohmann::ordered_json r;
            r["param"] = row.param;
            r["N"]     = row.N;
            if (row.ok) {
                r["value"] = row.value;
            }
            else {
                r["value"] = nullptr;
                r["error"] = row.error;
                ++failed;
            }
            rows.push_back(r);
        }
        j["rows"]   = rows;
        j["failed"] = failed;
        if (res.knee_index) {
            j["knee"] = {{"param", res.rows[*res.knee_index].param}, {"N", res.rows[*res.knee_index].N}};
        }
        else {
            j["knee"] = nullptr;
        }
        *json = dup_string(j.dump(2));
    });
}

sislab_status sislab_sweep_write_csv(const sislab_sweep* sweep, const char* path)
{
    return guarded([&] {
        need(sweep, "sweep");
        need(path, "path");
        sislab::emit_sweep_csv(sweep->result, path);
    });
}

sislab_status sislab_sweep_write_svg(const sislab_sweep* sweep, const char* path)
{
    return guarded([&] {
        need(sweep, "sweep");
        need(path, "path");
        sislab::emit_sweep_svg(sweep->result, path);
    });
}

} // extern "C"
