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
#ifndef SISLAB_H
#define SISLAB_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(SISLAB_BUILDING)
#define SISLAB_API __declspec(dllexport)
#else
#define SISLAB_API __declspec(dllimport)
#endif
#else
#define SISLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*
 * Every call returns a status. On failure the message is kept per thread and
 * can be read with sislab_last_error() until the next failing call on that thread.
 * Strings handed out by the library are released with sislab_free_string().
 * Handles are released with their *_destroy function; destroy accepts NULL.
 */
typedef enum sislab_status {
    SISLAB_OK                    = 0,
    SISLAB_ERR_INVALID_ARGUMENT  = 1,
    SISLAB_ERR_PARSE             = 2,
    SISLAB_ERR_DOMAIN            = 3,
    SISLAB_ERR_NO_CONVERGENCE    = 4,
    SISLAB_ERR_IO                = 5,
    SISLAB_ERR_STEP_REJECTED     = 6,
    SISLAB_ERR_INTERNAL          = 7,
} sislab_status;

typedef struct sislab_grid sislab_grid;
typedef struct sislab_field sislab_field;
typedef struct sislab_config sislab_config;
typedef struct sislab_trajectory sislab_trajectory;
typedef struct sislab_sweep sislab_sweep;

SISLAB_API const char* sislab_version(void);
SISLAB_API const char* sislab_last_error(void);
SISLAB_API const char* sislab_status_name(sislab_status status);
SISLAB_API void sislab_free_string(char* s);

/* ---- grids and fields ---- */

SISLAB_API sislab_status sislab_grid_create(double a, double b, int nx, sislab_grid** out);
SISLAB_API void sislab_grid_destroy(sislab_grid* grid);
SISLAB_API size_t sislab_grid_size(const sislab_grid* grid);
/* Copies the node coordinates; n must equal the grid size. */
SISLAB_API sislab_status sislab_grid_nodes(const sislab_grid* grid, double* out, size_t n);

SISLAB_API sislab_status sislab_field_from_expression(const sislab_grid* grid, const char* expr, sislab_field** out);
SISLAB_API sislab_status sislab_field_from_values(const sislab_grid* grid, const double* values, size_t n,
                                                  sislab_field** out);
SISLAB_API void sislab_field_destroy(sislab_field* field);
SISLAB_API size_t sislab_field_size(const sislab_field* field);
SISLAB_API sislab_status sislab_field_values(const sislab_field* field, double* out, size_t n);
SISLAB_API sislab_status sislab_field_integral(const sislab_field* field, double* out);

/* ---- spectral and threshold ---- */

/* Principal eigenpair of d L + h under Neumann conditions; phi (max 1) may be NULL. */
SISLAB_API sislab_status sislab_principal_eigenvalue(double d, const sislab_field* h, double tol, double* sigma,
                                                     double* residual, sislab_field** phi);
SISLAB_API sislab_status sislab_reproduction_number(double d_I, const sislab_field* beta, const sislab_field* gamma,
                                                    double* r0);

typedef struct sislab_threshold_result {
    double n_star;
    double lower_bound;
    double upper_bound;
    double sigma_at_opt;
    double kkt_residual;
    int converged;
    int iterations;
} sislab_threshold_result;

/* cells = 0 optimises nodewise; lambda_star may be NULL. */
SISLAB_API sislab_status sislab_critical_population(const sislab_field* S0, const sislab_field* r,
                                                    const sislab_field* beta, double d_I, int cells,
                                                    sislab_threshold_result* out, sislab_field** lambda_star);

/* ---- configuration ---- */

/* Empty config; fill it with sislab_config_set and check it with sislab_config_validate. */
SISLAB_API sislab_status sislab_config_create(sislab_config** out);
SISLAB_API sislab_status sislab_config_preset(const char* name, sislab_config** out);
SISLAB_API sislab_status sislab_config_load(const char* path, sislab_config** out);
SISLAB_API sislab_status sislab_config_parse(const char* text, sislab_config** out);
SISLAB_API void sislab_config_destroy(sislab_config* cfg);
SISLAB_API sislab_status sislab_config_set(sislab_config* cfg, const char* key, const char* value);
/* "key=value", as passed on the command line. */
SISLAB_API sislab_status sislab_config_override(sislab_config* cfg, const char* assignment);
SISLAB_API sislab_status sislab_config_get(const sislab_config* cfg, const char* key, char** value);
SISLAB_API sislab_status sislab_config_format(const sislab_config* cfg, char** text);
/* Fails listing the missing keys when the config cannot describe a run. */
SISLAB_API sislab_status sislab_config_validate(const sislab_config* cfg);

/* JSON summaries used by the eigen and threshold subcommands. pass is 1 when
 * every reported check holds (solver residual, bracket), else 0. */
SISLAB_API sislab_status sislab_eigen_report(const sislab_config* cfg, char** json, int* pass);
SISLAB_API sislab_status sislab_threshold_report(const sislab_config* cfg, char** json, int* pass);

/* ---- trajectories ---- */

SISLAB_API sislab_status sislab_simulate(const sislab_config* cfg, sislab_trajectory** out);
/* Rebuilds a trajectory from profiles.csv in dir, using cfg for the model. */
SISLAB_API sislab_status sislab_trajectory_load(const sislab_config* cfg, const char* dir, sislab_trajectory** out);
SISLAB_API void sislab_trajectory_destroy(sislab_trajectory* traj);
SISLAB_API size_t sislab_trajectory_snapshot_count(const sislab_trajectory* traj);
SISLAB_API sislab_status sislab_trajectory_snapshot(const sislab_trajectory* traj, size_t index, double* t, double* S,
                                                    double* I, size_t n);
/* JSON with N, steady flag, final time and clipping. */
SISLAB_API sislab_status sislab_trajectory_summary(const sislab_trajectory* traj, char** json, int* clipping_flagged);
SISLAB_API sislab_status sislab_trajectory_write_csv(const sislab_trajectory* traj, const char* dir);
/* kind: final_profiles, mass_series or lyapunov_series. */
SISLAB_API sislab_status sislab_trajectory_write_svg(const sislab_trajectory* traj, const char* path,
                                                     const char* kind);

/* Predicts the regime from cfg and checks traj against it. pass is 1 on a
 * verified prediction, 0 on a failed one, -1 when the regime has no verdict. */
SISLAB_API sislab_status sislab_classify(const sislab_config* cfg, const sislab_trajectory* traj, char** json,
                                         int* pass);

/* ---- sweeps ---- */

SISLAB_API sislab_status sislab_sweep_run(const sislab_config* cfg, int jobs, sislab_sweep** out);
SISLAB_API void sislab_sweep_destroy(sislab_sweep* sweep);
SISLAB_API size_t sislab_sweep_size(const sislab_sweep* sweep);
/* ok is 0 for a failed point, whose value is NaN. */
SISLAB_API sislab_status sislab_sweep_row(const sislab_sweep* sweep, size_t index, double* param, double* N,
                                          double* value, int* ok);
/* found is 0 when no knee was detected. */
SISLAB_API sislab_status sislab_sweep_knee(const sislab_sweep* sweep, int* found, double* param, double* N);
SISLAB_API sislab_status sislab_sweep_json(const sislab_sweep* sweep, char** json);
SISLAB_API sislab_status sislab_sweep_write_csv(const sislab_sweep* sweep, const char* path);
SISLAB_API sislab_status sislab_sweep_write_svg(const sislab_sweep* sweep, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* SISLAB_H */
