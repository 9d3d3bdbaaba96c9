/* C interface to the traffic simulator. All entry points return a
 * nasch_status; on any non-OK status nasch_last_error() describes the
 * failure for the calling thread. Handles are opaque and owned by the
 * caller until passed to the matching _free. */

#ifndef NASCH_H
#define NASCH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nasch_status {
  NASCH_OK = 0,
  NASCH_ERR_INVALID = 1, /* bad argument or parameter combination */
  NASCH_ERR_PARSE = 2,   /* malformed parameter text */
  NASCH_ERR_IO = 3       /* file could not be read or written */
} nasch_status;

typedef enum nasch_output_mode {
  NASCH_OUTPUT_NONE = 0,
  NASCH_OUTPUT_ASCII = 1,
  NASCH_OUTPUT_PGM = 2
} nasch_output_mode;

typedef enum nasch_engine_kind {
  NASCH_ENGINE_AGENT = 0,         /* parallel car-array engine */
  NASCH_ENGINE_GRID_REFERENCE = 1 /* serial cell-array engine */
} nasch_engine_kind;

typedef struct nasch_params nasch_params;
typedef struct nasch_sim nasch_sim;

/* Message for the most recent failing call on this thread; empty string
 * when no failure has occurred. The pointer stays valid until the next
 * failing call on the same thread. */
const char* nasch_last_error(void);

/* ---- parameter sets -------------------------------------------------- */

/* Fresh parameter set with the defaults vmax=5, p=0.13, output=none,
 * stride=1; length, ncars, steps and seed start at 0 and must be set
 * before use (ncars >= 1, length >= ncars). */
nasch_status nasch_params_new(nasch_params** out);

/* Parameter set from `key = value` text (keys: length, ncars, vmax, p,
 * steps, seed, output, stride, threads). threads is execution-only and
 * reported through out_threads; pass NULL to ignore it. */
nasch_status nasch_params_parse(const char* text, nasch_params** out,
                                unsigned* out_threads);
nasch_status nasch_params_load(const char* path, nasch_params** out,
                               unsigned* out_threads);
void nasch_params_free(nasch_params* params);

nasch_status nasch_params_set_length(nasch_params* params, uint64_t length);
nasch_status nasch_params_set_ncars(nasch_params* params, uint64_t ncars);
nasch_status nasch_params_set_vmax(nasch_params* params, uint64_t vmax);
nasch_status nasch_params_set_p(nasch_params* params, double p);
nasch_status nasch_params_set_steps(nasch_params* params, uint64_t steps);
nasch_status nasch_params_set_seed(nasch_params* params, uint64_t seed);
nasch_status nasch_params_set_output(nasch_params* params,
                                     nasch_output_mode mode);
nasch_status nasch_params_set_stride(nasch_params* params, uint64_t stride);

uint64_t nasch_params_length(const nasch_params* params);
uint64_t nasch_params_ncars(const nasch_params* params);
uint64_t nasch_params_vmax(const nasch_params* params);
double nasch_params_p(const nasch_params* params);
uint64_t nasch_params_steps(const nasch_params* params);
uint64_t nasch_params_seed(const nasch_params* params);
nasch_output_mode nasch_params_output(const nasch_params* params);
uint64_t nasch_params_stride(const nasch_params* params);

/* NASCH_OK when the set satisfies every model invariant. */
nasch_status nasch_params_validate(const nasch_params* params);

/* ---- simulations ----------------------------------------------------- */

/* New simulation at step 0. The parameter set is copied; workers is the
 * worker count and must be >= 1. Identical parameters give identical
 * trajectories for every workers value. */
nasch_status nasch_sim_new(const nasch_params* params, unsigned workers,
                           nasch_sim** out);

/* Engine selection; the grid reference engine requires workers == 1. */
nasch_status nasch_sim_new_kind(const nasch_params* params, unsigned workers,
                                nasch_engine_kind kind, nasch_sim** out);
void nasch_sim_free(nasch_sim* sim);

/* Advances up to `steps` steps, stopping at the configured total. */
nasch_status nasch_sim_advance(nasch_sim* sim, uint64_t steps);

/* Advances to the configured total step count. */
nasch_status nasch_sim_run(nasch_sim* sim);

uint64_t nasch_sim_steps_done(const nasch_sim* sim);

/* Trajectory checksum over all completed steps. */
uint64_t nasch_sim_checksum(const nasch_sim* sim);

/* Random draws consumed so far (= steps_done * ncars). */
uint64_t nasch_sim_draws(const nasch_sim* sim);

uint64_t nasch_sim_frame_count(const nasch_sim* sim);

/* Density (cars per cell), mean velocity and flow (density * mean
 * velocity) of the current state. Any out pointer may be NULL. */
nasch_status nasch_sim_observables(const nasch_sim* sim, double* out_density,
                                   double* out_mean_velocity,
                                   double* out_flow);

/* Copies the current state into caller arrays of length ncars, ordered
 * by increasing position. Either pointer may be NULL to skip it. */
nasch_status nasch_sim_state(const nasch_sim* sim, uint64_t* positions,
                             uint64_t* velocities, size_t capacity);

/* Writes recorded frames; requires the matching output mode. */
nasch_status nasch_sim_write_ascii(const nasch_sim* sim, const char* path);
nasch_status nasch_sim_write_pgm(const nasch_sim* sim, const char* path);

/* ---- utilities ------------------------------------------------------- */

/* Physical core count of this machine, 0 when unknown. */
unsigned nasch_physical_cores(void);

#ifdef __cplusplus
}
#endif

#endif /* NASCH_H */
