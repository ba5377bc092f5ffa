/* Copyright 2026 The anw Authors
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

/* C interface to libanw. Every function returns an anw_status; on failure
 * anw_last_error() describes the problem for the calling thread. Handles are
 * opaque and released with the matching *_free function. Strings returned by
 * the library stay valid until the owning handle is freed. */

#ifndef ANW_ANW_H_
#define ANW_ANW_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ANW_API __declspec(dllexport)
#elif defined(ANW_BUILDING_LIBRARY)
#define ANW_API __attribute__((visibility("default")))
#else
#define ANW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum anw_status {
  ANW_OK = 0,
  ANW_ERR_INVALID_ARGUMENT = 1,
  ANW_ERR_DIMENSION = 2,
  ANW_ERR_NOT_SYMPLECTIC = 3,
  ANW_ERR_NOT_SYMMETRIC = 4,
  ANW_ERR_CONFIG = 5,
  ANW_ERR_INTERNAL = 6,
  ANW_ERR_NULL_POINTER = 7
} anw_status;

typedef enum anw_certification {
  ANW_CERT_NOT_APPLICABLE = -1,
  ANW_CERT_FAILED = 0,
  ANW_CERT_PASSED = 1
} anw_certification;

typedef struct anw_run_options {
  uint64_t seed;
  int has_seed;      /* nonzero: seed overrides the scenario's optimizer.seed */
  int threads;       /* worker threads, >= 1 */
  int deterministic; /* nonzero: serial evaluation */
} anw_run_options;

typedef struct anw_result anw_result;
typedef struct anw_state anw_state;

ANW_API const char* anw_version(void);

/* Message of the last failure on this thread; empty if none. */
ANW_API const char* anw_last_error(void);

ANW_API const char* anw_status_string(anw_status status);

ANW_API void anw_run_options_init(anw_run_options* options);

/* Names of the scenario commands, NULL-terminated. */
ANW_API const char* const* anw_commands(void);

/* Runs a scenario command on a JSON document. options may be NULL. */
ANW_API anw_status anw_run(const char* command, const char* scenario_json,
                           const anw_run_options* options, anw_result** out);

/* ResultRecord as JSON text (indent < 0 gives compact output). */
ANW_API anw_status anw_result_json(anw_result* result, int indent, const char** out);
ANW_API anw_status anw_result_csv(const anw_result* result, const char** out);
ANW_API anw_status anw_result_certification(const anw_result* result,
                                            anw_certification* out);
ANW_API void anw_result_free(anw_result* result);

/* Gaussian state after propagating z mm through a homogeneous or profiled array.
 * coupling_profile has n - 1 entries or is NULL for a homogeneous array; phases
 * are in radians. */
ANW_API anw_status anw_state_propagate(size_t n, double coupling_strength,
                                       const double* coupling_profile,
                                       const double* amplitudes, const double* phases,
                                       double z, anw_state** out);
ANW_API anw_status anw_state_modes(const anw_state* state, size_t* out);

/* Row-major 2n x 2n copies; capacity counts doubles. */
ANW_API anw_status anw_state_covariance(const anw_state* state, double* out, size_t capacity);
ANW_API anw_status anw_state_propagator(const anw_state* state, double* out, size_t capacity);

/* Normalized nullifier variances of a preset graph ("linear", "pentagon",
 * "star", "pyramid", "ghz") at LO phases theta (radians, n entries). */
ANW_API anw_status anw_state_nullifiers(const anw_state* state, const char* preset,
                                        const double* theta, double* out, size_t capacity);

/* rho_1 .. rho_{n-1} at LO phases theta and gains (n entries each; gains may be NULL). */
ANW_API anw_status anw_state_vlf(const anw_state* state, const double* theta,
                                 const double* gains, double* out, size_t capacity);
ANW_API void anw_state_free(anw_state* state);

#ifdef __cplusplus
}
#endif

#endif /* ANW_ANW_H_ */
