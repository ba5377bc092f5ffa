// Copyright 2026 The anw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "anw/anw.h"

#include "anw/scenario.hpp"

#include <algorithm>
#include <memory>
#include <new>
#include <string>
#include <vector>

struct anw_result {
  anw::RunOutput output;
  std::string json_text;
  std::string csv_text;
};

struct anw_state {
  anw::GaussianState state;
};

namespace {

thread_local std::string last_error;

anw_status status_of(anw::ErrorCode code) {
  switch (code) {
    case anw::ErrorCode::invalid_argument: return ANW_ERR_INVALID_ARGUMENT;
    case anw::ErrorCode::dimension_mismatch: return ANW_ERR_DIMENSION;
    case anw::ErrorCode::not_symplectic: return ANW_ERR_NOT_SYMPLECTIC;
    case anw::ErrorCode::not_symmetric: return ANW_ERR_NOT_SYMMETRIC;
    case anw::ErrorCode::config: return ANW_ERR_CONFIG;
    case anw::ErrorCode::internal: return ANW_ERR_INTERNAL;
  }
  return ANW_ERR_INTERNAL;
}

anw_status fail(anw_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <typename F>
anw_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const anw::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ANW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ANW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ANW_ERR_INTERNAL, "unknown error");
  }
}

anw_status copy_matrix(const anw::RealMatrix& m, double* out, size_t capacity) {
  if (!out) return fail(ANW_ERR_NULL_POINTER, "output buffer is NULL");
  const auto need = static_cast<size_t>(m.size());
  if (capacity < need)
    return fail(ANW_ERR_DIMENSION, "output buffer holds " + std::to_string(capacity) +
                                       " doubles, need " + std::to_string(need));
  for (anw::Index i = 0; i < m.rows(); ++i)
    for (anw::Index k = 0; k < m.cols(); ++k)
      out[static_cast<size_t>(i * m.cols() + k)] = m(i, k);
  return ANW_OK;
}

anw_status copy_vector(const std::vector<double>& v, double* out, size_t capacity) {
  if (!out) return fail(ANW_ERR_NULL_POINTER, "output buffer is NULL");
  if (capacity < v.size())
    return fail(ANW_ERR_DIMENSION, "output buffer holds " + std::to_string(capacity) +
                                       " doubles, need " + std::to_string(v.size()));
  std::copy(v.begin(), v.end(), out);
  return ANW_OK;
}

}  // namespace

extern "C" {

const char* anw_version(void) { return anw::kVersion; }

const char* anw_last_error(void) { return last_error.c_str(); }

const char* anw_status_string(anw_status status) {
  switch (status) {
    case ANW_OK: return "ok";
    case ANW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ANW_ERR_DIMENSION: return "dimension mismatch";
    case ANW_ERR_NOT_SYMPLECTIC: return "not symplectic";
    case ANW_ERR_NOT_SYMMETRIC: return "not symmetric";
    case ANW_ERR_CONFIG: return "configuration error";
    case ANW_ERR_INTERNAL: return "internal error";
    case ANW_ERR_NULL_POINTER: return "null pointer";
  }
  return "unknown status";
}

void anw_run_options_init(anw_run_options* options) {
  if (!options) return;
  options->seed = 0;
  options->has_seed = 0;
  options->threads = 1;
  options->deterministic = 0;
}

const char* const* anw_commands(void) {
  static const std::vector<const char*> names = [] {
    std::vector<const char*> v;
    for (const auto& c : anw::scenario_commands()) v.push_back(c.c_str());
    v.push_back(nullptr);
    return v;
  }();
  return names.data();
}

anw_status anw_run(const char* command, const char* scenario_json,
                   const anw_run_options* options, anw_result** out) {
  if (!command || !scenario_json || !out) return fail(ANW_ERR_NULL_POINTER, "NULL argument to anw_run");
  *out = nullptr;
  return guarded([&] {
    anw::RunOptions opt;
    if (options) {
      if (options->has_seed) opt.seed = options->seed;
      if (options->threads < 1) return fail(ANW_ERR_INVALID_ARGUMENT, "threads must be >= 1");
      opt.threads = options->threads;
      opt.deterministic = options->deterministic != 0;
    }
    const nlohmann::json sc = anw::load_scenario(scenario_json);
    auto res = std::make_unique<anw_result>();
    res->output = anw::run_scenario(command, sc, opt);
    res->csv_text = res->output.csv;
    *out = res.release();
    return ANW_OK;
  });
}

anw_status anw_result_json(anw_result* result, int indent, const char** out) {
  if (!result || !out) return fail(ANW_ERR_NULL_POINTER, "NULL argument to anw_result_json");
  return guarded([&] {
    result->json_text = result->output.record.dump(indent < 0 ? -1 : indent);
    *out = result->json_text.c_str();
    return ANW_OK;
  });
}

anw_status anw_result_csv(const anw_result* result, const char** out) {
  if (!result || !out) return fail(ANW_ERR_NULL_POINTER, "NULL argument to anw_result_csv");
  *out = result->csv_text.c_str();
  return ANW_OK;
}

anw_status anw_result_certification(const anw_result* result, anw_certification* out) {
  if (!result || !out)
    return fail(ANW_ERR_NULL_POINTER, "NULL argument to anw_result_certification");
  *out = static_cast<anw_certification>(result->output.certified);
  return ANW_OK;
}

void anw_result_free(anw_result* result) { delete result; }

anw_status anw_state_propagate(size_t n, double coupling_strength,
                               const double* coupling_profile, const double* amplitudes,
                               const double* phases, double z, anw_state** out) {
  if (!amplitudes || !phases || !out)
    return fail(ANW_ERR_NULL_POINTER, "NULL argument to anw_state_propagate");
  *out = nullptr;
  return guarded([&] {
    if (n == 0) return fail(ANW_ERR_INVALID_ARGUMENT, "need at least one waveguide");
    anw::ArrayConfig cfg =
        anw::ArrayConfig::homogeneous(static_cast<anw::Index>(n), coupling_strength, z > 0.0 ? z : 1.0);
    if (coupling_profile) cfg.coupling_profile.assign(coupling_profile, coupling_profile + n - 1);
    anw::PumpProfile pump;
    pump.amplitudes.assign(amplitudes, amplitudes + n);
    pump.phases.assign(phases, phases + n);
    auto st = std::make_unique<anw_state>();
    st->state = anw::propagator_exact(cfg, pump, z);
    *out = st.release();
    return ANW_OK;
  });
}

anw_status anw_state_modes(const anw_state* state, size_t* out) {
  if (!state || !out) return fail(ANW_ERR_NULL_POINTER, "NULL argument to anw_state_modes");
  *out = static_cast<size_t>(state->state.modes());
  return ANW_OK;
}

anw_status anw_state_covariance(const anw_state* state, double* out, size_t capacity) {
  if (!state) return fail(ANW_ERR_NULL_POINTER, "NULL state");
  return copy_matrix(state->state.covariance, out, capacity);
}

anw_status anw_state_propagator(const anw_state* state, double* out, size_t capacity) {
  if (!state) return fail(ANW_ERR_NULL_POINTER, "NULL state");
  return copy_matrix(state->state.propagator.matrix(), out, capacity);
}

anw_status anw_state_nullifiers(const anw_state* state, const char* preset,
                                const double* theta, double* out, size_t capacity) {
  if (!state || !preset || !theta)
    return fail(ANW_ERR_NULL_POINTER, "NULL argument to anw_state_nullifiers");
  return guarded([&] {
    const auto n = static_cast<size_t>(state->state.modes());
    const std::string name(preset);
    const anw::GraphSpec g = name == "linear" ? anw::GraphSpec::linear(state->state.modes())
                                              : anw::GraphSpec::from_preset(name);
    const std::vector<double> th(theta, theta + n);
    return copy_vector(anw::nullifier_variances(state->state.covariance, g, th), out, capacity);
  });
}

anw_status anw_state_vlf(const anw_state* state, const double* theta, const double* gains,
                         double* out, size_t capacity) {
  if (!state || !theta) return fail(ANW_ERR_NULL_POINTER, "NULL argument to anw_state_vlf");
  return guarded([&] {
    const auto n = static_cast<size_t>(state->state.modes());
    const std::vector<double> th(theta, theta + n);
    std::vector<double> g;
    if (gains) g.assign(gains, gains + n);
    return copy_vector(anw::vlf_all(state->state.covariance, th, g), out, capacity);
  });
}

void anw_state_free(anw_state* state) { delete state; }

}  // extern "C"
