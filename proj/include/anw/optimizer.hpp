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

#pragma once

// (mu/mu, lambda) evolution strategy with self-adaptive per-coordinate step
// sizes, and the three fitness functions it is used with:
//
//   F_M  sum of the van Loock-Furusawa rho_i
//   F_C  sum of the normalized nullifier variances in the waveguide basis
//   F_P  Frobenius distance between S_LO and its homodyne emulation

#include "anw/entanglement.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace anw {

enum class ParameterKind {
  real,       // clipped to [lower, upper]
  angle,      // unbounded while searching, wrapped to (-pi, pi] on decode
  amplitude,  // clipped to [lower, upper]
  gain,       // clipped to [lower, upper]
};

struct Parameter {
  std::string name;
  ParameterKind kind = ParameterKind::real;
  double lower = -1.0;
  double upper = 1.0;
  double scale = 1.0;  // initial step is sigma0 * scale
  double initial = 0.0;
};

struct OptimizationProblem {
  std::string name;
  std::vector<Parameter> parameters;
  /// Receives decoded parameters. Must be pure and safe to call concurrently.
  std::function<double(std::span<const double>)> fitness;

  Index dimension() const { return static_cast<Index>(parameters.size()); }
  void validate() const;

  /// Wraps angles and clips bounded coordinates.
  std::vector<double> decode(std::span<const double> x) const;
};

struct EsConfig {
  int parents = 5;       // mu
  int population = 40;   // lambda
  double sigma0 = 0.3;
  int max_generations = 500;
  double target = -std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  int threads = 1;
  /// Draw the starting mean uniformly inside each parameter's range instead of
  /// using Parameter::initial.
  bool random_start = false;
  /// Independent runs, each with its own generation budget and a seed derived
  /// from `seed`; the best run wins.
  int restarts = 1;

  void validate() const;
};

struct OptimizationResult {
  std::vector<double> best;  // decoded
  double best_fitness = std::numeric_limits<double>::infinity();
  std::vector<double> trace;  // best-so-far after each generation, across runs
  long evaluations = 0;
  int generations = 0;       // summed over runs
  int best_run = 0;
  int best_run_generations = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  bool parallel = false;
  bool reached_target = false;
};

/// Runs the strategy. The starting mean is evaluated first, so a run with zero
/// generations reports the fitness of the starting point. Identical seeds give
/// identical results, whatever the thread count.
/// Throws Error{invalid_argument} for an invalid problem or config.
OptimizationResult evolve(const OptimizationProblem& problem, const EsConfig& config);

/// Seed used by restart `run`; run 0 uses the base seed.
std::uint64_t restart_seed(std::uint64_t seed, int run);

constexpr double kDefaultEtaMax = 0.1;  // 1/mm
constexpr double kGainBound = 10.0;

// ---------------------------------------------------------------------------
// F_M

/// Sum of rho_i over i = 1 .. N-1.
double fitness_fm(const RealMatrix& covariance, std::span<const double> theta,
                  std::span<const double> gains);

struct FmParameters {
  std::vector<double> theta;
  std::vector<double> gains;
  std::vector<double> phases;  // relative pump phases of waveguides 2..N; empty if fixed
};

/// Parameters: theta (N), gains (N), then N-1 relative pump phases when
/// optimize_phases is set.
OptimizationProblem fm_problem(const ArrayConfig& cfg, const PumpProfile& pump, double z,
                               bool optimize_phases);
FmParameters decode_fm(std::span<const double> x, Index n, bool optimize_phases);

/// The pump with waveguide j > 1 shifted by phases[j - 2].
PumpProfile apply_relative_phases(const PumpProfile& pump, std::span<const double> phases);

// ---------------------------------------------------------------------------
// F_C

double fitness_fc(const ArrayConfig& cfg, double z, const GraphSpec& graph,
                  const PumpProfile& pump, std::span<const double> theta);

struct FcParameters {
  PumpProfile pump;
  std::vector<double> theta;
};

/// Parameters: |eta| (N), phi (N), theta (N).
OptimizationProblem fc_problem(const ArrayConfig& cfg, double z, const GraphSpec& graph,
                               double eta_max = kDefaultEtaMax);
FcParameters decode_fc(std::span<const double> x, Index n);

// ---------------------------------------------------------------------------
// F_P

struct FpParameters {
  PumpProfile pump;
  std::vector<double> euler;       // N(N-1)/2
  std::vector<double> theta;       // N
  std::vector<double> post_euler;  // N(N-1)/2
};

double fitness_fp(const ArrayConfig& cfg, double z, const GraphSpec& graph,
                  const FpParameters& p);

/// Parameters: |eta| (N), phi (N), euler (N(N-1)/2), theta (N), post (N(N-1)/2).
OptimizationProblem fp_problem(const ArrayConfig& cfg, double z, const GraphSpec& graph,
                               double eta_max = kDefaultEtaMax);
FpParameters decode_fp(std::span<const double> x, Index n);

/// Nullifier variances of the emulated cluster for a decoded F_P point.
std::vector<double> fp_nullifier_variances(const ArrayConfig& cfg, double z,
                                           const GraphSpec& graph, const FpParameters& p);

}  // namespace anw
