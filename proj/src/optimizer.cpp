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

#include "anw/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace anw {

void OptimizationProblem::validate() const {
  require(!parameters.empty(), ErrorCode::invalid_argument,
          "optimization problem has no parameters");
  require(static_cast<bool>(fitness), ErrorCode::invalid_argument,
          "optimization problem has no fitness function");
  for (const auto& p : parameters) {
    require(p.kind == ParameterKind::angle || p.lower <= p.upper, ErrorCode::invalid_argument,
            "parameter '" + p.name + "' has inconsistent bounds");
    require(p.scale > 0.0, ErrorCode::invalid_argument,
            "parameter '" + p.name + "' needs a positive scale");
  }
}

std::vector<double> OptimizationProblem::decode(std::span<const double> x) const {
  require(static_cast<Index>(x.size()) == dimension(), ErrorCode::dimension_mismatch,
          "parameter vector has the wrong length");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& p = parameters[i];
    out[i] = p.kind == ParameterKind::angle ? wrap_angle(x[i])
                                            : std::clamp(x[i], p.lower, p.upper);
  }
  return out;
}

void EsConfig::validate() const {
  require(parents >= 1, ErrorCode::invalid_argument, "ES needs at least one parent");
  require(population >= parents, ErrorCode::invalid_argument,
          "ES population must be at least the number of parents");
  require(sigma0 > 0.0 && std::isfinite(sigma0), ErrorCode::invalid_argument,
          "ES sigma0 must be positive");
  require(max_generations >= 0, ErrorCode::invalid_argument,
          "ES generation budget must be >= 0");
  require(threads >= 1, ErrorCode::invalid_argument, "ES needs at least one thread");
  require(restarts >= 1, ErrorCode::invalid_argument, "ES needs at least one run");
}

namespace {

struct Individual {
  std::vector<double> x;
  std::vector<double> sigma;
  double fitness = 0.0;
};

double safe_fitness(const OptimizationProblem& problem, const std::vector<double>& x) {
  const double f = problem.fitness(problem.decode(x));
  return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
}

void evaluate(const OptimizationProblem& problem, std::vector<Individual>& pop, int threads) {
  const std::size_t n = pop.size();
  if (threads <= 1 || n <= 1) {
    for (auto& ind : pop) ind.fitness = safe_fitness(problem, ind.x);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < n; k += workers)
          pop[k].fitness = safe_fitness(problem, pop[k].x);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::uint64_t restart_seed(std::uint64_t seed, int run) {
  if (run == 0) return seed;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

OptimizationResult single_run(const OptimizationProblem& problem, const EsConfig& config) {
  const std::size_t dim = problem.parameters.size();
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double tau_global = 1.0 / std::sqrt(2.0 * static_cast<double>(dim));
  const double tau_local = 1.0 / std::sqrt(2.0 * std::sqrt(static_cast<double>(dim)));
  constexpr double kSigmaFloor = 1e-14;

  auto clip = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < dim; ++i) {
      const auto& p = problem.parameters[i];
      if (p.kind != ParameterKind::angle) x[i] = std::clamp(x[i], p.lower, p.upper);
    }
  };

  std::vector<double> mean(dim);
  std::vector<double> sigma(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& p = problem.parameters[i];
    if (config.random_start) {
      const double lo = p.kind == ParameterKind::angle ? -M_PI : p.lower;
      const double hi = p.kind == ParameterKind::angle ? M_PI : p.upper;
      mean[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    } else {
      mean[i] = p.initial;
    }
    sigma[i] = config.sigma0 * p.scale;
  }
  clip(mean);

  OptimizationResult result;
  result.seed = config.seed;
  result.parallel = config.threads > 1;
  result.best_fitness = safe_fitness(problem, mean);
  result.best = problem.decode(mean);
  result.evaluations = 1;
  result.reached_target = result.best_fitness <= config.target;

  const auto lambda = static_cast<std::size_t>(config.population);
  const auto mu = static_cast<std::size_t>(config.parents);
  std::vector<Individual> pop(lambda);
  std::vector<std::size_t> order(lambda);

  for (int gen = 0; gen < config.max_generations && !result.reached_target; ++gen) {
    for (auto& ind : pop) {
      ind.x.resize(dim);
      ind.sigma.resize(dim);
      const double global = tau_global * gauss(rng);
      for (std::size_t i = 0; i < dim; ++i) {
        ind.sigma[i] = std::max(kSigmaFloor, sigma[i] * std::exp(global + tau_local * gauss(rng)));
        ind.x[i] = mean[i] + ind.sigma[i] * gauss(rng);
      }
      clip(ind.x);
    }
    evaluate(problem, pop, config.threads);
    result.evaluations += static_cast<long>(lambda);

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].fitness < pop[b].fitness;
    });

    std::fill(mean.begin(), mean.end(), 0.0);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    for (std::size_t k = 0; k < mu; ++k) {
      const auto& ind = pop[order[k]];
      for (std::size_t i = 0; i < dim; ++i) {
        mean[i] += ind.x[i] / static_cast<double>(mu);
        sigma[i] += ind.sigma[i] / static_cast<double>(mu);
      }
    }

    const auto& elite = pop[order[0]];
    if (elite.fitness < result.best_fitness) {
      result.best_fitness = elite.fitness;
      result.best = problem.decode(elite.x);
    }
    result.trace.push_back(result.best_fitness);
    result.generations = gen + 1;
    result.reached_target = result.best_fitness <= config.target;
  }
  return result;
}

}  // namespace

OptimizationResult evolve(const OptimizationProblem& problem, const EsConfig& config) {
  problem.validate();
  config.validate();
  OptimizationResult total;
  total.seed = config.seed;
  total.parallel = config.threads > 1;
  for (int run = 0; run < config.restarts; ++run) {
    EsConfig c = config;
    c.seed = restart_seed(config.seed, run);
    OptimizationResult r = single_run(problem, c);
    total.evaluations += r.evaluations;
    total.generations += r.generations;
    total.runs = run + 1;
    if (run == 0 || r.best_fitness < total.best_fitness) {
      total.best_fitness = r.best_fitness;
      total.best = r.best;
      total.best_run = run;
      total.best_run_generations = r.generations;
    }
    for (double f : r.trace) total.trace.push_back(std::min(f, total.best_fitness));
    total.reached_target = total.best_fitness <= config.target;
    if (total.reached_target) break;
  }
  return total;
}

// ---------------------------------------------------------------------------

namespace {

Parameter angle_param(std::string name, double initial = 0.0) {
  return {std::move(name), ParameterKind::angle, -M_PI, M_PI, 1.0, initial};
}

Parameter amplitude_param(std::string name, double eta_max) {
  return {std::move(name), ParameterKind::amplitude, 0.0, eta_max, eta_max, 0.5 * eta_max};
}

Parameter gain_param(std::string name) {
  return {std::move(name), ParameterKind::gain, -kGainBound, kGainBound, 1.0, 0.0};
}

std::string indexed(const char* stem, Index i) {
  std::ostringstream s;
  s << stem << '_' << (i + 1);
  return s.str();
}

void require_size(std::span<const double> x, std::size_t expected, const char* what) {
  if (x.size() != expected) {
    std::ostringstream msg;
    msg << what << ": expected " << expected << " parameters, got " << x.size();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
}

std::vector<double> slice(std::span<const double> x, std::size_t& at, std::size_t count) {
  std::vector<double> out(x.begin() + static_cast<std::ptrdiff_t>(at),
                          x.begin() + static_cast<std::ptrdiff_t>(at + count));
  at += count;
  return out;
}

PumpProfile pump_from(std::span<const double> x, std::size_t& at, std::size_t n) {
  PumpProfile p;
  p.amplitudes = slice(x, at, n);
  p.phases = slice(x, at, n);
  return p;
}

}  // namespace

double fitness_fm(const RealMatrix& covariance, std::span<const double> theta,
                  std::span<const double> gains) {
  const auto rho = vlf_all(covariance, theta, gains);
  return std::accumulate(rho.begin(), rho.end(), 0.0);
}

PumpProfile apply_relative_phases(const PumpProfile& pump, std::span<const double> phases) {
  require(static_cast<Index>(phases.size()) + 1 == pump.size(), ErrorCode::dimension_mismatch,
          "need one relative phase per waveguide after the first");
  PumpProfile out = pump;
  for (std::size_t j = 0; j < phases.size(); ++j) out.phases[j + 1] += phases[j];
  return out;
}

FmParameters decode_fm(std::span<const double> x, Index n, bool optimize_phases) {
  const auto un = static_cast<std::size_t>(n);
  require_size(x, 2 * un + (optimize_phases ? un - 1 : 0), "F_M");
  FmParameters p;
  std::size_t at = 0;
  p.theta = slice(x, at, un);
  p.gains = slice(x, at, un);
  if (optimize_phases) p.phases = slice(x, at, un - 1);
  return p;
}

OptimizationProblem fm_problem(const ArrayConfig& cfg, const PumpProfile& pump, double z,
                               bool optimize_phases) {
  cfg.validate();
  pump.validate(cfg.n);
  require(cfg.n >= 2, ErrorCode::invalid_argument, "F_M needs at least two waveguides");
  OptimizationProblem prob;
  prob.name = optimize_phases ? "F_M+phases" : "F_M";
  for (Index i = 0; i < cfg.n; ++i) prob.parameters.push_back(angle_param(indexed("theta", i)));
  for (Index i = 0; i < cfg.n; ++i) prob.parameters.push_back(gain_param(indexed("G", i)));
  if (optimize_phases) {
    for (Index i = 1; i < cfg.n; ++i)
      prob.parameters.push_back(angle_param(indexed("dphi", i)));
  }
  const Index n = cfg.n;
  if (!optimize_phases) {
    const RealMatrix v = propagator_exact(cfg, pump, z).covariance;
    prob.fitness = [v, n](std::span<const double> x) {
      const FmParameters p = decode_fm(x, n, false);
      return fitness_fm(v, p.theta, p.gains);
    };
  } else {
    prob.fitness = [cfg, pump, z, n](std::span<const double> x) {
      const FmParameters p = decode_fm(x, n, true);
      const RealMatrix v =
          propagator_exact(cfg, apply_relative_phases(pump, p.phases), z).covariance;
      return fitness_fm(v, p.theta, p.gains);
    };
  }
  return prob;
}

double fitness_fc(const ArrayConfig& cfg, double z, const GraphSpec& graph,
                  const PumpProfile& pump, std::span<const double> theta) {
  const RealMatrix v = propagator_exact(cfg, pump, z).covariance;
  const auto var = nullifier_variances(v, graph, theta);
  return std::accumulate(var.begin(), var.end(), 0.0);
}

FcParameters decode_fc(std::span<const double> x, Index n) {
  const auto un = static_cast<std::size_t>(n);
  require_size(x, 3 * un, "F_C");
  FcParameters p;
  std::size_t at = 0;
  p.pump = pump_from(x, at, un);
  p.theta = slice(x, at, un);
  return p;
}

OptimizationProblem fc_problem(const ArrayConfig& cfg, double z, const GraphSpec& graph,
                               double eta_max) {
  cfg.validate();
  graph.validate();
  require(graph.size() == cfg.n, ErrorCode::dimension_mismatch,
          "graph size does not match the array");
  require(eta_max > 0.0, ErrorCode::invalid_argument, "eta_max must be positive");
  OptimizationProblem prob;
  prob.name = "F_C";
  for (Index i = 0; i < cfg.n; ++i) prob.parameters.push_back(amplitude_param(indexed("eta", i), eta_max));
  for (Index i = 0; i < cfg.n; ++i) prob.parameters.push_back(angle_param(indexed("phi", i)));
  for (Index i = 0; i < cfg.n; ++i) prob.parameters.push_back(angle_param(indexed("theta", i)));
  const Index n = cfg.n;
  prob.fitness = [cfg, z, graph, n](std::span<const double> x) {
    const FcParameters p = decode_fc(x, n);
    return fitness_fc(cfg, z, graph, p.pump, p.theta);
  };
  return prob;
}

FpParameters decode_fp(std::span<const double> x, Index n) {
  const auto un = static_cast<std::size_t>(n);
  const auto ne = static_cast<std::size_t>(euler_angle_count(n));
  require_size(x, 3 * un + 2 * ne, "F_P");
  FpParameters p;
  std::size_t at = 0;
  p.pump = pump_from(x, at, un);
  p.euler = slice(x, at, ne);
  p.theta = slice(x, at, un);
  p.post_euler = slice(x, at, ne);
  return p;
}

double fitness_fp(const ArrayConfig& cfg, double z, const GraphSpec& graph,
                  const FpParameters& p) {
  const GaussianState st = propagator_exact(cfg, p.pump, z);
  const BlochMessiahFactorization bm = bloch_messiah(st.propagator);
  return emulation_error(graph, bm, p.euler, p.theta, p.post_euler);
}

std::vector<double> fp_nullifier_variances(const ArrayConfig& cfg, double z,
                                           const GraphSpec& graph, const FpParameters& p) {
  const GaussianState st = propagator_exact(cfg, p.pump, z);
  return emulated_nullifier_variances(st.covariance, graph, p.theta, p.post_euler);
}

OptimizationProblem fp_problem(const ArrayConfig& cfg, double z, const GraphSpec& graph,
                               double eta_max) {
  cfg.validate();
  graph.validate();
  require(graph.size() == cfg.n, ErrorCode::dimension_mismatch,
          "graph size does not match the array");
  require(eta_max > 0.0, ErrorCode::invalid_argument, "eta_max must be positive");
  OptimizationProblem prob;
  prob.name = "F_P";
  const Index n = cfg.n;
  for (Index i = 0; i < n; ++i) prob.parameters.push_back(amplitude_param(indexed("eta", i), eta_max));
  for (Index i = 0; i < n; ++i) prob.parameters.push_back(angle_param(indexed("phi", i)));
  for (Index i = 0; i < euler_angle_count(n); ++i)
    prob.parameters.push_back(angle_param(indexed("euler", i)));
  for (Index i = 0; i < n; ++i) prob.parameters.push_back(angle_param(indexed("theta", i)));
  for (Index i = 0; i < euler_angle_count(n); ++i)
    prob.parameters.push_back(angle_param(indexed("post", i)));
  prob.fitness = [cfg, z, graph, n](std::span<const double> x) {
    return fitness_fp(cfg, z, graph, decode_fp(x, n));
  };
  return prob;
}

}  // namespace anw
