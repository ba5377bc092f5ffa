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

#include "anw/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace anw {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  require(j.is_object(), ErrorCode::config, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* a) { return key == a; });
    require(ok, ErrorCode::config, "unknown key '" + key + "' in " + where);
  }
}

const json& block(const json& scenario, const char* name) {
  static const json empty = json::object();
  return scenario.contains(name) ? scenario.at(name) : empty;
}

double number(const json& j, const char* key, const std::string& where) {
  require(j.contains(key), ErrorCode::config, where + "." + key + " is required");
  require(j.at(key).is_number(), ErrorCode::config, where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::vector<double> numbers(const json& j, const char* key, const std::string& where) {
  require(j.at(key).is_array(), ErrorCode::config, where + "." + key + " must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    require(v.is_number(), ErrorCode::config, where + "." + key + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> scaled(std::vector<double> v, double factor) {
  for (double& x : v) x *= factor;
  return v;
}

void require_length(const std::vector<double>& v, Index n, const std::string& what) {
  if (static_cast<Index>(v.size()) != n) {
    std::ostringstream msg;
    msg << what << " has " << v.size() << " entries, expected " << n;
    throw Error(ErrorCode::config, msg.str());
  }
}

json to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const RealVector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream s;
  for (std::size_t i = 0; i < header.size(); ++i) s << (i ? "," : "") << header[i];
  s << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << fmt(row[i]);
    s << '\n';
  }
  return s.str();
}

std::vector<double> theta_of(const json& scenario, Index n) {
  const json& m = block(scenario, "measurement");
  if (!m.contains("theta_pi")) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  auto t = scaled(numbers(m, "theta_pi", "measurement"), M_PI);
  require_length(t, n, "measurement.theta_pi");
  return t;
}

std::vector<double> gains_of(const json& scenario, Index n) {
  const json& m = block(scenario, "measurement");
  if (!m.contains("gains")) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  auto g = numbers(m, "gains", "measurement");
  require_length(g, n, "measurement.gains");
  return g;
}

std::vector<double> over_pi(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= M_PI;
  return out;
}

json pump_json(const PumpProfile& p) {
  return {{"amplitudes", p.amplitudes}, {"phases_pi", over_pi(p.phases)}};
}

std::vector<double> linspace(double from, double to, int steps) {
  std::vector<double> out;
  if (steps == 1) return {from};
  for (int i = 0; i < steps; ++i)
    out.push_back(from + (to - from) * static_cast<double>(i) / (steps - 1));
  return out;
}

std::vector<double> logspace(double from, double to, int steps) {
  auto e = linspace(std::log(from), std::log(to), steps);
  for (double& x : e) x = std::exp(x);
  return e;
}

int threads_of(const RunOptions& o) { return o.deterministic ? 1 : std::max(1, o.threads); }

/// Evaluates f(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& f) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double d = static_cast<double>(n) * sxx - sx * sx;
  return d == 0.0 ? std::nan("") : (static_cast<double>(n) * sxy - sx * sy) / d;
}

json certification_json(const CertificationReport& r) {
  json bounds = json::array();
  for (const auto& b : r.bounds)
    bounds.push_back({{"nodes", {b.first + 1, b.second + 1}},
                      {"sum", b.sum},
                      {"bound", b.bound},
                      {"passed", b.passed}});
  return {{"graph", r.graph},
          {"nullifier_variances", r.nullifier_variances},
          {"nullifier_sum", std::accumulate(r.nullifier_variances.begin(),
                                            r.nullifier_variances.end(), 0.0)},
          {"vlf", r.vlf},
          {"bounds", bounds},
          {"nullifiers_below_shot_noise", r.nullifiers_below_shot_noise},
          {"inseparable", r.inseparable},
          {"passed", r.passed},
          {"theta_pi", over_pi(r.theta)},
          {"gains", r.gains}};
}

json optimizer_json(const OptimizationResult& r, const EsConfig& es) {
  return {{"best_fitness", r.best_fitness},
          {"evaluations", r.evaluations},
          {"generations", r.generations},
          {"runs", r.runs},
          {"best_run", r.best_run},
          {"best_run_generations", r.best_run_generations},
          {"seed", r.seed},
          {"parallel", r.parallel},
          {"population", es.population},
          {"parents", es.parents},
          {"sigma0", es.sigma0},
          {"trace", r.trace}};
}

std::vector<std::vector<double>> trace_rows(const OptimizationResult& r) {
  std::vector<std::vector<double>> rows;
  for (std::size_t g = 0; g < r.trace.size(); ++g)
    rows.push_back({static_cast<double>(g + 1), r.trace[g]});
  return rows;
}

// ---------------------------------------------------------------------------
// Commands

RunOutput cmd_supermodes(const json& sc) {
  const ArrayConfig cfg = parse_array(sc);
  const LinearSupermodes lm = linear_supermodes(cfg);
  RunOutput out;
  out.record["results"] = {{"eigenvalues", to_json(lm.eigenvalues)}, {"modes", to_json(lm.modes)}};
  std::vector<std::string> header{"k", "lambda"};
  for (Index j = 0; j < cfg.n; ++j) header.push_back("m_" + std::to_string(j + 1));
  std::vector<std::vector<double>> rows;
  for (Index k = 0; k < cfg.n; ++k) {
    std::vector<double> row{static_cast<double>(k + 1), lm.eigenvalues(k)};
    for (Index j = 0; j < cfg.n; ++j) row.push_back(lm.modes(k, j));
    rows.push_back(std::move(row));
  }
  out.csv = csv_table(header, rows);
  return out;
}

std::vector<double> z_grid(const json& sc, const ArrayConfig& cfg) {
  const json& s = block(sc, "sweep");
  check_keys(s, {"variable", "from", "to", "steps"}, "sweep");
  const std::string var = s.value("variable", "z");
  require(var == "z", ErrorCode::config, "this command sweeps z only");
  const double from = number_or(s, "from", 0.0, "sweep");
  const double to = number_or(s, "to", cfg.length, "sweep");
  const int steps = static_cast<int>(number_or(s, "steps", 31, "sweep"));
  require(steps >= 1 && from >= 0.0 && to >= from, ErrorCode::config, "invalid z sweep");
  return linspace(from, to, steps);
}

RunOutput cmd_propagate(const json& sc, const RunOptions& opt) {
  const ArrayConfig cfg = parse_array(sc);
  const PumpProfile pump = parse_pump(sc, cfg.n);
  const json& pb = block(sc, "propagate");
  check_keys(pb, {"rk4", "rk4_step"}, "propagate");
  const bool rk4 = pb.value("rk4", false);
  const double rk4_step = number_or(pb, "rk4_step", 1e-3, "propagate");
  const auto zs = z_grid(sc, cfg);
  const SymplecticMatrix to_linear = linear_supermode_transform(linear_supermodes(cfg));

  const Basis bases[] = {Basis::individual, Basis::linear_supermode, Basis::nonlinear_supermode};
  std::vector<std::string> header{"z_mm"};
  for (Basis b : bases)
    for (Index k = 0; k < cfg.n; ++k) {
      const std::string stem = std::string(to_string(b)) + "_" + std::to_string(k + 1);
      header.push_back(stem + "_var");
      header.push_back(stem + "_db");
    }
  if (rk4) header.push_back("rk4_max_abs_diff");

  std::vector<std::vector<double>> rows(zs.size());
  parallel_for(zs.size(), threads_of(opt), [&](std::size_t i) {
    const double z = zs[i];
    const GaussianState ind = propagator_exact(cfg, pump, z);
    const GaussianState lin = change_basis(ind, to_linear.matrix(), Basis::linear_supermode);
    const NonlinearSupermodes nl = nonlinear_supermodes(cfg, pump, z);
    const GaussianState non =
        change_basis(lin, nl.basis_transform().matrix(), Basis::nonlinear_supermode);
    std::vector<double> row{z};
    for (const GaussianState* st : {&ind, &lin, &non})
      for (Index k = 0; k < cfg.n; ++k) {
        const double v = min_variance(*st, k).variance;
        row.push_back(v);
        row.push_back(squeezing_db(v));
      }
    if (rk4)
      row.push_back(max_abs(propagator_rk4(cfg, pump, z, rk4_step) - ind.propagator.matrix()));
    rows[i] = std::move(row);
  });

  RunOutput out;
  out.record["results"] = {{"columns", header}, {"rows", rows}};
  const GaussianState last = propagator_exact(cfg, pump, zs.back());
  out.record["results"]["final_covariance"] = to_json(last.covariance);
  out.record["results"]["mean_photon_number"] = mean_photon_number(last.covariance);
  out.csv = csv_table(header, rows);
  return out;
}

RunOutput cmd_vlf(const json& sc, const RunOptions& opt) {
  const ArrayConfig cfg = parse_array(sc);
  const PumpProfile pump = parse_pump(sc, cfg.n);
  require(cfg.n >= 2, ErrorCode::config, "vlf needs at least two waveguides");
  const json& s = block(sc, "sweep");
  check_keys(s, {"variable", "from", "to", "steps"}, "sweep");
  const std::string var = s.value("variable", "z");
  require(var == "z" || var == "eta", ErrorCode::config, "sweep.variable must be z or eta");
  const double from = number_or(s, "from", var == "z" ? cfg.length : pump.amplitudes[0], "sweep");
  const double to = number_or(s, "to", from, "sweep");
  const int steps = static_cast<int>(number_or(s, "steps", 1, "sweep"));
  require(steps >= 1 && from >= 0.0 && to >= from, ErrorCode::config, "invalid sweep");
  const auto points = linspace(from, to, steps);

  const json& ob = block(sc, "optimizer");
  const std::string fitness = ob.value("fitness", "none");
  require(fitness == "none" || fitness == "F_M" || fitness == "F_M+phases", ErrorCode::config,
          "vlf supports optimizer.fitness F_M or F_M+phases");
  const bool optimize = fitness != "none";
  const bool phases = fitness == "F_M+phases";
  EsConfig es = parse_optimizer(sc, opt);
  es.threads = 1;
  const auto theta0 = theta_of(sc, cfg.n);
  const auto gains0 = gains_of(sc, cfg.n);

  struct Point {
    std::vector<double> rho, theta, gains, phases;
    double fitness = 0.0;
    long evaluations = 0;
  };
  std::vector<Point> res(points.size());
  parallel_for(points.size(), threads_of(opt), [&](std::size_t i) {
    const double z = var == "z" ? points[i] : cfg.length;
    PumpProfile p = pump;
    if (var == "eta") std::fill(p.amplitudes.begin(), p.amplitudes.end(), points[i]);
    Point& pt = res[i];
    if (!optimize) {
      pt.theta = theta0;
      pt.gains = gains0;
    } else {
      OptimizationProblem prob = fm_problem(cfg, p, z, phases);
      for (Index k = 0; k < cfg.n; ++k) {
        prob.parameters[static_cast<std::size_t>(k)].initial = theta0[static_cast<std::size_t>(k)];
        prob.parameters[static_cast<std::size_t>(cfg.n + k)].initial =
            gains0[static_cast<std::size_t>(k)];
      }
      const OptimizationResult r = evolve(prob, es);
      const FmParameters best = decode_fm(r.best, cfg.n, phases);
      pt.theta = best.theta;
      pt.gains = best.gains;
      pt.phases = best.phases;
      pt.evaluations = r.evaluations;
      if (phases) p = apply_relative_phases(p, best.phases);
    }
    const RealMatrix v = propagator_exact(cfg, p, z).covariance;
    pt.rho = vlf_all(v, pt.theta, pt.gains);
    pt.fitness = std::accumulate(pt.rho.begin(), pt.rho.end(), 0.0);
  });

  std::vector<std::string> header{var == "z" ? "z_mm" : "eta_per_mm"};
  for (Index k = 0; k + 1 < cfg.n; ++k) header.push_back("rho_" + std::to_string(k + 1));
  header.push_back("rho_sum");
  header.push_back("inseparable");
  std::vector<std::vector<double>> rows;
  json pts = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& pt = res[i];
    const bool insep = std::all_of(pt.rho.begin(), pt.rho.end(),
                                   [](double r) { return r < kVlfThreshold; });
    std::vector<double> row{points[i]};
    row.insert(row.end(), pt.rho.begin(), pt.rho.end());
    row.push_back(pt.fitness);
    row.push_back(insep ? 1.0 : 0.0);
    rows.push_back(std::move(row));
    pts.push_back({{var, points[i]},
                   {"rho", pt.rho},
                   {"rho_sum", pt.fitness},
                   {"inseparable", insep},
                   {"theta_pi", over_pi(pt.theta)},
                   {"gains", pt.gains},
                   {"relative_phases_pi", over_pi(pt.phases)},
                   {"evaluations", pt.evaluations}});
  }
  RunOutput out;
  out.record["results"] = {{"fitness", fitness}, {"points", pts}};
  out.csv = csv_table(header, rows);
  return out;
}

RunOutput cmd_cluster(const json& sc, const RunOptions& opt) {
  const ArrayConfig cfg = parse_array(sc);
  const GraphSpec graph = parse_graph(sc, cfg.n);
  const json& ob = block(sc, "optimizer");
  const std::string fitness = ob.value("fitness", "F_C");
  require(fitness == "F_C" || fitness == "F_P", ErrorCode::config,
          "cluster supports optimizer.fitness F_C or F_P");
  const double eta_max = number_or(ob, "eta_max", kDefaultEtaMax, "optimizer");
  const EsConfig es = parse_optimizer(sc, opt);
  const double z = cfg.length;

  OptimizationProblem prob =
      fitness == "F_C" ? fc_problem(cfg, z, graph, eta_max) : fp_problem(cfg, z, graph, eta_max);
  // Starting point from the scenario's pump and LO phases when given.
  const auto n = static_cast<std::size_t>(cfg.n);
  if (sc.contains("pump")) {
    const PumpProfile p = parse_pump(sc, cfg.n);
    for (std::size_t j = 0; j < n; ++j) {
      prob.parameters[j].initial = p.amplitudes[j];
      prob.parameters[n + j].initial = p.phases[j];
    }
  }
  const auto theta0 = theta_of(sc, cfg.n);
  const std::size_t theta_at = fitness == "F_C" ? 2 * n
                                                : 2 * n + static_cast<std::size_t>(euler_angle_count(cfg.n));
  for (std::size_t j = 0; j < n; ++j) prob.parameters[theta_at + j].initial = theta0[j];

  const OptimizationResult r = evolve(prob, es);
  RunOutput out;
  json res = {{"fitness", fitness}, {"optimizer", optimizer_json(r, es)}};
  CertificationReport rep;
  if (fitness == "F_C") {
    const FcParameters p = decode_fc(r.best, cfg.n);
    const RealMatrix v = propagator_exact(cfg, p.pump, z).covariance;
    rep = certify(v, graph, p.theta);
    res["parameters"] = {{"pump", pump_json(p.pump)}, {"theta_pi", over_pi(p.theta)}};
    res["covariance"] = to_json(v);
  } else {
    const FpParameters p = decode_fp(r.best, cfg.n);
    const GaussianState st = propagator_exact(cfg, p.pump, z);
    const BlochMessiahFactorization bm = bloch_messiah(st.propagator);
    const RealMatrix pm = emulation_matrix(p.theta, p.post_euler);
    const RealMatrix v_em = pm * st.covariance * pm.transpose();
    const std::vector<double> zero(n, 0.0);
    rep = certify(v_em, graph, zero);
    res["parameters"] = {{"pump", pump_json(p.pump)},
                         {"euler_pi", over_pi(p.euler)},
                         {"theta_pi", over_pi(p.theta)},
                         {"post_euler_pi", over_pi(p.post_euler)}};
    res["emulation_error"] = r.best_fitness;
    res["shaped_lo_nullifier_variances"] =
        shaped_lo_nullifier_variances(st.covariance, graph, bm, p.euler);
    res["squeezing"] = to_json(bm.squeezing);
    res["covariance"] = to_json(st.covariance);
  }
  res["certification"] = certification_json(rep);
  out.record["results"] = res;
  out.certified = rep.passed ? 1 : 0;
  out.csv = csv_table({"generation", "best_fitness"}, trace_rows(r));
  return out;
}

RunOutput cmd_verify(const json& sc) {
  const ArrayConfig cfg = parse_array(sc);
  const PumpProfile pump = parse_pump(sc, cfg.n);
  const auto theta = theta_of(sc, cfg.n);
  const auto gains = gains_of(sc, cfg.n);
  const GaussianState st = propagator_exact(cfg, pump, cfg.length);
  RunOutput out;
  std::vector<std::vector<double>> rows;
  if (sc.contains("graph")) {
    const GraphSpec graph = parse_graph(sc, cfg.n);
    const CertificationReport rep = certify(st, graph, theta, gains);
    out.record["results"] = {{"certification", certification_json(rep)}};
    out.certified = rep.passed ? 1 : 0;
    for (std::size_t i = 0; i < rep.nullifier_variances.size(); ++i)
      rows.push_back({static_cast<double>(i + 1), rep.nullifier_variances[i],
                      rep.nullifier_variances[i] < 1.0 ? 1.0 : 0.0});
    out.csv = csv_table({"node", "nullifier_variance", "below_shot_noise"}, rows);
  } else {
    require(cfg.n >= 2, ErrorCode::config, "verify without a graph needs at least two waveguides");
    const auto rho = vlf_all(st.covariance, theta, gains);
    const bool insep = std::all_of(rho.begin(), rho.end(),
                                   [](double r) { return r < kVlfThreshold; });
    out.record["results"] = {{"vlf", rho}, {"inseparable", insep}, {"passed", insep}};
    out.certified = insep ? 1 : 0;
    for (std::size_t i = 0; i < rho.size(); ++i)
      rows.push_back({static_cast<double>(i + 1), rho[i], rho[i] < kVlfThreshold ? 1.0 : 0.0});
    out.csv = csv_table({"inequality", "rho", "violated"}, rows);
  }
  return out;
}

RunOutput cmd_oracle_check(const json& sc, const RunOptions& opt) {
  const ArrayConfig cfg = parse_array(sc);
  const PumpProfile pump = parse_pump(sc, cfg.n);
  const json& ob = block(sc, "oracle");
  check_keys(ob, {"rk4_step", "eta_from", "eta_to", "eta_steps", "tolerance"}, "oracle");
  const double step = number_or(ob, "rk4_step", 1e-3, "oracle");
  const double tol = number_or(ob, "tolerance", 1e-8, "oracle");
  const double eta_from = number_or(ob, "eta_from", 1e-3, "oracle");
  const double eta_to = number_or(ob, "eta_to", 1e-2, "oracle");
  const int eta_steps = static_cast<int>(number_or(ob, "eta_steps", 6, "oracle"));
  require(eta_from > 0.0 && eta_to >= eta_from && eta_steps >= 2, ErrorCode::config,
          "invalid oracle eta range");
  const double z = cfg.length;

  const SymplecticMatrix to_linear = linear_supermode_transform(linear_supermodes(cfg));
  const GaussianState exact = propagator_exact(cfg, pump, z);
  const RealMatrix& t = to_linear.matrix();
  const RealMatrix exact_lin = t * exact.propagator.matrix() * t.transpose();
  const RealMatrix rk4 = propagator_rk4(cfg, pump, z, step);
  const GaussianState noord = propagator_no_ordering(cfg, pump, z);

  json comparisons = json::array();
  auto compare = [&](const char* a, const char* b, const RealMatrix& sa, const RealMatrix& sb) {
    const double ds = max_abs(sa - sb);
    const double dv = max_abs(sa * sa.transpose() - sb * sb.transpose());
    comparisons.push_back({{"first", a},
                           {"second", b},
                           {"max_abs_diff_propagator", ds},
                           {"max_abs_diff_covariance", dv},
                           {"agree", ds < tol}});
  };
  compare("exact", "rk4", exact.propagator.matrix(), rk4);
  compare("exact", "no_ordering", exact_lin, noord.propagator.matrix());
  const bool flat = pump.is_flat();
  if (flat) {
    const cplx eta = pump.complex_amplitudes()(0);
    const GaussianState ana = flat_pump_propagator(cfg, eta, z);
    compare("exact", "flat_analytic", exact_lin, ana.propagator.matrix());
    compare("no_ordering", "flat_analytic", noord.propagator.matrix(), ana.propagator.matrix());
  }

  // Space-ordering error against pump strength, profile shape kept.
  const double peak = *std::max_element(pump.amplitudes.begin(), pump.amplitudes.end());
  const auto etas = logspace(eta_from, eta_to, eta_steps);
  std::vector<double> err_s(etas.size()), err_v(etas.size());
  if (peak > 0.0) {
    parallel_for(etas.size(), threads_of(opt), [&](std::size_t i) {
      const PumpProfile p = pump.scaled(etas[i] / peak);
      const GaussianState e = propagator_exact(cfg, p, z);
      const GaussianState a = propagator_no_ordering(cfg, p, z);
      err_s[i] = max_abs(t * e.propagator.matrix() * t.transpose() - a.propagator.matrix());
      err_v[i] = max_abs(t * e.covariance * t.transpose() - a.covariance);
    });
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < etas.size(); ++i) rows.push_back({etas[i], err_s[i], err_v[i]});
  json scaling = {{"eta", etas}, {"error_propagator", err_s}, {"error_covariance", err_v}};
  if (peak > 0.0) {
    scaling["slope_propagator"] = loglog_slope(etas, err_s);
    scaling["slope_covariance"] = loglog_slope(etas, err_v);
  }

  RunOutput out;
  out.record["results"] = {{"z", z},
                           {"flat_pump", flat},
                           {"tolerance", tol},
                           {"comparisons", comparisons},
                           {"ordering_scaling", scaling}};
  out.csv = csv_table({"eta_per_mm", "error_propagator", "error_covariance"}, rows);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& scenario_commands() {
  static const std::vector<std::string> c{"supermodes", "propagate", "vlf",
                                          "cluster",    "verify",    "oracle-check"};
  return c;
}

ArrayConfig parse_array(const json& sc) {
  require(sc.contains("array"), ErrorCode::config, "scenario needs an 'array' block");
  const json& a = sc.at("array");
  check_keys(a, {"n", "coupling_strength", "coupling_profile", "length"}, "array");
  ArrayConfig cfg;
  const double n = number(a, "n", "array");
  require(n >= 1 && n == std::floor(n), ErrorCode::config, "array.n must be a positive integer");
  cfg.n = static_cast<Index>(n);
  cfg.coupling_strength = number(a, "coupling_strength", "array");
  cfg.length = number(a, "length", "array");
  if (a.contains("coupling_profile"))
    cfg.coupling_profile = numbers(a, "coupling_profile", "array");
  else
    cfg.coupling_profile.assign(static_cast<std::size_t>(cfg.n - 1), 1.0);
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::config, std::string("array: ") + e.what());
  }
  return cfg;
}

PumpProfile parse_pump(const json& sc, Index n) {
  if (!sc.contains("pump")) return PumpProfile::zero(n);
  const json& p = sc.at("pump");
  check_keys(p, {"amplitudes", "phases_pi", "flat", "phase_pi"}, "pump");
  PumpProfile pump;
  if (p.contains("flat")) {
    require(!p.contains("amplitudes") && !p.contains("phases_pi"), ErrorCode::config,
            "pump.flat excludes per-waveguide amplitudes and phases");
    pump = PumpProfile::flat(n, number(p, "flat", "pump"), number_or(p, "phase_pi", 0.0, "pump") * M_PI);
  } else {
    require(p.contains("amplitudes"), ErrorCode::config, "pump needs 'amplitudes' or 'flat'");
    require(!p.contains("phase_pi"), ErrorCode::config, "pump.phase_pi goes with pump.flat");
    pump.amplitudes = numbers(p, "amplitudes", "pump");
    require_length(pump.amplitudes, n, "pump.amplitudes");
    if (p.contains("phases_pi")) {
      pump.phases = scaled(numbers(p, "phases_pi", "pump"), M_PI);
      require_length(pump.phases, n, "pump.phases_pi");
    } else {
      pump.phases.assign(static_cast<std::size_t>(n), 0.0);
    }
  }
  try {
    pump.validate(n);
  } catch (const Error& e) {
    throw Error(ErrorCode::config, std::string("pump: ") + e.what());
  }
  return pump;
}

GraphSpec parse_graph(const json& sc, Index n) {
  require(sc.contains("graph"), ErrorCode::config, "scenario needs a 'graph' block");
  const json& g = sc.at("graph");
  check_keys(g, {"preset", "adjacency", "labeling", "bounds", "lo_rotation_pi"}, "graph");
  GraphSpec graph;
  try {
    if (g.contains("preset")) {
      require(!g.contains("adjacency"), ErrorCode::config,
              "graph.preset and graph.adjacency are exclusive");
      const std::string preset = g.at("preset").get<std::string>();
      graph = preset == "linear" ? GraphSpec::linear(n) : GraphSpec::from_preset(preset);
    } else {
      require(g.contains("adjacency") && g.at("adjacency").is_array(), ErrorCode::config,
              "graph needs 'preset' or 'adjacency'");
      const json& a = g.at("adjacency");
      const auto rows = static_cast<Index>(a.size());
      RealMatrix j(rows, rows);
      for (Index r = 0; r < rows; ++r) {
        require(a[static_cast<std::size_t>(r)].is_array() &&
                    static_cast<Index>(a[static_cast<std::size_t>(r)].size()) == rows,
                ErrorCode::config, "graph.adjacency must be square");
        for (Index c = 0; c < rows; ++c)
          j(r, c) = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
      }
      graph = GraphSpec::custom(std::move(j));
    }
    if (g.contains("labeling")) {
      std::vector<Index> lab;
      for (const auto& v : g.at("labeling")) lab.push_back(v.get<Index>() - 1);
      graph.labeling = std::move(lab);
    }
    if (g.contains("bounds")) {
      graph.bounds.clear();
      for (const auto& b : g.at("bounds")) {
        require(b.is_array() && b.size() == 3, ErrorCode::config,
                "graph.bounds entries are [node, node, bound]");
        graph.bounds.push_back({b[0].get<Index>() - 1, b[1].get<Index>() - 1, b[2].get<double>()});
      }
    }
    if (g.contains("lo_rotation_pi")) {
      graph.lo_rotation = scaled(numbers(g, "lo_rotation_pi", "graph"), M_PI);
    }
    graph.validate();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("graph: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::config, std::string("graph: ") + e.what());
  }
  require(graph.size() == n, ErrorCode::config, "graph size does not match array.n");
  return graph;
}

EsConfig parse_optimizer(const json& sc, const RunOptions& options) {
  const json& o = block(sc, "optimizer");
  check_keys(o,
             {"fitness", "population", "parents", "sigma0", "generations", "restarts", "seed",
              "random_start", "eta_max", "target"},
             "optimizer");
  EsConfig es;
  es.population = static_cast<int>(number_or(o, "population", es.population, "optimizer"));
  es.parents = static_cast<int>(number_or(o, "parents", es.parents, "optimizer"));
  es.sigma0 = number_or(o, "sigma0", es.sigma0, "optimizer");
  es.max_generations =
      static_cast<int>(number_or(o, "generations", es.max_generations, "optimizer"));
  es.restarts = static_cast<int>(number_or(o, "restarts", es.restarts, "optimizer"));
  es.random_start = o.value("random_start", false);
  if (o.contains("target") && !o.at("target").is_null())
    es.target = number(o, "target", "optimizer");
  if (o.contains("seed")) {
    require(o.at("seed").is_number_unsigned(), ErrorCode::config,
            "optimizer.seed must be a non-negative integer");
    es.seed = o.at("seed").get<std::uint64_t>();
  }
  if (options.seed) es.seed = *options.seed;
  es.threads = threads_of(options);
  try {
    es.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::config, std::string("optimizer: ") + e.what());
  }
  return es;
}

json load_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("scenario is not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("results")) j = j.at("config");
  check_keys(j,
             {"name", "description", "array", "pump", "measurement", "graph", "sweep",
              "optimizer", "propagate", "oracle", "output"},
             "scenario");
  check_keys(block(j, "measurement"), {"theta_pi", "gains", "basis"}, "measurement");
  check_keys(block(j, "output"), {"directory", "format"}, "output");
  const ArrayConfig cfg = parse_array(j);
  parse_pump(j, cfg.n);
  return j;
}

RunOutput run_scenario(const std::string& command, const json& scenario,
                       const RunOptions& options) {
  RunOutput out;
  try {
    if (command == "supermodes") {
      out = cmd_supermodes(scenario);
    } else if (command == "propagate") {
      out = cmd_propagate(scenario, options);
    } else if (command == "vlf") {
      out = cmd_vlf(scenario, options);
    } else if (command == "cluster") {
      out = cmd_cluster(scenario, options);
    } else if (command == "verify") {
      out = cmd_verify(scenario);
    } else if (command == "oracle-check") {
      out = cmd_oracle_check(scenario, options);
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown command '" + command + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("scenario: ") + e.what());
  }
  json cfg = scenario;
  if (options.seed) cfg["optimizer"]["seed"] = *options.seed;
  out.record["command"] = command;
  out.record["version"] = kVersion;
  out.record["seed"] = parse_optimizer(scenario, options).seed;
  out.record["config"] = cfg;
  if (out.certified >= 0) out.record["certified"] = out.certified == 1;
  return out;
}

}  // namespace anw
