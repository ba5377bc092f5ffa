#pragma once

#include "anw/optimizer.hpp"

#include <cmath>
#include <random>

namespace anw::test {

inline RealMatrix random_symmetric(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  RealMatrix h(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k <= i; ++k) h(i, k) = h(k, i) = g(rng);
  return h;
}

inline ComplexMatrix random_complex_symmetric(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix w(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k <= i; ++k) w(i, k) = w(k, i) = cplx(g(rng), g(rng));
  return w;
}

/// exp(Omega H) for random symmetric H: symplectic by construction.
inline RealMatrix random_symplectic(Index modes, std::mt19937_64& rng, double scale = 0.3) {
  return mat_exp(RealMatrix(symplectic_form(modes) * random_symmetric(2 * modes, rng, scale)));
}

/// Taylor series of exp(A / 2^s), squared s times.
inline RealMatrix taylor_exp(const RealMatrix& a) {
  int s = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.1) {
    norm /= 2.0;
    ++s;
  }
  const RealMatrix b = a / std::ldexp(1.0, s);
  RealMatrix term = RealMatrix::Identity(a.rows(), a.cols());
  RealMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

struct RandomArray {
  ArrayConfig cfg;
  PumpProfile pump;
  double z;
};

/// N in 1..max_n, |eta| <= eta_max, z <= z_max, random coupling profile.
inline RandomArray random_array(std::mt19937_64& rng, Index max_n = 8, double eta_max = 0.1,
                                double z_max = 50.0) {
  std::uniform_int_distribution<Index> pick_n(1, max_n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomArray r;
  const Index n = pick_n(rng);
  r.cfg = ArrayConfig::homogeneous(n, 0.5 * u(rng), z_max);
  r.cfg.coupling_profile.clear();
  for (Index j = 0; j + 1 < n; ++j) r.cfg.coupling_profile.push_back(0.5 + u(rng));
  for (Index j = 0; j < n; ++j) {
    r.pump.amplitudes.push_back(eta_max * u(rng));
    r.pump.phases.push_back(2.0 * M_PI * (u(rng) - 0.5));
  }
  r.z = z_max * u(rng);
  return r;
}

/// Covariance with rows and columns of both quadratures permuted: mode p[i]
/// of the result is mode i of v.
inline RealMatrix permute_modes(const RealMatrix& v, const std::vector<Index>& p) {
  const Index n = v.rows() / 2;
  RealMatrix t = RealMatrix::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    t(p[static_cast<std::size_t>(i)], i) = 1.0;
    t(n + p[static_cast<std::size_t>(i)], n + i) = 1.0;
  }
  return t * v * t.transpose();
}

struct ReferenceRow {
  const char* graph;
  std::vector<double> reference;
  std::vector<double> eta_e2;
  std::vector<double> phi_pi;
  std::vector<double> theta_pi;
};

/// Individual-mode cluster rows at C0 = 0.24/mm, z = 30 mm: reference variances, then
/// eta (1e-2/mm), phi/pi and theta/pi.
inline const std::vector<ReferenceRow>& mode_rows() {
  static const std::vector<ReferenceRow> rows{
      {"linear", {0.20, 0.39, 0.37, 0.38, 0.20}, {9.2, 8.9, 9.1, 9.1, 9.2},
       {-0.5, -0.5, -0.5, -0.5, -0.5}, {0, 0, 0, 0, 0}},
      {"pentagon", {0.59, 0.73, 0.09, 0.34, 0.11}, {8.7, 4.9, 3.4, 1.9, 8.7},
       {1.59, 0.87, 1.06, 1.34, 0.63}, {0.60, 0.19, -1.00, -0.88, 0.20}},
      {"star", {0.40, 0.41, 0.54, 0.41, 0.40}, {6.1, 3.4, 9.5, 3.4, 6.1},
       {1.02, 0.02, 0.02, 0.01, -0.98}, {-0.24, 0.26, 0.26, 0.26, -0.24}},
      {"pyramid", {0.33, 0.12, 0.57, 0.18, 0.19}, {4.3, 9.3, 0.0, 7.3, 3.0},
       {-0.11, 0.22, 0.65, 1.29, 1.00}, {0.05, 0.27, 0.40, -0.80, 0.00}},
      {"ghz", {0.40, 0.41, 0.54, 0.41, 0.40}, {6.1, 3.4, 9.5, 3.4, 6.1},
       {1.02, 0.02, 0.02, 0.01, -0.98}, {0.26, 0.76, 0.26, 0.76, 0.26}},
  };
  return rows;
}

/// Nonlinear-supermode cluster rows; only the variances are used.
inline const std::vector<ReferenceRow>& supermode_rows() {
  static const std::vector<ReferenceRow> rows{
      {"linear", {0.29, 0.36, 0.45, 0.13, 0.09}, {4.1, 1.8, 3.6, 1.3, 1.0},
       {0.78, -0.59, -0.26, 0.34, -0.97}, {-1.09, -0.09, 0.37, 1.37, 0.24}},
      {"pentagon", {0.28, 0.25, 0.31, 0.17, 0.32}, {0.7, 2.5, 3.3, 3.4, 1.4},
       {-0.01, -1.41, -0.40, -0.16, 0.26}, {-0.47, -2.57, -0.32, 2.15, 0.72}},
      {"star", {0.30, 0.28, 0.35, 0.43, 0.20}, {3.2, 0.5, 0.9, 0.5, 1.7},
       {-0.02, 0.75, -0.34, -0.54, 0.04}, {-0.24, -0.08, 0.15, 0.28, -0.23}},
      {"pyramid", {0.47, 0.38, 0.19, 0.41, 0.26}, {1.3, 0.4, 3.5, 1.7, 3.3},
       {1.21, 1.01, -0.09, 1.60, -0.08}, {0.26, -1.01, -0.09, -0.68, 0.53}},
      {"ghz", {0.48, 0.31, 0.38, 0.23, 0.24}, {4.0, 1.5, 2.8, 2.4, 4.3},
       {0.13, -0.04, -0.08, -0.04, -0.04}, {0.56, 0.07, 0.24, 0.08, -0.44}},
  };
  return rows;
}

inline PumpProfile row_pump(const ReferenceRow& r) {
  PumpProfile p;
  for (std::size_t j = 0; j < r.eta_e2.size(); ++j) {
    p.amplitudes.push_back(r.eta_e2[j] * 1e-2);
    p.phases.push_back(r.phi_pi[j] * M_PI);
  }
  return p;
}

inline std::vector<double> row_theta(const ReferenceRow& r) {
  std::vector<double> t;
  for (double v : r.theta_pi) t.push_back(v * M_PI);
  return t;
}

inline double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace anw::test
