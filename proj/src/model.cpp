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

#include "anw/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace anw {

namespace {

constexpr cplx kI{0.0, 1.0};

// Below this |lambda_k + lambda_k'| the phase integral is taken as z.
constexpr double kDetuningThreshold = 1e-12;

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

ArrayConfig ArrayConfig::homogeneous(Index n, double coupling_strength, double length) {
  ArrayConfig cfg;
  cfg.n = n;
  cfg.coupling_strength = coupling_strength;
  cfg.coupling_profile.assign(static_cast<std::size_t>(std::max<Index>(n - 1, 0)), 1.0);
  cfg.length = length;
  return cfg;
}

void ArrayConfig::validate() const {
  require(n >= 1, ErrorCode::invalid_argument, "array needs at least one waveguide");
  require(std::isfinite(coupling_strength) && coupling_strength >= 0.0,
          ErrorCode::invalid_argument, "coupling strength must be finite and >= 0");
  if (static_cast<Index>(coupling_profile.size()) != n - 1) {
    std::ostringstream msg;
    msg << "coupling profile needs N-1 = " << n - 1 << " entries, got "
        << coupling_profile.size();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  for (double f : coupling_profile) {
    require(std::isfinite(f) && f >= 0.0, ErrorCode::invalid_argument,
            "coupling profile entries must be finite and >= 0");
  }
  require(std::isfinite(length) && length > 0.0, ErrorCode::invalid_argument,
          "array length must be > 0");
}

RealMatrix ArrayConfig::coupling_matrix() const {
  validate();
  RealMatrix c = RealMatrix::Zero(n, n);
  for (Index j = 0; j + 1 < n; ++j) {
    const double cj = coupling_strength * coupling_profile[static_cast<std::size_t>(j)];
    c(j, j + 1) = cj;
    c(j + 1, j) = cj;
  }
  return c;
}

PumpProfile PumpProfile::flat(Index n, double amplitude, double phase) {
  PumpProfile p;
  p.amplitudes.assign(static_cast<std::size_t>(n), amplitude);
  p.phases.assign(static_cast<std::size_t>(n), phase);
  return p;
}

void PumpProfile::validate(Index n) const {
  if (static_cast<Index>(amplitudes.size()) != n ||
      static_cast<Index>(phases.size()) != n) {
    std::ostringstream msg;
    msg << "pump profile needs " << n << " amplitudes and phases, got "
        << amplitudes.size() << " and " << phases.size();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  for (std::size_t j = 0; j < amplitudes.size(); ++j) {
    require(std::isfinite(amplitudes[j]) && amplitudes[j] >= 0.0,
            ErrorCode::invalid_argument, "pump amplitudes must be finite and >= 0");
    require(std::isfinite(phases[j]), ErrorCode::invalid_argument,
            "pump phases must be finite");
  }
}

ComplexVector PumpProfile::complex_amplitudes() const {
  ComplexVector eta(size());
  for (Index j = 0; j < size(); ++j) {
    eta(j) = std::polar(amplitudes[static_cast<std::size_t>(j)],
                        phases[static_cast<std::size_t>(j)]);
  }
  return eta;
}

bool PumpProfile::is_flat(double tol) const {
  const ComplexVector eta = complex_amplitudes();
  for (Index j = 1; j < eta.size(); ++j) {
    if (std::abs(eta(j) - eta(0)) > tol) return false;
  }
  return true;
}

PumpProfile PumpProfile::scaled(double factor) const {
  PumpProfile p = *this;
  for (double& a : p.amplitudes) a *= factor;
  return p;
}

std::string_view to_string(Basis b) {
  switch (b) {
    case Basis::individual: return "individual";
    case Basis::linear_supermode: return "linear_supermode";
    case Basis::nonlinear_supermode: return "nonlinear_supermode";
  }
  return "individual";
}

Basis basis_from_string(std::string_view name) {
  if (name == "individual") return Basis::individual;
  if (name == "linear_supermode") return Basis::linear_supermode;
  if (name == "nonlinear_supermode") return Basis::nonlinear_supermode;
  throw Error(ErrorCode::config, "unknown basis '" + std::string(name) + "'");
}

GaussianState GaussianState::from_propagator(double z, SymplecticMatrix s, Basis basis) {
  GaussianState st;
  st.z = z;
  RealMatrix v = s.matrix() * s.matrix().transpose();
  st.covariance = 0.5 * (v + v.transpose());
  st.propagator = std::move(s);
  st.basis = basis;
  return st;
}

GaussianState GaussianState::vacuum(Index modes, Basis basis) {
  return from_propagator(0.0, SymplecticMatrix::identity(modes), basis);
}

// ---------------------------------------------------------------------------
// Linear supermodes

LinearSupermodes linear_supermodes(const ArrayConfig& cfg) {
  cfg.validate();
  const Index n = cfg.n;
  LinearSupermodes out;
  if (n == 1) {
    out.modes = RealMatrix::Ones(1, 1);
    out.eigenvalues = RealVector::Zero(1);
    return out;
  }
  RealVector diag = RealVector::Zero(n);
  RealVector sub(n - 1);
  for (Index j = 0; j + 1 < n; ++j) {
    sub(j) = cfg.coupling_strength * cfg.coupling_profile[static_cast<std::size_t>(j)];
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  require(eig.info() == Eigen::Success, ErrorCode::internal,
          "tridiagonal eigensolver did not converge");

  out.modes.resize(n, n);
  out.eigenvalues.resize(n);
  for (Index k = 0; k < n; ++k) {
    const Index src = n - 1 - k;  // ascending -> descending
    RealVector v = eig.eigenvectors().col(src);
    // Sign convention: first component above round-off is positive.
    for (Index j = 0; j < n; ++j) {
      if (std::abs(v(j)) > 1e-12) {
        if (v(j) < 0) v = -v;
        break;
      }
    }
    out.modes.row(k) = v.transpose();
    out.eigenvalues(k) = eig.eigenvalues()(src);
  }
  return out;
}

SymplecticMatrix linear_supermode_transform(const LinearSupermodes& modes) {
  return SymplecticMatrix::trusted(block_diagonal(modes.modes));
}

// ---------------------------------------------------------------------------
// Coupling matrix

namespace {

// c_kk' = 2 i sum_j eta_j M_kj M_k'j
ComplexMatrix pump_overlap(const PumpProfile& pump, const LinearSupermodes& modes) {
  const ComplexVector eta = pump.complex_amplitudes();
  const ComplexMatrix m = modes.modes.cast<cplx>();
  ComplexMatrix c = 2.0 * kI * (m * eta.asDiagonal() * m.transpose());
  return 0.5 * (c + c.transpose());
}

void check_inputs(const ArrayConfig& cfg, const PumpProfile& pump,
                  const LinearSupermodes& modes, double z) {
  cfg.validate();
  pump.validate(cfg.n);
  require(modes.modes.rows() == cfg.n && modes.modes.cols() == cfg.n &&
              modes.eigenvalues.size() == cfg.n,
          ErrorCode::dimension_mismatch, "supermodes do not match the array size");
  require(std::isfinite(z) && z >= 0.0, ErrorCode::invalid_argument,
          "propagation distance must be >= 0");
}

}  // namespace

ComplexMatrix coupling_matrix_L(const ArrayConfig& cfg, const PumpProfile& pump,
                                const LinearSupermodes& modes, double z) {
  check_inputs(cfg, pump, modes, z);
  ComplexMatrix l = pump_overlap(pump, modes);
  for (Index k = 0; k < cfg.n; ++k) {
    for (Index kk = 0; kk < cfg.n; ++kk) {
      const double s = modes.eigenvalues(k) + modes.eigenvalues(kk);
      l(k, kk) *= std::exp(-kI * (s * z));
    }
  }
  return l;
}

ComplexMatrix integrated_L(const ArrayConfig& cfg, const PumpProfile& pump,
                           const LinearSupermodes& modes, double z) {
  check_inputs(cfg, pump, modes, z);
  ComplexMatrix l = pump_overlap(pump, modes);
  for (Index k = 0; k < cfg.n; ++k) {
    for (Index kk = 0; kk < cfg.n; ++kk) {
      const double s = modes.eigenvalues(k) + modes.eigenvalues(kk);
      cplx integral;
      if (std::abs(s) < kDetuningThreshold) {
        integral = z;
      } else {
        // (1 - e^{-i s z}) / (i s) written without cancellation.
        const double half = 0.5 * s * z;
        const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
        integral = z * sinc * std::exp(-kI * half);
      }
      l(k, kk) *= integral;
    }
  }
  return l;
}

// ---------------------------------------------------------------------------
// Propagators

RealMatrix quadrature_generator(const ArrayConfig& cfg, const PumpProfile& pump) {
  const RealMatrix c = cfg.coupling_matrix();
  pump.validate(cfg.n);
  const Index n = cfg.n;
  const ComplexVector eta = pump.complex_amplitudes();
  const RealMatrix a = (2.0 * eta.real()).asDiagonal();
  const RealMatrix b = (2.0 * eta.imag()).asDiagonal();
  RealMatrix q(2 * n, 2 * n);
  q.topLeftCorner(n, n) = -b;
  q.topRightCorner(n, n) = a - c;
  q.bottomLeftCorner(n, n) = a + c;
  q.bottomRightCorner(n, n) = b;
  return q;
}

GaussianState propagator_exact(const ArrayConfig& cfg, const PumpProfile& pump, double z) {
  require(std::isfinite(z) && z >= 0.0, ErrorCode::invalid_argument,
          "propagation distance must be >= 0");
  const RealMatrix q = quadrature_generator(cfg, pump);
  return GaussianState::from_propagator(z, SymplecticMatrix::trusted(mat_exp(RealMatrix(q * z))),
                                        Basis::individual);
}

RealMatrix propagator_rk4(const ArrayConfig& cfg, const PumpProfile& pump, double z,
                          double step) {
  require(std::isfinite(z) && z >= 0.0, ErrorCode::invalid_argument,
          "propagation distance must be >= 0");
  require(step > 0.0, ErrorCode::invalid_argument, "RK4 step must be > 0");
  const RealMatrix q = quadrature_generator(cfg, pump);
  const Index dim = q.rows();
  RealMatrix s = RealMatrix::Identity(dim, dim);
  if (z == 0.0) return s;
  const auto steps = static_cast<long>(std::ceil(z / step - 1e-9));
  const double h = z / static_cast<double>(steps);
  RealMatrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim);
  for (long i = 0; i < steps; ++i) {
    k1.noalias() = q * s;
    k2.noalias() = q * (s + 0.5 * h * k1);
    k3.noalias() = q * (s + 0.5 * h * k2);
    k4.noalias() = q * (s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

namespace {

// Rotation from slowly varying amplitudes B~ to lab-frame B: B = e^{i lambda z} B~.
ComplexMatrix propagation_phase(const RealVector& eigenvalues, double z) {
  ComplexVector ph(eigenvalues.size());
  for (Index k = 0; k < eigenvalues.size(); ++k) ph(k) = std::exp(kI * (eigenvalues(k) * z));
  return ph.asDiagonal();
}

}  // namespace

GaussianState propagator_no_ordering(const ArrayConfig& cfg, const PumpProfile& pump,
                                     double z) {
  const LinearSupermodes modes = linear_supermodes(cfg);
  const ComplexMatrix il = integrated_L(cfg, pump, modes, z);
  const Index n = cfg.n;
  ComplexMatrix block = ComplexMatrix::Zero(2 * n, 2 * n);
  block.topRightCorner(n, n) = il;
  block.bottomLeftCorner(n, n) = il.conjugate();
  const ComplexMatrix e = mat_exp(block);
  const RealMatrix slow =
      quadrature_from_bogoliubov(e.topLeftCorner(n, n), e.topRightCorner(n, n));
  const RealMatrix lab = passive_from_unitary(propagation_phase(modes.eigenvalues, z)) * slow;
  return GaussianState::from_propagator(z, SymplecticMatrix::trusted(lab),
                                        Basis::linear_supermode);
}

SymplecticMatrix NonlinearSupermodes::linear_supermode_propagator() const {
  const Index n = gains.size();
  RealVector k(2 * n);
  for (Index m = 0; m < n; ++m) {
    k(m) = std::exp(gains(m));
    k(n + m) = std::exp(-gains(m));
  }
  // B~(z) = Upsilon^dag (cosh r) Upsilon B~(0) + Upsilon^dag (sinh r) conj(Upsilon) B~(0)^dag
  const RealMatrix slow = passive_from_unitary(unitary.adjoint()) * k.asDiagonal() *
                          passive_from_unitary(unitary);
  return SymplecticMatrix::trusted(passive_from_unitary(propagation_phase(eigenvalues, z)) *
                                   slow);
}

SymplecticMatrix NonlinearSupermodes::basis_transform() const {
  // C = Upsilon B~ = Upsilon e^{-i lambda z} B
  return SymplecticMatrix::trusted(
      passive_from_unitary(unitary * propagation_phase(-eigenvalues, z)));
}

NonlinearSupermodes nonlinear_supermodes(const ArrayConfig& cfg, const PumpProfile& pump,
                                         double z) {
  const LinearSupermodes modes = linear_supermodes(cfg);
  ComplexMatrix il = integrated_L(cfg, pump, modes, z);
  il = 0.5 * (il + il.transpose()).eval();
  TakagiFactorization t = takagi(il);
  NonlinearSupermodes out;
  out.unitary = std::move(t.unitary);
  out.gains = std::move(t.values);
  out.eigenvalues = modes.eigenvalues;
  out.z = z;
  return out;
}

// ---------------------------------------------------------------------------
// Flat pump

std::vector<Eigen::Matrix2d> flat_pump_analytic(const ArrayConfig& cfg, cplx eta,
                                                double z) {
  require(std::isfinite(z) && z >= 0.0, ErrorCode::invalid_argument,
          "propagation distance must be >= 0");
  const LinearSupermodes modes = linear_supermodes(cfg);
  std::vector<Eigen::Matrix2d> blocks;
  blocks.reserve(static_cast<std::size_t>(cfg.n));
  for (Index k = 0; k < cfg.n; ++k) {
    const double lambda = modes.eigenvalues(k);
    const cplx f = std::sqrt(cplx(lambda * lambda - 4.0 * std::norm(eta)));
    const cplx fz = f * z;
    // sin(F z) / F and cos(F z) are even in F, so the branch is irrelevant and
    // an imaginary F turns them into sinh / cosh.
    const cplx sinc = std::abs(fz) < 1e-6 ? z * (1.0 - fz * fz / 6.0) : std::sin(fz) / f;
    const cplx alpha = std::cos(fz) + kI * lambda * sinc;
    const cplx beta = 2.0 * kI * eta * sinc;
    Eigen::Matrix2d b;
    b << (alpha + beta).real(), -(alpha - beta).imag(), (alpha + beta).imag(),
        (alpha - beta).real();
    blocks.push_back(b);
  }
  return blocks;
}

GaussianState flat_pump_propagator(const ArrayConfig& cfg, cplx eta, double z) {
  const auto blocks = flat_pump_analytic(cfg, eta, z);
  const Index n = cfg.n;
  RealMatrix s = RealMatrix::Zero(2 * n, 2 * n);
  for (Index k = 0; k < n; ++k) {
    const Eigen::Matrix2d& b = blocks[static_cast<std::size_t>(k)];
    s(k, k) = b(0, 0);
    s(k, n + k) = b(0, 1);
    s(n + k, k) = b(1, 0);
    s(n + k, n + k) = b(1, 1);
  }
  return GaussianState::from_propagator(z, SymplecticMatrix::trusted(std::move(s)),
                                        Basis::linear_supermode);
}

double flat_pump_period(double lambda, double eta_abs) {
  const double f2 = lambda * lambda - 4.0 * eta_abs * eta_abs;
  if (f2 <= 0.0) return std::numeric_limits<double>::infinity();
  return M_PI / (2.0 * std::sqrt(f2));
}

}  // namespace anw
