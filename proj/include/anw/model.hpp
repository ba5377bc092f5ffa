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

// Propagation of signal light in an array of evanescently coupled chi(2)
// waveguides pumped below depletion. Lengths are in mm, coupling constants and
// pump strengths in 1/mm.
//
// Equations of motion in the individual-waveguide basis:
//
//     dA_j/dz = i C0 (f_{j-1} A_{j-1} + f_j A_{j+1}) + 2 i eta_j A_j^dagger
//
// Three bases are used: individual waveguides A, linear supermodes
// B_k = sum_j M_kj A_j (lab frame), and nonlinear supermodes C = Upsilon B~,
// where B~_k = B_k exp(-i lambda_k z) is the slowly varying amplitude.

#include "anw/symplectic.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace anw {

struct ArrayConfig {
  Index n = 1;
  double coupling_strength = 0.0;        // C0
  std::vector<double> coupling_profile;  // f_1 .. f_{N-1}
  double length = 1.0;                   // L

  static ArrayConfig homogeneous(Index n, double coupling_strength, double length);

  /// Throws Error{invalid_argument} on a malformed config.
  void validate() const;

  /// Symmetric tridiagonal matrix with C0 f_j off the diagonal.
  RealMatrix coupling_matrix() const;
};

struct PumpProfile {
  std::vector<double> amplitudes;  // |eta_j|
  std::vector<double> phases;      // phi_j, radians

  static PumpProfile flat(Index n, double amplitude, double phase = 0.0);
  static PumpProfile zero(Index n) { return flat(n, 0.0); }

  Index size() const { return static_cast<Index>(amplitudes.size()); }
  void validate(Index n) const;
  ComplexVector complex_amplitudes() const;
  bool is_flat(double tol = 1e-14) const;
  PumpProfile scaled(double factor) const;
};

struct LinearSupermodes {
  RealMatrix modes;        // row k is supermode k; orthogonal
  RealVector eigenvalues;  // descending
};

enum class Basis { individual, linear_supermode, nonlinear_supermode };

std::string_view to_string(Basis b);
Basis basis_from_string(std::string_view name);

struct GaussianState {
  double z = 0.0;
  SymplecticMatrix propagator;
  RealMatrix covariance;  // S S^T, shot noise = 1
  Basis basis = Basis::individual;

  static GaussianState from_propagator(double z, SymplecticMatrix s, Basis basis);
  static GaussianState vacuum(Index modes, Basis basis = Basis::individual);

  Index modes() const { return covariance.rows() / 2; }
};

LinearSupermodes linear_supermodes(const ArrayConfig& cfg);

/// Passive map from individual-mode quadratures to linear-supermode quadratures.
SymplecticMatrix linear_supermode_transform(const LinearSupermodes& modes);

/// Local joint-spatial supermode distribution L(z), complex symmetric.
ComplexMatrix coupling_matrix_L(const ArrayConfig& cfg, const PumpProfile& pump,
                                const LinearSupermodes& modes, double z);

/// Closed-form integral of L over [0, z].
ComplexMatrix integrated_L(const ArrayConfig& cfg, const PumpProfile& pump,
                           const LinearSupermodes& modes, double z);

/// Real 2N x 2N generator Q with d(x, y)/dz = Q (x, y).
RealMatrix quadrature_generator(const ArrayConfig& cfg, const PumpProfile& pump);

/// S(z) = exp(Q z), individual basis.
GaussianState propagator_exact(const ArrayConfig& cfg, const PumpProfile& pump, double z);

/// Classical fourth-order Runge-Kutta integration of dS/dz = Q S with S(0) = I.
/// Independent of the matrix exponential; used as an oracle.
RealMatrix propagator_rk4(const ArrayConfig& cfg, const PumpProfile& pump, double z,
                          double step = 1e-3);

/// Propagator that neglects space ordering: the exponential of the block matrix
/// [[0, int L], [int L^*, 0]], expressed for lab-frame linear supermodes.
GaussianState propagator_no_ordering(const ArrayConfig& cfg, const PumpProfile& pump,
                                     double z);

struct NonlinearSupermodes {
  ComplexMatrix unitary;  // Upsilon: Upsilon (int L) Upsilon^T = diag(gains)
  RealVector gains;       // r_m, descending
  RealVector eigenvalues; // lambda_k of the underlying linear supermodes
  double z = 0.0;

  /// Propagator rebuilt from the single-mode squeezers, in the lab-frame
  /// linear-supermode basis.
  SymplecticMatrix linear_supermode_propagator() const;

  /// Passive map from lab-frame linear-supermode quadratures to
  /// nonlinear-supermode quadratures.
  SymplecticMatrix basis_transform() const;
};

NonlinearSupermodes nonlinear_supermodes(const ArrayConfig& cfg, const PumpProfile& pump,
                                         double z);

/// Per-supermode 2x2 propagators for a flat pump, closed form valid at any gain.
/// Blocks act on the lab-frame (x_k, y_k) of linear supermode k.
std::vector<Eigen::Matrix2d> flat_pump_analytic(const ArrayConfig& cfg, cplx eta, double z);

/// The blocks of flat_pump_analytic assembled into a linear-supermode state.
GaussianState flat_pump_propagator(const ArrayConfig& cfg, cplx eta, double z);

/// pi / (2 F_k) with F_k = sqrt(lambda_k^2 - 4|eta|^2); infinity when F_k is
/// not real.
double flat_pump_period(double lambda, double eta_abs);

}  // namespace anw
