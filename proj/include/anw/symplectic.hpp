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

// Dense numerical kernel shared by the rest of the library.
//
// Every phase-space matrix uses the quadrature ordering
// (x_1, ..., x_N, y_1, ..., y_N) with a = (x + i y) / 2, so the vacuum
// covariance is the identity and the symplectic form is
//
//     Omega = [[0, I], [-I, 0]].

#include "anw/core.hpp"

#include <span>
#include <vector>

namespace anw {

RealMatrix symplectic_form(Index modes);

/// max |S Omega S^T - Omega|.
double symplectic_residual(const RealMatrix& s);

/// A 2N x 2N real matrix known to preserve Omega.
class SymplecticMatrix {
 public:
  SymplecticMatrix() = default;

  /// Validates S Omega S^T = Omega. The tolerance is scaled by max(1, |S|^2)
  /// since that is the attainable floating-point accuracy of the product.
  static SymplecticMatrix checked(RealMatrix s, double tol = 1e-9);

  /// Wraps a matrix produced by a construction that is symplectic by design.
  static SymplecticMatrix trusted(RealMatrix s);

  static SymplecticMatrix identity(Index modes);

  const RealMatrix& matrix() const noexcept { return m_; }
  Index modes() const noexcept { return m_.rows() / 2; }

  SymplecticMatrix operator*(const SymplecticMatrix& rhs) const {
    return trusted(m_ * rhs.m_);
  }
  SymplecticMatrix transpose() const { return trusted(m_.transpose()); }

 private:
  explicit SymplecticMatrix(RealMatrix m) : m_(std::move(m)) {}
  RealMatrix m_;
};

/// Quadrature matrix of the Bogoliubov map a -> alpha a + beta a^dagger.
RealMatrix quadrature_from_bogoliubov(const ComplexMatrix& alpha,
                                      const ComplexMatrix& beta);

/// Quadrature matrix of the passive map a -> U a.
RealMatrix passive_from_unitary(const ComplexMatrix& u);

/// diag(O, O) for a real N x N matrix O.
RealMatrix block_diagonal(const RealMatrix& o);

// ---------------------------------------------------------------------------
// Matrix exponential

/// exp(A) by scaling and squaring with the degree-13 Pade approximant.
/// Throws Error{dimension_mismatch} for non-square input.
RealMatrix mat_exp(const RealMatrix& a);
ComplexMatrix mat_exp(const ComplexMatrix& a);

// ---------------------------------------------------------------------------
// Factorizations

/// Autonne-Takagi factorization: unitary * W * unitary^T = diag(values).
struct TakagiFactorization {
  ComplexMatrix unitary;
  RealVector values;  // non-negative, descending
};

/// Takagi factorization of a complex symmetric matrix, built on the SVD with a
/// phase correction from the square root of the symmetric unitary U^dag conj(V).
/// Rejects inputs with max |W - W^T| >= asymmetry_tol.
TakagiFactorization takagi(const ComplexMatrix& w, double asymmetry_tol = 1e-12);

/// S = R1 K R2 with R1, R2 orthogonal symplectic and K = diag(e^r, e^-r).
/// Only R1 and r are kept: V = S S^T = R1 K^2 R1^T.
struct BlochMessiahFactorization {
  SymplecticMatrix passive;  // R1
  RealVector squeezing;      // r_m >= 0, descending

  /// diag(e^{2r}, e^{-2r}).
  RealVector covariance_spectrum() const;
  RealMatrix covariance() const;
};

BlochMessiahFactorization bloch_messiah(const SymplecticMatrix& s);

// ---------------------------------------------------------------------------
// Parametrized constructors

/// N x N rotation built as the ordered product of Givens rotations in the
/// planes (1,2), (1,3), ..., (N-1,N); takes N(N-1)/2 angles.
RealMatrix euler_orthogonal(std::span<const double> angles, Index n);

inline Index euler_angle_count(Index n) { return n * (n - 1) / 2; }

/// Local-oscillator phase matrix [[cos theta, sin theta], [-sin theta, cos theta]]
/// with diagonal blocks. Maps (x, y) onto (x(theta), y(theta)).
SymplecticMatrix d_lo(std::span<const double> theta);

}  // namespace anw
