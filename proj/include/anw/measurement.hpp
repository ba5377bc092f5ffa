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

// Homodyne detection. Generalized quadratures follow the local-oscillator
// convention x(theta) = cos(theta) x + sin(theta) y, y(theta) = x(theta + pi/2).
// Variances are in shot-noise units (vacuum = 1). Mode indices are 0-based.

#include "anw/model.hpp"

#include <span>
#include <vector>

namespace anw {

struct MeasurementConfig {
  std::vector<double> lo_phases;  // theta_i
  std::vector<double> gains;      // G_i
  Basis basis = Basis::individual;

  void validate(Index n) const;
};

/// Linear combination of the generalized quadratures
/// (x_1(theta_1) .. x_N(theta_N), y_1(theta_1) .. y_N(theta_N)).
struct QuadratureCombination {
  RealVector coefficients;    // 2N
  std::vector<double> angles; // theta, N

  void validate(Index n) const;
};

/// V' = T V T^T, S' = T S. Throws Error{not_symplectic} if T is not symplectic.
GaussianState change_basis(const GaussianState& state, const RealMatrix& t, Basis tag);

/// Variance of x_i(theta) = cos(theta) x_i + sin(theta) y_i.
double variance_at(const GaussianState& state, Index mode, double theta);

struct QuadratureExtremum {
  double variance;
  double angle;  // in (-pi/2, pi/2]
};

/// Smallest variance over all generalized quadratures of one mode. An isotropic
/// mode reports angle 0.
QuadratureExtremum min_variance(const GaussianState& state, Index mode);
QuadratureExtremum max_variance(const GaussianState& state, Index mode);

double combination_variance(const RealMatrix& covariance, const QuadratureCombination& combo);
double combination_variance(const GaussianState& state, const QuadratureCombination& combo);

/// 10 log10(variance). Throws for variance <= 0.
double squeezing_db(double variance);

/// tr(V - I) / 4.
double mean_photon_number(const RealMatrix& covariance);

/// Wraps an angle to (-pi/2, pi/2].
double wrap_half_turn(double angle);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

}  // namespace anw
