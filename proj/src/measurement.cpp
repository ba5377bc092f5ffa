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

#include "anw/measurement.hpp"

#include <cmath>
#include <sstream>

namespace anw {

void MeasurementConfig::validate(Index n) const {
  require(static_cast<Index>(lo_phases.size()) == n, ErrorCode::dimension_mismatch,
          "measurement needs one LO phase per mode");
  require(gains.empty() || static_cast<Index>(gains.size()) == n,
          ErrorCode::dimension_mismatch, "measurement needs one gain per mode");
}

void QuadratureCombination::validate(Index n) const {
  require(coefficients.size() == 2 * n && static_cast<Index>(angles.size()) == n,
          ErrorCode::dimension_mismatch,
          "quadrature combination does not match the number of modes");
  require(coefficients.cwiseAbs().maxCoeff() > 0.0, ErrorCode::invalid_argument,
          "quadrature combination has no nonzero coefficient");
}

GaussianState change_basis(const GaussianState& state, const RealMatrix& t, Basis tag) {
  require(t.rows() == state.covariance.rows() && t.cols() == t.rows(),
          ErrorCode::dimension_mismatch, "basis transform does not match the state");
  const SymplecticMatrix tm = SymplecticMatrix::checked(t);
  GaussianState out;
  out.z = state.z;
  out.propagator = tm * state.propagator;
  const RealMatrix v = t * state.covariance * t.transpose();
  out.covariance = 0.5 * (v + v.transpose());
  out.basis = tag;
  return out;
}

namespace {

void check_mode(const GaussianState& state, Index mode) {
  if (mode < 0 || mode >= state.modes()) {
    std::ostringstream msg;
    msg << "mode index " << mode << " out of range for " << state.modes() << " modes";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
}

struct Block {
  double xx, xy, yy;
};

Block mode_block(const GaussianState& state, Index mode) {
  check_mode(state, mode);
  const Index n = state.modes();
  const RealMatrix& v = state.covariance;
  return {v(mode, mode), 0.5 * (v(mode, n + mode) + v(n + mode, mode)),
          v(n + mode, n + mode)};
}

}  // namespace

double variance_at(const GaussianState& state, Index mode, double theta) {
  const Block b = mode_block(state, mode);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return c * c * b.xx + 2.0 * c * s * b.xy + s * s * b.yy;
}

double wrap_half_turn(double angle) {
  double a = std::remainder(angle, M_PI);  // [-pi/2, pi/2]
  if (a <= -M_PI / 2) a += M_PI;
  return a;
}

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * M_PI);  // [-pi, pi]
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

namespace {

QuadratureExtremum extremum(const GaussianState& state, Index mode, bool minimum) {
  const Block b = mode_block(state, mode);
  const double mean = 0.5 * (b.xx + b.yy);
  const double half_diff = 0.5 * (b.xx - b.yy);
  const double radius = std::hypot(half_diff, b.xy);
  if (radius <= 1e-14 * std::max(1.0, mean)) return {mean, 0.0};
  // variance(theta) = mean + radius cos(2 theta - atan2(2 xy, xx - yy))
  const double max_angle = 0.5 * std::atan2(2.0 * b.xy, b.xx - b.yy);
  if (minimum) return {mean - radius, wrap_half_turn(max_angle + M_PI / 2)};
  return {mean + radius, wrap_half_turn(max_angle)};
}

}  // namespace

QuadratureExtremum min_variance(const GaussianState& state, Index mode) {
  return extremum(state, mode, true);
}

QuadratureExtremum max_variance(const GaussianState& state, Index mode) {
  return extremum(state, mode, false);
}

double combination_variance(const RealMatrix& covariance,
                            const QuadratureCombination& combo) {
  const Index n = covariance.rows() / 2;
  combo.validate(n);
  // Coefficients on generalized quadratures pulled back to (x, y): c^T D_LO.
  RealVector w(2 * n);
  for (Index i = 0; i < n; ++i) {
    const double c = std::cos(combo.angles[static_cast<std::size_t>(i)]);
    const double s = std::sin(combo.angles[static_cast<std::size_t>(i)]);
    const double cx = combo.coefficients(i);
    const double cy = combo.coefficients(n + i);
    w(i) = c * cx - s * cy;
    w(n + i) = s * cx + c * cy;
  }
  return w.dot(covariance * w);
}

double combination_variance(const GaussianState& state, const QuadratureCombination& combo) {
  return combination_variance(state.covariance, combo);
}

double squeezing_db(double variance) {
  require(variance > 0.0 && std::isfinite(variance), ErrorCode::invalid_argument,
          "squeezing_db requires a positive variance");
  return 10.0 * std::log10(variance);
}

double mean_photon_number(const RealMatrix& covariance) {
  return 0.25 * (covariance.trace() - static_cast<double>(covariance.rows()));
}

}  // namespace anw
