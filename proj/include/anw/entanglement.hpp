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

// Multipartite entanglement witnesses: van Loock-Furusawa inequalities and
// cluster-state nullifiers, plus the cluster-basis transforms used to emulate a
// cluster from nonlinear supermodes.

#include "anw/measurement.hpp"

#include <string>
#include <vector>

namespace anw {

/// Node pair whose normalized nullifier variances must sum below `bound` for
/// full inseparability.
struct InseparabilityBound {
  Index first;
  Index second;
  double bound;
};

/// Unit-weight graph. Node i is read out on mode labeling[i]. A nonzero
/// lo_rotation[i] shifts the LO of node i by that angle relative to the graph's
/// own nullifiers; the GHZ preset is the star graph with a quarter turn on
/// every leaf.
struct GraphSpec {
  RealMatrix adjacency;
  std::vector<Index> labeling;
  std::vector<double> lo_rotation;
  std::string preset = "custom";
  std::vector<InseparabilityBound> bounds;
  /// Row i is normalized nullifier i over node quadratures (x_1..x_N, y_1..y_N).
  RealMatrix nullifiers;

  Index size() const { return adjacency.rows(); }
  void validate() const;

  static GraphSpec linear(Index n);
  static GraphSpec pentagon();
  static GraphSpec star();
  static GraphSpec pyramid();
  static GraphSpec ghz();
  /// "linear", "pentagon", "star", "pyramid" or "ghz" (five nodes).
  static GraphSpec from_preset(const std::string& name);
  static GraphSpec custom(RealMatrix adjacency, std::vector<Index> labeling = {},
                          std::vector<InseparabilityBound> bounds = {});

  /// Same graph with nodes renumbered: node p[i] of the result is node i here.
  GraphSpec relabeled(const std::vector<Index>& p) const;
};

/// Preset names accepted by GraphSpec::from_preset.
const std::vector<std::string>& graph_presets();

// ---------------------------------------------------------------------------
// van Loock-Furusawa

/// rho_i = V[x_i - x_{i+1}] + V[y_i + y_{i+1} + sum_{j != i,i+1} G_j y_j] for
/// 0 <= i < N-1, generalized quadratures at angles theta. One gain vector of
/// length N is shared by every inequality.
double vlf_rho(const RealMatrix& covariance, std::span<const double> theta,
               std::span<const double> gains, Index i);
std::vector<double> vlf_all(const RealMatrix& covariance, std::span<const double> theta,
                            std::span<const double> gains);

constexpr double kVlfThreshold = 4.0;

// ---------------------------------------------------------------------------
// Nullifiers

/// Normalized nullifiers (y_i - sum_j J_ij x_j) / sqrt(1 + n(i)), with the
/// pyramid and GHZ presets using their alternative sets. Angles are per mode.
std::vector<QuadratureCombination> nullifiers_for(const GraphSpec& graph,
                                                  std::span<const double> theta);

std::vector<double> nullifier_variances(const RealMatrix& covariance, const GraphSpec& graph,
                                        std::span<const double> theta);

struct BoundCheck {
  Index first;
  Index second;
  double sum;
  double bound;
  bool passed;
};

struct CertificationReport {
  std::vector<double> nullifier_variances;
  std::vector<double> vlf;  // rho_i at the same angles and the supplied gains
  std::vector<BoundCheck> bounds;
  bool nullifiers_below_shot_noise = false;
  bool inseparable = false;
  bool passed = false;
  std::vector<double> theta;
  std::vector<double> gains;
  std::string graph;
};

/// Certifies a cluster: every normalized nullifier variance below 1 and every
/// inseparability sum below its bound. Throws Error{config} for a custom graph
/// without bounds.
CertificationReport certify(const RealMatrix& covariance, const GraphSpec& graph,
                            std::span<const double> theta,
                            std::span<const double> gains = {});
CertificationReport certify(const GaussianState& state, const GraphSpec& graph,
                            std::span<const double> theta,
                            std::span<const double> gains = {});

// ---------------------------------------------------------------------------
// Cluster transforms

struct ClusterTransform {
  RealMatrix x_s;  // (J^2 + I)^{-1/2}
  RealMatrix y_s;  // J X_s
  SymplecticMatrix s_c;
};

/// S_C = [[X_s, -Y_s], [Y_s, X_s]], followed by D_LO of the graph's LO rotation.
/// Turns y-squeezed vacua into the cluster.
ClusterTransform cluster_transform(const GraphSpec& graph);

/// S_LO = S_C Obar(euler) R1^T.
SymplecticMatrix s_lo(const GraphSpec& graph, const BlochMessiahFactorization& bm,
                      std::span<const double> euler);

/// Frobenius distance between S_LO and the emulation Obar_post(post) D_LO(theta).
double emulation_error(const GraphSpec& graph, const BlochMessiahFactorization& bm,
                       std::span<const double> euler, std::span<const double> theta,
                       std::span<const double> post_euler);

/// Obar_post(post) D_LO(theta).
RealMatrix emulation_matrix(std::span<const double> theta, std::span<const double> post_euler);

/// Nullifier variances of P V P^T with P = Obar_post(post) D_LO(theta), read at
/// zero LO phase: the cluster emulated by homodyne detection and electronic
/// postprocessing.
std::vector<double> emulated_nullifier_variances(const RealMatrix& covariance,
                                                 const GraphSpec& graph,
                                                 std::span<const double> theta,
                                                 std::span<const double> post_euler);

/// Nullifier variances of S_LO V S_LO^T at zero LO phase: the cluster measured
/// with a shaped local oscillator.
std::vector<double> shaped_lo_nullifier_variances(const RealMatrix& covariance,
                                                  const GraphSpec& graph,
                                                  const BlochMessiahFactorization& bm,
                                                  std::span<const double> euler);

}  // namespace anw
