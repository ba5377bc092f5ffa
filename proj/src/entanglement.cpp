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

#include "anw/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace anw {

namespace {

RealMatrix generic_nullifiers(const RealMatrix& j) {
  const Index n = j.rows();
  RealMatrix out = RealMatrix::Zero(n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    out(i, n + i) = 1.0;
    for (Index k = 0; k < n; ++k) out(i, k) = -j(i, k);
    out.row(i) /= std::sqrt(1.0 + j.row(i).sum());
  }
  return out;
}

std::vector<Index> identity_labeling(Index n) {
  std::vector<Index> l(static_cast<std::size_t>(n));
  std::iota(l.begin(), l.end(), Index{0});
  return l;
}

GraphSpec make_graph(RealMatrix j, std::string preset,
                     std::vector<InseparabilityBound> bounds) {
  GraphSpec g;
  const Index n = j.rows();
  g.nullifiers = generic_nullifiers(j);
  g.adjacency = std::move(j);
  g.labeling = identity_labeling(n);
  g.lo_rotation.assign(static_cast<std::size_t>(n), 0.0);
  g.preset = std::move(preset);
  g.bounds = std::move(bounds);
  return g;
}

void connect(RealMatrix& j, Index a, Index b) {
  j(a, b) = 1.0;
  j(b, a) = 1.0;
}

RealMatrix star_adjacency() {
  RealMatrix j = RealMatrix::Zero(5, 5);
  for (Index i : {0, 1, 3, 4}) connect(j, 2, i);
  return j;
}

std::vector<InseparabilityBound> star_bounds() {
  const double b = std::sqrt(8.0 / 5.0);
  return {{0, 2, b}, {1, 2, b}, {3, 2, b}, {4, 2, b}};
}

bool is_permutation(const std::vector<Index>& p, Index n) {
  if (static_cast<Index>(p.size()) != n) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Index v : p) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

double snap(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

}  // namespace

void GraphSpec::validate() const {
  const Index n = adjacency.rows();
  require(n >= 1 && adjacency.cols() == n, ErrorCode::invalid_argument,
          "graph adjacency must be a non-empty square matrix");
  for (Index i = 0; i < n; ++i) {
    require(adjacency(i, i) == 0.0, ErrorCode::invalid_argument,
            "graph adjacency must have a zero diagonal");
    for (Index k = 0; k < n; ++k) {
      const double v = adjacency(i, k);
      require(v == 0.0 || v == 1.0, ErrorCode::invalid_argument,
              "graph adjacency entries must be 0 or 1");
      require(v == adjacency(k, i), ErrorCode::invalid_argument,
              "graph adjacency must be symmetric");
    }
  }
  require(is_permutation(labeling, n), ErrorCode::invalid_argument,
          "graph labeling must be a permutation of the modes");
  require(static_cast<Index>(lo_rotation.size()) == n, ErrorCode::dimension_mismatch,
          "graph needs one LO rotation per node");
  require(nullifiers.rows() == n && nullifiers.cols() == 2 * n,
          ErrorCode::dimension_mismatch, "graph nullifier table does not match its size");
  for (const auto& b : bounds) {
    require(b.first >= 0 && b.first < n && b.second >= 0 && b.second < n &&
                b.first != b.second,
            ErrorCode::invalid_argument, "inseparability bound refers to an invalid node pair");
    require(b.bound > 0.0, ErrorCode::invalid_argument,
            "inseparability bound must be positive");
  }
}

GraphSpec GraphSpec::linear(Index n) {
  require(n >= 2, ErrorCode::invalid_argument, "linear graph needs at least two nodes");
  RealMatrix j = RealMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) connect(j, i, i + 1);
  std::vector<InseparabilityBound> bounds;
  for (Index i = 0; i + 1 < n; ++i) {
    const bool end = i == 0 || i == n - 2;
    bounds.push_back({i, i + 1, end ? std::sqrt(8.0 / 3.0) : 4.0 / 3.0});
  }
  return make_graph(std::move(j), "linear", std::move(bounds));
}

GraphSpec GraphSpec::pentagon() {
  RealMatrix j = RealMatrix::Zero(5, 5);
  for (Index i = 0; i < 5; ++i) connect(j, i, (i + 1) % 5);
  std::vector<InseparabilityBound> bounds;
  for (Index i = 0; i < 4; ++i) bounds.push_back({i, i + 1, 4.0 / 3.0});
  return make_graph(std::move(j), "pentagon", std::move(bounds));
}

GraphSpec GraphSpec::star() { return make_graph(star_adjacency(), "star", star_bounds()); }

GraphSpec GraphSpec::pyramid() {
  RealMatrix j = star_adjacency();
  connect(j, 1, 3);
  connect(j, 3, 4);
  connect(j, 4, 0);
  connect(j, 0, 1);
  const double b = std::sqrt(8.0 / 5.0);
  GraphSpec g = make_graph(std::move(j), "pyramid", {{3, 2, b}, {4, 2, b}});
  // (y4 - y1) / sqrt(2) and (y5 - y2) / sqrt(2)
  const double h = 1.0 / std::sqrt(2.0);
  g.nullifiers.row(3).setZero();
  g.nullifiers(3, 5 + 3) = h;
  g.nullifiers(3, 5 + 0) = -h;
  g.nullifiers.row(4).setZero();
  g.nullifiers(4, 5 + 4) = h;
  g.nullifiers(4, 5 + 1) = -h;
  return g;
}

GraphSpec GraphSpec::ghz() {
  GraphSpec g = make_graph(star_adjacency(), "ghz", star_bounds());
  for (Index i : {0, 1, 3, 4}) g.lo_rotation[static_cast<std::size_t>(i)] = M_PI / 2;
  return g;
}

const std::vector<std::string>& graph_presets() {
  static const std::vector<std::string> names{"linear", "pentagon", "star", "pyramid", "ghz"};
  return names;
}

GraphSpec GraphSpec::from_preset(const std::string& name) {
  if (name == "linear") return linear(5);
  if (name == "pentagon") return pentagon();
  if (name == "star") return star();
  if (name == "pyramid") return pyramid();
  if (name == "ghz") return ghz();
  throw Error(ErrorCode::config, "unknown graph preset '" + name + "'");
}

GraphSpec GraphSpec::custom(RealMatrix adjacency, std::vector<Index> labeling,
                            std::vector<InseparabilityBound> bounds) {
  require(adjacency.rows() == adjacency.cols(), ErrorCode::invalid_argument,
          "graph adjacency must be square");
  GraphSpec g = make_graph(std::move(adjacency), "custom", std::move(bounds));
  if (!labeling.empty()) g.labeling = std::move(labeling);
  g.validate();
  return g;
}

GraphSpec GraphSpec::relabeled(const std::vector<Index>& p) const {
  validate();
  const Index n = size();
  require(is_permutation(p, n), ErrorCode::invalid_argument,
          "relabeling must be a permutation of the nodes");
  GraphSpec g = *this;
  for (Index i = 0; i < n; ++i) {
    const auto pi = p[static_cast<std::size_t>(i)];
    g.labeling[static_cast<std::size_t>(pi)] = labeling[static_cast<std::size_t>(i)];
    g.lo_rotation[static_cast<std::size_t>(pi)] = lo_rotation[static_cast<std::size_t>(i)];
    for (Index k = 0; k < n; ++k) {
      const auto pk = p[static_cast<std::size_t>(k)];
      g.adjacency(pi, pk) = adjacency(i, k);
      g.nullifiers(pi, pk) = nullifiers(i, k);
      g.nullifiers(pi, n + pk) = nullifiers(i, n + k);
    }
  }
  for (auto& b : g.bounds) {
    b.first = p[static_cast<std::size_t>(b.first)];
    b.second = p[static_cast<std::size_t>(b.second)];
  }
  return g;
}

// ---------------------------------------------------------------------------

namespace {

void check_angles(const RealMatrix& covariance, std::span<const double> theta) {
  require(covariance.rows() == covariance.cols() && covariance.rows() % 2 == 0,
          ErrorCode::dimension_mismatch, "covariance must be 2N x 2N");
  require(static_cast<Index>(theta.size()) == covariance.rows() / 2,
          ErrorCode::dimension_mismatch, "need one LO phase per mode");
}

}  // namespace

double vlf_rho(const RealMatrix& covariance, std::span<const double> theta,
               std::span<const double> gains, Index i) {
  check_angles(covariance, theta);
  const Index n = covariance.rows() / 2;
  require(gains.empty() || static_cast<Index>(gains.size()) == n,
          ErrorCode::dimension_mismatch, "need one gain per mode");
  if (i < 0 || i >= n - 1) {
    std::ostringstream msg;
    msg << "VLF index " << i << " out of range for " << n << " modes";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  QuadratureCombination u{RealVector::Zero(2 * n), {theta.begin(), theta.end()}};
  u.coefficients(i) = 1.0;
  u.coefficients(i + 1) = -1.0;
  QuadratureCombination v{RealVector::Zero(2 * n), {theta.begin(), theta.end()}};
  for (Index k = 0; k < n; ++k) {
    if (k == i || k == i + 1) {
      v.coefficients(n + k) = 1.0;
    } else if (!gains.empty()) {
      v.coefficients(n + k) = gains[static_cast<std::size_t>(k)];
    }
  }
  return combination_variance(covariance, u) + combination_variance(covariance, v);
}

std::vector<double> vlf_all(const RealMatrix& covariance, std::span<const double> theta,
                            std::span<const double> gains) {
  check_angles(covariance, theta);
  const Index n = covariance.rows() / 2;
  std::vector<double> out;
  for (Index i = 0; i + 1 < n; ++i) out.push_back(vlf_rho(covariance, theta, gains, i));
  return out;
}

std::vector<QuadratureCombination> nullifiers_for(const GraphSpec& graph,
                                                  std::span<const double> theta) {
  graph.validate();
  const Index n = graph.size();
  require(static_cast<Index>(theta.size()) == n, ErrorCode::dimension_mismatch,
          "need one LO phase per graph node");
  std::vector<QuadratureCombination> out;
  for (Index i = 0; i < n; ++i) {
    QuadratureCombination c{RealVector::Zero(2 * n), {theta.begin(), theta.end()}};
    for (Index node = 0; node < n; ++node) {
      const Index mode = graph.labeling[static_cast<std::size_t>(node)];
      const double r = graph.lo_rotation[static_cast<std::size_t>(node)];
      const double cx = graph.nullifiers(i, node);
      const double cy = graph.nullifiers(i, n + node);
      // x(theta - r) = cos r x(theta) - sin r y(theta), y(theta - r) = sin r x(theta) + cos r y(theta)
      const double cr = snap(std::cos(r));
      const double sr = snap(std::sin(r));
      c.coefficients(mode) = cr * cx + sr * cy;
      c.coefficients(n + mode) = -sr * cx + cr * cy;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<double> nullifier_variances(const RealMatrix& covariance, const GraphSpec& graph,
                                        std::span<const double> theta) {
  check_angles(covariance, theta);
  require(graph.size() == covariance.rows() / 2, ErrorCode::dimension_mismatch,
          "graph size does not match the number of modes");
  std::vector<double> out;
  for (const auto& c : nullifiers_for(graph, theta))
    out.push_back(combination_variance(covariance, c));
  return out;
}

CertificationReport certify(const RealMatrix& covariance, const GraphSpec& graph,
                            std::span<const double> theta, std::span<const double> gains) {
  require(!graph.bounds.empty(), ErrorCode::config,
          "graph '" + graph.preset + "' has no inseparability bounds to certify against");
  CertificationReport r;
  r.graph = graph.preset;
  r.theta.assign(theta.begin(), theta.end());
  r.gains.assign(gains.begin(), gains.end());
  r.nullifier_variances = nullifier_variances(covariance, graph, theta);
  r.vlf = vlf_all(covariance, theta, gains);
  r.nullifiers_below_shot_noise =
      std::all_of(r.nullifier_variances.begin(), r.nullifier_variances.end(),
                  [](double v) { return v < 1.0; });
  r.inseparable = true;
  for (const auto& b : graph.bounds) {
    const double sum = r.nullifier_variances[static_cast<std::size_t>(b.first)] +
                       r.nullifier_variances[static_cast<std::size_t>(b.second)];
    const bool ok = sum < b.bound;
    r.bounds.push_back({b.first, b.second, sum, b.bound, ok});
    r.inseparable = r.inseparable && ok;
  }
  r.passed = r.nullifiers_below_shot_noise && r.inseparable;
  return r;
}

CertificationReport certify(const GaussianState& state, const GraphSpec& graph,
                            std::span<const double> theta, std::span<const double> gains) {
  return certify(state.covariance, graph, theta, gains);
}

// ---------------------------------------------------------------------------

ClusterTransform cluster_transform(const GraphSpec& graph) {
  graph.validate();
  const Index n = graph.size();
  const RealMatrix& j = graph.adjacency;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(j * j + RealMatrix::Identity(n, n));
  require(es.info() == Eigen::Success, ErrorCode::internal,
          "eigendecomposition of J^2 + I failed");
  const RealVector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  ClusterTransform t;
  t.x_s = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  t.x_s = 0.5 * (t.x_s + t.x_s.transpose()).eval();
  t.y_s = j * t.x_s;
  RealMatrix s(2 * n, 2 * n);
  s << t.x_s, -t.y_s, t.y_s, t.x_s;
  t.s_c = d_lo(graph.lo_rotation) * SymplecticMatrix::trusted(std::move(s));
  return t;
}

SymplecticMatrix s_lo(const GraphSpec& graph, const BlochMessiahFactorization& bm,
                      std::span<const double> euler) {
  const Index n = graph.size();
  require(bm.passive.modes() == n, ErrorCode::dimension_mismatch,
          "Bloch-Messiah factorization does not match the graph size");
  const SymplecticMatrix o = SymplecticMatrix::trusted(block_diagonal(euler_orthogonal(euler, n)));
  return cluster_transform(graph).s_c * o * bm.passive.transpose();
}

RealMatrix emulation_matrix(std::span<const double> theta, std::span<const double> post_euler) {
  const Index n = static_cast<Index>(theta.size());
  return block_diagonal(euler_orthogonal(post_euler, n)) * d_lo(theta).matrix();
}

double emulation_error(const GraphSpec& graph, const BlochMessiahFactorization& bm,
                       std::span<const double> euler, std::span<const double> theta,
                       std::span<const double> post_euler) {
  require(static_cast<Index>(theta.size()) == graph.size(), ErrorCode::dimension_mismatch,
          "need one LO phase per graph node");
  const RealMatrix target = s_lo(graph, bm, euler).matrix();
  return (target - emulation_matrix(theta, post_euler)).norm();
}

std::vector<double> emulated_nullifier_variances(const RealMatrix& covariance,
                                                 const GraphSpec& graph,
                                                 std::span<const double> theta,
                                                 std::span<const double> post_euler) {
  check_angles(covariance, theta);
  const RealMatrix p = emulation_matrix(theta, post_euler);
  const RealMatrix v = p * covariance * p.transpose();
  const std::vector<double> zero(theta.size(), 0.0);
  return nullifier_variances(v, graph, zero);
}

std::vector<double> shaped_lo_nullifier_variances(const RealMatrix& covariance,
                                                  const GraphSpec& graph,
                                                  const BlochMessiahFactorization& bm,
                                                  std::span<const double> euler) {
  const RealMatrix s = s_lo(graph, bm, euler).matrix();
  const RealMatrix v = s * covariance * s.transpose();
  const std::vector<double> zero(static_cast<std::size_t>(graph.size()), 0.0);
  return nullifier_variances(v, graph, zero);
}

}  // namespace anw
