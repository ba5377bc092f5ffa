#include "support.hpp"

#include <doctest.h>

using namespace anw;

namespace {

/// y-squeezed vacua fed through the graph's cluster transform.
RealMatrix ideal_cluster(const GraphSpec& g, double r) {
  const Index n = g.size();
  RealVector d(2 * n);
  d << RealVector::Constant(n, std::exp(2 * r)), RealVector::Constant(n, std::exp(-2 * r));
  const RealMatrix s = cluster_transform(g).s_c.matrix();
  return s * d.asDiagonal() * s.transpose();
}

std::vector<double> zeros(Index n) { return std::vector<double>(static_cast<std::size_t>(n), 0.0); }

GaussianState row_state(const test::ReferenceRow& row) {
  return propagator_exact(ArrayConfig::homogeneous(5, 0.24, 30.0), test::row_pump(row), 30.0);
}

}  // namespace

TEST_CASE("presets") {
  for (const auto& name : graph_presets()) {
    const GraphSpec g = GraphSpec::from_preset(name);
    CHECK(g.size() == 5);
    CHECK_NOTHROW(g.validate());
    CHECK(!g.bounds.empty());
    for (Index i = 0; i < 5; ++i) CHECK(g.nullifiers.row(i).norm() == doctest::Approx(1.0));
  }
  CHECK(GraphSpec::linear(5).adjacency.sum() == 8.0);
  CHECK(GraphSpec::pentagon().adjacency.sum() == 10.0);
  CHECK(GraphSpec::star().adjacency.row(2).sum() == 4.0);
  CHECK(GraphSpec::pyramid().adjacency.sum() == 16.0);
  CHECK_THROWS_AS(GraphSpec::from_preset("hexagon"), Error);
  CHECK(GraphSpec::linear(8).size() == 8);
}

TEST_CASE("inseparability bounds of the presets") {
  const GraphSpec lin = GraphSpec::linear(5);
  REQUIRE(lin.bounds.size() == 4);
  CHECK(lin.bounds[0].bound == doctest::Approx(std::sqrt(8.0 / 3.0)));
  CHECK(lin.bounds[1].bound == doctest::Approx(4.0 / 3.0));
  CHECK(lin.bounds[3].bound == doctest::Approx(std::sqrt(8.0 / 3.0)));
  for (const auto& b : GraphSpec::star().bounds) {
    CHECK(b.second == 2);
    CHECK(b.bound == doctest::Approx(std::sqrt(8.0 / 5.0)));
  }
  CHECK(GraphSpec::pyramid().bounds.size() == 2);
  for (const auto& b : GraphSpec::pentagon().bounds) CHECK(b.bound == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("graph validation") {
  RealMatrix j = RealMatrix::Zero(3, 3);
  j(0, 1) = 1.0;
  CHECK_THROWS_AS(GraphSpec::custom(j), Error);  // asymmetric
  j(1, 0) = 1.0;
  CHECK_NOTHROW(GraphSpec::custom(j));
  RealMatrix loop = j;
  loop(2, 2) = 1.0;
  CHECK_THROWS_AS(GraphSpec::custom(loop), Error);
  RealMatrix weighted = j;
  weighted(0, 1) = weighted(1, 0) = 0.5;
  CHECK_THROWS_AS(GraphSpec::custom(weighted), Error);
  CHECK_THROWS_AS(GraphSpec::custom(j, {0, 0, 1}), Error);
  CHECK_THROWS_AS(GraphSpec::custom(j, {}, {{0, 5, 1.0}}), Error);
  CHECK_THROWS_AS(GraphSpec::linear(1), Error);
}

TEST_CASE("nullifiers are (y_i - sum_j J_ij x_j) / sqrt(1 + n_i)") {
  const GraphSpec g = GraphSpec::pentagon();
  const auto c = nullifiers_for(g, zeros(5));
  for (Index i = 0; i < 5; ++i) {
    RealVector e = RealVector::Zero(10);
    e(5 + i) = 1.0;
    e.head(5) = -g.adjacency.row(i).transpose();
    e /= std::sqrt(1.0 + g.adjacency.row(i).sum());
    CHECK(max_abs(RealVector(c[static_cast<std::size_t>(i)].coefficients - e)) < 1e-15);
  }
}

TEST_CASE("pyramid and ghz nullifier sets") {
  const auto p = nullifiers_for(GraphSpec::pyramid(), zeros(5));
  RealVector e = RealVector::Zero(10);
  e(5 + 3) = 1.0 / std::sqrt(2.0);
  e(5 + 0) = -1.0 / std::sqrt(2.0);
  CHECK(max_abs(RealVector(p[3].coefficients - e)) < 1e-15);
  const auto g = nullifiers_for(GraphSpec::ghz(), zeros(5));
  RealVector x = RealVector::Zero(10);
  x(0) = 1.0 / std::sqrt(2.0);
  x(2) = -1.0 / std::sqrt(2.0);
  CHECK(max_abs(RealVector(g[0].coefficients - x)) < 1e-15);
  RealVector y = RealVector::Zero(10);
  y.tail(5).setConstant(1.0 / std::sqrt(5.0));
  CHECK(max_abs(RealVector(g[2].coefficients - y)) < 1e-15);
}

TEST_CASE("vacuum fails certification") {
  const RealMatrix v = RealMatrix::Identity(10, 10);
  for (const auto& name : graph_presets()) {
    const CertificationReport r = certify(v, GraphSpec::from_preset(name), zeros(5));
    for (double x : r.nullifier_variances) CHECK(x == doctest::Approx(1.0));
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.nullifiers_below_shot_noise);
  }
  for (double rho : vlf_all(v, zeros(5), zeros(5))) CHECK(rho == doctest::Approx(4.0));
}

TEST_CASE("vlf rho by explicit coefficients") {
  std::mt19937_64 rng(3);
  const RealMatrix s = test::random_symplectic(4, rng);
  const RealMatrix v = s * s.transpose();
  const std::vector<double> th{0.1, -0.7, 1.2, 0.4};
  const std::vector<double> g{0.3, -1.5, 2.0, 0.8};
  const RealMatrix d = d_lo(th).matrix();
  const RealMatrix w = d * v * d.transpose();
  for (Index i = 0; i < 3; ++i) {
    RealVector a = RealVector::Zero(8), b = RealVector::Zero(8);
    a(i) = 1.0;
    a(i + 1) = -1.0;
    for (Index k = 0; k < 4; ++k) b(4 + k) = g[static_cast<std::size_t>(k)];
    b(4 + i) = 1.0;
    b(4 + i + 1) = 1.0;
    CHECK(vlf_rho(v, th, g, i) == doctest::Approx(a.dot(w * a) + b.dot(w * b)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(vlf_rho(v, th, g, 3), Error);
}

TEST_CASE("ideal clusters are certified") {
  const double r = 1.0;
  for (const char* name : {"linear", "pentagon", "star", "ghz"}) {
    const GraphSpec g = GraphSpec::from_preset(name);
    const CertificationReport rep = certify(ideal_cluster(g, r), g, zeros(5));
    for (double x : rep.nullifier_variances) CHECK(x == doctest::Approx(std::exp(-2 * r)));
    CHECK(rep.passed);
  }
}

TEST_CASE("cluster transform of the linear graph") {
  const ClusterTransform ct = cluster_transform(GraphSpec::linear(5));
  const double s2 = std::sqrt(2.0);
  CHECK(ct.x_s(0, 0) == doctest::Approx((3 * s2 + 5) / 12).epsilon(1e-14));
  CHECK(ct.x_s(0, 2) == doctest::Approx(-1.0 / 6).epsilon(1e-14));
  CHECK(ct.x_s(2, 2) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(ct.y_s(1, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ct.y_s(0, 3) == doctest::Approx((1 - s2) / 4).epsilon(1e-14));
  CHECK(symplectic_residual(ct.s_c.matrix()) < 1e-14);
  const RealMatrix& s = ct.s_c.matrix();
  CHECK(max_abs(RealMatrix(s * s.transpose() - RealMatrix::Identity(10, 10))) < 1e-14);
}

TEST_CASE("reference cluster rows reproduce their variances") {
  for (const auto& row : test::mode_rows()) {
    CAPTURE(row.graph);
    const auto rep = certify(row_state(row), GraphSpec::from_preset(row.graph),
                             test::row_theta(row));
    for (std::size_t i = 0; i < 5; ++i)
      CHECK(std::abs(rep.nullifier_variances[i] - row.reference[i]) <= 0.1);
    CHECK(rep.passed);
  }
}

TEST_CASE("ghz equals star with rotated local oscillators") {
  const auto& rows = test::mode_rows();
  const auto star = certify(row_state(rows[2]), GraphSpec::star(), test::row_theta(rows[2]));
  const auto ghz = certify(row_state(rows[4]), GraphSpec::ghz(), test::row_theta(rows[4]));
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(std::abs(star.nullifier_variances[i] - ghz.nullifier_variances[i]) < 1e-12);
}

TEST_CASE("a quarter turn on one LO breaks the linear cluster") {
  const auto& row = test::mode_rows()[0];
  auto th = test::row_theta(row);
  th[2] += M_PI / 2;
  CHECK_FALSE(certify(row_state(row), GraphSpec::linear(5), th).passed);
}

TEST_CASE("relabeling invariance") {
  const auto& row = test::mode_rows()[1];
  const GaussianState st = row_state(row);
  const auto th = test::row_theta(row);
  const GraphSpec g = GraphSpec::pentagon();
  const std::vector<Index> p{3, 0, 4, 2, 1};
  const auto base = nullifier_variances(st.covariance, g, th);

  // Same state, nodes renumbered: variances follow the nodes.
  const auto same = nullifier_variances(st.covariance, g.relabeled(p), th);
  for (std::size_t i = 0; i < 5; ++i) CHECK(same[static_cast<std::size_t>(p[i])] == doctest::Approx(base[i]).epsilon(1e-14));

  // Modes permuted together with the nodes and identity labeling.
  GraphSpec h = g.relabeled(p);
  h.labeling = {0, 1, 2, 3, 4};
  std::vector<double> tp(5);
  for (std::size_t i = 0; i < 5; ++i) tp[static_cast<std::size_t>(p[i])] = th[i];
  const auto moved = nullifier_variances(test::permute_modes(st.covariance, p), h, tp);
  for (std::size_t i = 0; i < 5; ++i) CHECK(moved[static_cast<std::size_t>(p[i])] == doctest::Approx(base[i]).epsilon(1e-12));
}

TEST_CASE("custom graph without bounds cannot be certified") {
  RealMatrix j = RealMatrix::Zero(2, 2);
  j(0, 1) = j(1, 0) = 1.0;
  const GraphSpec g = GraphSpec::custom(j);
  try {
    certify(RealMatrix::Identity(4, 4), g, zeros(2));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
  }
  const GraphSpec b = GraphSpec::custom(j, {}, {{0, 1, 1.0}});
  CHECK(certify(ideal_cluster(b, 1.0), b, zeros(2)).passed);
}

TEST_CASE("emulation quantities") {
  const auto& row = test::supermode_rows()[0];
  const ArrayConfig cfg = ArrayConfig::homogeneous(5, 0.24, 30.0);
  const GaussianState st = propagator_exact(cfg, test::row_pump(row), 30.0);
  const BlochMessiahFactorization bm = bloch_messiah(st.propagator);
  const GraphSpec g = GraphSpec::linear(5);
  const std::vector<double> euler(10, 0.2), post(10, -0.4);
  const auto th = test::row_theta(row);

  const RealMatrix s = s_lo(g, bm, euler).matrix();
  const RealMatrix expect = cluster_transform(g).s_c.matrix() *
                            block_diagonal(euler_orthogonal(euler, 5)) *
                            bm.passive.matrix().transpose();
  CHECK(max_abs(RealMatrix(s - expect)) < 1e-14);

  const RealMatrix p = emulation_matrix(th, post);
  CHECK(max_abs(RealMatrix(p - block_diagonal(euler_orthogonal(post, 5)) * d_lo(th).matrix())) <
        1e-14);
  CHECK(emulation_error(g, bm, euler, th, post) == doctest::Approx((s - p).norm()));

  const auto em = emulated_nullifier_variances(st.covariance, g, th, post);
  const auto direct = nullifier_variances(p * st.covariance * p.transpose(), g, zeros(5));
  for (std::size_t i = 0; i < 5; ++i) CHECK(em[i] == doctest::Approx(direct[i]).epsilon(1e-12));

  // The shaped LO undoes the passive part: nullifiers see only the squeezers.
  const auto lo = shaped_lo_nullifier_variances(st.covariance, g, bm, euler);
  const auto ref = nullifier_variances(s * st.covariance * s.transpose(), g, zeros(5));
  for (std::size_t i = 0; i < 5; ++i) CHECK(lo[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}
