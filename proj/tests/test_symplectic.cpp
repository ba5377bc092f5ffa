#include "support.hpp"

#include <doctest.h>

using namespace anw;

TEST_CASE("symplectic form") {
  const RealMatrix o = symplectic_form(3);
  CHECK(o.rows() == 6);
  CHECK(o(0, 3) == 1.0);
  CHECK(o(3, 0) == -1.0);
  CHECK(max_abs(o * o + RealMatrix::Identity(6, 6)) == 0.0);
  CHECK(symplectic_residual(RealMatrix::Identity(6, 6)) == 0.0);
}

TEST_CASE("checked rejects a non-symplectic matrix") {
  RealMatrix m = RealMatrix::Identity(4, 4);
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(SymplecticMatrix::checked(m), Error);
  try {
    SymplecticMatrix::checked(m);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_symplectic);
  }
  CHECK_THROWS_AS(SymplecticMatrix::checked(RealMatrix::Identity(3, 3)), Error);
  CHECK_NOTHROW(SymplecticMatrix::checked(RealMatrix::Identity(4, 4)));
}

TEST_CASE("mat_exp agrees with a Taylor series") {
  std::mt19937_64 rng(7);
  for (Index n : {1, 2, 5, 10, 16}) {
    for (double scale : {0.01, 0.5, 3.0}) {
      const RealMatrix a = test::random_symmetric(n, rng, scale) +
                           RealMatrix(RealMatrix::Random(n, n) * scale);
      const RealMatrix e = mat_exp(a);
      const RealMatrix t = test::taylor_exp(a);
      CHECK(max_abs(e - t) <= 1e-11 * std::max(1.0, max_abs(t)));
    }
  }
}

TEST_CASE("mat_exp special cases") {
  CHECK(max_abs(mat_exp(RealMatrix(RealMatrix::Zero(3, 3))) - RealMatrix::Identity(3, 3)) == 0.0);
  RealMatrix g(2, 2);
  g << 0.0, 1.3, -1.3, 0.0;
  const RealMatrix r = mat_exp(g);
  CHECK(r(0, 0) == doctest::Approx(std::cos(1.3)).epsilon(1e-14));
  CHECK(r(0, 1) == doctest::Approx(std::sin(1.3)).epsilon(1e-14));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = cplx(0.0, 2.0);
  d(1, 1) = cplx(-1.0, 0.0);
  const ComplexMatrix ed = mat_exp(d);
  CHECK(std::abs(ed(0, 0) - std::exp(cplx(0.0, 2.0))) < 1e-14);
  CHECK(std::abs(ed(1, 1) - std::exp(-1.0)) < 1e-14);
  CHECK_THROWS_AS(mat_exp(RealMatrix(RealMatrix::Zero(2, 3))), Error);
}

TEST_CASE("takagi reconstructs random complex symmetric matrices") {
  std::mt19937_64 rng(11);
  for (Index n = 1; n <= 16; ++n) {
    const ComplexMatrix w = test::random_complex_symmetric(n, rng);
    const TakagiFactorization t = takagi(w);
    const ComplexMatrix& u = t.unitary;
    CHECK(max_abs(ComplexMatrix(u * u.adjoint()) - ComplexMatrix::Identity(n, n)) < 1e-12);
    const ComplexMatrix d = u * w * u.transpose();
    CHECK(max_abs(ComplexMatrix(d - ComplexMatrix(t.values.cast<cplx>().asDiagonal()))) < 1e-10);
    for (Index k = 0; k < n; ++k) CHECK(t.values(k) >= 0.0);
    for (Index k = 0; k + 1 < n; ++k) CHECK(t.values(k) >= t.values(k + 1));
  }
}

TEST_CASE("takagi on degenerate inputs") {
  std::mt19937_64 rng(3);
  CHECK(takagi(ComplexMatrix::Zero(4, 4)).values.isZero());
  const TakagiFactorization id = takagi(ComplexMatrix::Identity(4, 4));
  CHECK(max_abs(RealVector(id.values - RealVector::Ones(4))) < 1e-14);
  // rank one
  ComplexVector v = ComplexVector::Random(5);
  const ComplexMatrix w = v * v.transpose();
  const TakagiFactorization t = takagi(w);
  const ComplexMatrix d = t.unitary * w * t.unitary.transpose();
  CHECK(max_abs(ComplexMatrix(d - ComplexMatrix(t.values.cast<cplx>().asDiagonal()))) < 1e-12);
  CHECK(t.values(1) < 1e-12);
}

TEST_CASE("takagi rejects asymmetric input") {
  ComplexMatrix w = ComplexMatrix::Identity(3, 3);
  w(0, 1) = 1.0;
  try {
    takagi(w);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_symmetric);
  }
}

TEST_CASE("bloch-messiah reconstructs the covariance") {
  std::mt19937_64 rng(5);
  for (Index n = 1; n <= 16; n += 3) {
    const RealMatrix s = test::random_symplectic(n, rng);
    const BlochMessiahFactorization bm = bloch_messiah(SymplecticMatrix::checked(s));
    const RealMatrix& r1 = bm.passive.matrix();
    CHECK(max_abs(RealMatrix(r1 * r1.transpose() - RealMatrix::Identity(2 * n, 2 * n))) < 1e-12);
    CHECK(symplectic_residual(r1) < 1e-12);
    CHECK(max_abs(RealMatrix(bm.covariance() - s * s.transpose())) < 1e-10);
    for (Index k = 0; k + 1 < n; ++k) CHECK(bm.squeezing(k) >= bm.squeezing(k + 1));
    CHECK(bm.covariance_spectrum().size() == 2 * n);
  }
}

TEST_CASE("bloch-messiah of a passive map has no squeezing") {
  const RealMatrix r = block_diagonal(RealMatrix::Identity(3, 3));
  const BlochMessiahFactorization bm = bloch_messiah(SymplecticMatrix::checked(r));
  CHECK(bm.squeezing.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single-mode squeezer") {
  const double r = 0.7;
  RealMatrix s = RealMatrix::Zero(2, 2);
  s(0, 0) = std::exp(-r);
  s(1, 1) = std::exp(r);
  const BlochMessiahFactorization bm = bloch_messiah(SymplecticMatrix::checked(s));
  CHECK(bm.squeezing(0) == doctest::Approx(r).epsilon(1e-14));
}

TEST_CASE("bogoliubov and passive maps") {
  std::mt19937_64 rng(9);
  const ComplexMatrix h = test::random_complex_symmetric(4, rng);
  const ComplexMatrix herm = (h + h.adjoint()) / 2.0;
  const ComplexMatrix u = mat_exp(ComplexMatrix(cplx(0.0, 1.0) * herm));
  const RealMatrix p = passive_from_unitary(u);
  CHECK(symplectic_residual(p) < 1e-12);
  CHECK(max_abs(RealMatrix(p * p.transpose() - RealMatrix::Identity(8, 8))) < 1e-12);
  CHECK(max_abs(RealMatrix(quadrature_from_bogoliubov(u, ComplexMatrix::Zero(4, 4)) - p)) < 1e-14);
  const double r = 0.4;
  ComplexMatrix a(1, 1), b(1, 1);
  a(0, 0) = std::cosh(r);
  b(0, 0) = std::sinh(r);
  const RealMatrix sq = quadrature_from_bogoliubov(a, b);
  CHECK(sq(0, 0) == doctest::Approx(std::exp(r)));
  CHECK(sq(1, 1) == doctest::Approx(std::exp(-r)));
}

TEST_CASE("euler_orthogonal") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  for (Index n : {1, 2, 5, 8}) {
    std::vector<double> a(static_cast<std::size_t>(euler_angle_count(n)));
    for (double& x : a) x = u(rng);
    const RealMatrix o = euler_orthogonal(a, n);
    CHECK(max_abs(RealMatrix(o * o.transpose() - RealMatrix::Identity(n, n))) < 1e-14);
    CHECK(o.determinant() == doctest::Approx(1.0));
  }
  const std::vector<double> zeros(10, 0.0);
  CHECK(max_abs(RealMatrix(euler_orthogonal(zeros, 5) - RealMatrix::Identity(5, 5))) == 0.0);
  const std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(euler_orthogonal(wrong, 5), Error);
}

TEST_CASE("d_lo maps onto generalized quadratures") {
  const std::vector<double> th{0.3, -1.1};
  const RealMatrix d = d_lo(th).matrix();
  CHECK(symplectic_residual(d) < 1e-15);
  CHECK(d(0, 0) == doctest::Approx(std::cos(0.3)));
  CHECK(d(0, 2) == doctest::Approx(std::sin(0.3)));
  CHECK(d(2, 0) == doctest::Approx(-std::sin(0.3)));
  CHECK(d(1, 3) == doctest::Approx(std::sin(-1.1)));
  CHECK(d(0, 1) == 0.0);
}
