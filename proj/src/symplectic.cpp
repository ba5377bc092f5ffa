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

#include "anw/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace anw {

RealMatrix symplectic_form(Index modes) {
  RealMatrix omega = RealMatrix::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes).setIdentity();
  omega.bottomLeftCorner(modes, modes) = -RealMatrix::Identity(modes, modes);
  return omega;
}

double symplectic_residual(const RealMatrix& s) {
  require(s.rows() == s.cols() && s.rows() % 2 == 0,
          ErrorCode::dimension_mismatch,
          "symplectic matrix must be square with even dimension");
  const RealMatrix omega = symplectic_form(s.rows() / 2);
  return max_abs(s * omega * s.transpose() - omega);
}

SymplecticMatrix SymplecticMatrix::checked(RealMatrix s, double tol) {
  const double residual = symplectic_residual(s);
  const double scale = std::max(1.0, max_abs(s) * max_abs(s));
  if (!(residual <= tol * scale)) {
    std::ostringstream msg;
    msg << "matrix is not symplectic: max|S Omega S^T - Omega| = " << residual;
    throw Error(ErrorCode::not_symplectic, msg.str());
  }
  return SymplecticMatrix(std::move(s));
}

SymplecticMatrix SymplecticMatrix::trusted(RealMatrix s) {
  return SymplecticMatrix(std::move(s));
}

SymplecticMatrix SymplecticMatrix::identity(Index modes) {
  return SymplecticMatrix(RealMatrix::Identity(2 * modes, 2 * modes));
}

RealMatrix quadrature_from_bogoliubov(const ComplexMatrix& alpha,
                                      const ComplexMatrix& beta) {
  require(alpha.rows() == alpha.cols() && beta.rows() == alpha.rows() &&
              beta.cols() == alpha.cols(),
          ErrorCode::dimension_mismatch, "Bogoliubov blocks must be square and equal");
  const Index n = alpha.rows();
  const ComplexMatrix sum = alpha + beta;
  const ComplexMatrix diff = alpha - beta;
  RealMatrix s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = sum.real();
  s.topRightCorner(n, n) = -diff.imag();
  s.bottomLeftCorner(n, n) = sum.imag();
  s.bottomRightCorner(n, n) = diff.real();
  return s;
}

RealMatrix passive_from_unitary(const ComplexMatrix& u) {
  return quadrature_from_bogoliubov(u, ComplexMatrix::Zero(u.rows(), u.cols()));
}

RealMatrix block_diagonal(const RealMatrix& o) {
  const Index n = o.rows();
  RealMatrix out = RealMatrix::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = o;
  out.bottomRightCorner(n, n) = o;
  return out;
}

// ---------------------------------------------------------------------------
// Matrix exponential (Higham 2005, "The scaling and squaring method for the
// matrix exponential revisited").

namespace {

template <typename Matrix>
double one_norm(const Matrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Matrix, std::size_t K>
void pade_terms(const Matrix& a, const std::array<double, K>& b, Matrix& u,
                Matrix& v) {
  // Odd/even split of the Pade numerator for degrees 3..9.
  const Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix even = b[0] * ident;
  Matrix odd = b[1] * ident;
  Matrix power = ident;
  for (std::size_t k = 2; k < K; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < K) odd += b[k + 1] * power;
  }
  u = a * odd;
  v = even;
}

template <typename Matrix>
void pade13_terms(const Matrix& a, Matrix& u, Matrix& v) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix odd_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Matrix odd = a6 * odd_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  u = a * odd;
  const Matrix even_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * even_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

template <typename Matrix>
Matrix expm_impl(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorCode::dimension_mismatch,
          "mat_exp requires a square matrix");
  require(a.allFinite(), ErrorCode::invalid_argument,
          "mat_exp requires finite entries");
  const Index n = a.rows();
  if (n == 0) return a;

  static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0,
                                               420.0,   30.0,    1.0};
  static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0,
                                               277200.0,   25200.0,   1512.0,
                                               56.0,       1.0};
  static constexpr std::array<double, 10> b9 = {
      17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
      2162160.0,     110880.0,     3960.0,       90.0,        1.0};

  const double norm = one_norm(a);
  Matrix u;
  Matrix v;
  int squarings = 0;
  if (norm <= 1.495585217958292e-2) {
    pade_terms(a, b3, u, v);
  } else if (norm <= 2.539398330063230e-1) {
    pade_terms(a, b5, u, v);
  } else if (norm <= 9.504178996162932e-1) {
    pade_terms(a, b7, u, v);
  } else if (norm <= 2.097847961257068e0) {
    pade_terms(a, b9, u, v);
  } else {
    constexpr double theta13 = 5.371920351148152;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    const Matrix scaled = a * std::ldexp(1.0, -squarings);
    pade13_terms(scaled, u, v);
  }
  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace

RealMatrix mat_exp(const RealMatrix& a) { return expm_impl(a); }
ComplexMatrix mat_exp(const ComplexMatrix& a) { return expm_impl(a); }

// ---------------------------------------------------------------------------
// Takagi

TakagiFactorization takagi(const ComplexMatrix& w, double asymmetry_tol) {
  require(w.rows() == w.cols(), ErrorCode::dimension_mismatch,
          "takagi requires a square matrix");
  require(w.allFinite(), ErrorCode::invalid_argument, "takagi requires finite entries");
  const double asymmetry = max_abs(w - w.transpose());
  if (!(asymmetry < asymmetry_tol)) {
    std::ostringstream msg;
    msg << "takagi requires a symmetric matrix: max|W - W^T| = " << asymmetry;
    throw Error(ErrorCode::not_symmetric, msg.str());
  }
  const Index n = w.rows();
  TakagiFactorization out;
  if (n == 0) return out;

  // W = U diag(s) V^dag. Symmetry makes Z = U^dag conj(V) a symmetric unitary
  // commuting with diag(s); with T = U Z^{1/2}, W = T diag(s) T^T.
  Eigen::JacobiSVD<ComplexMatrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix& u = svd.matrixU();
  const ComplexMatrix z = u.adjoint() * svd.matrixV().conjugate();
  Eigen::ComplexSchur<ComplexMatrix> schur(z);
  const ComplexMatrix& q = schur.matrixU();
  ComplexVector root = schur.matrixT().diagonal();
  for (Index i = 0; i < n; ++i) root(i) = std::sqrt(root(i));
  const ComplexMatrix sqrt_z = q * root.asDiagonal() * q.adjoint();
  const ComplexMatrix t = u * sqrt_z;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const RealVector& s = svd.singularValues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return s(a) > s(b); });

  out.unitary.resize(n, n);
  out.values.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = s(src);
    out.unitary.row(i) = t.col(src).adjoint();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bloch-Messiah

RealVector BlochMessiahFactorization::covariance_spectrum() const {
  const Index n = squeezing.size();
  RealVector d(2 * n);
  for (Index m = 0; m < n; ++m) {
    d(m) = std::exp(2.0 * squeezing(m));
    d(n + m) = std::exp(-2.0 * squeezing(m));
  }
  return d;
}

RealMatrix BlochMessiahFactorization::covariance() const {
  const RealMatrix& r = passive.matrix();
  return r * covariance_spectrum().asDiagonal() * r.transpose();
}

namespace {

// Eigenvalue of V and the eigenvector columns sharing it.
struct Cluster {
  double value;
  std::vector<Index> columns;
};

}  // namespace

BlochMessiahFactorization bloch_messiah(const SymplecticMatrix& sm) {
  const RealMatrix& s = sm.matrix();
  const double residual = symplectic_residual(s);
  const double scale = std::max(1.0, max_abs(s) * max_abs(s));
  if (!(residual <= 1e-9 * scale)) {
    std::ostringstream msg;
    msg << "bloch_messiah requires a symplectic matrix: residual " << residual;
    throw Error(ErrorCode::not_symplectic, msg.str());
  }
  const Index n = sm.modes();
  const Index dim = 2 * n;
  BlochMessiahFactorization out;
  if (n == 0) {
    out.passive = SymplecticMatrix::identity(0);
    return out;
  }

  RealMatrix v = s * s.transpose();
  v = 0.5 * (v + v.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(v);
  const RealVector& mu = eig.eigenvalues();  // ascending
  const RealMatrix& vec = eig.eigenvectors();

  // Orthogonal polar factor S = V^{1/2} Q; Q = R1 R2 seeds the choice of basis
  // inside degenerate eigenspaces, which makes passive inputs come back as R1 = S.
  const RealMatrix q =
      vec * mu.cwiseSqrt().cwiseInverse().asDiagonal() * vec.transpose() * s;

  // Group eigenvalues >= 1 into degenerate clusters, largest first.
  constexpr double cluster_tol = 1e-9;
  constexpr double unity_tol = 1e-10;
  std::vector<Cluster> clusters;
  for (Index i = dim - 1; i >= 0; --i) {
    if (mu(i) < 1.0 - unity_tol) break;
    if (!clusters.empty() &&
        std::abs(clusters.back().value - mu(i)) <= cluster_tol * std::max(1.0, mu(i))) {
      clusters.back().columns.push_back(i);
    } else {
      clusters.push_back({mu(i), {i}});
    }
  }

  const RealMatrix omega_t = symplectic_form(n).transpose();
  std::vector<RealVector> chosen;  // x-type columns of R1
  std::vector<RealVector> partners;

  for (const Cluster& c : clusters) {
    const bool unity = std::abs(c.value - 1.0) <= unity_tol;
    const Index size = static_cast<Index>(c.columns.size());
    const Index wanted = unity ? size / 2 : size;
    RealMatrix basis(dim, size);
    for (Index k = 0; k < size; ++k) basis.col(k) = vec.col(c.columns[static_cast<std::size_t>(k)]);

    // Candidates: columns of Q, then the canonical basis as a fallback.
    std::vector<RealVector> candidates;
    for (Index j = 0; j < n; ++j) candidates.emplace_back(q.col(j));
    for (Index j = 0; j < dim; ++j) candidates.emplace_back(RealVector::Unit(dim, j));

    Index found = 0;
    while (found < wanted) {
      RealVector best;
      double best_norm = 0.0;
      for (const RealVector& cand : candidates) {
        RealVector w = basis * (basis.transpose() * cand);
        for (std::size_t k = 0; k < chosen.size(); ++k) {
          w -= chosen[k].dot(w) * chosen[k];
          w -= partners[k].dot(w) * partners[k];
        }
        const double norm = w.norm();
        if (norm >= 0.5) {
          best = w;
          best_norm = norm;
          break;
        }
        if (norm > best_norm) {
          best = w;
          best_norm = norm;
        }
      }
      if (best_norm < 1e-6) break;
      best /= best_norm;
      chosen.push_back(best);
      partners.push_back(omega_t * best);
      ++found;
    }
  }
  if (static_cast<Index>(chosen.size()) != n) {
    throw Error(ErrorCode::not_symplectic,
                "bloch_messiah: covariance spectrum is not symplectic");
  }

  // Columns (p_m, q_m) and (-q_m, p_m) form the unitary p + i q; snap it to the
  // nearest unitary so R1 is orthogonal and symplectic to working precision.
  ComplexMatrix unitary(n, n);
  for (Index m = 0; m < n; ++m) {
    const RealVector& c = chosen[static_cast<std::size_t>(m)];
    for (Index j = 0; j < n; ++j) unitary(j, m) = cplx(c(j), c(n + j));
  }
  Eigen::JacobiSVD<ComplexMatrix> polar(unitary, Eigen::ComputeFullU | Eigen::ComputeFullV);
  unitary = polar.matrixU() * polar.matrixV().adjoint();
  RealMatrix r1 = passive_from_unitary(unitary);

  RealVector r(n);
  for (Index m = 0; m < n; ++m) {
    const double rayleigh = r1.col(m).dot(v * r1.col(m));
    r(m) = std::max(0.0, 0.5 * std::log(rayleigh));
  }
  out.passive = SymplecticMatrix::trusted(std::move(r1));
  out.squeezing = std::move(r);
  return out;
}

// ---------------------------------------------------------------------------
// Constructors

RealMatrix euler_orthogonal(std::span<const double> angles, Index n) {
  require(n >= 0, ErrorCode::invalid_argument, "euler_orthogonal: negative size");
  if (static_cast<Index>(angles.size()) != euler_angle_count(n)) {
    std::ostringstream msg;
    msg << "euler_orthogonal: expected " << euler_angle_count(n) << " angles for N = "
        << n << ", got " << angles.size();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  RealMatrix e = RealMatrix::Identity(n, n);
  std::size_t k = 0;
  for (Index p = 0; p < n; ++p) {
    for (Index qi = p + 1; qi < n; ++qi, ++k) {
      const double c = std::cos(angles[k]);
      const double s = std::sin(angles[k]);
      // Right-multiply by the Givens rotation acting on columns p and q.
      for (Index row = 0; row < n; ++row) {
        const double ep = e(row, p);
        const double eq = e(row, qi);
        e(row, p) = c * ep - s * eq;
        e(row, qi) = s * ep + c * eq;
      }
    }
  }
  return e;
}

SymplecticMatrix d_lo(std::span<const double> theta) {
  const Index n = static_cast<Index>(theta.size());
  RealMatrix d = RealMatrix::Zero(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j) {
    const double c = std::cos(theta[static_cast<std::size_t>(j)]);
    const double s = std::sin(theta[static_cast<std::size_t>(j)]);
    d(j, j) = c;
    d(j, n + j) = s;
    d(n + j, j) = -s;
    d(n + j, n + j) = c;
  }
  return SymplecticMatrix::trusted(std::move(d));
}

}  // namespace anw
