#include "curvkit/quadric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "curvkit/linalg.hpp"
#include "curvkit/rng.hpp"

namespace curvkit {

RankKernel rank_and_kernel(const QuadraticForm& q, double rel_tol) {
  const int n = q.dim();
  const CMatrix kernel = linalg::null_space(q.coeffs(), rel_tol);
  return {n - static_cast<int>(kernel.cols()), Subspace(n, kernel)};
}

Takagi takagi(const QuadraticForm& q) {
  // With F = A + iB and w = x + iy, the condition F conj(w) = s w is the real
  // symmetric eigenproblem [[A, B], [B, -A]] (x; y) = s (x; y). Its spectrum
  // is {+s_i, -s_i}; eigenvectors for distinct positive eigenvalues give
  // orthonormal complex Takagi vectors.
  const int n = q.dim();
  const Eigen::MatrixXd a = q.coeffs().real();
  const Eigen::MatrixXd b = q.coeffs().imag();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m << a, b, b, -a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) throw NumericalError("Takagi eigensolver failed");
  const RVector& lambda = eig.eigenvalues();  // ascending
  const double smax = std::max(lambda(2 * n - 1), 0.0);
  const double cut = 1e-13 * smax;

  Takagi t;
  t.w = CMatrix::Zero(n, n);
  t.s = RVector::Zero(n);
  int m_pos = 0;
  for (int idx = 2 * n - 1; idx >= n && lambda(idx) > cut; --idx, ++m_pos) {
    const Eigen::VectorXd xy = eig.eigenvectors().col(idx);
    t.w.col(m_pos) = (xy.head(n).cast<Complex>() + Complex(0, 1) * xy.tail(n).cast<Complex>());
    t.s(m_pos) = lambda(idx);
  }
  if (m_pos < n) {
    // Remaining directions span the (near) null space of conj(F).
    const CMatrix rest = linalg::orthogonal_complement(t.w.leftCols(m_pos), n);
    if (rest.cols() != n - m_pos)
      throw NumericalError("Takagi completion produced " + std::to_string(rest.cols()) +
                           " vectors, expected " + std::to_string(n - m_pos));
    t.w.rightCols(n - m_pos) = rest;
  }
  const double defect = linalg::max_abs(t.w.adjoint() * t.w - CMatrix::Identity(n, n));
  if (defect > 1e-8) throw NumericalError("Takagi vectors lost orthonormality");
  return t;
}

int isotropic_bound(int n, int r) {
  if (n < 0 || r < 0 || r > n)
    throw InputError("isotropic_bound needs 0 <= r <= n (got n=" + std::to_string(n) +
                     ", r=" + std::to_string(r) + ")");
  return (n - r) + r / 2;
}

Subspace max_isotropic(const QuadraticForm& q, double rel_tol) {
  const int n = q.dim();
  const int r = rank_and_kernel(q, rel_tol).rank;
  const Takagi t = takagi(q);
  // q(conj(W) c) = sum_a s_a c_a^2, so conj(W) carries the isotropic vectors.
  const CMatrix wbar = t.w.conjugate();
  CMatrix vectors(n, isotropic_bound(n, r));
  int col = 0;
  for (int a = r; a < n; ++a) vectors.col(col++) = wbar.col(a);
  for (int j = 0; j + 1 < r; j += 2) {
    const Complex c1 = 1.0 / std::sqrt(t.s(j));
    const Complex c2 = Complex(0.0, -1.0) / std::sqrt(t.s(j + 1));
    vectors.col(col++) = c1 * wbar.col(j) + c2 * wbar.col(j + 1);
  }
  Eigen::HouseholderQR<CMatrix> qr(vectors);
  const CMatrix basis = CMatrix(qr.householderQ()).leftCols(vectors.cols());
  return Subspace(n, basis);
}

double isotropy_residual(const QuadraticForm& q, const Subspace& l) {
  if (q.dim() != l.ambient_dim()) throw InputError("quadric and subspace dimensions differ");
  if (l.dim() == 0) return 0.0;
  return (l.basis().transpose() * q.coeffs() * l.basis()).norm();
}

bool vanishes_on(const QuadraticForm& q, const Subspace& l, double tol) {
  return isotropy_residual(q, l) <= tol * std::max(q.coeffs().norm(), 1.0);
}

Subspace intersect(const std::vector<Subspace>& subspaces, double rel_tol) {
  if (subspaces.empty()) throw InputError("intersect needs at least one subspace");
  const int n = subspaces.front().ambient_dim();
  CMatrix stacked(static_cast<Eigen::Index>(n) * subspaces.size(), n);
  for (std::size_t s = 0; s < subspaces.size(); ++s) {
    if (subspaces[s].ambient_dim() != n) throw InputError("subspaces live in different spaces");
    stacked.middleRows(static_cast<Eigen::Index>(s) * n, n) =
        CMatrix::Identity(n, n) - subspaces[s].projector();
  }
  return Subspace(n, linalg::null_space(stacked, rel_tol, 1.0));
}

Subspace common_kernel(int n, const std::vector<QuadraticForm>& quadrics, double rel_tol) {
  std::vector<Subspace> kernels;
  kernels.reserve(quadrics.size());
  for (const auto& q : quadrics) {
    if (q.dim() != n) throw InputError("quadrics have mixed dimensions");
    kernels.push_back(rank_and_kernel(q, rel_tol).kernel);
  }
  if (kernels.empty()) return Subspace::full(n);
  return intersect(kernels);
}

int sharp_eta(int n, int big_n) { return (big_n * n) / (big_n + 1); }

SharpFamily sharp_family(int n, int big_n) {
  if (n < 2 || big_n < 1) throw InputError("sharp family needs n >= 2 and N >= 1");
  const int eta = sharp_eta(n, big_n);
  if (eta < 1) throw InputError("sharp family is degenerate: floor(Nn/(N+1)) = 0");
  const int width = n - eta;
  const int blocks = (eta + width - 1) / width;
  if (blocks > big_n) throw NumericalError("sharp family needs more than N blocks");

  SharpFamily fam{{}, Subspace::zero(n), eta, blocks, {}};
  for (int b = 0; b < blocks; ++b) {
    CMatrix f = CMatrix::Zero(n, n);
    for (int t = 0; t < width && b * width + t < eta; ++t) {
      const int left = b * width + t;
      const int right = eta + t;
      f(left, right) = 0.5;
      f(right, left) = 0.5;
    }
    fam.quadrics.emplace_back(f);
  }
  // The first block reaches right coordinates eta..eta+min(width, eta)-1;
  // any right coordinate beyond gets a square so the kernels still meet in 0.
  for (int right = eta + std::min(width, eta); right < n; ++right)
    fam.completion_squares.push_back(right);
  if (!fam.completion_squares.empty()) {
    CMatrix f = fam.quadrics.front().coeffs();
    for (int j : fam.completion_squares) f(j, j) = 1.0;
    fam.quadrics.front() = QuadraticForm(f);
  }
  while (static_cast<int>(fam.quadrics.size()) < big_n) fam.quadrics.push_back(QuadraticForm::zero(n));
  fam.shared = Subspace(n, CMatrix::Identity(n, n).leftCols(eta));
  return fam;
}

std::vector<QuadraticForm> random_quadrics_on(const Subspace& l, int big_n, std::uint64_t seed) {
  if (big_n < 1) throw InputError("random_quadrics_on needs N >= 1");
  const int n = l.ambient_dim();
  const int d = l.dim();
  // Adapted unitary basis E = [B | C]; in those coordinates the top-left d x d
  // block is zero, so B^T F B = 0 with F = conj(E) G E^H.
  CMatrix e(n, n);
  e.leftCols(d) = l.basis();
  e.rightCols(n - d) = l.complement().basis();
  Rng rng(seed);
  std::vector<QuadraticForm> out;
  out.reserve(big_n);
  for (int p = 0; p < big_n; ++p) {
    CMatrix g = rng.complex_matrix(n, n);
    g = (g + g.transpose()).eval() * 0.5;
    g.topLeftCorner(d, d).setZero();
    const CMatrix f = e.conjugate() * g * e.adjoint();
    out.emplace_back(f);
  }
  return out;
}

CMatrix random_unitary(int n, Rng& rng) {
  return linalg::unitary_from_ginibre(rng.complex_matrix(n, n));
}

Subspace random_subspace(int n, int d, Rng& rng) {
  if (d < 0 || d > n) throw InputError("subspace dimension out of range");
  return Subspace(n, random_unitary(n, rng).leftCols(d));
}

QuadraticForm random_quadric_of_rank(int n, int r, Rng& rng) {
  if (r < 0 || r > n) throw InputError("rank out of range");
  const CMatrix w = random_unitary(n, rng);
  RVector s = RVector::Zero(n);
  for (int i = 0; i < r; ++i) s(i) = rng.uniform(0.5, 2.0);
  return QuadraticForm(w.transpose() * s.cast<Complex>().asDiagonal() * w);
}

}  // namespace curvkit
