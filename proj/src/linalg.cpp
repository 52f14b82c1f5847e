#include "curvkit/linalg.hpp"

#include <algorithm>

namespace curvkit::linalg {

namespace {

Eigen::BDCSVD<CMatrix> full_svd(const CMatrix& m) {
  return Eigen::BDCSVD<CMatrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int rank_from(const RVector& s, double tol, double floor) {
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double threshold = tol * std::max(smax, floor);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++r;
  return r;
}

}  // namespace

int numerical_rank(const CMatrix& m, double tol, double floor) {
  if (m.size() == 0) return 0;
  const Eigen::BDCSVD<CMatrix> svd(m);
  return rank_from(svd.singularValues(), tol, floor);
}

CMatrix null_space(const CMatrix& m, double tol, double floor) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return CMatrix::Identity(cols, cols);
  const auto svd = full_svd(m);
  const int r = rank_from(svd.singularValues(), tol, floor);
  return svd.matrixV().rightCols(cols - r);
}

CMatrix orthonormal_span(const CMatrix& m, double tol, double floor) {
  if (m.cols() == 0) return CMatrix(m.rows(), 0);
  const auto svd = full_svd(m);
  const int r = rank_from(svd.singularValues(), tol, floor);
  return svd.matrixU().leftCols(r);
}

CMatrix orthogonal_complement(const CMatrix& basis, Eigen::Index n) {
  if (basis.cols() == 0) return CMatrix::Identity(n, n);
  // Null space of B^H is the complement of span(B).
  return null_space(basis.adjoint(), 1e-9, 1.0);
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

CMatrix unitary_from_ginibre(const CMatrix& z) {
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0) q.col(i) *= d / mag;
  }
  return q;
}

}  // namespace curvkit::linalg
