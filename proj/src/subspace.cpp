#include "curvkit/subspace.hpp"

#include <string>
#include <utility>

#include "curvkit/linalg.hpp"

namespace curvkit {

Subspace::Subspace(int n, CMatrix basis) : n_(n), basis_(std::move(basis)) {
  if (n < 0) throw InputError("subspace ambient dimension must be nonnegative");
  if (basis_.rows() != n)
    throw InputError("subspace basis must have " + std::to_string(n) + " rows");
  if (basis_.cols() > n) throw InputError("subspace dimension exceeds ambient dimension");
  const Eigen::Index d = basis_.cols();
  if (d > 0) {
    const double defect = linalg::max_abs(basis_.adjoint() * basis_ - CMatrix::Identity(d, d));
    if (defect > 1e-10)
      throw InputError("subspace basis is not orthonormal (defect " +
                       std::to_string(defect) + ")");
  }
}

Subspace Subspace::zero(int n) { return Subspace(n, CMatrix(n, 0)); }

Subspace Subspace::full(int n) { return Subspace(n, CMatrix::Identity(n, n)); }

Subspace Subspace::span_of(int n, const CMatrix& vectors, double rel_tol) {
  if (vectors.cols() == 0) return zero(n);
  return Subspace(n, linalg::orthonormal_span(vectors, rel_tol, 1.0));
}

Subspace Subspace::complement() const {
  return Subspace(n_, linalg::orthogonal_complement(basis_, n_));
}

double Subspace::relative_distance(const CVector& v) const {
  const double norm = v.norm();
  if (norm == 0.0) return 0.0;
  return (v - basis_ * (basis_.adjoint() * v)).norm() / norm;
}

}  // namespace curvkit
