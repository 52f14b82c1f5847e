#pragma once

#include "curvkit/core.hpp"

namespace curvkit {

/// Linear subspace of C^n held as an n x d matrix with orthonormal columns.
class Subspace {
 public:
  /// Checks B^* B = I to 1e-10.
  Subspace(int n, CMatrix basis);

  static Subspace zero(int n);
  static Subspace full(int n);
  /// Orthonormal basis for the span of the columns of vectors; columns whose
  /// singular values fall below rel_tol * max(sigma_max, 1) are dropped.
  static Subspace span_of(int n, const CMatrix& vectors, double rel_tol = 1e-9);

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const CMatrix& basis() const { return basis_; }

  CMatrix projector() const { return basis_ * basis_.adjoint(); }
  Subspace complement() const;
  /// Distance from v to the subspace, relative to |v|.
  double relative_distance(const CVector& v) const;

 private:
  int n_;
  CMatrix basis_;
};

}  // namespace curvkit
