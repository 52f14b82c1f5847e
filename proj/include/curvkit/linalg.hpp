#pragma once

#include "curvkit/core.hpp"

namespace curvkit::linalg {

/// Numerical rank: singular values above tol * max(sigma_max, floor) count.
/// floor defaults to 0, i.e. a matrix of all zeros has rank 0.
int numerical_rank(const CMatrix& m, double tol, double floor = 0.0);

/// Orthonormal basis (columns) of the null space of m. The threshold is
/// tol * max(sigma_max, floor).
CMatrix null_space(const CMatrix& m, double tol, double floor = 0.0);

/// Orthonormal basis of the column span of m, rank decided as in null_space.
CMatrix orthonormal_span(const CMatrix& m, double tol, double floor = 0.0);

/// Orthonormal basis of the orthogonal complement of span(basis) in C^n.
/// basis must have orthonormal columns.
CMatrix orthogonal_complement(const CMatrix& basis, Eigen::Index n);

/// Largest absolute entry.
double max_abs(const CMatrix& m);

/// Helper for sampling a uniformly random unitary matrix (QR of a Ginibre
/// matrix with phase fix).
CMatrix unitary_from_ginibre(const CMatrix& z);

}  // namespace curvkit::linalg
