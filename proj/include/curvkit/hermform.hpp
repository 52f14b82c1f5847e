#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "curvkit/core.hpp"

namespace curvkit {

// Unordered index pairs (i, k), i <= k, enumerated lexicographically.
// Indices are 0-based internally; file formats use 1-based indices.

/// D = n(n+1)/2.
int pair_count(int n);
/// Position of the pair {i, k} (order-insensitive).
int pair_index(int n, int i, int k);
/// Inverse of pair_index.
std::pair<int, int> pair_at(int n, int index);

/// Monomial vector w with w_(ik) = v_i v_k, no multiplicity weights.
CVector pair_monomials(const CVector& v);

/// Holomorphic quadratic form q(v) = sum over ordered (i, k) of F_ik v_i v_k.
class QuadraticForm {
 public:
  /// Symmetrizes the input: F <- (F + F^T) / 2.
  explicit QuadraticForm(const CMatrix& coeffs);
  static QuadraticForm zero(int n);

  int dim() const { return static_cast<int>(coeffs_.rows()); }
  const CMatrix& coeffs() const { return coeffs_; }

  Complex operator()(const CVector& v) const;
  /// Symmetric bilinear pairing x^T F y.
  Complex bilinear(const CVector& x, const CVector& y) const;

  /// Coordinates c in the pair basis with q(v) = c^* w(v).
  CVector pair_coordinates() const;
  /// Inverse of pair_coordinates.
  static QuadraticForm from_pair_coordinates(int n, const CVector& c);

  bool is_zero() const { return coeffs_.cwiseAbs().maxCoeff() == 0.0; }

 private:
  CMatrix coeffs_;
};

/// Real bihomogeneous (2,2) polynomial H(v) = w^* A w with A Hermitian on
/// the pair basis.
class HermitianForm22 {
 public:
  /// Requires a square matrix of side pair_count(n); Hermitian-averages it.
  HermitianForm22(int n, const CMatrix& matrix);

  int dim() const { return n_; }
  int pair_dim() const { return static_cast<int>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }

 private:
  int n_;
  CMatrix matrix_;
};

struct Signature {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// H = sum |f^p|^2 - sum |g^p|^2. Forms are stored without zero padding; the
/// length N is the longer side.
struct SquareDecomposition {
  int n = 0;
  std::vector<QuadraticForm> pos;
  std::vector<QuadraticForm> neg;

  int length() const {
    return static_cast<int>(std::max(pos.size(), neg.size()));
  }
  bool semi_definite() const { return pos.empty() || neg.empty(); }
  /// The nonempty side of a semi-definite decomposition (pos if both empty).
  const std::vector<QuadraticForm>& active_side() const {
    return pos.empty() ? neg : pos;
  }
};

double evaluate(const HermitianForm22& form, const CVector& v);

HermitianForm22 from_quadric_squares(const std::vector<QuadraticForm>& pos,
                                     const std::vector<QuadraticForm>& neg);
/// Dimension-explicit overload, needed when both lists are empty.
HermitianForm22 from_quadric_squares(int n, const std::vector<QuadraticForm>& pos,
                                     const std::vector<QuadraticForm>& neg);
HermitianForm22 from_decomposition(const SquareDecomposition& dec);

/// Eigenvalue threshold used by signature and decompose: rel_tol times the
/// spectral radius, or rel_tol itself when the form is zero.
double eigen_threshold(const HermitianForm22& form, double rel_tol);

Signature signature(const HermitianForm22& form, double rel_tol = kDefaultTol);

SquareDecomposition decompose(const HermitianForm22& form,
                              double rel_tol = kDefaultTol);

/// The N quadratic forms f^p - sum_j U_pj g^j. U must be N x N unitary.
std::vector<QuadraticForm> dangelo_system(const SquareDecomposition& dec,
                                          const CMatrix& unitary);

/// Pullback along the linear chart change v -> T v.
HermitianForm22 pullback(const HermitianForm22& form, const CMatrix& chart);

}  // namespace curvkit
