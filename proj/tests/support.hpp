#pragma once

#include <cmath>
#include <complex>

#include "curvkit/curvature.hpp"
#include "curvkit/hermform.hpp"
#include "curvkit/rng.hpp"

namespace testing {

using namespace curvkit;

inline const Complex I(0.0, 1.0);

inline CMatrix random_hermitian(int d, Rng& rng) {
  const CMatrix z = rng.complex_matrix(d, d);
  return (z + z.adjoint()) * 0.5;
}

inline CMatrix random_symmetric(int n, Rng& rng) {
  const CMatrix z = rng.complex_matrix(n, n);
  return (z + z.transpose()) * 0.5;
}

inline KahlerCurvature random_kahler(int n, Rng& rng) {
  return from_numerator_form(HermitianForm22(n, random_hermitian(pair_count(n), rng)));
}

inline CVector vec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

// Direct quadruple sum, independent of the pair basis.
inline Complex tensor_quartic(const KahlerCurvature& r, const CVector& v) {
  const int n = r.dim();
  Complex acc(0.0, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          acc += r(i, j, k, l) * v(i) * std::conj(v(j)) * v(k) * std::conj(v(l));
  return acc;
}

// q(v) computed from the raw coefficient matrix.
inline Complex quadric_value(const CMatrix& f, const CVector& v) {
  Complex acc(0.0, 0.0);
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index k = 0; k < f.cols(); ++k) acc += f(i, k) * v(i) * v(k);
  return acc;
}

inline double sum_of_squares(const SquareDecomposition& dec, const CVector& v) {
  double acc = 0.0;
  for (const auto& f : dec.pos) acc += std::norm(quadric_value(f.coeffs(), v));
  for (const auto& g : dec.neg) acc -= std::norm(quadric_value(g.coeffs(), v));
  return acc;
}

inline bool symmetries_hold(const KahlerCurvature& r, double tol) {
  const int n = r.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Complex x = r(i, j, k, l);
          if (std::abs(x - r(k, j, i, l)) > tol) return false;
          if (std::abs(x - r(i, l, k, j)) > tol) return false;
          if (std::abs(x - std::conj(r(j, i, l, k))) > tol) return false;
        }
  return true;
}

}  // namespace testing
