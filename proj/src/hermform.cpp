#include "curvkit/hermform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curvkit {

int pair_count(int n) { return n * (n + 1) / 2; }

int pair_index(int n, int i, int k) {
  if (i > k) std::swap(i, k);
  // Rows 0..i-1 contribute n, n-1, ..., n-i+1 pairs.
  return i * n - i * (i - 1) / 2 + (k - i);
}

std::pair<int, int> pair_at(int n, int index) {
  int i = 0;
  while (index >= n - i) {
    index -= n - i;
    ++i;
  }
  return {i, i + index};
}

CVector pair_monomials(const CVector& v) {
  const int n = static_cast<int>(v.size());
  CVector w(pair_count(n));
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) w(p++) = v(i) * v(k);
  return w;
}

QuadraticForm::QuadraticForm(const CMatrix& coeffs) {
  if (coeffs.rows() != coeffs.cols() || coeffs.rows() == 0)
    throw InputError("quadratic form needs a nonempty square coefficient matrix");
  coeffs_ = (coeffs + coeffs.transpose()) * 0.5;
}

QuadraticForm QuadraticForm::zero(int n) {
  return QuadraticForm(CMatrix::Zero(n, n));
}

Complex QuadraticForm::operator()(const CVector& v) const {
  return bilinear(v, v);
}

Complex QuadraticForm::bilinear(const CVector& x, const CVector& y) const {
  if (x.size() != dim() || y.size() != dim())
    throw InputError("vector length does not match quadratic form dimension");
  return (x.transpose() * coeffs_ * y)(0, 0);
}

CVector QuadraticForm::pair_coordinates() const {
  const int n = dim();
  CVector c(pair_count(n));
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      const double mult = i == k ? 1.0 : 2.0;
      c(p++) = std::conj(mult * coeffs_(i, k));
    }
  return c;
}

QuadraticForm QuadraticForm::from_pair_coordinates(int n, const CVector& c) {
  if (c.size() != pair_count(n))
    throw InputError("pair coordinate vector has wrong length");
  CMatrix f = CMatrix::Zero(n, n);
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      const Complex entry = std::conj(c(p++));
      if (i == k) {
        f(i, i) = entry;
      } else {
        f(i, k) = entry * 0.5;
        f(k, i) = entry * 0.5;
      }
    }
  return QuadraticForm(f);
}

HermitianForm22::HermitianForm22(int n, const CMatrix& matrix) : n_(n) {
  if (n < 1) throw InputError("dimension must be positive");
  const int d = pair_count(n);
  if (matrix.rows() != d || matrix.cols() != d)
    throw InputError("Hermitian form matrix must be " + std::to_string(d) + "x" +
                     std::to_string(d) + " for n=" + std::to_string(n));
  matrix_ = (matrix + matrix.adjoint()) * 0.5;
}

double evaluate(const HermitianForm22& form, const CVector& v) {
  if (v.size() != form.dim())
    throw InputError("vector length " + std::to_string(v.size()) +
                     " does not match form dimension " + std::to_string(form.dim()));
  const CVector w = pair_monomials(v);
  // The imaginary part is rounding residue of a Hermitian quadratic form.
  return (w.adjoint() * form.matrix() * w)(0, 0).real();
}

HermitianForm22 from_quadric_squares(int n, const std::vector<QuadraticForm>& pos,
                                     const std::vector<QuadraticForm>& neg) {
  const int d = pair_count(n);
  CMatrix a = CMatrix::Zero(d, d);
  auto accumulate = [&](const std::vector<QuadraticForm>& forms, double sign) {
    for (const auto& q : forms) {
      if (q.dim() != n) throw InputError("quadratic forms have mixed dimensions");
      const CVector c = q.pair_coordinates();
      a += sign * (c * c.adjoint());
    }
  };
  accumulate(pos, 1.0);
  accumulate(neg, -1.0);
  return HermitianForm22(n, a);
}

HermitianForm22 from_quadric_squares(const std::vector<QuadraticForm>& pos,
                                     const std::vector<QuadraticForm>& neg) {
  if (pos.empty() && neg.empty())
    throw InputError("cannot infer dimension from empty form lists");
  const int n = !pos.empty() ? pos.front().dim() : neg.front().dim();
  return from_quadric_squares(n, pos, neg);
}

HermitianForm22 from_decomposition(const SquareDecomposition& dec) {
  return from_quadric_squares(dec.n, dec.pos, dec.neg);
}

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eigen(const HermitianForm22& form) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(form.matrix());
  if (solver.info() != Eigen::Success)
    throw NumericalError("Hermitian eigensolver failed on a " +
                         std::to_string(form.pair_dim()) + "x" +
                         std::to_string(form.pair_dim()) + " form");
  return solver;
}

double threshold_from(const RVector& eigenvalues, double rel_tol) {
  const double radius = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return rel_tol * (radius > 0.0 ? radius : 1.0);
}

}  // namespace

double eigen_threshold(const HermitianForm22& form, double rel_tol) {
  return threshold_from(hermitian_eigen(form).eigenvalues(), rel_tol);
}

Signature signature(const HermitianForm22& form, double rel_tol) {
  if (rel_tol < 0) throw InputError("tolerance must be nonnegative");
  const auto solver = hermitian_eigen(form);
  const RVector& lambda = solver.eigenvalues();
  const double tol = threshold_from(lambda, rel_tol);
  Signature s;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > tol)
      ++s.n_plus;
    else if (lambda(i) < -tol)
      ++s.n_minus;
    else
      ++s.n_zero;
  }
  return s;
}

SquareDecomposition decompose(const HermitianForm22& form, double rel_tol) {
  if (rel_tol < 0) throw InputError("tolerance must be nonnegative");
  const auto solver = hermitian_eigen(form);
  const RVector& lambda = solver.eigenvalues();  // ascending
  const CMatrix& u = solver.eigenvectors();
  const double tol = threshold_from(lambda, rel_tol);
  const int n = form.dim();

  SquareDecomposition dec;
  dec.n = n;
  // Largest positive eigenvalues first.
  for (Eigen::Index p = lambda.size() - 1; p >= 0; --p)
    if (lambda(p) > tol)
      dec.pos.push_back(
          QuadraticForm::from_pair_coordinates(n, std::sqrt(lambda(p)) * u.col(p)));
  // Most negative eigenvalues first.
  for (Eigen::Index p = 0; p < lambda.size(); ++p)
    if (lambda(p) < -tol)
      dec.neg.push_back(
          QuadraticForm::from_pair_coordinates(n, std::sqrt(-lambda(p)) * u.col(p)));
  return dec;
}

std::vector<QuadraticForm> dangelo_system(const SquareDecomposition& dec,
                                          const CMatrix& unitary) {
  const int big_n = dec.length();
  if (unitary.rows() != big_n || unitary.cols() != big_n)
    throw InputError("unitary must be " + std::to_string(big_n) + "x" +
                     std::to_string(big_n));
  const double defect =
      (unitary.adjoint() * unitary - CMatrix::Identity(big_n, big_n)).norm();
  if (defect > 1e-10)
    throw InputError("matrix is not unitary (||U*U - I|| = " + std::to_string(defect) + ")");

  auto padded = [&](const std::vector<QuadraticForm>& side, int p) {
    return p < static_cast<int>(side.size()) ? side[p].coeffs()
                                             : CMatrix(CMatrix::Zero(dec.n, dec.n));
  };
  std::vector<QuadraticForm> system;
  system.reserve(big_n);
  for (int p = 0; p < big_n; ++p) {
    CMatrix f = padded(dec.pos, p);
    for (int j = 0; j < big_n; ++j) f -= unitary(p, j) * padded(dec.neg, j);
    system.emplace_back(f);
  }
  return system;
}

HermitianForm22 pullback(const HermitianForm22& form, const CMatrix& chart) {
  const int n = form.dim();
  if (chart.rows() != n || chart.cols() != n)
    throw InputError("chart change must be n x n");
  const int d = pair_count(n);
  // w(Tv) = P w(v).
  CMatrix p(d, d);
  for (int row = 0; row < d; ++row) {
    const auto [i, k] = pair_at(n, row);
    for (int col = 0; col < d; ++col) {
      const auto [a, b] = pair_at(n, col);
      p(row, col) = a == b ? chart(i, a) * chart(k, a)
                           : chart(i, a) * chart(k, b) + chart(i, b) * chart(k, a);
    }
  }
  return HermitianForm22(n, p.adjoint() * form.matrix() * p);
}

}  // namespace curvkit
