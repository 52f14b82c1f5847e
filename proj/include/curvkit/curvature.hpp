#pragma once

#include <array>
#include <vector>

#include "curvkit/core.hpp"
#include "curvkit/hermform.hpp"
#include "curvkit/subspace.hpp"

namespace curvkit {

using Index4 = std::array<int, 4>;

/// Dense n^4 array of complex scalars, entry (i, j, k, l) standing for
/// R_{i jbar k lbar}. No symmetry is assumed.
class CurvatureArray {
 public:
  explicit CurvatureArray(int n);

  int dim() const { return n_; }
  Complex& operator()(int i, int j, int k, int l) { return data_[offset(i, j, k, l)]; }
  Complex operator()(int i, int j, int k, int l) const { return data_[offset(i, j, k, l)]; }
  Complex operator()(const Index4& x) const { return (*this)(x[0], x[1], x[2], x[3]); }
  Complex& operator()(const Index4& x) { return (*this)(x[0], x[1], x[2], x[3]); }

  double max_abs() const;
  double frobenius_norm() const;
  const std::vector<Complex>& data() const { return data_; }

 private:
  std::size_t offset(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }

  int n_;
  std::vector<Complex> data_;
};

/// Thrown by validate; indices are 0-based. The scan is lexicographic and the
/// first entry attaining the largest residual is `partner`; `location` is its
/// symmetric image, the entry reported as violating.
class SymmetryViolation : public ValidationError {
 public:
  SymmetryViolation(const std::string& what, double residual, Index4 location,
                    Index4 partner)
      : ValidationError(what), residual_(residual), location_(location), partner_(partner) {}

  double residual() const { return residual_; }
  const Index4& location() const { return location_; }
  const Index4& partner() const { return partner_; }

 private:
  double residual_;
  Index4 location_;
  Index4 partner_;
};

/// Curvature tensor of a Kaehler metric at a point. Invariants, exact in
/// floating point:
///   conj(R_{j ibar l kbar}) = R_{i jbar k lbar}
///   R_{i jbar k lbar} = R_{k jbar i lbar} = R_{i lbar k jbar}
class KahlerCurvature {
 public:
  static KahlerCurvature zero(int n) { return KahlerCurvature(CurvatureArray(n)); }
  /// Orthogonal projection onto the symmetric tensors; no tolerance check.
  static KahlerCurvature symmetrized(const CurvatureArray& raw);

  int dim() const { return values_.dim(); }
  Complex operator()(int i, int j, int k, int l) const { return values_(i, j, k, l); }
  const CurvatureArray& array() const { return values_; }
  double max_abs() const { return values_.max_abs(); }
  double frobenius_norm() const { return values_.frobenius_norm(); }

 private:
  explicit KahlerCurvature(CurvatureArray values) : values_(std::move(values)) {}

  CurvatureArray values_;
};

/// g_{i jbar} as a Hermitian positive-definite matrix.
class HermitianMetric {
 public:
  explicit HermitianMetric(const CMatrix& g);
  static HermitianMetric identity(int n) { return HermitianMetric(CMatrix::Identity(n, n)); }

  int dim() const { return static_cast<int>(g_.rows()); }
  const CMatrix& matrix() const { return g_; }
  /// Matrix inverse G^{-1}; the contravariant metric is g^{k lbar} = G^{-1}(l, k).
  const CMatrix& inverse() const { return inverse_; }

 private:
  CMatrix g_;
  CMatrix inverse_;
};

/// All eight images of x under the symmetry group, with a flag telling
/// whether the entry at that image is the conjugate of the entry at x.
struct SymmetryImage {
  Index4 index;
  bool conjugated;
};
std::array<SymmetryImage, 8> symmetry_orbit(const Index4& x);

/// Checks both symmetry families within rel_tol * max|R| and returns the
/// symmetrized tensor.
KahlerCurvature validate(const CurvatureArray& raw, double rel_tol = 1e-10);

struct TensorEntry {
  Index4 index;  // 0-based
  Complex value;
};

/// Builds a tensor from a sparse entry list. Unlisted entries are filled from
/// the symmetry orbits of listed ones, then zero; listed entries that
/// contradict each other beyond rel_tol raise SymmetryViolation.
KahlerCurvature from_entries(int n, const std::vector<TensorEntry>& entries,
                             double rel_tol = 1e-10);

double hsc(const KahlerCurvature& r, const HermitianMetric& g, const CVector& v);

/// Numerator of the holomorphic sectional curvature as a Hermitian form on
/// the pair basis: A_{(jl),(ik)} = m_ik m_jl R_{i jbar k lbar}, m = 1 on the
/// diagonal pair and 2 otherwise.
HermitianForm22 hsc_numerator_form(const KahlerCurvature& r);

/// Inverse of hsc_numerator_form (every Hermitian form is the numerator of
/// exactly one Kaehler tensor).
KahlerCurvature from_numerator_form(const HermitianForm22& form);

/// R_{i jbar k lbar} = sum_p f^p_ik conj(f^p_jl) - sum_p g^p_ik conj(g^p_jl).
KahlerCurvature recover(const SquareDecomposition& dec);

/// orientation * sum_s F^s_ik conj(F^s_jl); orientation -1 is the graph of
/// a submanifold of flat space.
KahlerCurvature graph_curvature(const std::vector<CMatrix>& hessians, int orientation);

/// Ric_{i jbar} = sum_{k,l} g^{k lbar} R_{i jbar k lbar}.
CMatrix ricci(const KahlerCurvature& r, const HermitianMetric& g);
double scalar(const KahlerCurvature& r, const HermitianMetric& g);

/// L = {v : sum_i v_i R_{i jbar k lbar} = 0 for all j, k, l}. Singular values
/// below rel_tol * sigma_max are treated as zero.
Subspace curvature_kernel(const KahlerCurvature& r, double rel_tol = kDefaultTol);
inline int curvature_rank(const KahlerCurvature& r, double rel_tol = kDefaultTol) {
  return r.dim() - curvature_kernel(r, rel_tol).dim();
}

struct PropagationReport {
  double scale = 0;                 // max |R|
  double hypothesis_residual = 0;   // max_{i,j} |R_{i jbar v vbar}|, v unit
  double propagated_residual = 0;   // max_{i,j,k} |R_{i jbar k vbar}|
  bool hypothesis_met = false;
  bool conclusion_holds = false;    // vacuous when the hypothesis fails
};

/// Numerical check of the propagation lemma: on a tensor with semi-definite
/// holomorphic sectional curvature, R_{. . v vbar} = 0 forces R_{. . . vbar} = 0.
/// Throws PreconditionError when the form is indefinite.
PropagationReport kernel_propagation_check(const KahlerCurvature& r, const CVector& v,
                                           double rel_tol = kDefaultTol);

}  // namespace curvkit
