#include "curvkit/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "curvkit/linalg.hpp"

namespace curvkit {

CurvatureArray::CurvatureArray(int n) : n_(n) {
  if (n < 1) throw InputError("tensor dimension must be positive");
  data_.assign(static_cast<std::size_t>(n) * n * n * n, Complex(0.0, 0.0));
}

double CurvatureArray::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double CurvatureArray::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

namespace {

Index4 swap_holomorphic(const Index4& x) { return {x[2], x[1], x[0], x[3]}; }
Index4 swap_antiholomorphic(const Index4& x) { return {x[0], x[3], x[2], x[1]}; }
Index4 conjugate_slots(const Index4& x) { return {x[1], x[0], x[3], x[2]}; }

std::string format_index(const Index4& x) {
  std::ostringstream os;
  os << "(" << x[0] + 1 << "," << x[1] + 1 << "," << x[2] + 1 << "," << x[3] + 1 << ")";
  return os.str();
}

template <typename Visit>
void for_each_index(int n, Visit&& visit) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) visit(Index4{i, j, k, l});
}

Complex conj_if(Complex z, bool flag) { return flag ? std::conj(z) : z; }

}  // namespace

std::array<SymmetryImage, 8> symmetry_orbit(const Index4& x) {
  std::array<SymmetryImage, 8> out{};
  int t = 0;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Index4 y = x;
        if (a) y = swap_holomorphic(y);
        if (b) y = swap_antiholomorphic(y);
        if (c) y = conjugate_slots(y);
        out[t++] = {y, c == 1};
      }
  return out;
}

KahlerCurvature KahlerCurvature::symmetrized(const CurvatureArray& raw) {
  const int n = raw.dim();
  CurvatureArray out(n);
  std::vector<char> done(raw.data().size(), 0);
  auto flat = [n](const Index4& x) {
    return ((static_cast<std::size_t>(x[0]) * n + x[1]) * n + x[2]) * n + x[3];
  };
  for_each_index(n, [&](const Index4& x) {
    if (done[flat(x)]) return;
    const auto orbit = symmetry_orbit(x);
    Complex avg(0.0, 0.0);
    for (const auto& img : orbit) avg += conj_if(raw(img.index), img.conjugated);
    avg /= 8.0;
    // An orbit that reaches the same slot with and without conjugation
    // forces a real value.
    bool real_only = false;
    for (const auto& a : orbit)
      for (const auto& b : orbit)
        if (a.index == b.index && a.conjugated != b.conjugated) real_only = true;
    if (real_only) avg = Complex(avg.real(), 0.0);
    for (const auto& img : orbit) {
      out(img.index) = conj_if(avg, img.conjugated);
      done[flat(img.index)] = 1;
    }
  });
  return KahlerCurvature(std::move(out));
}

HermitianMetric::HermitianMetric(const CMatrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0)
    throw InputError("metric must be a nonempty square matrix");
  const double scale = std::max(linalg::max_abs(g), 1e-300);
  if (linalg::max_abs(g - g.adjoint()) > 1e-12 * scale)
    throw InputError("metric is not Hermitian");
  g_ = (g + g.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(g_, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("metric eigensolver failed");
  if (eig.eigenvalues().minCoeff() <= 1e-12 * g_.norm())
    throw InputError("metric is not positive definite");
  inverse_ = g_.inverse();
}

KahlerCurvature validate(const CurvatureArray& raw, double rel_tol) {
  const int n = raw.dim();
  const double threshold = rel_tol * raw.max_abs();
  double worst = 0.0;
  std::optional<Index4> location;
  Index4 partner{};
  std::string family;
  for_each_index(n, [&](const Index4& x) {
    const Complex value = raw(x);
    auto consider = [&](const Index4& y, double residual, const char* name) {
      if (residual > worst) {
        worst = residual;
        location = x;
        partner = y;
        family = name;
      }
    };
    const Index4 s1 = swap_holomorphic(x);
    consider(s1, std::abs(value - raw(s1)), "Kaehler symmetry R_{ijkl} = R_{kjil}");
    const Index4 s2 = swap_antiholomorphic(x);
    consider(s2, std::abs(value - raw(s2)), "Kaehler symmetry R_{ijkl} = R_{ilkj}");
    const Index4 c = conjugate_slots(x);
    consider(c, std::abs(value - std::conj(raw(c))), "conjugation symmetry");
  });
  if (location && worst > threshold) {
    std::ostringstream os;
    os << family << " violated at " << format_index(partner) << " against "
       << format_index(*location) << " (max residual " << worst << ")";
    throw SymmetryViolation(os.str(), worst, partner, *location);
  }
  return KahlerCurvature::symmetrized(raw);
}

KahlerCurvature from_entries(int n, const std::vector<TensorEntry>& entries,
                             double rel_tol) {
  CurvatureArray raw(n);
  std::vector<char> set(raw.data().size(), 0);
  auto flat = [n](const Index4& x) {
    return ((static_cast<std::size_t>(x[0]) * n + x[1]) * n + x[2]) * n + x[3];
  };
  double scale = 0.0;
  for (const auto& e : entries) {
    for (int s : e.index)
      if (s < 0 || s >= n) throw InputError("tensor index out of range 1.." + std::to_string(n));
    scale = std::max(scale, std::abs(e.value));
  }
  // Explicit entries first so that closure never overrides a listed value.
  for (const auto& e : entries) {
    const auto f = flat(e.index);
    if (set[f] == 2 && std::abs(raw(e.index) - e.value) > rel_tol * scale)
      throw SymmetryViolation("entry " + format_index(e.index) + " listed twice with different values",
                              std::abs(raw(e.index) - e.value), e.index, e.index);
    raw(e.index) = e.value;
    set[f] = 2;
  }
  for (const auto& e : entries)
    for (const auto& img : symmetry_orbit(e.index)) {
      const auto f = flat(img.index);
      if (set[f] == 0) {
        raw(img.index) = conj_if(e.value, img.conjugated);
        set[f] = 1;
      }
    }
  return validate(raw, rel_tol);
}

double hsc(const KahlerCurvature& r, const HermitianMetric& g, const CVector& v) {
  const int n = r.dim();
  if (g.dim() != n || v.size() != n) throw InputError("dimension mismatch in hsc");
  const double vnorm = v.norm();
  if (vnorm == 0.0) throw InputError("holomorphic sectional curvature needs v != 0");
  Complex numer(0.0, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          numer += r(i, j, k, l) * v(i) * std::conj(v(j)) * v(k) * std::conj(v(l));
  // sum g_{i jbar} v_i conj(v_j), squared.
  const double length = (v.transpose() * g.matrix() * v.conjugate())(0, 0).real();
  return numer.real() / (length * length);
}

HermitianForm22 hsc_numerator_form(const KahlerCurvature& r) {
  const int n = r.dim();
  const int d = pair_count(n);
  CMatrix a(d, d);
  for (int row = 0; row < d; ++row) {
    const auto [j, l] = pair_at(n, row);
    const double m_jl = j == l ? 1.0 : 2.0;
    for (int col = 0; col < d; ++col) {
      const auto [i, k] = pair_at(n, col);
      const double m_ik = i == k ? 1.0 : 2.0;
      a(row, col) = m_ik * m_jl * r(i, j, k, l);
    }
  }
  return HermitianForm22(n, a);
}

KahlerCurvature from_numerator_form(const HermitianForm22& form) {
  const int n = form.dim();
  CurvatureArray raw(n);
  for_each_index(n, [&](const Index4& x) {
    const auto [i, j, k, l] = x;
    const double m = (i == k ? 1.0 : 2.0) * (j == l ? 1.0 : 2.0);
    raw(x) = form.matrix()(pair_index(n, j, l), pair_index(n, i, k)) / m;
  });
  return KahlerCurvature::symmetrized(raw);
}

namespace {

void add_outer_squares(CurvatureArray& raw, const CMatrix& f, double sign) {
  const int n = raw.dim();
  for_each_index(n, [&](const Index4& x) {
    raw(x) += sign * f(x[0], x[2]) * std::conj(f(x[1], x[3]));
  });
}

}  // namespace

KahlerCurvature recover(const SquareDecomposition& dec) {
  CurvatureArray raw(dec.n);
  for (const auto& f : dec.pos) {
    if (f.dim() != dec.n) throw InputError("decomposition forms have mixed dimensions");
    add_outer_squares(raw, f.coeffs(), 1.0);
  }
  for (const auto& g : dec.neg) {
    if (g.dim() != dec.n) throw InputError("decomposition forms have mixed dimensions");
    add_outer_squares(raw, g.coeffs(), -1.0);
  }
  return KahlerCurvature::symmetrized(raw);
}

KahlerCurvature graph_curvature(const std::vector<CMatrix>& hessians, int orientation) {
  if (orientation != 1 && orientation != -1)
    throw InputError("orientation must be +1 or -1");
  if (hessians.empty()) throw InputError("graph curvature needs at least one Hessian");
  const Eigen::Index n = hessians.front().rows();
  CurvatureArray raw(static_cast<int>(n));
  for (const auto& f : hessians) {
    if (f.rows() != n || f.cols() != n) throw InputError("Hessians must share dimension n");
    const double scale = std::max(linalg::max_abs(f), 1.0);
    if (linalg::max_abs(f - f.transpose()) > 1e-12 * scale)
      throw InputError("Hessian matrix is not symmetric");
    add_outer_squares(raw, f, static_cast<double>(orientation));
  }
  return KahlerCurvature::symmetrized(raw);
}

CMatrix ricci(const KahlerCurvature& r, const HermitianMetric& g) {
  const int n = r.dim();
  if (g.dim() != n) throw InputError("metric dimension does not match tensor");
  const CMatrix& ginv = g.inverse();
  CMatrix ric = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) ric(i, j) += ginv(l, k) * r(i, j, k, l);
  return (ric + ric.adjoint()) * 0.5;
}

double scalar(const KahlerCurvature& r, const HermitianMetric& g) {
  const CMatrix ric = ricci(r, g);
  return (g.inverse().transpose().cwiseProduct(ric)).sum().real();
}

Subspace curvature_kernel(const KahlerCurvature& r, double rel_tol) {
  const int n = r.dim();
  CMatrix rows(static_cast<Eigen::Index>(n) * n * n, n);
  Eigen::Index row = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l, ++row)
        for (int i = 0; i < n; ++i) rows(row, i) = r(i, j, k, l);
  return Subspace(n, linalg::null_space(rows, rel_tol));
}

PropagationReport kernel_propagation_check(const KahlerCurvature& r, const CVector& v,
                                           double rel_tol) {
  const int n = r.dim();
  if (v.size() != n) throw InputError("vector length does not match tensor dimension");
  if (v.norm() == 0.0) throw InputError("propagation check needs v != 0");
  const Signature sig = signature(hsc_numerator_form(r));
  if (sig.n_plus > 0 && sig.n_minus > 0)
    throw PreconditionError("holomorphic sectional curvature is indefinite (signature " +
                            std::to_string(sig.n_plus) + "," + std::to_string(sig.n_minus) +
                            "," + std::to_string(sig.n_zero) +
                            "); the propagation lemma needs a semi-definite form");
  const CVector u = v / v.norm();
  PropagationReport rep;
  rep.scale = r.max_abs();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex a(0.0, 0.0);
      for (int k = 0; k < n; ++k) {
        Complex b(0.0, 0.0);
        for (int l = 0; l < n; ++l) {
          const Complex t = r(i, j, k, l) * std::conj(u(l));
          b += t;
          a += t * u(k);
        }
        rep.propagated_residual = std::max(rep.propagated_residual, std::abs(b));
      }
      rep.hypothesis_residual = std::max(rep.hypothesis_residual, std::abs(a));
    }
  const double threshold = rel_tol * rep.scale;
  rep.hypothesis_met = rep.hypothesis_residual <= threshold;
  rep.conclusion_holds = !rep.hypothesis_met || rep.propagated_residual <= 10.0 * threshold;
  return rep;
}

}  // namespace curvkit
