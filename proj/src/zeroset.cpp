#include "curvkit/zeroset.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

#include "curvkit/linalg.hpp"
#include "curvkit/quadric.hpp"
#include "curvkit/rng.hpp"

namespace curvkit {

int bound_main1(int n, int big_n) {
  if (n < 1) throw InputError("bound needs n >= 1");
  if (big_n < 1) throw InputError("bound needs N >= 1 (N = 0 means H vanishes identically)");
  return n - (big_n * n) / (big_n + 1);
}

int bound_main2(int n, int big_n, int n_r) {
  if (n < 1) throw InputError("bound needs n >= 1");
  if (big_n < 1) throw InputError("bound needs N >= 1 (N = 0 means H vanishes identically)");
  if (n_r < 0 || n_r > n) throw InputError("bound needs 0 <= n_R <= n");
  return n - (big_n * n + (n - n_r)) / (big_n + 1);
}

namespace {

void require_semi_definite(const SquareDecomposition& dec, const char* who) {
  if (!dec.semi_definite())
    throw PreconditionError(std::string(who) + ": decomposition is indefinite (" +
                            std::to_string(dec.pos.size()) + " positive, " +
                            std::to_string(dec.neg.size()) +
                            " negative squares); analyse its D'Angelo systems instead");
}

double forms_scale(const std::vector<QuadraticForm>& forms) {
  double s = 0.0;
  for (const auto& q : forms) s = std::max(s, q.coeffs().norm());
  return s;
}

std::vector<CMatrix> nonzero_forms(const std::vector<QuadraticForm>& forms, double tol) {
  std::vector<CMatrix> out;
  for (const auto& q : forms)
    if (q.coeffs().norm() > tol) out.push_back(q.coeffs());
  return out;
}

CMatrix stack_rows(const std::vector<CMatrix>& forms, const std::vector<int>& which,
                   Eigen::Index cols) {
  CMatrix m(static_cast<Eigen::Index>(which.size()) * cols, cols);
  Eigen::Index row = 0;
  for (int p : which) {
    m.middleRows(row, cols) = forms[p];
    row += cols;
  }
  return m;
}

CMatrix restrict_form(const CMatrix& g, const CMatrix& basis) {
  const CMatrix r = basis.transpose() * g * basis;
  return (r + r.transpose()) * 0.5;
}

/// Common isotropic vector (unit length) of the given symmetric forms on C^k.
std::optional<CVector> common_isotropic_vector(const std::vector<CMatrix>& forms,
                                               Eigen::Index k, double scale, Rng& rng) {
  if (k == 0) return std::nullopt;
  const double tol = 1e-12 * scale;
  if (forms.empty()) {
    CVector z = rng.complex_vector(k);
    return CVector(z / z.norm());
  }
  if (forms.size() == 1) {
    const CMatrix& h = forms.front();
    if (k == 1) {
      if (std::abs(h(0, 0)) <= tol) return CVector::Ones(1);
      return std::nullopt;
    }
    // Root of the quadric restricted to a random 2-plane span(a, b).
    const CVector a = rng.complex_vector(k);
    const CVector b = rng.complex_vector(k);
    const Complex qa = (a.transpose() * h * a)(0, 0);
    const Complex qb = (b.transpose() * h * b)(0, 0);
    const Complex qab = (a.transpose() * h * b)(0, 0);
    CVector z;
    if (std::abs(qb) <= tol * b.squaredNorm()) {
      z = b;
    } else {
      const Complex disc = std::sqrt(qab * qab - qa * qb);
      const Complex t = (-qab + disc) / qb;
      z = a + t * b;
    }
    if (z.norm() == 0.0) return std::nullopt;
    z /= z.norm();
    if (std::abs((z.transpose() * h * z)(0, 0)) > tol) return std::nullopt;
    return z;
  }
  // Several forms: minimum-norm Newton steps on {z^T H_p z = 0, u^T z = 1}.
  const auto nf = static_cast<Eigen::Index>(forms.size());
  for (int attempt = 0; attempt < 6; ++attempt) {
    CVector z = rng.complex_vector(k);
    const CVector u = z.conjugate() / z.squaredNorm();
    for (int iter = 0; iter < 60; ++iter) {
      CVector res(nf + 1);
      CMatrix jac(nf + 1, k);
      double worst = 0.0;
      for (Eigen::Index p = 0; p < nf; ++p) {
        const CVector hz = forms[p] * z;
        res(p) = (z.transpose() * hz)(0, 0);
        jac.row(p) = 2.0 * hz.transpose();
        worst = std::max(worst, std::abs(res(p)));
      }
      res(nf) = (u.transpose() * z)(0, 0) - 1.0;
      jac.row(nf) = u.transpose();
      if (worst <= 1e-14 * scale * z.squaredNorm() && std::abs(res(nf)) < 1e-12) {
        CVector unit = z / z.norm();
        bool ok = true;
        for (const auto& h : forms)
          if (std::abs((unit.transpose() * h * unit)(0, 0)) > tol) ok = false;
        if (ok) return unit;
        break;
      }
      const CVector step = Eigen::CompleteOrthogonalDecomposition<CMatrix>(jac).solve(-res);
      z += step;
      if (!z.allFinite() || z.norm() > 1e8 / std::sqrt(u.squaredNorm())) break;
    }
  }
  return std::nullopt;
}

struct Candidate {
  CVector x;          // in current reduced coordinates, unit length
  CMatrix next;       // orthonormal basis of the admissible space minus x
};

/// Subsets of {0..m-1} ordered by decreasing size; within a size the order
/// is shuffled by rng. Capped at `limit` subsets.
std::vector<std::vector<int>> ordered_subsets(int m, Rng& rng, std::size_t limit) {
  std::vector<std::vector<int>> out;
  if (m <= 12) {
    std::vector<std::vector<std::vector<int>>> by_size(m + 1);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<int> s;
      for (int p = 0; p < m; ++p)
        if (mask & (1u << p)) s.push_back(p);
      by_size[s.size()].push_back(std::move(s));
    }
    for (int size = m; size >= 0; --size) {
      auto& group = by_size[size];
      for (std::size_t i = group.size(); i > 1; --i)
        std::swap(group[i - 1], group[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
      for (auto& s : group) {
        if (out.size() >= limit) return out;
        out.push_back(std::move(s));
      }
    }
    return out;
  }
  // Too many forms for the full lattice: leave-one-out, singletons, empty.
  for (int drop = 0; drop < m; ++drop) {
    std::vector<int> s;
    for (int p = 0; p < m; ++p)
      if (p != drop) s.push_back(p);
    out.push_back(std::move(s));
  }
  for (int p = 0; p < m; ++p) out.push_back({p});
  out.push_back({});
  return out;
}

CMatrix greedy_isotropic(const std::vector<CMatrix>& base_forms, int n, double scale,
                         double rel_tol, Rng& rng) {
  const double floor = scale;
  CMatrix y = CMatrix::Identity(n, n);
  std::vector<CMatrix> forms = base_forms;
  CMatrix witness(n, 0);
  auto append = [&](const CMatrix& cols) {
    CMatrix w(n, witness.cols() + cols.cols());
    w << witness, cols;
    witness = std::move(w);
  };
  auto restrict_all = [&](const CMatrix& basis) {
    y = y * basis;
    for (auto& g : forms) g = restrict_form(g, basis);
  };

  while (y.cols() > 0) {
    const Eigen::Index c = y.cols();
    std::vector<int> active;
    for (int p = 0; p < static_cast<int>(forms.size()); ++p)
      if (forms[p].norm() > rel_tol * floor) active.push_back(p);
    if (active.empty()) {
      append(y);
      break;
    }
    const CMatrix radical = linalg::null_space(stack_rows(forms, active, c), rel_tol, floor);
    if (radical.cols() > 0) {
      append(y * radical);
      restrict_all(linalg::orthogonal_complement(radical, c));
      continue;
    }

    std::optional<Candidate> best;
    const auto subsets = ordered_subsets(static_cast<int>(active.size()), rng, 512);
    for (const auto& subset : subsets) {
      if (subset.size() == active.size()) continue;  // joint kernel is the radical
      std::vector<int> in_s;
      for (int idx : subset) in_s.push_back(active[idx]);
      const CMatrix joint = in_s.empty() ? CMatrix(CMatrix::Identity(c, c))
                                         : linalg::null_space(stack_rows(forms, in_s, c), rel_tol, floor);
      if (joint.cols() == 0) continue;
      std::vector<CMatrix> remaining;
      for (std::size_t idx = 0; idx < active.size(); ++idx)
        if (std::find(subset.begin(), subset.end(), static_cast<int>(idx)) == subset.end())
          remaining.push_back(restrict_form(forms[active[idx]], joint));
      const auto z = common_isotropic_vector(remaining, joint.cols(), scale, rng);
      if (!z) continue;
      CVector x = joint * *z;
      x /= x.norm();
      // Admissible complement: y with x^T G_p y = 0 for all p, minus x itself.
      CMatrix constraints(static_cast<Eigen::Index>(active.size()), c);
      for (std::size_t idx = 0; idx < active.size(); ++idx)
        constraints.row(static_cast<Eigen::Index>(idx)) = (forms[active[idx]] * x).transpose();
      const CMatrix admissible = linalg::null_space(constraints, rel_tol, floor);
      const CMatrix projected =
          (CMatrix::Identity(c, c) - x * x.adjoint()) * admissible;
      CMatrix next = linalg::orthonormal_span(projected, 1e-8, 1.0);
      if (!best || next.cols() > best->next.cols()) best = Candidate{x, std::move(next)};
      if (best->next.cols() == c - 1) break;
    }
    if (!best) break;
    append(y * best->x);
    restrict_all(best->next);
  }
  return witness;
}

/// Orthonormal n x d basis B with B^T G_p B = 0 for every form, by minimum-norm
/// Gauss-Newton steps from `start` followed by a QR retraction.
std::optional<CMatrix> newton_isotropic(const std::vector<CMatrix>& forms, const CMatrix& start,
                                        double scale) {
  const Eigen::Index n = start.rows();
  const Eigen::Index d = start.cols();
  const Eigen::Index pairs = d * (d + 1) / 2;
  const auto nf = static_cast<Eigen::Index>(forms.size());
  auto retract = [](const CMatrix& b) {
    Eigen::HouseholderQR<CMatrix> qr(b);
    return CMatrix(CMatrix(qr.householderQ()).leftCols(b.cols()));
  };
  CMatrix b = retract(start);
  CVector res(nf * pairs);
  CMatrix jac(nf * pairs, n * d);
  for (int iter = 0; iter < 80; ++iter) {
    jac.setZero();
    double worst = 0.0;
    Eigen::Index row = 0;
    for (const auto& g : forms) {
      const CMatrix gb = g * b;
      const CMatrix m = b.transpose() * gb;
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j, ++row) {
          res(row) = m(i, j);
          worst = std::max(worst, std::abs(m(i, j)));
          for (Eigen::Index a = 0; a < n; ++a) {
            jac(row, a + n * i) += gb(a, j);
            jac(row, a + n * j) += gb(a, i);
          }
        }
    }
    if (worst <= 1e-14 * scale) return b;
    const CVector step = Eigen::CompleteOrthogonalDecomposition<CMatrix>(jac).solve(-res);
    if (!step.allFinite()) return std::nullopt;
    b += Eigen::Map<const CMatrix>(step.data(), n, d);
    b = retract(b);
  }
  return std::nullopt;
}

/// Grow an isotropic witness one dimension at a time up to `target`.
CMatrix extend_by_newton(const std::vector<CMatrix>& forms, CMatrix witness, int target,
                         double scale, Rng& rng) {
  const Eigen::Index n = witness.rows();
  while (witness.cols() < target) {
    const Eigen::Index d = witness.cols() + 1;
    std::optional<CMatrix> found;
    for (int attempt = 0; attempt < 4 && !found; ++attempt) {
      CMatrix start(n, d);
      if (attempt == 0 && witness.cols() > 0)
        start << witness, rng.complex_vector(n);
      else
        start = rng.complex_matrix(n, d);
      found = newton_isotropic(forms, start, scale);
    }
    if (!found) break;
    witness = *found;
  }
  return witness;
}

}  // namespace

EtaUpper eta_upper(const SquareDecomposition& dec, double rel_tol) {
  require_semi_definite(dec, "eta_upper");
  const auto& side = dec.active_side();
  EtaUpper out;
  out.value = dec.n;
  out.provenance = "no nonzero quadrics";
  const double tol = rel_tol * std::max(forms_scale(side), 1e-300);
  for (std::size_t p = 0; p < side.size(); ++p) {
    if (side[p].coeffs().norm() <= tol) continue;
    const int r = rank_and_kernel(side[p], rel_tol).rank;
    const int bound = isotropic_bound(dec.n, r);
    if (out.quadric < 0 || bound < out.value) {
      out.value = bound;
      out.quadric = static_cast<int>(p);
      out.rank = r;
    }
  }
  if (out.quadric >= 0) {
    std::ostringstream os;
    os << "quadric " << out.quadric + 1 << " has rank " << out.rank << " in C^" << dec.n
       << ", isotropic bound " << out.value;
    out.provenance = os.str();
  }
  return out;
}

EtaLower eta_lower_search(const SquareDecomposition& dec, int trials, std::uint64_t seed,
                          int stop_at, double rel_tol) {
  require_semi_definite(dec, "eta_lower_search");
  if (trials < 1) throw InputError("eta search needs trials >= 1");
  const int n = dec.n;
  const auto& side = dec.active_side();
  const double scale = forms_scale(side);
  const auto forms = nonzero_forms(side, rel_tol * std::max(scale, 1e-300));
  if (forms.empty()) return {n, Subspace::full(n)};

  // No witness can beat the isotropic bound of any single quadric.
  int target = n;
  for (const auto& g : forms)
    target = std::min(target, isotropic_bound(n, rank_and_kernel(QuadraticForm(g), rel_tol).rank));

  EtaLower best{-1, Subspace::zero(n)};
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    CMatrix w = greedy_isotropic(forms, n, scale, rel_tol, rng);
    if (w.cols() < target) w = extend_by_newton(forms, w, target, scale, rng);
    if (w.cols() > best.value) {
      Eigen::HouseholderQR<CMatrix> qr(w);
      best = {static_cast<int>(w.cols()),
              Subspace(n, CMatrix(qr.householderQ()).leftCols(w.cols()))};
    }
    if (stop_at >= 0 && best.value >= stop_at) break;
  }
  return best;
}

double witness_residual(const HermitianForm22& form, const Subspace& witness, int samples,
                        std::uint64_t seed) {
  if (witness.dim() == 0) return 0.0;
  const double scale = std::max(form.matrix().norm(), 1e-300);
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CVector v = witness.basis() * rng.complex_vector(witness.dim());
    const double n2 = v.squaredNorm();
    worst = std::max(worst, std::abs(evaluate(form, v)) / (scale * n2 * n2));
  }
  return worst;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::not_applicable: return "not_applicable";
  }
  return "unknown";
}

namespace {

// r_0 at the point lies in [n - upper, n - lower].
CheckStatus bracket_status(int n, const EtaCertificate& eta, int bound) {
  if (n - eta.upper >= bound) return CheckStatus::pass;
  if (n - eta.lower < bound) return CheckStatus::fail;
  return CheckStatus::inconclusive;
}

}  // namespace

PointReport verify_point(const KahlerCurvature& r, const HermitianMetric& g, int trials,
                         std::uint64_t seed, double rel_tol) {
  const int n = r.dim();
  if (g.dim() != n) throw InputError("metric dimension does not match tensor");
  const HermitianForm22 form = hsc_numerator_form(r);
  PointReport rep;
  rep.n = n;
  rep.signature = signature(form, rel_tol);
  if (rep.signature.n_plus > 0 && rep.signature.n_minus > 0)
    throw PreconditionError("holomorphic sectional curvature is indefinite (signature " +
                            std::to_string(rep.signature.n_plus) + "," +
                            std::to_string(rep.signature.n_minus) + "," +
                            std::to_string(rep.signature.n_zero) + ")");
  const SquareDecomposition dec = decompose(form, rel_tol);
  rep.big_n = dec.length();
  rep.n_r = n - curvature_kernel(r, rel_tol).dim();

  const EtaUpper upper = eta_upper(dec, rel_tol);
  EtaLower lower = eta_lower_search(dec, trials, seed, upper.value, rel_tol);
  rep.eta = {lower.value, upper.value, lower.value == upper.value, std::move(lower.witness),
             upper.provenance};
  rep.r_point = n - rep.eta.lower;

  const CMatrix ric = ricci(r, g);
  rep.ricci_det = ric.determinant();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(ric, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("Ricci eigensolver failed");
  const RVector& lam = eig.eigenvalues();
  const double lam_tol = rel_tol * std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  rep.ricci_definite = lam.minCoeff() > lam_tol || lam.maxCoeff() < -lam_tol;
  rep.ricci_nondegenerate = lam.cwiseAbs().minCoeff() > lam_tol;

  if (rep.big_n == 0) {
    // H vanishes identically: the whole tensor is zero and r_0 = 0.
    rep.bound_main1 = 0;
    rep.bound_main2 = 0;
    rep.main1 = CheckStatus::not_applicable;
    rep.main2 = bracket_status(n, rep.eta, 0);
    return rep;
  }
  rep.bound_main1 = bound_main1(n, rep.big_n);
  rep.bound_main2 = bound_main2(n, rep.big_n, rep.n_r);
  rep.main1 = rep.ricci_nondegenerate ? bracket_status(n, rep.eta, rep.bound_main1)
                                      : CheckStatus::not_applicable;
  rep.main2 = bracket_status(n, rep.eta, rep.bound_main2);
  return rep;
}

LocalSharpExample local_sharp_example(int n, int big_n, bool negated) {
  SharpFamily fam = sharp_family(n, big_n);
  LocalSharpExample ex;
  ex.dec.n = n;
  for (int b = 0; b < fam.blocks; ++b)
    (negated ? ex.dec.neg : ex.dec.pos).push_back(fam.quadrics[b]);

  auto& md = ex.metadata;
  md.eta = fam.eta;
  md.blocks = fam.blocks;
  md.negated = negated;
  md.completion_squares = fam.completion_squares;
  md.multiplicities.assign(n, 0);
  for (int b = 0; b < fam.blocks; ++b) {
    const CMatrix& f = fam.quadrics[b].coeffs();
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k)
        if (f(i, k) != Complex(0.0, 0.0)) {
          ++md.multiplicities[i];
          if (k != i) ++md.multiplicities[k];
        }
  }
  md.exact_cover = std::all_of(md.multiplicities.begin(), md.multiplicities.end(),
                               [](int m) { return m >= 1; });
  return ex;
}

}  // namespace curvkit
