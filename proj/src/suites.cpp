#include "curvkit/suites.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "curvkit/curvature.hpp"
#include "curvkit/hermform.hpp"
#include "curvkit/io.hpp"
#include "curvkit/linalg.hpp"
#include "curvkit/quadric.hpp"
#include "curvkit/rng.hpp"
#include "curvkit/zeroset.hpp"

namespace curvkit::suites {

namespace {

CMatrix random_hermitian(int d, Rng& rng) {
  const CMatrix z = rng.complex_matrix(d, d);
  return (z + z.adjoint()) * 0.5;
}

CMatrix random_symmetric(int n, Rng& rng) {
  const CMatrix z = rng.complex_matrix(n, n);
  return (z + z.transpose()) * 0.5;
}

KahlerCurvature random_kahler(int n, Rng& rng) {
  return from_numerator_form(HermitianForm22(n, random_hermitian(pair_count(n), rng)));
}

double relative_frobenius(const KahlerCurvature& a, const KahlerCurvature& b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < a.array().data().size(); ++i)
    diff += std::norm(a.array().data()[i] - b.array().data()[i]);
  return std::sqrt(diff) / std::max(b.frobenius_norm(), 1e-300);
}

// Direct tensor transformation R'_{ijkl} = T_ai conj(T_bj) T_ck conj(T_dl) R_abcd,
// done one slot at a time.
KahlerCurvature transform_tensor(const KahlerCurvature& r, const CMatrix& t) {
  const int n = r.dim();
  CurvatureArray cur(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) cur(i, j, k, l) = r(i, j, k, l);
  for (int slot = 0; slot < 4; ++slot) {
    CurvatureArray next(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Complex acc(0.0, 0.0);
            Index4 src{i, j, k, l};
            const int out = src[slot];
            for (int a = 0; a < n; ++a) {
              src[slot] = a;
              const Complex coef = slot % 2 == 0 ? t(a, out) : std::conj(t(a, out));
              acc += coef * cur(src);
            }
            next(i, j, k, l) = acc;
          }
    cur = std::move(next);
  }
  return KahlerCurvature::symmetrized(cur);
}

std::string suite_round_trip(std::uint64_t seed, bool& ok) {
  Rng rng(seed, 1);
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n)
    for (int trial = 0; trial < 100; ++trial) {
      const KahlerCurvature r = random_kahler(n, rng);
      const KahlerCurvature back = recover(decompose(hsc_numerator_form(r)));
      worst = std::max(worst, relative_frobenius(back, r));
    }
  ok = worst <= 1e-8;
  std::ostringstream os;
  os << "400 tensors, worst relative Frobenius error " << worst << " (limit 1e-8)";
  return os.str();
}

std::string suite_chart_invariance(std::uint64_t seed, bool& ok) {
  Rng rng(seed, 2);
  int mismatches = 0;
  double route_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const KahlerCurvature r = random_kahler(n, rng);
    CMatrix t;
    do {
      t = rng.complex_matrix(n, n);
    } while (Eigen::JacobiSVD<CMatrix>(t).singularValues()(n - 1) < 0.05);
    const HermitianForm22 form = hsc_numerator_form(r);
    const HermitianForm22 pulled = pullback(form, t);
    // Second route: transform the tensor itself.
    const HermitianForm22 direct = hsc_numerator_form(transform_tensor(r, t));
    route_gap = std::max(route_gap, (pulled.matrix() - direct.matrix()).norm() /
                                        pulled.matrix().norm());
    const Signature s0 = signature(form);
    if (!(s0 == signature(pulled)) || !(s0 == signature(direct))) ++mismatches;
  }
  ok = mismatches == 0 && route_gap <= 1e-10;
  std::ostringstream os;
  os << "100 chart changes, " << mismatches << " signature mismatches, pullback vs tensor "
     << "transform gap " << route_gap;
  return os.str();
}

std::string suite_theta(std::uint64_t seed, bool& ok) {
  Rng rng(seed, 3);
  int bad = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int n = 2 + inst % 7;
    const QuadraticForm f = random_quadric_of_rank(n, n, rng);
    const KahlerCurvature r = graph_curvature({f.coeffs()}, -1);
    const PointReport rep = verify_point(r, HermitianMetric::identity(n), 50, seed + inst);
    const bool good = rep.big_n == 1 && rep.eta.exact && rep.eta.lower == n / 2 &&
                      rep.r_point == (n + 1) / 2 && rep.r_point == bound_main1(n, 1) &&
                      rep.main1 == CheckStatus::pass;
    if (!good) ++bad;
  }
  ok = bad == 0;
  return "50 theta models n=2..8, " + std::to_string(bad) +
         " with eta != floor(n/2) or r_point != bound";
}

std::string suite_local_sharp(std::uint64_t seed, bool& ok) {
  std::ostringstream os;
  ok = true;
  const std::pair<int, int> cases[] = {{4, 1}, {6, 1}, {3, 2}, {8, 3}};
  for (const auto& [n, big_n] : cases) {
    const LocalSharpExample ex = local_sharp_example(n, big_n);
    const KahlerCurvature r = recover(ex.dec);
    const HermitianMetric g = HermitianMetric::identity(n);
    const CMatrix ric = ricci(r, g);
    const RVector diag = ric.diagonal().real();
    const double dmax = diag.maxCoeff();
    bool case_ok = true;
    if (n == 4 || n == 6) {
      CMatrix off = ric;
      off.diagonal().setZero();
      const double off_rel = linalg::max_abs(off) / dmax;
      const double spread = (dmax - diag.minCoeff()) / dmax;
      case_ok = dmax > 0 && off_rel <= 1e-10 && spread <= 1e-10;
      os << "(" << n << "," << big_n << ") Ric = " << dmax << " I; ";
    } else {
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(ric, Eigen::EigenvaluesOnly);
      case_ok = eig.eigenvalues().minCoeff() > 0;
      os << "(" << n << "," << big_n << ") min eig(Ric) " << eig.eigenvalues().minCoeff() << "; ";
    }
    const PointReport rep = verify_point(r, g, 200, seed);
    case_ok = case_ok && rep.r_point == bound_main1(n, big_n) && rep.eta.exact &&
              rep.main1 == CheckStatus::pass;
    os << "r_point " << rep.r_point << " bound " << bound_main1(n, big_n) << "; ";
    ok = ok && case_ok;
  }
  return os.str();
}

std::string suite_sharp_family(std::uint64_t, bool& ok) {
  int cases = 0;
  int bad = 0;
  for (int n = 2; n <= 10; ++n)
    for (int big_n = 1; big_n <= 4; ++big_n) {
      if (sharp_eta(n, big_n) < 1) continue;
      ++cases;
      const SharpFamily fam = sharp_family(n, big_n);
      bool good = static_cast<int>(fam.quadrics.size()) == big_n;
      for (const auto& q : fam.quadrics) good = good && isotropy_residual(q, fam.shared) <= 1e-10;
      good = good && fam.shared.dim() == fam.eta && common_kernel(n, fam.quadrics).dim() == 0;
      if (!good) ++bad;
    }
  ok = bad == 0;
  return std::to_string(cases) + " (n, N) pairs, " + std::to_string(bad) + " failures";
}

std::string suite_kernel_corollaries(std::uint64_t seed, bool& ok) {
  Rng rng(seed, 6);
  int bad1 = 0;
  int bad2 = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(2, 8);
    const int big_n = rng.uniform_int(1, 4);
    const int d = sharp_eta(n, big_n) + 1;
    const Subspace l = random_subspace(n, d, rng);
    const auto qs = random_quadrics_on(l, big_n, rng.next_u64());
    if (common_kernel(n, qs).dim() < 1) ++bad1;
  }
  int run2 = 0;
  while (run2 < 200) {
    const int n = rng.uniform_int(2, 8);
    const int big_n = rng.uniform_int(1, 4);
    const int k = run2 % 3;
    const int d = (big_n * n + k) / (big_n + 1) + 1;
    if (d > n) continue;
    ++run2;
    const Subspace l = random_subspace(n, d, rng);
    const auto qs = random_quadrics_on(l, big_n, rng.next_u64());
    if (common_kernel(n, qs).dim() < k + 1) ++bad2;
  }
  ok = bad1 == 0 && bad2 == 0;
  return "200 + 200 trials, " + std::to_string(bad1) + " / " + std::to_string(bad2) +
         " kernel intersections below the guaranteed dimension";
}

std::string suite_isotropic(std::uint64_t seed, bool& ok) {
  Rng rng(seed, 7);
  int bad_dim = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(1, 8);
    const int r = rng.uniform_int(0, n);
    const QuadraticForm q = random_quadric_of_rank(n, r, rng);
    const Subspace w = max_isotropic(q);
    if (rank_and_kernel(q).rank != r || w.dim() != isotropic_bound(n, r)) ++bad_dim;
    worst = std::max(worst, isotropy_residual(q, w) / std::max(q.coeffs().norm(), 1.0));
  }
  int over = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.uniform_int(2, 8);
    const QuadraticForm q = random_quadric_of_rank(n, n, rng);
    const Subspace s = random_subspace(n, isotropic_bound(n, n) + 1, rng);
    if (vanishes_on(q, s, 1e-9)) ++over;
  }
  ok = bad_dim == 0 && worst <= 1e-9 && over == 0;
  std::ostringstream os;
  os << "200 witnesses (" << bad_dim << " wrong dimension, worst residual " << worst
     << "), 500 oversized subspaces (" << over << " isotropic)";
  return os.str();
}

std::string suite_berger(std::uint64_t seed, bool& ok) {
  Rng rng(seed, 8);
  double worst = 0.0;
  int wrong_sign = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(2, 5);
    const int terms = rng.uniform_int(1, 4);
    const bool negative = trial % 2 == 0;
    SquareDecomposition dec;
    dec.n = n;
    double expected = 0.0;
    for (int p = 0; p < terms; ++p) {
      const QuadraticForm f(random_symmetric(n, rng));
      expected += f.coeffs().squaredNorm();
      (negative ? dec.neg : dec.pos).push_back(f);
    }
    if (negative) expected = -expected;
    const double s = scalar(recover(dec), HermitianMetric::identity(n));
    if ((negative && s > 0) || (!negative && s < 0)) ++wrong_sign;
    worst = std::max(worst, std::abs(s - expected) / std::abs(expected));
  }
  ok = wrong_sign == 0 && worst <= 1e-10;
  std::ostringstream os;
  os << "100 one-sided decompositions, " << wrong_sign << " sign errors, worst trace identity "
     << "error " << worst;
  return os.str();
}

std::string suite_propagation(std::uint64_t seed, bool& ok) {
  Rng rng(seed, 9);
  double worst = 0.0;
  int trivial = 0;
  int unmet = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const int k = rng.uniform_int(1, n - 1);
    const Subspace kernel = random_subspace(n, k, rng);
    const CMatrix c = kernel.complement().basis();
    SquareDecomposition dec;
    dec.n = n;
    const int terms = rng.uniform_int(1, 3);
    for (int p = 0; p < terms; ++p) {
      const CMatrix g = random_symmetric(n - k, rng);
      (trial % 2 ? dec.pos : dec.neg).emplace_back(c.conjugate() * g * c.adjoint());
    }
    const KahlerCurvature r = recover(dec);
    const Subspace l = curvature_kernel(r);
    if (l.dim() < 1) {
      ++trivial;
      continue;
    }
    const CVector mix = l.basis() * rng.complex_vector(l.dim());
    for (Eigen::Index col = 0; col <= l.basis().cols(); ++col) {
      const CVector v = col < l.basis().cols() ? CVector(l.basis().col(col)) : mix;
      const PropagationReport rep = kernel_propagation_check(r, v, 1e-8);
      if (!rep.hypothesis_met) ++unmet;
      worst = std::max(worst, rep.propagated_residual / rep.scale);
    }
  }
  ok = trivial == 0 && unmet == 0 && worst <= 1e-8;
  std::ostringstream os;
  os << "100 semi-definite tensors, worst max|R_{ij k vbar}|/max|R| = " << worst << ", "
     << trivial << " with trivial kernel, " << unmet << " kernel vectors failing R_{ij v vbar} = 0";
  return os.str();
}

// Floor by counting, independent of integer division.
int floor_div_oracle(int a, int b) {
  int t = 0;
  while ((t + 1) * b <= a) ++t;
  return t;
}

std::string suite_bounds(std::uint64_t, bool& ok) {
  int checked = 0;
  int bad = 0;
  for (int n = 1; n <= 12; ++n)
    for (int big_n = 1; big_n <= 6; ++big_n) {
      if (bound_main1(n, big_n) != n - floor_div_oracle(big_n * n, big_n + 1)) ++bad;
      for (int nr = 0; nr <= n; ++nr) {
        ++checked;
        const int expect = n - floor_div_oracle(big_n * n + (n - nr), big_n + 1);
        if (bound_main2(n, big_n, nr) != expect) ++bad;
      }
      if (bound_main2(n, big_n, n) != bound_main1(n, big_n)) ++bad;
      if (bound_main2(n, big_n, 0) != 0) ++bad;
    }
  ok = bad == 0;
  return std::to_string(checked) + " (n, N, n_R) triples, " + std::to_string(bad) + " mismatches";
}

std::string suite_file_round_trip(std::uint64_t seed, bool& ok) {
  Rng rng(seed, 12);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const KahlerCurvature r = random_kahler(n, rng);
    const auto tensor_text = io::dump(io::tensor_to_json(r));
    const KahlerCurvature loaded = io::tensor_from_json(io::Json::parse(tensor_text));
    const auto dec_text = io::dump(io::decomposition_to_json(decompose(hsc_numerator_form(loaded))));
    const KahlerCurvature back = recover(io::decomposition_from_json(io::Json::parse(dec_text)));
    worst = std::max(worst, relative_frobenius(back, r));
  }
  ok = worst <= 1e-8;
  std::ostringstream os;
  os << "20 tensors through decompose/recover JSON files, worst relative error " << worst;
  return os.str();
}

}  // namespace

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites = {
      {1, "round trip recover(decompose(H(R))) = R", 10.0, suite_round_trip},
      {2, "chart invariance of the signature", 10.0, suite_chart_invariance},
      {3, "theta-divisor model eta = floor(n/2)", 30.0, suite_theta},
      {4, "local sharp examples", 5.0, suite_local_sharp},
      {5, "sharp quadric family", 5.0, suite_sharp_family},
      {6, "kernel intersection corollaries", 20.0, suite_kernel_corollaries},
      {7, "isotropic subspace bound", 20.0, suite_isotropic},
      {8, "scalar curvature sign of one-sided decompositions", 5.0, suite_berger},
      {9, "kernel propagation", 10.0, suite_propagation},
      {10, "bound formulas", 1.0, suite_bounds},
      {12, "decompose/recover through JSON", 10.0, suite_file_round_trip},
  };
  return suites;
}

SuiteResult run_suite(const Suite& suite, std::uint64_t seed) {
  SuiteResult res;
  res.id = suite.id;
  res.name = suite.name;
  res.budget_seconds = suite.budget_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    res.detail = suite.body(seed, res.correct);
  } catch (const std::exception& e) {
    res.correct = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const auto& s : all_suites()) out.push_back(run_suite(s, seed));
  return out;
}

std::string format_result(const SuiteResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << (r.passed() ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " (" << r.seconds
     << " s / " << r.budget_seconds << " s) " << r.detail;
  return os.str();
}

}  // namespace curvkit::suites
