#include "doctest.h"

#include "curvkit/linalg.hpp"
#include "curvkit/quadric.hpp"
#include "support.hpp"

using namespace curvkit;
using testing::I;
using testing::vec;

namespace {

// Quadric sum of z_a z_b (0-based pairs), F_ab = F_ba = 1/2 (or 1 on the diagonal).
QuadraticForm monomials(int n, std::initializer_list<std::pair<int, int>> terms) {
  CMatrix f = CMatrix::Zero(n, n);
  for (const auto& [a, b] : terms) {
    if (a == b) {
      f(a, a) += 1.0;
    } else {
      f(a, b) += 0.5;
      f(b, a) += 0.5;
    }
  }
  return QuadraticForm(f);
}

Subspace coordinate_span(int n, std::initializer_list<int> idx) {
  CMatrix b = CMatrix::Zero(n, static_cast<Eigen::Index>(idx.size()));
  Eigen::Index c = 0;
  for (int i : idx) b(i, c++) = 1.0;
  return Subspace(n, b);
}

bool same_quadric(const QuadraticForm& a, const QuadraticForm& b) {
  return (a.coeffs() - b.coeffs()).norm() < 1e-14;
}

}  // namespace

TEST_CASE("rank and kernel examples") {
  const RankKernel a = rank_and_kernel(monomials(2, {{0, 1}}));
  CHECK(a.rank == 2);
  CHECK(a.kernel.dim() == 0);

  const RankKernel b = rank_and_kernel(monomials(3, {{2, 2}}));
  CHECK(b.rank == 1);
  CHECK(b.kernel.dim() == 2);
  CHECK(linalg::max_abs(b.kernel.basis().row(2)) < 1e-15);

  const RankKernel c = rank_and_kernel(monomials(5, {{0, 3}, {1, 4}}));
  CHECK(c.rank == 4);
  REQUIRE(c.kernel.dim() == 1);
  CHECK(std::abs(c.kernel.basis()(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("Takagi factorization") {
  const Takagi t = takagi(QuadraticForm(CMatrix::Identity(2, 2)));
  CHECK(t.s(0) == doctest::Approx(1.0));
  CHECK(t.s(1) == doctest::Approx(1.0));
  CHECK((t.w.adjoint() * t.w - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((t.w * t.w.transpose() - CMatrix::Identity(2, 2)).norm() < 1e-12);

  CMatrix f = CMatrix::Zero(2, 2);
  f(0, 0) = 2.0;
  const Takagi d = takagi(QuadraticForm(f));
  CHECK(d.s(0) == doctest::Approx(2.0));
  CHECK(std::abs(d.s(1)) < 1e-13);

  Rng rng(31);
  for (int n = 1; n <= 7; ++n) {
    const CMatrix g = testing::random_symmetric(n, rng);
    const Takagi tk = takagi(QuadraticForm(g));
    CHECK((tk.w.adjoint() * tk.w - CMatrix::Identity(n, n)).norm() < 1e-10);
    const CMatrix rebuilt = tk.w * tk.s.cast<Complex>().asDiagonal() * tk.w.transpose();
    CHECK((rebuilt - g).norm() < 1e-10 * g.norm());
    for (int i = 1; i < n; ++i) CHECK(tk.s(i) <= tk.s(i - 1));
    // Takagi values are the singular values.
    const RVector sv = Eigen::JacobiSVD<CMatrix>(g).singularValues();
    CHECK((sv - tk.s).norm() < 1e-10 * sv(0));
  }
}

TEST_CASE("isotropic bound examples") {
  CHECK(isotropic_bound(4, 4) == 2);
  CHECK(isotropic_bound(5, 4) == 3);
  CHECK(isotropic_bound(3, 0) == 3);
  CHECK_THROWS_AS(isotropic_bound(3, 4), InputError);
  CHECK_THROWS_AS(isotropic_bound(3, -1), InputError);
}

TEST_CASE("maximal isotropic subspaces") {
  const Subspace a = max_isotropic(QuadraticForm(CMatrix::Identity(2, 2)));
  REQUIRE(a.dim() == 1);
  CHECK(a.relative_distance(vec({1.0, I})) < 1e-12);
  CHECK(a.relative_distance(vec({1.0, -I})) > 0.5);

  const Subspace b = max_isotropic(monomials(3, {{0, 0}}));
  CHECK(b.dim() == 2);
  CHECK(linalg::max_abs(b.basis().row(0)) < 1e-14);

  Rng rng(32);
  const QuadraticForm full = random_quadric_of_rank(5, 5, rng);
  const Subspace c = max_isotropic(full);
  CHECK(c.dim() == 2);
  CHECK(isotropy_residual(full, c) < 1e-9);
}

TEST_CASE("isotropic witnesses attain the bound for every rank") {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 8);
    const int r = rng.uniform_int(0, n);
    const QuadraticForm q = random_quadric_of_rank(n, r, rng);
    CHECK(rank_and_kernel(q).rank == r);
    const Subspace w = max_isotropic(q);
    CHECK(w.dim() == isotropic_bound(n, r));
    CHECK(vanishes_on(q, w, 1e-9));
    // Every vector of the witness is a zero.
    if (w.dim() > 0) CHECK(std::abs(q(w.basis() * rng.complex_vector(w.dim()))) < 1e-9);
  }
}

TEST_CASE("vanishing on a subspace") {
  CHECK(vanishes_on(monomials(2, {{0, 1}}), coordinate_span(2, {0})));
  CHECK_FALSE(vanishes_on(monomials(2, {{0, 0}}), coordinate_span(2, {0})));
  CHECK(vanishes_on(monomials(2, {{0, 0}}), Subspace::zero(2)));
}

TEST_CASE("intersections") {
  const Subspace a = coordinate_span(3, {0, 1});
  const Subspace b = coordinate_span(3, {1, 2});
  CHECK(intersect({a, b}).dim() == 1);
  const Subspace aa = intersect({a, a});
  CHECK(aa.dim() == 2);
  CHECK((aa.projector() - a.projector()).norm() < 1e-12);
  CHECK_THROWS_AS(intersect({}), InputError);

  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Subspace> vs;
    CMatrix stacked(0, 5);
    for (int i = 0; i < 3; ++i) {
      vs.push_back(random_subspace(5, 4, rng));
      // Independent oracle: annihilators stacked.
      const CMatrix ann = vs.back().complement().basis().adjoint();
      CMatrix grown(stacked.rows() + ann.rows(), 5);
      grown << stacked, ann;
      stacked = grown;
    }
    const int oracle = 5 - static_cast<int>(Eigen::FullPivLU<CMatrix>(stacked).rank());
    const Subspace x = intersect(vs);
    CHECK(x.dim() >= 2);
    CHECK(x.dim() == oracle);
    for (const auto& v : vs)
      for (Eigen::Index c = 0; c < x.basis().cols(); ++c)
        CHECK(v.relative_distance(x.basis().col(c)) < 1e-10);
  }
}

TEST_CASE("common kernels") {
  CHECK(common_kernel(3, {monomials(3, {{2, 2}})}).dim() == 2);
  CHECK(common_kernel(2, {monomials(2, {{0, 1}})}).dim() == 0);
  CHECK(common_kernel(4, {monomials(4, {{0, 2}, {1, 3}})}).dim() == 0);
  CHECK(common_kernel(4, {}).dim() == 4);
}

TEST_CASE("sharp family examples") {
  {
    const SharpFamily f = sharp_family(2, 1);
    REQUIRE(f.quadrics.size() == 1);
    CHECK(same_quadric(f.quadrics[0], monomials(2, {{0, 1}})));
    CHECK(f.shared.dim() == 1);
    CHECK(f.shared.relative_distance(vec({1.0, 0.0})) < 1e-15);
    CHECK(rank_and_kernel(f.quadrics[0]).kernel.dim() == 0);
  }
  {
    const SharpFamily f = sharp_family(4, 1);
    CHECK(same_quadric(f.quadrics[0], monomials(4, {{0, 2}, {1, 3}})));
    CHECK(f.shared.dim() == 2);
    CHECK(f.eta == 2);
    CHECK(f.blocks == 1);
  }
  {
    const SharpFamily f = sharp_family(5, 2);
    REQUIRE(f.quadrics.size() == 2);
    CHECK(same_quadric(f.quadrics[0], monomials(5, {{0, 3}, {1, 4}})));
    CHECK(same_quadric(f.quadrics[1], monomials(5, {{2, 3}})));
    CHECK(f.shared.dim() == 3);
    CHECK(common_kernel(5, f.quadrics).dim() == 0);
  }
  {
    // n odd, N = 1: one pairing cannot reach the last coordinate.
    const SharpFamily f = sharp_family(3, 1);
    CHECK(f.eta == 1);
    CHECK(f.completion_squares == std::vector<int>{2});
    CHECK(same_quadric(f.quadrics[0], monomials(3, {{0, 1}, {2, 2}})));
    CHECK(vanishes_on(f.quadrics[0], f.shared));
    CHECK(common_kernel(3, f.quadrics).dim() == 0);
  }
  {
    // More quadrics than blocks: padded with zeros.
    const SharpFamily f = sharp_family(2, 3);
    CHECK(f.quadrics.size() == 3);
    CHECK(f.blocks == 1);
    CHECK(f.quadrics[2].is_zero());
  }
  CHECK_THROWS_AS(sharp_family(1, 1), InputError);
}

TEST_CASE("sharp families over a grid") {
  for (int n = 2; n <= 12; ++n)
    for (int big_n = 1; big_n <= 6; ++big_n) {
      if (sharp_eta(n, big_n) < 1) continue;
      const SharpFamily f = sharp_family(n, big_n);
      CHECK(f.eta == sharp_eta(n, big_n));
      CHECK(f.shared.dim() == f.eta);
      for (const auto& q : f.quadrics) CHECK(isotropy_residual(q, f.shared) < 1e-14);
      CHECK(common_kernel(n, f.quadrics).dim() == 0);
    }
}

TEST_CASE("random quadrics through a subspace") {
  Rng rng(35);
  const auto zeros = random_quadrics_on(Subspace::full(4), 3, 7);
  for (const auto& q : zeros) CHECK(q.is_zero());

  const auto free = random_quadrics_on(Subspace::zero(4), 2, 7);
  for (const auto& q : free) CHECK(rank_and_kernel(q).rank == 4);

  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(2, 8);
    const Subspace l = random_subspace(n, rng.uniform_int(1, n), rng);
    for (const auto& q : random_quadrics_on(l, 3, rng.next_u64())) CHECK(vanishes_on(q, l, 1e-10));
  }

  const Subspace l = random_subspace(5, 3, rng);
  const auto a = random_quadrics_on(l, 2, 99);
  const auto b = random_quadrics_on(l, 2, 99);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coeffs() == b[i].coeffs());
}

TEST_CASE("kernel intersections under a shared subspace") {
  Rng rng(36);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(2, 8);
    const int big_n = rng.uniform_int(1, 4);
    const Subspace l = random_subspace(n, sharp_eta(n, big_n) + 1, rng);
    CHECK(common_kernel(n, random_quadrics_on(l, big_n, rng.next_u64())).dim() >= 1);
  }
}

TEST_CASE("random generators") {
  Rng rng(37);
  const CMatrix u = random_unitary(5, rng);
  CHECK((u.adjoint() * u - CMatrix::Identity(5, 5)).norm() < 1e-12);
  const Subspace s = random_subspace(6, 2, rng);
  CHECK(s.dim() == 2);
  CHECK(s.ambient_dim() == 6);
}
