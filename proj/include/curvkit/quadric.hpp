#pragma once

#include <cstdint>
#include <vector>

#include "curvkit/core.hpp"
#include "curvkit/hermform.hpp"
#include "curvkit/subspace.hpp"

namespace curvkit {

struct RankKernel {
  int rank = 0;
  Subspace kernel;
};

/// Numerical rank of F and its null space; singular values below
/// rel_tol * sigma_max are zero.
RankKernel rank_and_kernel(const QuadraticForm& q, double rel_tol = kDefaultTol);

/// F = W diag(s) W^T with W unitary and s descending.
struct Takagi {
  CMatrix w;
  RVector s;
};
Takagi takagi(const QuadraticForm& q);

/// (n - r) + floor(r / 2): the largest dimension of a linear subspace on
/// which a rank-r quadric in C^n can vanish.
int isotropic_bound(int n, int r);

/// A subspace of dimension isotropic_bound(n, rank) on which q vanishes:
/// the kernel plus one isotropic vector per pair of Takagi directions.
Subspace max_isotropic(const QuadraticForm& q, double rel_tol = kDefaultTol);

/// ||B^T F B|| <= tol * max(||F||, 1). By polarization this is q|_L == 0.
bool vanishes_on(const QuadraticForm& q, const Subspace& l, double tol = kDefaultTol);
double isotropy_residual(const QuadraticForm& q, const Subspace& l);

/// Intersection of subspaces via the null space of the stacked
/// complement projectors.
Subspace intersect(const std::vector<Subspace>& subspaces, double rel_tol = kDefaultTol);

Subspace common_kernel(int n, const std::vector<QuadraticForm>& quadrics,
                       double rel_tol = kDefaultTol);

/// floor(N n / (N + 1)).
int sharp_eta(int n, int big_n);

struct SharpFamily {
  std::vector<QuadraticForm> quadrics;  // exactly N entries, trailing ones zero
  Subspace shared;                      // {z_{eta+1} = ... = z_n = 0}
  int eta = 0;
  int blocks = 0;                       // nonzero quadrics
  /// 0-based indices z_j whose square was added to the first quadric because
  /// no pairing reached them (only when 2 eta < n).
  std::vector<int> completion_squares;
};

/// Quadrics sharing the coordinate subspace of dimension eta whose kernels
/// intersect trivially. Left coordinates 1..eta are split into ceil(eta/(n-eta))
/// consecutive blocks; block b gives sum_t z_{left(b,t)} z_{eta+t}.
SharpFamily sharp_family(int n, int big_n);

/// N random symmetric matrices vanishing on L; entries only couple the
/// complement of L to everything.
std::vector<QuadraticForm> random_quadrics_on(const Subspace& l, int big_n,
                                              std::uint64_t seed);

// Random generators used by tests and the CLI.
class Rng;
Subspace random_subspace(int n, int d, Rng& rng);
/// W^T diag(s_1..s_r, 0..0) W with W random unitary, s_i uniform in [0.5, 2].
QuadraticForm random_quadric_of_rank(int n, int r, Rng& rng);
CMatrix random_unitary(int n, Rng& rng);

}  // namespace curvkit
