#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvkit/core.hpp"
#include "curvkit/curvature.hpp"
#include "curvkit/hermform.hpp"
#include "curvkit/subspace.hpp"

namespace curvkit {

/// n - floor(N n / (N + 1)).
int bound_main1(int n, int big_n);
/// n - floor((N n + (n - nR)) / (N + 1)).
int bound_main2(int n, int big_n, int n_r);

struct EtaUpper {
  int value = 0;
  int quadric = -1;  // index into the active side attaining the minimum, -1 if none
  int rank = 0;      // rank of that quadric
  std::string provenance;
};

/// Minimum over the nonzero quadrics of the active side of isotropic_bound(n, rank).
/// Requires a semi-definite decomposition.
EtaUpper eta_upper(const SquareDecomposition& dec, double rel_tol = kDefaultTol);

struct EtaLower {
  int value = 0;
  Subspace witness = Subspace::zero(0);
};

/// Largest subspace found on which every quadric of the active side vanishes.
///
/// Each trial runs a greedy extension with its own stream Rng(seed, trial):
/// the common radical of the (restricted) forms is absorbed first; then, for
/// subsets S of the forms, a candidate is drawn from the joint kernel of S
/// that is isotropic for the remaining forms, and the candidate leaving the
/// largest admissible complement is kept. The search stops early once
/// stop_at is reached (pass a negative value to disable).
EtaLower eta_lower_search(const SquareDecomposition& dec, int trials, std::uint64_t seed,
                          int stop_at = -1, double rel_tol = kDefaultTol);

struct EtaCertificate {
  int lower = 0;
  int upper = 0;
  bool exact = false;
  Subspace witness = Subspace::zero(0);
  std::string upper_provenance;
};

/// Worst |H(v)| / (||A|| |v|^4) over `samples` random v in the witness.
double witness_residual(const HermitianForm22& form, const Subspace& witness, int samples,
                        std::uint64_t seed);

enum class CheckStatus { pass, fail, inconclusive, not_applicable };
std::string to_string(CheckStatus s);

struct PointReport {
  int n = 0;
  int big_n = 0;
  int n_r = 0;
  Signature signature;
  EtaCertificate eta;
  int r_point = 0;
  int bound_main1 = 0;
  int bound_main2 = 0;
  Complex ricci_det;
  bool ricci_definite = false;
  bool ricci_nondegenerate = false;
  CheckStatus main1 = CheckStatus::inconclusive;
  CheckStatus main2 = CheckStatus::inconclusive;

  bool pass_main1() const { return main1 == CheckStatus::pass; }
  bool pass_main2() const { return main2 == CheckStatus::pass; }
  bool any_failure() const { return main1 == CheckStatus::fail || main2 == CheckStatus::fail; }
};

/// Pointwise pipeline: decomposition length, curvature rank, eta bracket,
/// both bounds, and the Ricci determinant. The r_0 bound in terms of N alone
/// is checked only where Ricci is nondegenerate; the n_R bound always.
/// Rejects indefinite holomorphic sectional curvature with PreconditionError.
PointReport verify_point(const KahlerCurvature& r, const HermitianMetric& g, int trials,
                         std::uint64_t seed, double rel_tol = kDefaultTol);

struct LocalSharpMetadata {
  int eta = 0;
  int blocks = 0;
  bool negated = false;
  /// Every coordinate occurs in some monomial of the family.
  bool exact_cover = false;
  std::vector<int> multiplicities;       // per coordinate, monomial occurrences
  std::vector<int> completion_squares;   // 0-based
};

struct LocalSharpExample {
  SquareDecomposition dec;
  LocalSharpMetadata metadata;
};

/// Sum of squares of the sharp quadric family (negated = difference with
/// empty positive side). Zero set: {z_{eta+1} = ... = z_n = 0}.
LocalSharpExample local_sharp_example(int n, int big_n, bool negated = false);

}  // namespace curvkit
