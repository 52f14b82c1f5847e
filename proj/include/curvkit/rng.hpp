#pragma once

#include <cstdint>

#include "curvkit/core.hpp"

namespace curvkit {

// Deterministic generator shared by every randomized routine.
//
// Algorithm: xoshiro256** (Blackman & Vigna) with its four state words
// filled from splitmix64. The seed schedule is
//
//   x0 = seed ^ (0x9E3779B97F4A7C15 * (stream + 1))
//   state[i] = splitmix64 outputs starting from x0
//
// Uniform doubles take the top 53 bits, uniform(0,1] excludes zero so the
// Box-Muller transform never sees log(0). Normal deviates are generated in
// pairs; the second of each pair is cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();
  /// Complex normal with independent N(0, 1/2) parts (E|z|^2 = 1).
  Complex complex_normal();

  CMatrix complex_matrix(Eigen::Index rows, Eigen::Index cols);
  CVector complex_vector(Eigen::Index n);

 private:
  std::uint64_t s_[4];
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace curvkit
