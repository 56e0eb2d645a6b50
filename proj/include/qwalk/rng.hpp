#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qwalk {

/// Seeded random source. The integer and real mappings are written out here
/// rather than taken from <random> distributions so that sequences are the
/// same on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [lo, hi], inclusive.
  long long uniform_int(long long lo, long long hi);

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform_unit();

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_unit(); }

  /// Uniform sample of k distinct values from [0, n), in draw order.
  std::vector<int> sample_without_replacement(int n, int k);

  /// Independent child stream; consumes one draw from this stream.
  Rng fork() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qwalk
