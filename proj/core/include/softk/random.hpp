#pragma once

#include <cstdint>
#include <random>

#include "softk/matrix.hpp"

namespace softk {

/// Deterministic random stream keyed by (seed, stream id). Different stream
/// ids give independent sequences, so shards can draw in parallel without
/// sharing state. Conversions to floating point are done here rather than
/// through <random> distributions so sequences do not depend on the
/// standard library in use.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Complex complex_normal();
  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// diagonal of R made positive.
CMatrix random_unitary(std::size_t n, SeededStream& rng);

}  // namespace softk
