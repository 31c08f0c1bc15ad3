#pragma once

#include "softk/pairs.hpp"

namespace softk {

/// Eigenvalues in [cluster_tol, 1 - cluster_tol] belong to the common part.
inline constexpr double kDefaultReductionClusterTol = 1e-6;

/// Splitting of a valid pair over C into a common part and a projection
/// pair: frame* a frame = c (+) p, frame* b frame = c (+) q.
struct Reduction {
  CMatrix frame;  // first k columns span L, the rest span its complement
  std::size_t k = 0;
  CMatrix c;  // k x k, spectrum in (0, 1)
  CMatrix p;  // (n - k) x (n - k) projection
  CMatrix q;
  std::size_t rank_p = 0;
  std::size_t rank_q = 0;

  long klass() const { return static_cast<long>(rank_p) - static_cast<long>(rank_q); }
};

Reduction reduce_to_projections(const SoftPair& pair, double cluster_tol = kDefaultReductionClusterTol,
                                double tol = kDefaultRelationTol);

/// round(Re tr(a - b)). Throws NotNearInteger when the trace is further
/// than tol from an integer. Does not re-check the relations.
long class_of_pair(const SoftPair& pair, double tol = 1e-8);

}  // namespace softk
