#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "softk/matrix.hpp"

namespace softk {

/// Default tolerance for the pair relations.
inline constexpr double kDefaultRelationTol = 1e-10;
/// Lemma-level identities are checked at this multiple of the relation tolerance.
inline constexpr double kDerivedTolFactor = 100.0;

/// Candidate soft projection pair. Validity is checked by check_relations,
/// not enforced on construction.
struct SoftPair {
  CMatrix a;
  CMatrix b;

  std::size_t dim() const noexcept { return a.rows(); }
  bool operator==(const SoftPair&) const = default;
};

struct RelationReport {
  double norm_a = 0.0;
  double norm_b = 0.0;
  double positivity_a = 0.0;
  double positivity_b = 0.0;
  double r1 = 0.0;  // ||(a - a^2)(a - b)||
  double r2 = 0.0;  // ||(b - b^2)(a - b)||
  bool pass = false;
  double tol = 0.0;
};

/// Checks ||a||, ||b|| <= 1, a, b >= 0, (a - a^2)(a - b) = 0 and
/// (b - b^2)(a - b) = 0, each within tol.
RelationReport check_relations(const SoftPair& p, double tol = kDefaultRelationTol);
/// Throws RelationViolation unless check_relations passes.
RelationReport require_relations(const SoftPair& p, double tol = kDefaultRelationTol);

/// Deviations of the identities that valid pairs satisfy. g(t) = t - t^2,
/// h(t) = t g(t), s(t) = g(t)^{1/2}.
struct IdentityReport {
  double square_gap = 0.0;   // ||(a - a^2)^2 - (b - b^2)^2||
  double defect_gap = 0.0;   // ||(a - a^2) - (b - b^2)||
  double g_gap = 0.0;        // ||g(a) - g(b)||
  double h_gap = 0.0;        // ||h(a) - h(b)||
  double g_annihilates = 0.0;  // ||g(a)(a - b)||
  double h_annihilates = 0.0;  // ||h(a)(a - b)||
  double sqrt_gap = 0.0;       // ||s(a) - s(b)||
  double sqrt_annihilates = 0.0;  // ||s(a)(a - b)||
  double tol = 0.0;
  bool pass = false;

  double max_deviation() const;
};

IdentityReport check_derived_identities(const SoftPair& p, double tol = kDefaultRelationTol);

struct SpectraReport {
  std::vector<double> interior_a;  // eigenvalues of a in [delta, 1 - delta], ascending
  std::vector<double> interior_b;
  std::vector<std::pair<std::size_t, std::size_t>> matching;  // (index in a, index in b)
  double max_mismatch = 0.0;
};

/// Matches the spectra of a and b away from {0, 1}. Throws NoMatching when
/// the interior multisets differ.
SpectraReport compare_spectra(const SoftPair& p, double delta, double tol = kDefaultRelationTol);

/// (a (+) c, b (+) d).
SoftPair direct_sum(const SoftPair& p, const SoftPair& q);

/// (f(a), f(b)) for continuous f: [0, 1] -> [0, 1] with f(0) = 0, f(1) = 1.
SoftPair reparametrize(const SoftPair& p, const ScalarFunction& f, double tol = kDefaultRelationTol);
/// Throws DomainError unless f fixes 0 and 1 and maps a 1024-point sample
/// of [0, 1] into [0, 1].
void validate_reparametrization(const ScalarFunction& f, double tol = kDefaultRelationTol);

struct PairMeta {
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::size_t rank_p = 0;
  std::size_t rank_q = 0;

  long rank_difference() const { return static_cast<long>(rank_p) - static_cast<long>(rank_q); }
  bool operator==(const PairMeta&) const = default;
};

struct GeneratedPair {
  SoftPair pair;
  PairMeta meta;
};

/// Exactly valid pair U (c (+) p) U*, U (c (+) q) U* with c a k x k
/// positive contraction with spectrum in (0.05, 0.95) and p, q diagonal
/// projections of size n - k.
GeneratedPair random_valid_pair(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace softk
