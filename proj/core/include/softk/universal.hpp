#pragma once

#include <vector>

#include "softk/homotopy.hpp"
#include "softk/pairs.hpp"

namespace softk {

inline constexpr std::size_t kDefaultUniversalGrid = 201;
inline constexpr double kMembershipTol = 1e-12;

/// Sampled M_2-valued function on [-1, 1], modelling an element of the
/// universal algebra D: vanishes at -1, diagonal at 1, upper-left corner
/// valued on (-1, 0].
struct DElement {
  std::vector<double> grid;
  std::vector<CMatrix> values;  // 2 x 2 each
};

/// Ascending grid on [-1, 1] of `points` uniform samples; -1, 0 and 1 are
/// always exact samples (0 is inserted when `points` is even).
std::vector<double> uniform_grid(std::size_t points = kDefaultUniversalGrid);
/// Throws BadGrid unless the grid is ascending, inside [-1, 1] and contains
/// -1, 0 and 1 exactly.
void validate_grid(const std::vector<double>& grid);

CMatrix generator_a_at(double t);
CMatrix generator_b_at(double t);
DElement generator_a(const std::vector<double>& grid);
DElement generator_b(const std::vector<double>& grid);

/// Pointwise product.
DElement operator*(const DElement& x, const DElement& y);

struct MembershipReport {
  double at_minus_one = 0.0;  // ||f(-1)||
  double off_diagonal_at_one = 0.0;
  double corner_leak = 0.0;  // largest row/column-2 entry for t <= 0
  bool pass = false;
  double tol = 0.0;
};

MembershipReport check_membership(const DElement& e, double tol = kMembershipTol);

/// P = [[1 - b, f(a)], [f(a), a]], Q = [[1 - b, f(a)], [f(a), b]] with
/// f(t) = (t - t^2)^{1/2}.
struct PQPair {
  CMatrix P;
  CMatrix Q;
  std::size_t n = 0;
  double projection_defect_P = 0.0;  // ||P^2 - P||
  double projection_defect_Q = 0.0;
};

PQPair build_PQ(const SoftPair& pair, double tol = kDefaultRelationTol);

/// (C_s P C_s, C_s Q C_s) with C_s = diag(s 1, 1), s from 0 to 1.
PairPath scaling_homotopy_PQ(const SoftPair& pair, std::size_t steps = kDefaultSteps,
                             double tol = kDefaultRelationTol);

/// The integer image of [P] - [Q] under the evaluation at (a, b).
long kappa(const SoftPair& pair, double tol = kDefaultRelationTol);

/// Regards a pair of projections as a soft pair; throws NotAProjection.
SoftPair iota(const CMatrix& p, const CMatrix& q, double tol = kDefaultRelationTol);

}  // namespace softk
