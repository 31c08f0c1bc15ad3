#include "softk/universal.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

#include "softk/errors.hpp"
#include "softk/reduction.hpp"

namespace softk {

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 3) throw Error(ErrorKind::BadGrid, "grid needs at least 3 points");
  std::vector<double> g(points);
  const double span = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = (2.0 * static_cast<double>(i) - span) / span;
  g.front() = -1.0;
  g.back() = 1.0;
  if (!std::binary_search(g.begin(), g.end(), 0.0)) g.insert(std::upper_bound(g.begin(), g.end(), 0.0), 0.0);
  return g;
}

void validate_grid(const std::vector<double>& grid) {
  if (grid.size() < 3) throw Error(ErrorKind::BadGrid, "grid needs at least 3 points");
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw Error(ErrorKind::BadGrid, "grid must be strictly ascending");
  if (grid.front() != -1.0 || grid.back() != 1.0) throw Error(ErrorKind::BadGrid, "grid must span [-1, 1]");
  if (!std::binary_search(grid.begin(), grid.end(), 0.0)) throw Error(ErrorKind::BadGrid, "grid must contain 0");
}

CMatrix generator_a_at(double t) {
  if (t <= 0.0) {
    const double c = std::cos(std::numbers::pi / 2.0 * t);
    return CMatrix::diagonal({c * c, 0.0});
  }
  return CMatrix::diagonal({1.0, 0.0});
}

CMatrix generator_b_at(double t) {
  const double c = std::cos(std::numbers::pi / 2.0 * t);
  if (t <= 0.0) return CMatrix::diagonal({c * c, 0.0});
  const double s = std::sin(std::numbers::pi / 2.0 * t);
  return CMatrix{{c * c, c * s}, {c * s, s * s}};
}

namespace {

DElement sample(const std::vector<double>& grid, CMatrix (*f)(double)) {
  validate_grid(grid);
  DElement e{grid, {}};
  e.values.reserve(grid.size());
  for (double t : grid) e.values.push_back(f(t));
  return e;
}

double projection_defect(const CMatrix& m) { return op_norm(m * m - m); }

}  // namespace

DElement generator_a(const std::vector<double>& grid) { return sample(grid, generator_a_at); }
DElement generator_b(const std::vector<double>& grid) { return sample(grid, generator_b_at); }

DElement operator*(const DElement& x, const DElement& y) {
  if (x.grid != y.grid || x.values.size() != y.values.size())
    throw Error(ErrorKind::ShapeError, "elements sampled on different grids");
  DElement out{x.grid, {}};
  out.values.reserve(x.values.size());
  for (std::size_t i = 0; i < x.values.size(); ++i) out.values.push_back(x.values[i] * y.values[i]);
  return out;
}

MembershipReport check_membership(const DElement& e, double tol) {
  MembershipReport r;
  r.tol = tol;
  if (e.grid.size() != e.values.size() || e.grid.empty()) {
    r.pass = false;
    r.at_minus_one = std::numeric_limits<double>::infinity();
    return r;
  }
  bool saw_minus_one = false;
  bool saw_one = false;
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    const double t = e.grid[i];
    const CMatrix& v = e.values[i];
    if (v.rows() != 2 || v.cols() != 2) {
      r.corner_leak = std::numeric_limits<double>::infinity();
      continue;
    }
    if (t == -1.0) {
      r.at_minus_one = std::max(r.at_minus_one, max_abs(v));
      saw_minus_one = true;
    }
    if (t == 1.0) {
      r.off_diagonal_at_one = std::max({r.off_diagonal_at_one, std::abs(v(0, 1)), std::abs(v(1, 0))});
      saw_one = true;
    }
    if (t <= 0.0) r.corner_leak = std::max({r.corner_leak, std::abs(v(0, 1)), std::abs(v(1, 0)), std::abs(v(1, 1))});
  }
  r.pass = saw_minus_one && saw_one && r.at_minus_one <= tol && r.off_diagonal_at_one <= tol && r.corner_leak <= tol;
  return r;
}

PQPair build_PQ(const SoftPair& pair, double tol) {
  require_relations(pair, tol);
  const std::size_t n = pair.dim();
  const CMatrix fa = apply_function(pair.a, fn::sqrt_defect());
  const CMatrix top_left = CMatrix::identity(n) - pair.b;

  PQPair out;
  out.n = n;
  out.P = CMatrix(2 * n, 2 * n);
  out.P.set_block(0, 0, top_left);
  out.P.set_block(0, n, fa);
  out.P.set_block(n, 0, fa);
  out.Q = out.P;
  out.P.set_block(n, n, pair.a);
  out.Q.set_block(n, n, pair.b);

  out.projection_defect_P = projection_defect(out.P);
  out.projection_defect_Q = projection_defect(out.Q);
  const double limit = kDerivedTolFactor * tol;
  if (out.projection_defect_P > limit || out.projection_defect_Q > limit) {
    throw Error(ErrorKind::ProjectionDefect, "P or Q is not a projection (defect " +
                                                 std::to_string(std::max(out.projection_defect_P,
                                                                         out.projection_defect_Q)) +
                                                 ")");
  }
  return out;
}

PairPath scaling_homotopy_PQ(const SoftPair& pair, std::size_t steps, double tol) {
  const PQPair pq = build_PQ(pair, tol);
  if (steps < 2) throw Error(ErrorKind::InvalidInput, "a path needs at least 2 samples");
  const std::size_t n = pq.n;
  std::vector<double> params(steps);
  std::vector<SoftPair> pairs;
  pairs.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(steps - 1);
    params[i] = s;
    // C_s X C_s scales the off-diagonal blocks by s and the top-left block by s^2.
    auto scale = [&](const CMatrix& x) {
      CMatrix y = x;
      for (std::size_t r = 0; r < 2 * n; ++r)
        for (std::size_t c = 0; c < 2 * n; ++c) {
          const double fr = r < n ? s : 1.0;
          const double fc = c < n ? s : 1.0;
          y(r, c) *= fr * fc;
        }
      return y;
    };
    pairs.push_back({scale(pq.P), scale(pq.Q)});
  }
  auto path = make_path(std::move(params), std::move(pairs));
  path.parameter_label = "s";
  return path;
}

long kappa(const SoftPair& pair, double tol) {
  const PQPair pq = build_PQ(pair, tol);
  return class_of_pair({pq.P, pq.Q});
}

SoftPair iota(const CMatrix& p, const CMatrix& q, double tol) {
  for (const CMatrix* m : {&p, &q}) {
    require_hermitian(*m);
    if (projection_defect(*m) > tol) throw Error(ErrorKind::NotAProjection, "matrix is not a projection");
  }
  if (p.rows() != q.rows()) throw Error(ErrorKind::ShapeError, "projections of different sizes");
  return {p, q};
}

}  // namespace softk
