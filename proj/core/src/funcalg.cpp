#include "softk/funcalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "softk/errors.hpp"
#include "softk/reduction.hpp"

namespace softk {

namespace {

constexpr double kEquatorTol = 1e-12;
// Overlap determinants below this mean neighbouring frames are nearly
// orthogonal: the mesh is too coarse for the field.
constexpr double kRankDropTol = 1e-2;
constexpr double kChernIntegerTol = 0.05;

void require_grid(const MatrixField& f) {
  if (!f.grid) throw Error(ErrorKind::BadGrid, "field has no grid");
  if (f.values.size() != f.grid->size()) throw Error(ErrorKind::ShapeError, "one value per grid point required");
}

void require_same_grid(const MatrixField& x, const MatrixField& y) {
  require_grid(x);
  require_grid(y);
  if (x.grid != y.grid && !(*x.grid == *y.grid)) throw Error(ErrorKind::ShapeError, "fields live on different grids");
}

// Determinant by Gaussian elimination with partial pivoting.
Complex determinant(CMatrix m) {
  const std::size_t n = m.rows();
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (m(pivot, col) == Complex(0.0)) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
};

CMatrix bott_at(const std::array<double, 3>& p) {
  const auto [x, y, z] = p;
  return CMatrix{{0.5 * (1.0 + z), Complex(0.5 * x, -0.5 * y)}, {Complex(0.5 * x, 0.5 * y), 0.5 * (1.0 - z)}};
}

}  // namespace

std::string_view to_string(SpaceKind kind) noexcept {
  switch (kind) {
    case SpaceKind::Interval: return "interval";
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Sphere: return "sphere";
  }
  return "unknown";
}

SpaceKind space_kind_from_string(std::string_view s) {
  if (s == "interval") return SpaceKind::Interval;
  if (s == "circle") return SpaceKind::Circle;
  if (s == "sphere") return SpaceKind::Sphere;
  throw Error(ErrorKind::BadGrid, "unknown space kind '" + std::string(s) + "'");
}

SpaceGrid make_interval(std::size_t points, double lo, double hi) {
  if (points < 3) throw Error(ErrorKind::BadGrid, "interval needs at least 3 points");
  if (!(lo < hi)) throw Error(ErrorKind::BadGrid, "interval endpoints out of order");
  SpaceGrid g;
  g.kind = SpaceKind::Interval;
  g.resolution = {points};
  for (std::size_t i = 0; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    g.points.push_back({x, 0.0, 0.0});
    if (i > 0) g.edges.emplace_back(i - 1, i);
  }
  return g;
}

SpaceGrid make_circle(std::size_t points) {
  if (points < 3) throw Error(ErrorKind::BadGrid, "circle needs at least 3 points");
  SpaceGrid g;
  g.kind = SpaceKind::Circle;
  g.resolution = {points};
  for (std::size_t j = 0; j < points; ++j) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
    g.points.push_back({std::cos(phi), std::sin(phi), 0.0});
    g.edges.emplace_back(j, (j + 1) % points);
  }
  return g;
}

SpaceGrid make_sphere(std::size_t rings, std::size_t segments) {
  if (rings < 2 || segments < 3) throw Error(ErrorKind::BadGrid, "sphere needs at least 2 rings and 3 segments");
  SpaceGrid g;
  g.kind = SpaceKind::Sphere;
  g.resolution = {rings, segments};

  const std::size_t north = 0;
  const std::size_t south = 1 + (rings - 1) * segments;
  // Index of (ring i, segment j); ring 0 is the north pole, ring `rings` the south pole.
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return north;
    if (i == rings) return south;
    return 1 + (i - 1) * segments + (j % segments);
  };

  g.points.push_back({0.0, 0.0, 1.0});
  for (std::size_t i = 1; i < rings; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(rings);
    for (std::size_t j = 0; j < segments; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(segments);
      g.points.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
    }
  }
  g.points.push_back({0.0, 0.0, -1.0});

  for (std::size_t i = 0; i < rings; ++i) {
    for (std::size_t j = 0; j < segments; ++j) {
      // (theta, phi) -> (theta + d, phi) -> (theta + d, phi + d) -> (theta, phi + d)
      // is counterclockwise about the outward normal.
      g.plaquettes.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      g.edges.emplace_back(at(i, j), at(i + 1, j));
      if (i > 0) g.edges.emplace_back(at(i, j), at(i, j + 1));
    }
  }
  return g;
}

SpaceGrid make_grid(SpaceKind kind, const std::vector<std::size_t>& resolution) {
  switch (kind) {
    case SpaceKind::Interval:
      if (resolution.size() == 1) return make_interval(resolution[0]);
      break;
    case SpaceKind::Circle:
      if (resolution.size() == 1) return make_circle(resolution[0]);
      break;
    case SpaceKind::Sphere:
      if (resolution.size() == 2) return make_sphere(resolution[0], resolution[1]);
      break;
  }
  throw Error(ErrorKind::BadGrid, "resolution does not match the space kind");
}

std::vector<std::size_t> region_intersection(const SpaceGrid& grid, const std::string& y, const std::string& z) {
  const auto iy = grid.regions.find(y);
  const auto iz = grid.regions.find(z);
  if (iy == grid.regions.end() || iz == grid.regions.end()) throw Error(ErrorKind::BadGrid, "unknown region");
  std::vector<std::size_t> a = iy->second;
  std::vector<std::size_t> b = iz->second;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

double continuity_witness(const MatrixField& field) {
  require_grid(field);
  double worst = 0.0;
  for (const auto& [i, j] : field.grid->edges) worst = std::max(worst, op_norm(field.values[i] - field.values[j]));
  return worst;
}

FieldReport check_relations_field(const FieldPair& fp, double tol) {
  require_same_grid(fp.a, fp.b);
  const SpaceGrid& grid = *fp.a.grid;
  FieldReport r;
  r.points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto rep = check_relations({fp.a.values[i], fp.b.values[i]}, tol);
    r.worst_r1 = std::max(r.worst_r1, rep.r1);
    r.worst_r2 = std::max(r.worst_r2, rep.r2);
    if (!rep.pass) ++r.failures;
    r.points.push_back(rep);
  }
  for (const auto& [name, indices] : grid.regions) {
    RegionSummary s;
    for (std::size_t i : indices) {
      s.worst_r1 = std::max(s.worst_r1, r.points.at(i).r1);
      s.worst_r2 = std::max(s.worst_r2, r.points.at(i).r2);
      s.pass = s.pass && r.points.at(i).pass;
    }
    r.regions[name] = s;
  }
  r.pass = r.failures == 0;
  return r;
}

FieldPair cutoff_pair(const CMatrix& p0, const MatrixField& alpha, const MatrixField& beta,
                      const std::vector<double>& h, std::size_t basepoint, double tol) {
  require_same_grid(alpha, beta);
  const SpaceGrid& grid = *alpha.grid;
  if (h.size() != grid.size()) throw Error(ErrorKind::ShapeError, "cutoff needs one value per point");
  if (basepoint >= grid.size()) throw Error(ErrorKind::InvalidInput, "basepoint out of range");
  require_hermitian(p0);
  if (op_norm(p0 * p0 - p0) > tol) throw Error(ErrorKind::NotAProjection, "p0 is not a projection");
  if (std::abs(h[basepoint]) > tol) throw Error(ErrorKind::InvalidInput, "cutoff must vanish at the basepoint");

  FieldPair out{{alpha.grid, {}}, {alpha.grid, {}}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(h[i] >= -tol && h[i] <= 1.0 + tol)) throw Error(ErrorKind::InvalidInput, "cutoff must lie in [0, 1]");
    if (h[i] < 1.0 - tol && (max_abs(alpha.values[i]) > tol || max_abs(beta.values[i]) > tol)) {
      throw Error(ErrorKind::SupportMismatch,
                  "alpha/beta do not vanish where the cutoff is below 1 (point " + std::to_string(i) + ")");
    }
    for (const CMatrix* m : {&alpha.values[i], &beta.values[i]}) {
      const CMatrix full = p0 + *m;
      if (op_norm(full * full - full) > tol)
        throw Error(ErrorKind::NotAProjection, "p0 + alpha or p0 + beta is not a projection at point " + std::to_string(i));
    }
    out.a.values.push_back(p0 * h[i] + alpha.values[i]);
    out.b.values.push_back(p0 * h[i] + beta.values[i]);
  }
  return out;
}

FieldPair clutch(std::shared_ptr<const SpaceGrid> grid, const RegionField& p_y, const RegionField& q_y,
                 const RegionField& s_z, double gluing_tol) {
  if (!grid) throw Error(ErrorKind::BadGrid, "clutch needs a grid");
  if (p_y.region != q_y.region) throw Error(ErrorKind::ShapeError, "p and q must live on the same region");
  const auto& y_idx = grid->regions.at(p_y.region);
  const auto& z_idx = grid->regions.at(s_z.region);
  if (p_y.values.size() != y_idx.size() || q_y.values.size() != y_idx.size() || s_z.values.size() != z_idx.size())
    throw Error(ErrorKind::ShapeError, "region fields must have one value per region point");

  const auto overlap = region_intersection(*grid, p_y.region, s_z.region);
  if (overlap.empty()) throw Error(ErrorKind::BadGrid, "regions must overlap");

  std::vector<const CMatrix*> a(grid->size(), nullptr);
  std::vector<const CMatrix*> b(grid->size(), nullptr);
  std::vector<const CMatrix*> s(grid->size(), nullptr);
  for (std::size_t k = 0; k < z_idx.size(); ++k) {
    const CMatrix& v = s_z.values[k];
    require_hermitian(v);
    const auto es = eig_hermitian(v);
    if (es.eigenvalues.front() < -gluing_tol || es.eigenvalues.back() > 1.0 + gluing_tol)
      throw Error(ErrorKind::InvalidInput, "s must be a positive contraction");
    s[z_idx[k]] = &v;
    a[z_idx[k]] = &v;
    b[z_idx[k]] = &v;
  }
  for (std::size_t k = 0; k < y_idx.size(); ++k) {
    for (const CMatrix* m : {&p_y.values[k], &q_y.values[k]}) {
      require_hermitian(*m);
      if (op_norm(*m * *m - *m) > gluing_tol)
        throw Error(ErrorKind::NotAProjection, "p and q must be projections on " + p_y.region);
    }
    a[y_idx[k]] = &p_y.values[k];
    b[y_idx[k]] = &q_y.values[k];
  }
  for (std::size_t i : overlap) {
    const double pq = op_norm(*a[i] - *b[i]);
    const double ps = op_norm(*a[i] - *s[i]);
    if (pq > gluing_tol || ps > gluing_tol) {
      throw Error(ErrorKind::GluingMismatch, "fields disagree on the overlap at point " + std::to_string(i));
    }
  }

  FieldPair out{{grid, {}}, {grid, {}}};
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (!a[i]) throw Error(ErrorKind::BadGrid, "regions do not cover point " + std::to_string(i));
    out.a.values.push_back(*a[i]);
    out.b.values.push_back(*b[i]);
  }
  return out;
}

MatrixField bott_projection(std::shared_ptr<const SpaceGrid> grid) {
  if (!grid || grid->kind != SpaceKind::Sphere) throw Error(ErrorKind::BadGrid, "Bott projection needs a sphere grid");
  MatrixField f{grid, {}};
  f.values.reserve(grid->size());
  for (const auto& p : grid->points) f.values.push_back(bott_at(p));
  return f;
}

long chern_number(const MatrixField& field) {
  require_grid(field);
  const SpaceGrid& grid = *field.grid;
  if (grid.plaquettes.empty()) throw Error(ErrorKind::BadGrid, "Chern number needs an oriented plaquette mesh");

  const double first_trace = field.values.front().trace().real();
  const auto rank = static_cast<std::size_t>(std::max(0.0, std::round(first_trace)));

  std::vector<CMatrix> frames;
  frames.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CMatrix& v = field.values[i];
    if (std::round(v.trace().real()) != static_cast<double>(rank))
      throw Error(ErrorKind::RankDrop, "projection rank changes at point " + std::to_string(i));
    const auto es = eig_hermitian(v);
    CMatrix frame = es.frame.columns(v.rows() - rank, rank);
    for (std::size_t c = 0; c < rank; ++c) {
      std::size_t big = 0;
      for (std::size_t r = 1; r < frame.rows(); ++r)
        if (std::abs(frame(r, c)) > std::abs(frame(big, c))) big = r;
      const Complex phase = std::conj(frame(big, c)) / std::abs(frame(big, c));
      for (std::size_t r = 0; r < frame.rows(); ++r) frame(r, c) *= phase;
    }
    frames.push_back(std::move(frame));
  }
  if (rank == 0) return 0;

  double total = 0.0;
  for (std::size_t k = 0; k < grid.plaquettes.size(); ++k) {
    const auto& corners = grid.plaquettes[k];
    CMatrix product = CMatrix::identity(rank);
    for (std::size_t c = 0; c < 4; ++c) {
      const CMatrix overlap = frames[corners[c]].adjoint() * frames[corners[(c + 1) % 4]];
      if (std::abs(determinant(overlap)) < kRankDropTol)
        throw Error(ErrorKind::RankDrop, "near-singular overlap on plaquette " + std::to_string(k) + "; refine the mesh");
      product = product * overlap;
    }
    double phase = std::arg(determinant(product));
    if (phase <= -std::numbers::pi) phase += 2.0 * std::numbers::pi;
    total += phase;
  }
  const double chern = total / (2.0 * std::numbers::pi);
  if (std::abs(chern - std::round(chern)) > kChernIntegerTol)
    throw Error(ErrorKind::NotNearInteger, "plaquette sum " + std::to_string(chern) + " is not near an integer");
  return static_cast<long>(std::round(chern));
}

ClassReport pointwise_class(const FieldPair& fp, double tol) {
  require_same_grid(fp.a, fp.b);
  const SpaceGrid& grid = *fp.a.grid;
  ClassReport r;
  r.point_class.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) r.point_class.push_back(class_of_pair({fp.a.values[i], fp.b.values[i]}, tol));

  UnionFind uf(grid.size());
  for (const auto& [i, j] : grid.edges) uf.unite(i, j);
  std::map<std::size_t, std::size_t> ids;
  r.component.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t root = uf.find(i);
    auto [it, inserted] = ids.emplace(root, ids.size());
    if (inserted) r.component_class.push_back(r.point_class[i]);
    r.component[i] = it->second;
    if (r.component_class[it->second] != r.point_class[i])
      throw Error(ErrorKind::NotLocallyConstant, "class jumps inside a connected component at point " + std::to_string(i));
  }
  for (const auto& [name, indices] : grid.regions) {
    std::set<long> distinct;
    for (std::size_t i : indices) distinct.insert(r.point_class.at(i));
    r.region_classes[name] = {distinct.begin(), distinct.end()};
  }
  return r;
}

MatrixField constant_field(std::shared_ptr<const SpaceGrid> grid, const CMatrix& value) {
  if (!grid) throw Error(ErrorKind::BadGrid, "field needs a grid");
  MatrixField f{grid, std::vector<CMatrix>(grid->size(), value)};
  return f;
}

MatrixField direct_sum(const MatrixField& x, const MatrixField& y) {
  require_same_grid(x, y);
  MatrixField out{x.grid, {}};
  out.values.reserve(x.values.size());
  for (std::size_t i = 0; i < x.values.size(); ++i) out.values.push_back(direct_sum(x.values[i], y.values[i]));
  return out;
}

MatrixField complement(const MatrixField& f) {
  require_grid(f);
  MatrixField out{f.grid, {}};
  out.values.reserve(f.values.size());
  for (const auto& v : f.values) out.values.push_back(CMatrix::identity(v.rows()) - v);
  return out;
}

MatrixField to_interval_field(const DElement& e) {
  validate_grid(e.grid);
  SpaceGrid g;
  g.kind = SpaceKind::Interval;
  g.resolution = {e.grid.size()};
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    g.points.push_back({e.grid[i], 0.0, 0.0});
    if (i > 0) g.edges.emplace_back(i - 1, i);
  }
  return {std::make_shared<const SpaceGrid>(std::move(g)), e.values};
}

FieldPair hemisphere_clutch_demo(std::size_t rings, double gluing_tol) {
  if (rings < 2 || rings % 2 != 0) throw Error(ErrorKind::BadGrid, "hemisphere demo needs an even ring count");
  SpaceGrid g = make_sphere(rings, 2 * rings);
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double z = g.points[i][2];
    if (z >= -kEquatorTol) upper.push_back(i);
    if (z <= kEquatorTol) lower.push_back(i);
  }
  g.regions["Y"] = upper;
  g.regions["Z"] = lower;
  auto grid = std::make_shared<const SpaceGrid>(std::move(g));

  RegionField p{"Y", {}};
  RegionField q{"Y", {}};
  RegionField s{"Z", {}};
  for (std::size_t i : upper) {
    auto pt = grid->points[i];
    p.values.push_back(bott_at(pt));
    pt[2] = -pt[2];
    q.values.push_back(bott_at(pt));
  }
  for (std::size_t i : lower) {
    const auto [x, y, z] = grid->points[i];
    s.values.push_back(CMatrix{{0.5, Complex(0.5 * x, -0.5 * y)}, {Complex(0.5 * x, 0.5 * y), 0.5}});
  }
  return clutch(grid, p, q, s, gluing_tol);
}

FieldPair circle_cutoff_demo(std::size_t points, double tol) {
  auto grid = std::make_shared<const SpaceGrid>(make_circle(points));
  const CMatrix p0 = CMatrix::diagonal({1.0, 0.0});
  constexpr double kRadius = std::numbers::pi / 4.0;

  std::vector<double> h(points);
  MatrixField alpha{grid, {}};
  for (std::size_t j = 0; j < points; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
    const double d = std::min(angle, 2.0 * std::numbers::pi - angle);
    h[j] = std::min(1.0, d / kRadius);
    if (d <= kRadius) {
      alpha.values.push_back(CMatrix(2, 2));
      continue;
    }
    // Rotate p0 by an angle growing from 0 at the edge of the neighbourhood.
    const double psi = (std::numbers::pi / 2.0) * (d - kRadius) / (std::numbers::pi - kRadius);
    const double c = std::cos(psi);
    const double sn = std::sin(psi);
    alpha.values.push_back(CMatrix{{c * c, c * sn}, {c * sn, sn * sn}} - p0);
  }
  MatrixField beta = constant_field(grid, CMatrix(2, 2));
  return cutoff_pair(p0, alpha, beta, h, 0, tol);
}

}  // namespace softk
