#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "softk/pairs.hpp"
#include "softk/universal.hpp"

namespace softk {

inline constexpr double kDefaultGluingTol = 1e-9;

enum class SpaceKind { Interval, Circle, Sphere };

std::string_view to_string(SpaceKind kind) noexcept;
SpaceKind space_kind_from_string(std::string_view s);

/// Sampled compact space. Points are embedded in R^3 (interval points use
/// the x coordinate, circle points lie in the xy-plane).
struct SpaceGrid {
  SpaceKind kind = SpaceKind::Interval;
  std::vector<std::size_t> resolution;
  std::vector<std::array<double, 3>> points;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// Ordered 4-cycles, oriented counterclockwise seen from outside the
  /// sphere. Polar caps use degenerate quads with one repeated corner.
  std::vector<std::array<std::size_t, 4>> plaquettes;
  std::map<std::string, std::vector<std::size_t>> regions;

  std::size_t size() const noexcept { return points.size(); }
  bool operator==(const SpaceGrid&) const = default;
};

SpaceGrid make_interval(std::size_t points, double lo = -1.0, double hi = 1.0);
SpaceGrid make_circle(std::size_t points);
/// Latitude-longitude mesh with `rings` latitude bands and `segments`
/// longitude segments: north pole, rings - 1 circles, south pole.
SpaceGrid make_sphere(std::size_t rings, std::size_t segments);
/// Rebuilds a grid from its kind and resolution (regions left empty).
SpaceGrid make_grid(SpaceKind kind, const std::vector<std::size_t>& resolution);

/// Sorted intersection of two named regions.
std::vector<std::size_t> region_intersection(const SpaceGrid& grid, const std::string& y, const std::string& z);

struct MatrixField {
  std::shared_ptr<const SpaceGrid> grid;
  std::vector<CMatrix> values;
};

struct FieldPair {
  MatrixField a;
  MatrixField b;
};

/// Largest ||v_i - v_j|| over grid edges.
double continuity_witness(const MatrixField& field);

struct RegionSummary {
  double worst_r1 = 0.0;
  double worst_r2 = 0.0;
  bool pass = true;
};

struct FieldReport {
  std::vector<RelationReport> points;
  double worst_r1 = 0.0;
  double worst_r2 = 0.0;
  std::size_t failures = 0;
  std::map<std::string, RegionSummary> regions;
  bool pass = false;
};

FieldReport check_relations_field(const FieldPair& fp, double tol = kDefaultRelationTol);

/// a = h p0 + alpha, b = h p0 + beta. h must vanish at the basepoint and
/// alpha, beta must vanish wherever h < 1.
FieldPair cutoff_pair(const CMatrix& p0, const MatrixField& alpha, const MatrixField& beta,
                      const std::vector<double>& h, std::size_t basepoint, double tol = kDefaultGluingTol);

/// Values over one named region, aligned with grid.regions[region].
struct RegionField {
  std::string region;
  std::vector<CMatrix> values;
};

/// a = p on Y, s on Z; b = q on Y, s on Z. Regions must cover the grid and
/// p, q, s must agree on Y n Z within gluing_tol.
FieldPair clutch(std::shared_ptr<const SpaceGrid> grid, const RegionField& p_y, const RegionField& q_y,
                 const RegionField& s_z, double gluing_tol = kDefaultGluingTol);

/// 1/2 [[1 + z, x - iy], [x + iy, 1 - z]] at each point of a sphere grid.
MatrixField bott_projection(std::shared_ptr<const SpaceGrid> grid);

/// Plaquette overlap-phase Chern number of a constant-rank projection field.
long chern_number(const MatrixField& field);

struct ClassReport {
  std::vector<long> point_class;
  std::vector<std::size_t> component;  // connected component id per point
  std::vector<long> component_class;
  std::map<std::string, std::vector<long>> region_classes;  // distinct values, ascending
};

/// tr(a - b) at every point, checked to be locally constant.
ClassReport pointwise_class(const FieldPair& fp, double tol = 1e-8);

/// Pointwise constant field.
MatrixField constant_field(std::shared_ptr<const SpaceGrid> grid, const CMatrix& value);
/// Pointwise direct sum.
MatrixField direct_sum(const MatrixField& x, const MatrixField& y);
/// Pointwise 1 - v.
MatrixField complement(const MatrixField& f);
/// Reads a D element as a field over an interval grid on [-1, 1].
MatrixField to_interval_field(const DElement& e);

/// Hemisphere clutching: p the Bott projection on the upper hemisphere Y,
/// q its mirror image z -> -z, s = 1/2 [[1, x - iy], [x + iy, 1]] on the
/// lower hemisphere Z. All three agree on the equator.
FieldPair hemisphere_clutch_demo(std::size_t rings, double gluing_tol = kDefaultGluingTol);

/// Circle with basepoint at angle 0: p0 = diag(1, 0), alpha rotates p0 away
/// from the basepoint, beta = 0, h is a linear cutoff.
FieldPair circle_cutoff_demo(std::size_t points, double tol = kDefaultGluingTol);

}  // namespace softk
