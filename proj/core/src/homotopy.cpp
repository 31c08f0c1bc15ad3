#include "softk/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "softk/errors.hpp"
#include "softk/reduction.hpp"

namespace softk {

namespace {

std::vector<double> unit_params(std::size_t steps) {
  if (steps < 2) throw Error(ErrorKind::InvalidInput, "a path needs at least 2 samples");
  std::vector<double> t(steps);
  for (std::size_t i = 0; i < steps; ++i) t[i] = static_cast<double>(i) / static_cast<double>(steps - 1);
  return t;
}

double pair_distance(const SoftPair& x, const SoftPair& y) {
  return std::max(op_norm(x.a - y.a), op_norm(x.b - y.b));
}

CMatrix defect(const CMatrix& x) { return x - x * x; }

}  // namespace

PairPath make_path(std::vector<double> params, std::vector<SoftPair> pairs) {
  if (params.size() != pairs.size()) throw Error(ErrorKind::ShapeError, "one parameter per sample required");
  if (!std::is_sorted(params.begin(), params.end()))
    throw Error(ErrorKind::InvalidInput, "path parameters must be ascending");
  PairPath path;
  path.params = std::move(params);
  path.pairs = std::move(pairs);
  for (std::size_t i = 0; i < path.pairs.size(); ++i) {
    const auto& s = path.pairs[i];
    const CMatrix diff = s.a - s.b;
    path.worst_r1 = std::max(path.worst_r1, op_norm(defect(s.a) * diff));
    path.worst_r2 = std::max(path.worst_r2, op_norm(defect(s.b) * diff));
    if (i > 0) path.step_bound = std::max(path.step_bound, pair_distance(path.pairs[i - 1], s));
  }
  return path;
}

PairPath linear_scaling_path(const CMatrix& a, std::size_t steps) {
  require_hermitian(a);
  if (a.rows() > 0) {
    const auto es = eig_hermitian(a);
    if (es.eigenvalues.front() < -kDefaultAtol || es.eigenvalues.back() > 1.0 + kDefaultAtol) {
      throw Error(ErrorKind::InvalidInput, "linear scaling needs 0 <= a <= 1");
    }
  }
  auto params = unit_params(steps);
  std::vector<SoftPair> pairs;
  pairs.reserve(steps);
  for (double t : params) {
    CMatrix at = a * t;
    pairs.push_back({at, at});
  }
  return make_path(std::move(params), std::move(pairs));
}

CMatrix flip_rotated(const SoftPair& p, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::size_t n = p.dim();
  const CMatrix diff = p.a - p.b;
  CMatrix out(2 * n, 2 * n);
  out.set_block(0, 0, p.b * (c * c) + p.a * (s * s));
  out.set_block(0, n, diff * (c * s));
  out.set_block(n, 0, diff * (c * s));
  out.set_block(n, n, p.b * (s * s) + p.a * (c * c));
  return out;
}

PairPath rotation_flip_path(const SoftPair& p, std::size_t steps, double tol) {
  require_relations(p, tol);
  auto params = unit_params(steps);
  const CMatrix fixed = direct_sum(p.a, p.b);
  std::vector<SoftPair> pairs;
  pairs.reserve(steps);
  for (double t : params) pairs.push_back({fixed, flip_rotated(p, t * std::numbers::pi / 2.0)});
  auto path = make_path(std::move(params), std::move(pairs));
  path.parameter_label = "angle";
  path.parameter_scale = std::numbers::pi / 2.0;
  return path;
}

PairPath reparam_path(const SoftPair& p, const ScalarFunction& f, std::size_t steps, double tol) {
  validate_reparametrization(f, tol);
  require_relations(p, tol);
  const auto ea = eig_hermitian(p.a);
  const auto eb = eig_hermitian(p.b);
  auto params = unit_params(steps);
  std::vector<SoftPair> pairs;
  pairs.reserve(steps);
  for (double u : params) {
    ScalarFunction fu{[u, &f](double t) { return (1.0 - u) * t + u * f(t); }, 0.0, 1.0, "f_u"};
    pairs.push_back({apply_function(ea, fu), apply_function(eb, fu)});
  }
  auto path = make_path(std::move(params), std::move(pairs));
  path.parameter_label = "u";
  return path;
}

PathReport verify_path(const PairPath& path, double tol) {
  PathReport report;
  report.tol = tol;
  report.samples.resize(path.pairs.size());
  std::optional<long> reference;
  for (std::size_t i = 0; i < path.pairs.size(); ++i) {
    auto& sample = report.samples[i];
    bool ok = true;
    try {
      sample.relations = check_relations(path.pairs[i], tol);
      ok = sample.relations.pass;
    } catch (const Error&) {
      sample.relations = RelationReport{};
      sample.relations.tol = tol;
      ok = false;
    }
    try {
      sample.klass = class_of_pair(path.pairs[i]);
    } catch (const Error&) {
      ok = false;
    }
    if (sample.klass) {
      if (!reference) reference = sample.klass;
      if (*sample.klass != *reference) report.class_constant = false;
    } else {
      report.class_constant = false;
    }
    if (i > 0) {
      sample.step = pair_distance(path.pairs[i - 1], path.pairs[i]);
      report.step_bound = std::max(report.step_bound, sample.step);
    }
    report.worst_r1 = std::max(report.worst_r1, sample.relations.r1);
    report.worst_r2 = std::max(report.worst_r2, sample.relations.r2);
    if (!ok && !report.first_failure) report.first_failure = i;
  }
  report.pass = !report.first_failure && report.class_constant && !path.pairs.empty();
  return report;
}

}  // namespace softk
