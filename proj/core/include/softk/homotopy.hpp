#pragma once

#include <optional>
#include <string>
#include <vector>

#include "softk/pairs.hpp"

namespace softk {

inline constexpr std::size_t kDefaultSteps = 101;

/// Sampled path t -> (a_t, b_t). The parameter is normalized to [0, 1];
/// `parameter_label` and `parameter_scale` record the natural parameter
/// (natural = scale * t).
struct PairPath {
  std::vector<double> params;
  std::vector<SoftPair> pairs;
  double worst_r1 = 0.0;
  double worst_r2 = 0.0;
  /// Largest distance between consecutive samples (max over both entries).
  double step_bound = 0.0;
  std::string parameter_label = "t";
  double parameter_scale = 1.0;
};

/// (t a, t a) for t in [0, 1].
PairPath linear_scaling_path(const CMatrix& a, std::size_t steps = kDefaultSteps);

/// (a (+) b, B_t) with B_t = U_t* (b (+) a) U_t and U_t the rotation by
/// angle t * pi/2. Starts at (a (+) b, b (+) a), ends at (a (+) b, a (+) b).
PairPath rotation_flip_path(const SoftPair& p, std::size_t steps = kDefaultSteps, double tol = kDefaultRelationTol);

/// The second entry of the flip path at rotation angle theta (radians).
CMatrix flip_rotated(const SoftPair& p, double theta);

/// (f_u(a), f_u(b)) with f_u = (1 - u) id + u f.
PairPath reparam_path(const SoftPair& p, const ScalarFunction& f, std::size_t steps = kDefaultSteps,
                      double tol = kDefaultRelationTol);

/// Builds a path from explicit samples and fills in the residual summary.
PairPath make_path(std::vector<double> params, std::vector<SoftPair> pairs);

struct PathSample {
  RelationReport relations;
  std::optional<long> klass;  // empty when tr(a - b) is not near an integer
  double step = 0.0;          // distance to the previous sample
};

struct PathReport {
  std::vector<PathSample> samples;
  double worst_r1 = 0.0;
  double worst_r2 = 0.0;
  double step_bound = 0.0;
  std::optional<std::size_t> first_failure;
  bool class_constant = true;
  bool pass = false;
  double tol = 0.0;
};

/// Re-checks every sample and the class at every sample. Never throws for
/// mathematical failures; the report carries the verdict.
PathReport verify_path(const PairPath& path, double tol = kDefaultRelationTol);

}  // namespace softk
