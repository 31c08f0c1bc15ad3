#include "softk/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "softk/errors.hpp"
#include "softk/random.hpp"

namespace softk {

namespace {

void require_pair_shape(const SoftPair& p) {
  if (!p.a.is_square() || !p.b.is_square() || p.a.rows() != p.b.rows()) {
    throw Error(ErrorKind::ShapeError, "pair entries must be square matrices of equal size");
  }
}

CMatrix defect(const CMatrix& x) { return x - x * x; }

}  // namespace

RelationReport check_relations(const SoftPair& p, double tol) {
  require_pair_shape(p);
  require_hermitian(p.a);
  require_hermitian(p.b);

  RelationReport r;
  r.tol = tol;
  if (p.dim() > 0) {
    const auto ea = eigenvalues_hermitian(p.a);
    const auto eb = eigenvalues_hermitian(p.b);
    r.norm_a = std::max(std::abs(ea.front()), std::abs(ea.back()));
    r.norm_b = std::max(std::abs(eb.front()), std::abs(eb.back()));
    r.positivity_a = ea.front();
    r.positivity_b = eb.front();
    const CMatrix diff = p.a - p.b;
    r.r1 = op_norm(defect(p.a) * diff);
    r.r2 = op_norm(defect(p.b) * diff);
  }
  r.pass = r.norm_a <= 1.0 + tol && r.norm_b <= 1.0 + tol && r.positivity_a >= -tol && r.positivity_b >= -tol &&
           r.r1 <= tol && r.r2 <= tol;
  return r;
}

RelationReport require_relations(const SoftPair& p, double tol) {
  auto r = check_relations(p, tol);
  if (!r.pass) {
    throw Error(ErrorKind::RelationViolation,
                "pair fails the relations (r1=" + std::to_string(r.r1) + ", r2=" + std::to_string(r.r2) + ")");
  }
  return r;
}

double IdentityReport::max_deviation() const {
  return std::max({square_gap, defect_gap, g_gap, h_gap, g_annihilates, h_annihilates, sqrt_gap, sqrt_annihilates});
}

IdentityReport check_derived_identities(const SoftPair& p, double tol) {
  require_relations(p, tol);
  IdentityReport r;
  r.tol = kDerivedTolFactor * tol;

  const CMatrix diff = p.a - p.b;
  const CMatrix da = defect(p.a);
  const CMatrix db = defect(p.b);
  r.square_gap = op_norm(da * da - db * db);
  r.defect_gap = op_norm(da - db);

  const auto ea = eig_hermitian(p.a);
  const auto eb = eig_hermitian(p.b);
  for (const auto& [f, gap, annihilates] :
       {std::tuple{fn::defect(), &r.g_gap, &r.g_annihilates},
        std::tuple{fn::defect_times_t(), &r.h_gap, &r.h_annihilates},
        std::tuple{fn::sqrt_defect(), &r.sqrt_gap, &r.sqrt_annihilates}}) {
    const CMatrix fa = apply_function(ea, f);
    const CMatrix fb = apply_function(eb, f);
    *gap = op_norm(fa - fb);
    *annihilates = op_norm(fa * diff);
  }
  r.pass = r.max_deviation() <= r.tol;
  return r;
}

SpectraReport compare_spectra(const SoftPair& p, double delta, double tol) {
  require_relations(p, tol);
  SpectraReport r;
  auto interior = [delta](const CMatrix& m) {
    std::vector<double> out;
    for (double l : eig_hermitian(m).eigenvalues)
      if (l >= delta && l <= 1.0 - delta) out.push_back(l);
    return out;
  };
  r.interior_a = interior(p.a);
  r.interior_b = interior(p.b);

  const double pairing_tol = 10.0 * delta;
  std::vector<bool> used(r.interior_b.size(), false);
  for (std::size_t i = 0; i < r.interior_a.size(); ++i) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < r.interior_b.size(); ++j) {
      if (used[j]) continue;
      if (!best || std::abs(r.interior_b[j] - r.interior_a[i]) < std::abs(r.interior_b[*best] - r.interior_a[i]))
        best = j;
    }
    if (!best || std::abs(r.interior_b[*best] - r.interior_a[i]) > pairing_tol) {
      throw Error(ErrorKind::NoMatching, "interior eigenvalue " + std::to_string(r.interior_a[i]) + " of a has no partner");
    }
    used[*best] = true;
    r.matching.emplace_back(i, *best);
    r.max_mismatch = std::max(r.max_mismatch, std::abs(r.interior_b[*best] - r.interior_a[i]));
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error(ErrorKind::NoMatching, "interior spectrum of b has unmatched eigenvalues");
  }
  return r;
}

SoftPair direct_sum(const SoftPair& p, const SoftPair& q) {
  require_pair_shape(p);
  require_pair_shape(q);
  return {direct_sum(p.a, q.a), direct_sum(p.b, q.b)};
}

void validate_reparametrization(const ScalarFunction& f, double tol) {
  if (std::abs(f(0.0)) > tol || std::abs(f(1.0) - 1.0) > tol) {
    throw Error(ErrorKind::DomainError, "reparametrization must satisfy f(0)=0 and f(1)=1");
  }
  constexpr int kSamples = 1024;
  for (int i = 0; i < kSamples; ++i) {
    const double t = static_cast<double>(i) / (kSamples - 1);
    const double v = f(t);
    if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
      throw Error(ErrorKind::DomainError, "reparametrization leaves [0,1] at t=" + std::to_string(t));
    }
  }
}

SoftPair reparametrize(const SoftPair& p, const ScalarFunction& f, double tol) {
  validate_reparametrization(f, tol);
  require_relations(p, tol);
  ScalarFunction on_unit = f;
  on_unit.lo = 0.0;
  on_unit.hi = 1.0;
  return {apply_function(p.a, on_unit), apply_function(p.b, on_unit)};
}

GeneratedPair random_valid_pair(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) throw Error(ErrorKind::ShapeError, "k must not exceed n");
  SeededStream rng(seed);
  const CMatrix u = random_unitary(n, rng);

  std::vector<double> da(n, 0.0);
  std::vector<double> db(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) da[i] = db[i] = rng.uniform(0.05, 0.95);

  GeneratedPair out;
  out.meta.seed = seed;
  out.meta.k = k;
  for (std::size_t i = k; i < n; ++i) {
    if (rng.coin()) {
      da[i] = 1.0;
      ++out.meta.rank_p;
    }
  }
  for (std::size_t i = k; i < n; ++i) {
    if (rng.coin()) {
      db[i] = 1.0;
      ++out.meta.rank_q;
    }
  }

  auto conjugate = [&u](const std::vector<double>& d) {
    CMatrix m = u * CMatrix::diagonal(d) * u.adjoint();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      m(i, i) = m(i, i).real();
      for (std::size_t j = i + 1; j < m.cols(); ++j) m(j, i) = std::conj(m(i, j));
    }
    return m;
  };
  out.pair = {conjugate(da), conjugate(db)};
  return out;
}

}  // namespace softk
