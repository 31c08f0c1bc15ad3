#include "softk/reduction.hpp"

#include <cmath>
#include <tuple>

#include "softk/errors.hpp"

namespace softk {

namespace {

constexpr double kAgreementTol = 1e-8;

CMatrix hermitize(CMatrix m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  return m;
}

// Rounds the spectrum of a compression to {0, 1}; returns the projection and its rank.
std::pair<CMatrix, std::size_t> round_to_projection(const CMatrix& m, double cluster_tol, const char* name) {
  if (m.empty()) return {m, 0};
  const auto es = eig_hermitian(m);
  std::vector<double> rounded(es.eigenvalues.size());
  std::size_t rank = 0;
  for (std::size_t i = 0; i < rounded.size(); ++i) {
    const double l = es.eigenvalues[i];
    rounded[i] = l >= 0.5 ? 1.0 : 0.0;
    if (std::abs(l - rounded[i]) > 10.0 * cluster_tol) {
      throw Error(ErrorKind::NotReducible, std::string("compression of ") + name + " has eigenvalue " +
                                               std::to_string(l) + " away from {0,1}");
    }
    if (rounded[i] == 1.0) ++rank;
  }
  return {hermitize(EigenSystem{rounded, es.frame}.reconstruct()), rank};
}

}  // namespace

Reduction reduce_to_projections(const SoftPair& pair, double cluster_tol, double tol) {
  require_relations(pair, tol);
  const std::size_t n = pair.dim();
  const auto ea = eig_hermitian(pair.a);

  std::vector<std::size_t> inner;
  std::vector<std::size_t> outer;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = ea.eigenvalues[i];
    (l >= cluster_tol && l <= 1.0 - cluster_tol ? inner : outer).push_back(i);
  }

  Reduction r;
  r.k = inner.size();
  r.frame = CMatrix(n, n);
  std::size_t col = 0;
  for (auto idx : {&inner, &outer})
    for (std::size_t src : *idx) {
      for (std::size_t row = 0; row < n; ++row) r.frame(row, col) = ea.frame(row, src);
      ++col;
    }

  const CMatrix basis_l = r.frame.columns(0, r.k);
  const CMatrix basis_perp = r.frame.columns(r.k, n - r.k);
  if (r.k > 0) {
    const double disagreement = op_norm((pair.b - pair.a) * basis_l);
    if (disagreement > kAgreementTol) {
      throw Error(ErrorKind::NotReducible,
                  "b differs from a on the interior eigenspace by " + std::to_string(disagreement));
    }
  }

  r.c = hermitize(basis_l.adjoint() * pair.a * basis_l);
  std::tie(r.p, r.rank_p) = round_to_projection(hermitize(basis_perp.adjoint() * pair.a * basis_perp), cluster_tol, "a");
  std::tie(r.q, r.rank_q) = round_to_projection(hermitize(basis_perp.adjoint() * pair.b * basis_perp), cluster_tol, "b");

  const CMatrix fa = r.frame.adjoint() * pair.a * r.frame;
  const CMatrix fb = r.frame.adjoint() * pair.b * r.frame;
  if (op_norm(fa - direct_sum(r.c, r.p)) > kAgreementTol || op_norm(fb - direct_sum(r.c, r.q)) > kAgreementTol) {
    throw Error(ErrorKind::NotReducible, "pair does not split as c (+) p, c (+) q");
  }
  return r;
}

long class_of_pair(const SoftPair& pair, double tol) {
  if (!pair.a.is_square() || !pair.b.is_square() || pair.a.rows() != pair.b.rows()) {
    throw Error(ErrorKind::ShapeError, "pair entries must be square matrices of equal size");
  }
  const double tau = (pair.a.trace() - pair.b.trace()).real();
  if (!std::isfinite(tau)) throw Error(ErrorKind::InvalidInput, "trace is not finite");
  const double nearest = std::round(tau);
  if (std::abs(tau - nearest) > tol) {
    throw Error(ErrorKind::NotNearInteger, "tr(a-b) = " + std::to_string(tau) + " is not near an integer");
  }
  return static_cast<long>(nearest);
}

}  // namespace softk
