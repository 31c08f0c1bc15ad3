#include "softk/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "softk/errors.hpp"

namespace softk {

namespace {

constexpr int kMaxSweeps = 100;
// Components below this magnitude are skipped when fixing eigenvector phase.
constexpr double kPhaseTol = 1e-10;

void require_same_shape(const CMatrix& l, const CMatrix& r, const char* op) {
  if (l.rows() != r.rows() || l.cols() != r.cols()) {
    throw Error(ErrorKind::ShapeError, std::string("shape mismatch in ") + op);
  }
}

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(2.0 * s);
}

// One complex Jacobi rotation annihilating a(p, q). The rotation is
// G = diag(1, conj(w)) * [[c, s], [-s, c]] on coordinates (p, q), where
// w = a(p, q) / |a(p, q)|.
void rotate(CMatrix& a, CMatrix* v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex w = apq / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double zeta = (aqq - app) / (2.0 * r);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex wc = std::conj(w);
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s * wc * akq;
    a(k, q) = s * akp + c * wc * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s * w * aqk;
    a(q, k) = s * apk + c * w * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  if (v == nullptr) return;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = (*v)(k, p);
    const Complex vkq = (*v)(k, q);
    (*v)(k, p) = c * vkp - s * wc * vkq;
    (*v)(k, q) = s * vkp + c * wc * vkq;
  }
}

// Diagonalizes the exactly Hermitian part of m in place of the returned
// matrix; accumulates the rotations into v when given.
CMatrix jacobi(const CMatrix& m, CMatrix* v) {
  require_hermitian(m);
  const std::size_t n = m.rows();
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
      a(j, i) = std::conj(a(i, j));
    }
  }
  const double scale = frobenius_norm(a);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= std::numeric_limits<double>::epsilon() * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }
  return a;
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::ShapeError, "ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool CMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix CMatrix::columns(std::size_t first, std::size_t count) const { return block(0, first, rows_, count); }

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::ShapeError, "block out of range");
  CMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw Error(ErrorKind::ShapeError, "block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& l, const CMatrix& r) {
  if (l.cols() != r.rows()) throw Error(ErrorKind::ShapeError, "shape mismatch in *");
  CMatrix out(l.rows(), r.cols());
  for (std::size_t i = 0; i < l.rows(); ++i)
    for (std::size_t k = 0; k < l.cols(); ++k) {
      const Complex lik = l(i, k);
      if (lik == Complex(0.0)) continue;
      for (std::size_t j = 0; j < r.cols(); ++j) out(i, j) += lik * r(k, j);
    }
  return out;
}

CMatrix direct_sum(const CMatrix& m, const CMatrix& n) {
  CMatrix out(m.rows() + n.rows(), m.cols() + n.cols());
  out.set_block(0, 0, m);
  out.set_block(m.rows(), m.cols(), n);
  return out;
}

CMatrix gram(const CMatrix& m) {
  const std::size_t n = m.cols();
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < m.rows(); ++k) s += std::conj(m(k, i)) * m(k, j);
      g(i, j) = s;
      g(j, i) = std::conj(s);
    }
    g(i, i) = g(i, i).real();
  }
  return g;
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs(const CMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) s = std::max(s, std::abs(z));
  return s;
}

double hermitian_defect(const CMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j) - std::conj(m(j, i)));
  return std::sqrt(s);
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (!m.is_square() || !m.all_finite()) return false;
  return hermitian_defect(m) <= tol * std::max(1.0, frobenius_norm(m));
}

void require_hermitian(const CMatrix& m, double tol) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeError, "matrix is not square");
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
  if (!is_hermitian(m, tol)) throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian within tolerance");
}

double op_norm(const CMatrix& m) {
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
  if (m.empty()) return 0.0;
  if (is_hermitian(m)) {
    const auto ev = eigenvalues_hermitian(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
  }
  const auto ev = eigenvalues_hermitian(gram(m));
  return std::sqrt(std::max(0.0, ev.back()));
}

CMatrix EigenSystem::reconstruct() const {
  CMatrix scaled = frame;
  for (std::size_t i = 0; i < scaled.rows(); ++i)
    for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= eigenvalues[j];
  return scaled * frame.adjoint();
}

std::vector<double> eigenvalues_hermitian(const CMatrix& m) {
  const CMatrix a = jacobi(m, nullptr);
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a(i, i).real();
  std::sort(out.begin(), out.end());
  return out;
}

EigenSystem eig_hermitian(const CMatrix& m) {
  const std::size_t n = m.rows();
  CMatrix v = CMatrix::identity(n);
  const CMatrix a = jacobi(m, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem es;
  es.eigenvalues.resize(n);
  es.frame = CMatrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    es.eigenvalues[col] = a(src, src).real();
    Complex phase = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double mag = std::abs(v(k, src));
      if (mag > kPhaseTol) {
        phase = std::conj(v(k, src)) / mag;
        break;
      }
    }
    for (std::size_t k = 0; k < n; ++k) es.frame(k, col) = v(k, src) * phase;
    // The leading component is real by construction; drop the rounding residue.
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(es.frame(k, col)) > kPhaseTol) {
        es.frame(k, col) = es.frame(k, col).real();
        break;
      }
    }
  }
  return es;
}

CMatrix apply_function(const EigenSystem& es, const ScalarFunction& f, const SpectralOptions& opts) {
  std::vector<double> values(es.eigenvalues.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double lambda = es.eigenvalues[i];
    if (lambda < f.lo - opts.domain_tol || lambda > f.hi + opts.domain_tol) {
      throw Error(ErrorKind::DomainError,
                  "eigenvalue " + std::to_string(lambda) + " outside the domain of " +
                      (f.name.empty() ? std::string("f") : f.name));
    }
    lambda = std::clamp(lambda, f.lo, f.hi);
    if (std::isfinite(f.lo) && lambda - f.lo <= opts.snap_tol) lambda = f.lo;
    if (std::isfinite(f.hi) && f.hi - lambda <= opts.snap_tol) lambda = f.hi;
    values[i] = f(lambda);
  }
  EigenSystem mapped{std::move(values), es.frame};
  CMatrix out = mapped.reconstruct();
  // Restore exact Hermitian symmetry lost to rounding.
  for (std::size_t i = 0; i < out.rows(); ++i) {
    out(i, i) = out(i, i).real();
    for (std::size_t j = i + 1; j < out.cols(); ++j) {
      const Complex avg = 0.5 * (out(i, j) + std::conj(out(j, i)));
      out(i, j) = avg;
      out(j, i) = std::conj(avg);
    }
  }
  return out;
}

CMatrix apply_function(const CMatrix& m, const ScalarFunction& f, const SpectralOptions& opts) {
  return apply_function(eig_hermitian(m), f, opts);
}

double positivity_margin(const CMatrix& m) {
  if (m.empty()) return 0.0;
  return eigenvalues_hermitian(m).front();
}

namespace fn {

ScalarFunction identity() {
  return {[](double t) { return t; }, -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), "t"};
}

ScalarFunction power(int m) {
  return {[m](double t) { return std::pow(t, m); }, 0.0, 1.0, "t^" + std::to_string(m)};
}

ScalarFunction defect() {
  return {[](double t) { return t - t * t; }, 0.0, 1.0, "t-t^2"};
}

ScalarFunction defect_times_t() {
  return {[](double t) { return t * (t - t * t); }, 0.0, 1.0, "t(t-t^2)"};
}

ScalarFunction sqrt_defect() {
  return {[](double t) { return std::sqrt(std::max(0.0, t - t * t)); }, 0.0, 1.0, "sqrt(t-t^2)"};
}

ScalarFunction smoothstep() {
  return {[](double t) { return 3.0 * t * t - 2.0 * t * t * t; }, 0.0, 1.0, "3t^2-2t^3"};
}

}  // namespace fn

}  // namespace softk
