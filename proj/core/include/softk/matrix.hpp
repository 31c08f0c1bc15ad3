#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace softk {

using Complex = std::complex<double>;

/// Default absolute tolerance for comparisons against zero.
inline constexpr double kDefaultAtol = 1e-10;
/// Default relative tolerance.
inline constexpr double kDefaultRtol = 1e-9;
/// Hermiticity is accepted when ||M - M*|| <= kHermitianTol * max(1, ||M||).
inline constexpr double kHermitianTol = 1e-12;
/// Eigenvalues closer than this are treated as one cluster.
inline constexpr double kClusterTol = 1e-8;

/// Dense complex matrix, row-major. Mostly used square; frames and blocks
/// may be rectangular.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  explicit CMatrix(std::size_t n) : CMatrix(n, n) {}
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t n) { return CMatrix(n, n); }
  static CMatrix diagonal(std::span<const double> d);
  static CMatrix diagonal(std::initializer_list<double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  /// Dimension of a square matrix.
  std::size_t dim() const noexcept { return rows_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  CMatrix adjoint() const;
  Complex trace() const;
  bool all_finite() const noexcept;

  /// Columns [first, first + count) as a rows() x count matrix.
  CMatrix columns(std::size_t first, std::size_t count) const;
  /// Sub-block starting at (r0, c0).
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix l, const CMatrix& r) { return l += r; }
  friend CMatrix operator-(CMatrix l, const CMatrix& r) { return l -= r; }
  friend CMatrix operator*(CMatrix m, Complex s) { return m *= s; }
  friend CMatrix operator*(Complex s, CMatrix m) { return m *= s; }
  friend CMatrix operator*(CMatrix m, double s) { return m *= Complex(s); }
  friend CMatrix operator*(double s, CMatrix m) { return m *= Complex(s); }
  friend CMatrix operator*(const CMatrix& l, const CMatrix& r);

  bool operator==(const CMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Block-diagonal M (+) N.
CMatrix direct_sum(const CMatrix& m, const CMatrix& n);
/// M* M, assembled so that the result is exactly Hermitian.
CMatrix gram(const CMatrix& m);

double frobenius_norm(const CMatrix& m);
double max_abs(const CMatrix& m);
/// Frobenius norm of M - M*.
double hermitian_defect(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);
/// Throws NotHermitian (or ShapeError / InvalidInput) unless M is a finite
/// square Hermitian matrix within tolerance.
void require_hermitian(const CMatrix& m, double tol = kHermitianTol);

/// Spectral norm (largest singular value).
double op_norm(const CMatrix& m);

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  CMatrix frame;                    // columns are eigenvectors

  CMatrix reconstruct() const;
};

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Eigenvalues come
/// out ascending; each eigenvector has its first non-negligible component
/// real positive.
EigenSystem eig_hermitian(const CMatrix& m);
/// Ascending eigenvalues only; same values as eig_hermitian, less work.
std::vector<double> eigenvalues_hermitian(const CMatrix& m);

/// Real function together with the closed interval it is defined on.
struct ScalarFunction {
  std::function<double(double)> eval;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::string name;

  double operator()(double t) const { return eval(t); }
};

struct SpectralOptions {
  /// Eigenvalues outside [lo, hi] by at most this much are clamped.
  double domain_tol = kDefaultAtol;
  /// Eigenvalues within this distance of a finite domain endpoint are moved
  /// onto it. Keeps non-Lipschitz functions such as sqrt(t - t^2) from
  /// amplifying rounding noise in the eigenvalues of projections.
  double snap_tol = 1e-12;
};

/// frame * diag(f(lambda_i)) * frame*.
CMatrix apply_function(const CMatrix& m, const ScalarFunction& f, const SpectralOptions& opts = {});
CMatrix apply_function(const EigenSystem& es, const ScalarFunction& f, const SpectralOptions& opts = {});

/// Smallest eigenvalue; M counts as positive when this is >= -tol.
double positivity_margin(const CMatrix& m);

namespace fn {
ScalarFunction identity();
/// t^m on [0, 1].
ScalarFunction power(int m);
/// t - t^2
ScalarFunction defect();
/// t (t - t^2)
ScalarFunction defect_times_t();
/// (t - t^2)^{1/2}
ScalarFunction sqrt_defect();
/// 3t^2 - 2t^3
ScalarFunction smoothstep();
}  // namespace fn

}  // namespace softk
