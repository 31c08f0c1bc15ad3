#include "softk/random.hpp"

#include <cmath>
#include <numbers>

namespace softk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream + 0x5eedULL))) {}

double SeededStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double SeededStream::normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Complex SeededStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

CMatrix random_unitary(std::size_t n, SeededStream& rng) {
  CMatrix g(n, n);
  for (auto& z : g.data()) z = rng.complex_normal();

  // Modified Gram-Schmidt, two passes per column.
  CMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = g(i, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q(i, k);
      }
    }
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / norm;
  }
  return q;
}

}  // namespace softk
