#ifndef QEO_RANDOM_HPP
#define QEO_RANDOM_HPP

// Seeded samplers for states, observables and simplex points.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "qeo/linalg.hpp"
#include "qeo/simplex_poly.hpp"

namespace qeo {

using Rng = std::mt19937_64;

// Complex standard normal vector normalized to unit length (uniform on the sphere).
inline std::vector<Complex> random_unit_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> v(n);
  double norm = 0.0;
  do {
    for (auto& x : v) x = Complex(gauss(rng), gauss(rng));
    norm = vector_norm(v);
  } while (norm < 1e-8);
  for (auto& x : v) x /= norm;
  return v;
}

inline ComplexMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

inline HermitianMatrix random_hermitian(std::size_t n, Rng& rng) {
  const auto g = random_gaussian_matrix(n, n, rng);
  return HermitianMatrix((g + g.adjoint()) * Complex(0.5, 0.0));
}

// G G^dagger / Tr, full rank almost surely.
inline ComplexMatrix random_density_matrix(std::size_t n, Rng& rng) {
  const auto g = random_gaussian_matrix(n, n, rng);
  auto m = g * g.adjoint();
  const double tr = m.trace().real();
  m *= Complex(1.0 / tr, 0.0);
  return m;
}

// Columns form a Haar-ish random orthonormal basis (Gram-Schmidt of Gaussians).
inline std::vector<std::vector<Complex>> random_orthonormal_basis(std::size_t n, Rng& rng) {
  std::vector<std::vector<Complex>> basis;
  while (basis.size() < n) {
    auto v = random_unit_vector(n, rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        Complex overlap{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) overlap += std::conj(b[i]) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= overlap * b[i];
      }
    }
    const double norm = vector_norm(v);
    if (norm < 1e-6) continue;
    for (auto& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

// Uniform on the simplex (normalized exponentials).
inline SimplexPoint random_simplex_point(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& x : p) {
    x = expo(rng);
    s += x;
  }
  for (auto& x : p) x /= s;
  // Push the rounding residue into the largest coordinate.
  double total = 0.0;
  std::size_t big = 0;
  for (std::size_t i = 0; i < k; ++i) {
    total += p[i];
    if (p[i] > p[big]) big = i;
  }
  p[big] += 1.0 - total;
  return SimplexPoint(std::move(p));
}

}  // namespace qeo

#endif  // QEO_RANDOM_HPP
