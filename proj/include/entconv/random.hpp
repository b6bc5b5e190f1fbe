#pragma once

// Seeded samplers. No global RNG state: every sampler takes the engine.

#include <entconv/linalg.hpp>

#include <cstdint>
#include <random>

namespace entconv {

using Rng = std::mt19937_64;

inline ComplexMatrix random_ginibre(Index rows, Index cols, Rng &rng) {
  std::normal_distribution<double> n01;
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

inline ComplexVector random_unit_vector(Index n, Rng &rng) {
  ComplexVector v = random_ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

/// Random state G G† / Tr with G of size n x rank (rank <= 0 means full).
inline HermitianMatrix random_state(Dims d, Rng &rng, Index rank = 0) {
  const Index n = d.order();
  const ComplexMatrix g = random_ginibre(n, rank > 0 ? rank : n, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return {d, std::move(m)};
}

inline HermitianMatrix random_pure_state(Dims d, Rng &rng) {
  return HermitianMatrix::outer(d, random_unit_vector(d.order(), rng));
}

/// |a>|b> for independent random unit vectors.
inline ComplexVector random_product_vector(Dims d, Rng &rng) {
  const ComplexVector a = random_unit_vector(d.n1, rng);
  const ComplexVector b = random_unit_vector(d.n2, rng);
  ComplexVector v(d.order());
  for (Index i = 0; i < d.n1; ++i)
    for (Index k = 0; k < d.n2; ++k)
      v(i * d.n2 + k) = a(i) * b(k);
  return v;
}

/// GUE-like hermitian matrix with unit-variance entries.
inline HermitianMatrix random_hermitian(Dims d, Rng &rng) {
  const ComplexMatrix g = random_ginibre(d.order(), d.order(), rng);
  return {d, (g + g.adjoint()) * 0.5};
}

/// Strictly positive definite (not normalized) matrix with smallest
/// eigenvalue bounded away from zero.
inline HermitianMatrix random_positive(Dims d, Rng &rng, double floor = 0.05) {
  const ComplexMatrix g = random_ginibre(d.order(), d.order(), rng);
  ComplexMatrix m = g * g.adjoint() / double(d.order());
  m += floor * ComplexMatrix::Identity(d.order(), d.order());
  return {d, std::move(m)};
}

/// Haar-random unitary from the QR factorization of a Ginibre matrix.
inline ComplexMatrix random_unitary(Index n, Rng &rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i)
    q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

inline double uniform01(Rng &rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace entconv
