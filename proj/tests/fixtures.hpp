#pragma once

// Shared test fixtures: frozen values from tests/oracles/ppt_oracles.py and
// small independent oracles (Kronecker-expansion partial transpose, Schur-Parlett
// matrix log) that do not route through the library's spectral code.

#include <entconv/entconv.hpp>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <gtest/gtest.h>

#include <cmath>

namespace fixtures {

using namespace entconv;

// Oracle brackets [lower, upper] in nats. Lower ends come from Frank-Wolfe or
// projected-gradient duality gaps, so they may sit a few 1e-10 above the true
// value when the conic solver stops; compare with kOracleSlack.
inline constexpr double kOracleSlack = 1e-7;

inline constexpr double kHpptBell = 0.5000000000394211;
inline constexpr double kEpBellLo = 0.6931471809888866, kEpBellHi = 0.6931471880999928;
inline constexpr double kRBellLo = 0.6931471781266622, kRBellHi = 0.693147186472719;

inline constexpr double kEpALo = 0.07406609868358272, kEpAHi = 0.07406649031085455;
inline constexpr double kRALo = 0.07406647099074148, kRAHi = 0.07406648347808309;
inline constexpr double kEpBLo = 0.19479138671622542, kEpBHi = 0.19479355605178283;
inline constexpr double kRBLo = 0.19479163263870758, kRBHi = 0.19479355548249888;

// Hand-evaluated scalars.
inline const double kLogKernelOffDiag = 1.0 / (std::exp(1.0) - 1.0); // 0.5819767068693265
inline constexpr double kEntropyQuarter = 0.5623351446188083;        // S(diag(1/4, 3/4))

inline HermitianMatrix bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return HermitianMatrix::outer(Dims{2, 2}, v);
}

/// 0.6|ψ><ψ| + 0.4 diag(0.1,0.2,0.3,0.4), ψ = 0.8|00> + 0.6i|11>
inline HermitianMatrix state_a() {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = 0.8;
  psi(3) = Complex(0.0, 0.6);
  RealVector d(4);
  d << 0.1, 0.2, 0.3, 0.4;
  return 0.6 * HermitianMatrix::outer(Dims{2, 2}, psi) +
         0.4 * HermitianMatrix::diagonal(Dims{2, 2}, d);
}

/// 0.7|ψ><ψ| + 0.3·1/6, ψ = (|00> + |11> + |12>)/√3 in 2x3
inline HermitianMatrix state_b() {
  ComplexVector psi = ComplexVector::Zero(6);
  psi(0) = psi(4) = psi(5) = 1.0 / std::sqrt(3.0);
  return 0.7 * HermitianMatrix::outer(Dims{2, 3}, psi) +
         0.3 * HermitianMatrix::identity(Dims{2, 3}) / 6.0;
}

inline HermitianMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianMatrix(m);
}
inline HermitianMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianMatrix(m);
}

/// Γ by linearity over the operator basis E_ij ⊗ E_kl -> E_ij ⊗ E_lk.
inline ComplexMatrix oracle_partial_transpose(const ComplexMatrix &a, Index n1, Index n2) {
  ComplexMatrix out = ComplexMatrix::Zero(n1 * n2, n1 * n2);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n1; ++j)
      for (Index k = 0; k < n2; ++k)
        for (Index l = 0; l < n2; ++l) {
          ComplexMatrix e1 = ComplexMatrix::Zero(n1, n1), e2 = ComplexMatrix::Zero(n2, n2);
          e1(i, j) = 1.0;
          e2(l, k) = 1.0;
          out += a(i * n2 + k, j * n2 + l) * Eigen::kroneckerProduct(e1, e2).eval();
        }
  return out;
}

/// Schur-Parlett matrix log (Eigen unsupported), independent of spectral_decompose.
inline ComplexMatrix oracle_logm(const ComplexMatrix &a) { return a.log(); }

inline double fro(const ComplexMatrix &a) { return a.norm(); }

inline ::testing::AssertionResult matrices_near(const HermitianMatrix &a, const HermitianMatrix &b,
                                                double tol) {
  const double d = (a.mat() - b.mat()).norm();
  if (d <= tol)
    return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "Frobenius distance " << d << " > " << tol;
}

inline HermitianMatrix random_non_ppt_state(Dims d, Rng &rng) {
  while (true) {
    HermitianMatrix s = random_state(d, rng);
    if (!is_ppt(s, 0.0))
      return s;
  }
}

} // namespace fixtures
