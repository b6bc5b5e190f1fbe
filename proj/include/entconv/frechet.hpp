#pragma once

// Divided-difference kernels and the Fréchet derivative D_{g,A}(B) = T_{g,A} ∘ B
// (Hadamard product in the eigenbasis of A), its masked extension to anchors
// with eigenvalues outside the domain of g, and the Moore-Penrose inverse.

#include <entconv/linalg.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace entconv {

enum class FunctionTag { Log, Power, NegLog, Identity, Custom };

struct ScalarFunction {
  FunctionTag tag = FunctionTag::Custom;
  std::string label;
  double alpha = 0.0; // exponent for Power
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  // (g(a)-g(b))/(a-b) for a != b; optional, for closed forms that avoid the
  // cancellation of the plain quotient.
  std::function<double(double, double)> quotient;

  [[nodiscard]] bool in_domain(double x, double margin = 1e-12) const {
    return x > lower + margin && x < upper - margin;
  }

  [[nodiscard]] double divided_difference(double a, double b) const {
    if (quotient)
      return quotient(a, b);
    return (eval(a) - eval(b)) / (a - b);
  }

  static ScalarFunction log() {
    ScalarFunction g;
    g.tag = FunctionTag::Log;
    g.label = "log";
    g.lower = 0.0;
    g.eval = [](double x) { return std::log(x); };
    g.deriv = [](double x) { return 1.0 / x; };
    g.quotient = [](double a, double b) { return std::log1p((a - b) / b) / (a - b); };
    return g;
  }

  static ScalarFunction neg_log() {
    ScalarFunction g;
    g.tag = FunctionTag::NegLog;
    g.label = "neg_log";
    g.lower = 0.0;
    g.eval = [](double x) { return -std::log(x); };
    g.deriv = [](double x) { return -1.0 / x; };
    g.quotient = [](double a, double b) { return -std::log1p((a - b) / b) / (a - b); };
    return g;
  }

  /// x^alpha on (0, inf).
  static ScalarFunction power(double alpha) {
    ScalarFunction g;
    g.tag = FunctionTag::Power;
    g.label = "power(" + std::to_string(alpha) + ")";
    g.alpha = alpha;
    g.lower = 0.0;
    g.eval = [alpha](double x) { return std::pow(x, alpha); };
    g.deriv = [alpha](double x) { return alpha * std::pow(x, alpha - 1.0); };
    g.quotient = [alpha](double a, double b) {
      const double d = (a - b) / b;
      return std::pow(b, alpha - 1.0) * std::expm1(alpha * std::log1p(d)) / d;
    };
    return g;
  }

  static ScalarFunction identity() {
    ScalarFunction g;
    g.tag = FunctionTag::Identity;
    g.label = "identity";
    g.eval = [](double x) { return x; };
    g.deriv = [](double) { return 1.0; };
    g.quotient = [](double, double) { return 1.0; };
    return g;
  }

  static ScalarFunction custom(std::string label, double lower, double upper,
                               std::function<double(double)> eval,
                               std::function<double(double)> deriv) {
    ScalarFunction g;
    g.label = std::move(label);
    g.lower = lower;
    g.upper = upper;
    g.eval = std::move(eval);
    g.deriv = std::move(deriv);
    return g;
  }
};

struct KernelOptions {
  /// |a_i - a_j| below cluster_rel * max|a| takes the derivative branch.
  double cluster_rel = 1e-9;
  /// Strict-interior margin for domain membership.
  double domain_margin = 1e-12;
};

struct FrechetKernel {
  SpectralDecomposition basis;
  RealMatrix t_matrix;
  std::optional<RealMatrix> s_matrix;
  std::vector<bool> mask;

  [[nodiscard]] const Dims &dims() const { return basis.dims; }
  [[nodiscard]] Index order() const { return basis.size(); }
  [[nodiscard]] bool invertible() const { return s_matrix.has_value(); }

  /// Projector onto the masked-in eigenspaces (P_A).
  [[nodiscard]] HermitianMatrix support() const {
    RealVector d(order());
    for (Index k = 0; k < order(); ++k)
      d(k) = mask[static_cast<size_t>(k)] ? 1.0 : 0.0;
    return {dims(), basis.eigenvectors * d.cast<Complex>().asDiagonal() *
                        basis.eigenvectors.adjoint()};
  }
};

inline FrechetKernel build_kernel(const ScalarFunction &g, const SpectralDecomposition &sd,
                                  const KernelOptions &opt = {}) {
  const Index n = sd.size();
  FrechetKernel k{sd, RealMatrix::Zero(n, n), std::nullopt, std::vector<bool>(size_t(n))};
  const auto &a = sd.eigenvalues;
  for (Index i = 0; i < n; ++i)
    k.mask[size_t(i)] = g.in_domain(a(i), opt.domain_margin);

  const double gap = opt.cluster_rel * sd.max_abs();
  bool invertible = true;
  for (Index i = 0; i < n; ++i) {
    if (!k.mask[size_t(i)])
      continue;
    for (Index j = i; j < n; ++j) {
      if (!k.mask[size_t(j)])
        continue;
      double v;
      if (i == j)
        v = g.deriv(a(i));
      else if (std::abs(a(i) - a(j)) < gap)
        v = g.deriv(0.5 * (a(i) + a(j)));
      else
        v = g.divided_difference(a(i), a(j));
      k.t_matrix(i, j) = k.t_matrix(j, i) = v;
      if (v == 0.0 || !std::isfinite(v))
        invertible = false;
    }
  }
  if (invertible) {
    RealMatrix s = RealMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (k.mask[size_t(i)] && k.mask[size_t(j)])
          s(i, j) = 1.0 / k.t_matrix(i, j);
    k.s_matrix = std::move(s);
  }
  return k;
}

inline FrechetKernel build_kernel(const ScalarFunction &g, const HermitianMatrix &a,
                                  const KernelOptions &opt = {}) {
  return build_kernel(g, spectral_decompose(a), opt);
}

namespace detail {
inline HermitianMatrix hadamard_in_basis(const FrechetKernel &k, const RealMatrix &w,
                                         const HermitianMatrix &b) {
  if (b.order() != k.order())
    throw Error(ErrorKind::DimensionMismatch, "kernel and argument orders differ");
  const ComplexMatrix &v = k.basis.eigenvectors;
  ComplexMatrix inner = (v.adjoint() * b.mat() * v).cwiseProduct(w.cast<Complex>());
  // Large weights amplify rounding asymmetry of V†BV.
  inner = 0.5 * (inner + inner.adjoint()).eval();
  return {b.dims(), v * inner * v.adjoint()};
}
} // namespace detail

/// D_{g,A}(B)
inline HermitianMatrix frechet_apply(const FrechetKernel &k, const HermitianMatrix &b) {
  return detail::hadamard_in_basis(k, k.t_matrix, b);
}

/// D‡_{g,A}(B); D(D‡(B)) = D‡(D(B)) = P_A B P_A.
inline HermitianMatrix frechet_pinv_apply(const FrechetKernel &k, const HermitianMatrix &b) {
  if (!k.s_matrix)
    throw Error(ErrorKind::NonInvertibleKernel,
                "g' or a divided difference vanishes on the masked-in spectrum");
  return detail::hadamard_in_basis(k, *k.s_matrix, b);
}

/// V g(Λ) V†, spectrally. With `restrict_to_support`, eigenvalues outside the
/// domain contribute zero instead of raising.
inline HermitianMatrix matrix_function(const ScalarFunction &g, const SpectralDecomposition &sd,
                                       bool restrict_to_support = false,
                                       double margin = 1e-12) {
  for (Index i = 0; i < sd.size(); ++i)
    if (!g.in_domain(sd.eigenvalues(i), margin) && !restrict_to_support)
      throw Error(ErrorKind::DomainViolation,
                  "eigenvalue " + std::to_string(sd.eigenvalues(i)) + " outside domain of " +
                      g.label);
  return sd.apply([&](double x) { return g.in_domain(x, margin) ? g.eval(x) : 0.0; });
}

inline HermitianMatrix matrix_function(const ScalarFunction &g, const HermitianMatrix &a,
                                       bool restrict_to_support = false) {
  return matrix_function(g, spectral_decompose(a), restrict_to_support);
}

/// Weight of `rho` outside the masked-in support of a kernel, Tr[(1-P) rho].
inline double weight_outside(const FrechetKernel &k, const HermitianMatrix &rho) {
  return rho.trace() - trace_inner_product(k.support(), rho);
}

/// f_rho'(sigma; tau) = -Tr[rho D_{g,sigma}(tau)] for f_rho(sigma) = -Tr[rho g(sigma)].
inline double directional_derivative(const ScalarFunction &g, const HermitianMatrix &rho,
                                     const HermitianMatrix &sigma, const HermitianMatrix &tau) {
  rho.check_same(sigma);
  rho.check_same(tau);
  const FrechetKernel k = build_kernel(g, sigma);
  if (weight_outside(k, rho) > 1e-11)
    throw Error(ErrorKind::InfiniteDivergence,
                "rho is nonzero outside the domain support of sigma");
  return -trace_inner_product(rho, frechet_apply(k, tau));
}

/// L_A = D_{log,A}
inline FrechetKernel log_kernel(const HermitianMatrix &a, const KernelOptions &opt = {}) {
  return build_kernel(ScalarFunction::log(), a, opt);
}

} // namespace entconv
