#pragma once

// Entropies and divergences. Natural log throughout.

#include <entconv/frechet.hpp>
#include <entconv/linalg.hpp>

#include <cmath>
#include <limits>
#include <optional>

namespace entconv {

/// Extended-real divergence value: finite, or +inf.
class DivergenceValue {
public:
  static DivergenceValue finite(double v) { return DivergenceValue(v); }
  static DivergenceValue infinite() { return DivergenceValue(); }

  [[nodiscard]] bool is_infinite() const { return !value_; }
  [[nodiscard]] bool is_finite() const { return value_.has_value(); }
  /// Throws InfiniteDivergence when called on +inf.
  [[nodiscard]] double value() const {
    if (!value_)
      throw Error(ErrorKind::InfiniteDivergence, "divergence is +inf");
    return *value_;
  }
  [[nodiscard]] double value_or_inf() const {
    return value_ ? *value_ : std::numeric_limits<double>::infinity();
  }

private:
  DivergenceValue() = default;
  explicit DivergenceValue(double v) : value_(v) {}
  std::optional<double> value_;
};

/// Support comparison threshold for the extended-value relative entropy.
inline constexpr double kSupportTol = 1e-11;

namespace detail {
inline double sum_p_log_p(const RealVector &p) {
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0)
      s += p(i) * std::log(p(i));
  return s;
}

inline void require_psd(const HermitianMatrix &a, const char *what) {
  if (!is_psd(a, 1e-10))
    throw Error(ErrorKind::NotPositive, std::string(what) + " must be PSD");
}

/// Throws NotPositive unless the smallest eigenvalue is strictly positive.
inline SpectralDecomposition require_positive(const HermitianMatrix &a, const char *what) {
  auto sd = spectral_decompose(a);
  if (!(sd.eigenvalues(0) > 1e-14 * std::max(1.0, sd.max_abs())))
    throw Error(ErrorKind::NotPositive, std::string(what) + " must be strictly positive");
  return sd;
}
} // namespace detail

/// S(rho) = -Tr rho log rho
inline double von_neumann_entropy(const HermitianMatrix &rho) {
  require_state(rho, "rho");
  return -detail::sum_p_log_p(spectral_decompose(rho).eigenvalues);
}

/// S(rho||sigma) on the support of sigma; +inf if rho leaks outside it.
inline DivergenceValue relative_entropy(const HermitianMatrix &rho, const HermitianMatrix &sigma) {
  rho.check_same(sigma);
  detail::require_psd(rho, "rho");
  detail::require_psd(sigma, "sigma");
  const auto ss = spectral_decompose(sigma);
  const auto sr = spectral_decompose(rho);

  double cross = 0.0; // Tr rho log sigma
  for (Index i = 0; i < ss.size(); ++i) {
    const ComplexVector v = ss.vector(i);
    const double w = (v.adjoint() * rho.mat() * v)(0).real();
    if (ss.eigenvalues(i) < kSupportTol) {
      if (w > kSupportTol)
        return DivergenceValue::infinite();
      continue;
    }
    cross += w * std::log(ss.eigenvalues(i));
  }
  return DivergenceValue::finite(detail::sum_p_log_p(sr.eigenvalues) - cross);
}

/// log ||sigma^Γ||_1
inline double log_negativity(const HermitianMatrix &sigma) {
  detail::require_psd(sigma, "sigma");
  return std::log(trace_norm(partial_transpose(sigma)));
}

/// Σ_i p_i <ψ_i| f(σ/p_i) |ψ_i> with ρ = Σ p_i |ψ_i><ψ_i|.
inline double quasi_f_relative_entropy(const ScalarFunction &f, const HermitianMatrix &rho,
                                       const HermitianMatrix &sigma) {
  rho.check_same(sigma);
  const auto sr = detail::require_positive(rho, "rho");
  const auto ss = detail::require_positive(sigma, "sigma");
  double total = 0.0;
  for (Index i = 0; i < sr.size(); ++i) {
    const double p = sr.eigenvalues(i);
    const ComplexVector psi = sr.vector(i);
    const HermitianMatrix fs = ss.apply([&](double s) { return f.eval(s / p); });
    total += p * (psi.adjoint() * fs.mat() * psi)(0).real();
  }
  return total;
}

inline void require_alpha(double alpha, double lo, bool lo_closed, const char *what) {
  const bool ok = (lo_closed ? alpha >= lo : alpha > lo) && alpha < 1.0;
  if (!ok)
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + ": alpha " + std::to_string(alpha) + " out of range");
}

/// Tr[ρ^α σ^{1-α}]
inline double renyi_trace(double alpha, const HermitianMatrix &rho, const HermitianMatrix &sigma) {
  const auto sr = detail::require_positive(rho, "rho");
  const auto ss = detail::require_positive(sigma, "sigma");
  const HermitianMatrix ra = sr.apply([&](double x) { return std::pow(x, alpha); });
  const HermitianMatrix sb = ss.apply([&](double x) { return std::pow(x, 1.0 - alpha); });
  return trace_inner_product(ra, sb);
}

/// (α-1)^{-1} log Tr[ρ^α σ^{1-α}], α in (0,1)
inline double renyi_relative_entropy(double alpha, const HermitianMatrix &rho,
                                     const HermitianMatrix &sigma) {
  require_alpha(alpha, 0.0, false, "renyi");
  rho.check_same(sigma);
  return std::log(renyi_trace(alpha, rho, sigma)) / (alpha - 1.0);
}

/// Tr[(σ^β ρ σ^β)^α], β = (1-α)/(2α)
inline double sandwiched_trace(double alpha, const HermitianMatrix &rho,
                               const HermitianMatrix &sigma) {
  detail::require_positive(rho, "rho");
  const auto ss = detail::require_positive(sigma, "sigma");
  const double beta = (1.0 - alpha) / (2.0 * alpha);
  const HermitianMatrix sb = ss.apply([&](double x) { return std::pow(x, beta); });
  const HermitianMatrix q(rho.dims(), sb.mat() * rho.mat() * sb.mat());
  const auto sq = spectral_decompose(q);
  double t = 0.0;
  for (Index i = 0; i < sq.size(); ++i)
    t += std::pow(std::max(sq.eigenvalues(i), 0.0), alpha);
  return t;
}

/// (α-1)^{-1} log Tr[(σ^β ρ σ^β)^α], α in [1/2,1)
inline double sandwiched_renyi(double alpha, const HermitianMatrix &rho,
                               const HermitianMatrix &sigma) {
  require_alpha(alpha, 0.5, true, "sandwiched");
  rho.check_same(sigma);
  return std::log(sandwiched_trace(alpha, rho, sigma)) / (alpha - 1.0);
}

} // namespace entconv
