#pragma once

// Converse for a general objective -Tr[ρ g(σ)] and supporting-functional
// builders for the quasi f-relative entropies, α-Rényi and sandwiched Rényi
// divergences. Every builder returns φ with f'(σ*; τ) = -Tr[φτ] for the
// trace functional it is derived from.

#include <entconv/divergences.hpp>
#include <entconv/frechet.hpp>

#include <optional>
#include <string>

namespace entconv {

struct ConverseResult {
  std::optional<HermitianMatrix> rho;
  std::string refusal;
  double min_eigenvalue = 0.0;

  [[nodiscard]] bool accepted() const { return rho.has_value(); }
};

/// ρ = D‡_{g,σ*}(φ), accepted iff ρ ⪰ -1e-10.
inline ConverseResult general_converse(const ScalarFunction &g, const HermitianMatrix &sigma_star,
                                       const HermitianMatrix &phi) {
  sigma_star.check_same(phi);
  const FrechetKernel k = build_kernel(g, sigma_star);
  if (!k.invertible())
    throw Error(ErrorKind::NonInvertibleKernel, "g' vanishes on the support of sigma_star");
  const HermitianMatrix p = k.support();
  const HermitianMatrix pfp(phi.dims(), p.mat() * phi.mat() * p.mat());
  if (frobenius_distance(pfp, phi) > 1e-9)
    throw Error(ErrorKind::NotInDomain, "phi is nonzero outside the support of the kernel");
  ConverseResult r;
  const HermitianMatrix rho = frechet_pinv_apply(k, phi);
  r.min_eigenvalue = min_eigenvalue(rho);
  if (r.min_eigenvalue < -1e-10)
    r.refusal = "D‡(φ) is not PSD";
  else
    r.rho = rho;
  return r;
}

/// φ = -Σ_i D_{f, σ*/p_i}(|ψ_i><ψ_i|)
inline HermitianMatrix quasi_functional(const ScalarFunction &f, const HermitianMatrix &rho,
                                        const HermitianMatrix &sigma_star) {
  rho.check_same(sigma_star);
  const auto sr = detail::require_positive(rho, "rho");
  const auto ss = detail::require_positive(sigma_star, "sigma_star");
  HermitianMatrix phi = HermitianMatrix::zero(rho.dims());
  for (Index i = 0; i < sr.size(); ++i) {
    const double p = sr.eigenvalues(i);
    SpectralDecomposition scaled = ss;
    scaled.eigenvalues /= p;
    const FrechetKernel k = build_kernel(f, scaled);
    phi -= frechet_apply(k, HermitianMatrix::outer(rho.dims(), sr.vector(i)));
  }
  return phi;
}

/// φ = -D_{x^{1-α}, σ*}(ρ^α)
inline HermitianMatrix renyi_functional(double alpha, const HermitianMatrix &rho,
                                        const HermitianMatrix &sigma_star) {
  require_alpha(alpha, 0.0, false, "renyi_functional");
  rho.check_same(sigma_star);
  const auto sr = detail::require_positive(rho, "rho");
  const auto ss = detail::require_positive(sigma_star, "sigma_star");
  const HermitianMatrix ra = sr.apply([&](double x) { return std::pow(x, alpha); });
  return -frechet_apply(build_kernel(ScalarFunction::power(1.0 - alpha), ss), ra);
}

/// ρ = (-D‡_{x^{1-α}, σ*}(φ))^{1/α}; inverse of renyi_functional.
inline HermitianMatrix renyi_converse(double alpha, const HermitianMatrix &phi,
                                      const HermitianMatrix &sigma_star) {
  require_alpha(alpha, 0.0, false, "renyi_converse");
  const auto ss = detail::require_positive(sigma_star, "sigma_star");
  const HermitianMatrix ra =
      -frechet_pinv_apply(build_kernel(ScalarFunction::power(1.0 - alpha), ss), phi);
  const auto sd = spectral_decompose(ra);
  if (sd.eigenvalues(0) < -1e-10)
    throw Error(ErrorKind::NotPositive, "-D‡(φ) is not PSD");
  return sd.apply([&](double x) { return std::pow(std::max(x, 0.0), 1.0 / alpha); });
}

/// φ = -D_{x^β, σ*}({σ*^{-β}, (σ*^β ρ σ*^β)^α}), β = (1-α)/(2α)
inline HermitianMatrix sandwiched_functional(double alpha, const HermitianMatrix &rho,
                                             const HermitianMatrix &sigma_star) {
  require_alpha(alpha, 0.5, true, "sandwiched_functional");
  rho.check_same(sigma_star);
  detail::require_positive(rho, "rho");
  const auto ss = detail::require_positive(sigma_star, "sigma_star");
  const double beta = (1.0 - alpha) / (2.0 * alpha);
  const ComplexMatrix sb = ss.apply([&](double x) { return std::pow(x, beta); }).mat();
  const ComplexMatrix sbi = ss.apply([&](double x) { return std::pow(x, -beta); }).mat();
  const HermitianMatrix q(rho.dims(), sb * rho.mat() * sb);
  const ComplexMatrix qa =
      spectral_decompose(q).apply([&](double x) { return std::pow(std::max(x, 0.0), alpha); }).mat();
  const HermitianMatrix anti(rho.dims(), sbi * qa + qa * sbi);
  return -frechet_apply(build_kernel(ScalarFunction::power(beta), ss), anti);
}

} // namespace entconv
