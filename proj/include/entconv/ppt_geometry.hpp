#pragma once

// The PPT set P: membership, boundary detection, supporting functionals
// φ = 1 - Σ a_i (|φ_i><φ_i|)^Γ, samplers, and a dual-certificate fit for
// max_{σ∈P} Tr[Mσ].

#include <entconv/linalg.hpp>
#include <entconv/random.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace entconv {

enum class SetTag { Ppt, RainsT };

inline const char *to_string(SetTag s) { return s == SetTag::Ppt ? "PPT" : "RAINS_T"; }

struct PptCertificate {
  RealVector coeffs;     // a_i >= 0, after normalization
  ComplexMatrix vectors; // columns |φ_i>, zero eigenvectors of anchor^Γ
};

struct RainsCertificate {
  HermitianMatrix p1; // projector on positive eigenspace of anchor^Γ
  HermitianMatrix p2; // projector on negative eigenspace
  HermitianMatrix q;  // block on the nullspace, ||q||_∞ <= 1
};

struct SupportingFunctional {
  HermitianMatrix phi;
  HermitianMatrix anchor;
  SetTag set = SetTag::Ppt;
  std::optional<PptCertificate> ppt;
  std::optional<RainsCertificate> rains;
};

inline bool is_ppt(const HermitianMatrix &sigma, double tol = 1e-10) {
  return is_psd(partial_transpose(sigma), tol);
}

/// Zero threshold for σ^Γ: rel * max|eig(σ^Γ)|.
inline double pt_zero_threshold(const SpectralDecomposition &pt, double rel = kRankRelTol) {
  return rel * pt.max_abs();
}

/// True iff min eig(σ^Γ) lies in [-tol, tol]; negative tol means relative default.
inline bool is_boundary_of_P(const HermitianMatrix &sigma, double tol = -1.0) {
  const auto pt = spectral_decompose(partial_transpose(sigma));
  const double thr = tol < 0 ? pt_zero_threshold(pt) : tol;
  if (pt.eigenvalues(0) < -thr)
    throw Error(ErrorKind::NotPpt, "min eigenvalue of partial transpose is " +
                                       std::to_string(pt.eigenvalues(0)));
  return pt.eigenvalues(0) <= thr;
}

/// Zero eigenvectors (columns) of σ^Γ.
inline ComplexMatrix pt_kernel_basis(const HermitianMatrix &sigma, double rel = kRankRelTol) {
  const auto pt = spectral_decompose(partial_transpose(sigma));
  return kernel_basis(pt, pt_zero_threshold(pt, rel));
}

namespace detail {
/// Σ a_i |v_i><v_i|
inline HermitianMatrix weighted_projector(Dims d, const ComplexMatrix &vecs, const RealVector &a) {
  return {d, vecs * a.cast<Complex>().asDiagonal() * vecs.adjoint()};
}
} // namespace detail

/// φ = 1 - Σ a_i (|φ_i><φ_i|)^Γ, scaled so that Tr[(P_σ* - φ)^2] = 1.
/// An empty `coeffs` means a_i = 1 for every zero eigenvector.
inline SupportingFunctional ppt_functional(const HermitianMatrix &sigma_star,
                                           RealVector coeffs = {}) {
  if (!is_boundary_of_P(sigma_star))
    throw Error(ErrorKind::NotOnBoundary, "partial transpose has no zero eigenvalue");
  const ComplexMatrix vecs = pt_kernel_basis(sigma_star);
  if (coeffs.size() == 0)
    coeffs = RealVector::Ones(vecs.cols());
  if (coeffs.size() != vecs.cols())
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(vecs.cols()) + " coefficients, got " +
                    std::to_string(coeffs.size()));
  if ((coeffs.array() < 0.0).any())
    throw Error(ErrorKind::InvalidArgument, "coefficients must be nonnegative");
  if (coeffs.norm() == 0.0)
    throw Error(ErrorKind::InvalidArgument, "coefficient vector is zero");

  const Dims d = sigma_star.dims();
  const HermitianMatrix x = partial_transpose(detail::weighted_projector(d, vecs, coeffs));
  const HermitianMatrix p = support_projector(sigma_star);
  const HermitianMatrix off = HermitianMatrix::identity(d) - p;

  // ||-(1-P) + cX||^2 = 1  <=>  |X|^2 c^2 - 2 Tr[(1-P)X] c + (rank(1-P) - 1) = 0
  const double qa = trace_inner_product(x, x);
  const double qb = -2.0 * trace_inner_product(off, x);
  const double qc = off.trace() - 1.0;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0)
    throw Error(ErrorKind::Unattainable, "normalization Tr[(P-φ)^2]=1 has no real solution");
  const double c = (-qb + std::sqrt(disc)) / (2.0 * qa);
  if (!(c > 0.0))
    throw Error(ErrorKind::Unattainable, "normalization Tr[(P-φ)^2]=1 has no positive solution");

  SupportingFunctional out{HermitianMatrix::identity(d) - c * x, sigma_star, SetTag::Ppt,
                           PptCertificate{c * coeffs, vecs}, std::nullopt};
  return out;
}

/// Random pure product state |a><a| ⊗ |b><b|.
inline HermitianMatrix random_product_state(Dims d, Rng &rng) {
  return HermitianMatrix::outer(d, random_product_vector(d, rng));
}

/// Smallest t with (1-t)ρ + t·1/n PPT.
inline double ppt_mixing_threshold(const HermitianMatrix &rho) {
  const double lam = min_eigenvalue(partial_transpose(rho));
  if (lam >= 0.0)
    return 0.0;
  const double inv_n = 1.0 / double(rho.order());
  return -lam / (inv_n - lam);
}

/// PPT states from a mix of generators: depolarized random states (often
/// exactly at the PPT threshold), pure products, and separable mixtures.
inline HermitianMatrix random_ppt_state(Dims d, Rng &rng) {
  const double u = uniform01(rng);
  if (u < 0.2)
    return random_product_state(d, rng);
  if (u < 0.35) {
    const int k = 2 + int(uniform01(rng) * 3);
    HermitianMatrix s = HermitianMatrix::zero(d);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      const double w = uniform01(rng) + 1e-3;
      s += w * random_product_state(d, rng);
      total += w;
    }
    return s / total;
  }
  const Index rank = 1 + Index(uniform01(rng) * double(d.order()));
  const HermitianMatrix rho = random_state(d, rng, std::min(rank, d.order()));
  const double t0 = ppt_mixing_threshold(rho);
  const double t = uniform01(rng) < 0.4 ? t0 : t0 + (1.0 - t0) * uniform01(rng);
  HermitianMatrix s = lerp(rho, HermitianMatrix::identity(d) / double(d.order()), t);
  // Guard against roundoff at the threshold.
  if (!is_ppt(s, 0.0))
    s = lerp(rho, HermitianMatrix::identity(d) / double(d.order()),
             std::min(1.0, t + 1e-12));
  return s;
}

/// Pure product states on a Bloch-sphere grid (both factors qubits).
inline std::vector<HermitianMatrix> qubit_product_grid(int n_theta = 9, int n_phi = 12) {
  std::vector<ComplexVector> bloch;
  for (int i = 0; i < n_theta; ++i) {
    const double th = std::numbers::pi * i / (n_theta - 1);
    const int nphi = (i == 0 || i == n_theta - 1) ? 1 : n_phi;
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / nphi;
      ComplexVector v(2);
      v << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
      bloch.push_back(v);
    }
  }
  std::vector<HermitianMatrix> out;
  const Dims d{2, 2};
  for (const auto &a : bloch)
    for (const auto &b : bloch) {
      ComplexVector v(4);
      for (Index i = 0; i < 2; ++i)
        for (Index k = 0; k < 2; ++k)
          v(i * 2 + k) = a(i) * b(k);
      out.push_back(HermitianMatrix::outer(d, v));
    }
  return out;
}

/// Full-rank PPT state with min eig(σ^Γ) in [0, 1e-10], found by bisecting
/// the segment from a random PT-positive state to a random entangled pure state.
inline HermitianMatrix random_boundary_state(Dims d, std::uint64_t seed) {
  if (d.n1 < 2 || d.n2 < 2)
    throw Error(ErrorKind::InvalidArgument, "boundary states need both factors of dimension >= 2");
  Rng rng(seed);
  const HermitianMatrix mixed = HermitianMatrix::identity(d) / double(d.order());
  const HermitianMatrix r0 = random_state(d, rng);
  const double t0 = ppt_mixing_threshold(r0);
  const HermitianMatrix s0 = lerp(r0, mixed, t0 + (1.0 - t0) * (0.1 + 0.8 * uniform01(rng)));

  HermitianMatrix r1 = random_pure_state(d, rng);
  while (min_eigenvalue(partial_transpose(r1)) > -1e-6)
    r1 = random_pure_state(d, rng);

  auto pt_min = [&](double t) { return min_eigenvalue(partial_transpose(lerp(s0, r1, t))); };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pt_min(mid) >= 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-17)
      break;
  }
  const double m = pt_min(lo);
  if (!(m >= 0.0 && m <= 1e-10))
    throw Error(ErrorKind::Unattainable,
                "boundary bisection did not converge (min PT eigenvalue " + std::to_string(m) + ")");
  return lerp(s0, r1, lo);
}

/// T = {τ ⪰ 0 : ||τ^Γ||_1 <= 1}
inline bool is_in_T(const HermitianMatrix &tau, double tol = 1e-10) {
  return is_psd(tau, tol) && trace_norm(partial_transpose(tau)) <= 1.0 + tol;
}

/// Random element of T: PSD part of a random hermitian matrix, scaled so
/// that ||τ^Γ||_1 = u with u uniform in [0,1].
inline HermitianMatrix random_t_element(Dims d, Rng &rng) {
  HermitianMatrix g = psd_part(random_hermitian(d, rng));
  const double nrm = trace_norm(partial_transpose(g));
  if (nrm == 0.0)
    return g;
  return g * (uniform01(rng) / nrm);
}

/// Dual certificate for max_{σ∈P} Tr[Mσ] <= λ + λ_max(R):
/// M = λ1 - Z^Γ - W + R with Z = K C_Z K† ⪰ 0 on ker(σ^Γ), W = L C_W L† ⪰ 0 on ker σ.
struct PptDualCertificate {
  double lambda = 0.0;
  HermitianMatrix z;
  HermitianMatrix w;
  double residual = 0.0;    // ||R||_F
  double upper_bound = 0.0; // λ + λ_max(R)
};

namespace detail {
/// Real coordinates of the hermitian matrices K C K† with C hermitian k×k.
inline std::vector<HermitianMatrix> hermitian_span(Dims d, const ComplexMatrix &k) {
  std::vector<HermitianMatrix> out;
  const Index m = k.cols();
  for (Index i = 0; i < m; ++i)
    for (Index j = i; j < m; ++j) {
      ComplexMatrix c = ComplexMatrix::Zero(m, m);
      if (i == j) {
        c(i, i) = 1.0;
        out.emplace_back(d, k * c * k.adjoint());
      } else {
        c(i, j) = c(j, i) = 1.0;
        out.emplace_back(d, k * c * k.adjoint());
        c(i, j) = Complex(0, 1);
        c(j, i) = Complex(0, -1);
        out.emplace_back(d, k * c * k.adjoint());
      }
    }
  return out;
}

inline RealVector real_coords(const HermitianMatrix &a) {
  const Index n = a.order();
  RealVector v(2 * n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      v(2 * (i * n + j)) = a(i, j).real();
      v(2 * (i * n + j) + 1) = a(i, j).imag();
    }
  return v;
}
} // namespace detail

/// Least-squares fit of the dual certificate at a candidate maximizer σ, with
/// the kernels of σ^Γ and σ taken at relative threshold `rel`.
inline PptDualCertificate fit_ppt_dual(const HermitianMatrix &m, const HermitianMatrix &sigma,
                                       double rel = kRankRelTol) {
  m.check_same(sigma);
  const Dims d = m.dims();
  const ComplexMatrix kz = pt_kernel_basis(sigma, rel);
  const auto ss = spectral_decompose(sigma);
  const ComplexMatrix kw = kernel_basis(ss, ss.zero_threshold(rel));

  std::vector<HermitianMatrix> cols{HermitianMatrix::identity(d)};
  const auto zs = detail::hermitian_span(d, kz);
  const auto ws = detail::hermitian_span(d, kw);
  for (const auto &z : zs)
    cols.push_back(-partial_transpose(z));
  for (const auto &w : ws)
    cols.push_back(-w);

  RealMatrix a(2 * d.order() * d.order(), Index(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    a.col(Index(c)) = detail::real_coords(cols[c]);
  const RealVector x = a.completeOrthogonalDecomposition().solve(detail::real_coords(m));

  HermitianMatrix z = HermitianMatrix::zero(d), w = HermitianMatrix::zero(d);
  for (size_t i = 0; i < zs.size(); ++i)
    z += x(Index(1 + i)) * zs[i];
  for (size_t i = 0; i < ws.size(); ++i)
    w += x(Index(1 + zs.size() + i)) * ws[i];
  z = psd_part(z);
  w = psd_part(w);

  PptDualCertificate out;
  out.lambda = x(0);
  out.z = z;
  out.w = w;
  const HermitianMatrix r =
      m - (out.lambda * HermitianMatrix::identity(d) - partial_transpose(z) - w);
  out.residual = r.mat().norm();
  out.upper_bound = out.lambda + max_eigenvalue(r);
  return out;
}

} // namespace entconv
