#pragma once

// Converse problem for the relative entropy of entanglement over P: the family
// ρ(x) = (1-x)σ* + x L‡_{σ*}(φ) of states whose closest PPT state is σ*,
// verification of a candidate closest state, the closed-form value, and the
// weak-additivity conditions.

#include <entconv/divergences.hpp>
#include <entconv/forward_solver.hpp>
#include <entconv/frechet.hpp>
#include <entconv/ppt_geometry.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace entconv {

struct StateFamily {
  HermitianMatrix sigma_star;
  SupportingFunctional functional;
  HermitianMatrix direction; // L‡_{σ*}(φ)
  double x_max = 0.0;
  bool singular_cap_applied = false;
  bool direction_indefinite = false;

  /// ρ(x) = (1-x)σ* + x·direction
  [[nodiscard]] HermitianMatrix at(double x) const { return lerp(sigma_star, direction, x); }
};

namespace detail {
inline bool is_singular(const FrechetKernel &k) {
  for (bool in : k.mask)
    if (!in)
      return true;
  return false;
}

inline void require_anchor(const SupportingFunctional &f, const HermitianMatrix &sigma_star) {
  if (!(f.anchor.dims() == sigma_star.dims()) || frobenius_distance(f.anchor, sigma_star) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "functional is anchored at a different state");
  const double a = trace_inner_product(f.phi, sigma_star);
  if (std::abs(a - 1.0) > 1e-9)
    throw Error(ErrorKind::InvalidArgument,
                "Tr[φσ*] = " + std::to_string(a) + ", expected 1");
}
} // namespace detail

inline constexpr double kFamilyPsdTol = 1e-11;

inline StateFamily build_family(const HermitianMatrix &sigma_star, const SupportingFunctional &f) {
  if (f.set != SetTag::Ppt)
    throw Error(ErrorKind::InvalidArgument, "functional does not support P");
  require_state(sigma_star, "sigma_star");
  detail::require_anchor(f, sigma_star);

  const FrechetKernel k = log_kernel(sigma_star);
  const bool singular = detail::is_singular(k);
  if (singular) {
    const HermitianMatrix p = k.support();
    const HermitianMatrix pfp(p.dims(), p.mat() * f.phi.mat() * p.mat());
    if (frobenius_distance(pfp, f.phi) > 1e-9)
      throw Error(ErrorKind::NotInDomain, "singular anchor needs P φ P = φ");
  }

  StateFamily fam{sigma_star, f, frechet_pinv_apply(k, f.phi), 0.0, false, false};
  fam.direction_indefinite = min_eigenvalue(fam.direction) < -1e-10;

  auto psd_at = [&](double x) { return min_eigenvalue(fam.at(x)) >= -kFamilyPsdTol; };
  double hi = 1.0;
  while (psd_at(hi) && hi < 1e6)
    hi *= 2.0;
  if (psd_at(hi)) {
    fam.x_max = hi;
  } else {
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      (psd_at(mid) ? lo : hi) = mid;
    }
    fam.x_max = lo;
  }
  if (!(fam.x_max > 0.0))
    throw Error(ErrorKind::Unattainable, "ρ(x) is not PSD for any x > 0");
  if (singular && fam.x_max > 1.0) {
    fam.x_max = 1.0;
    fam.singular_cap_applied = true;
  }
  return fam;
}

/// E_P(ρ(x)) = -S(ρ(x)) - Tr[φ(x) σ* log σ*], φ(x) = (1-x)P_σ* + xφ.
inline double ree_closed_form(const StateFamily &fam, double x) {
  if (x < 0.0 || x > fam.x_max * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidArgument,
                "x = " + std::to_string(x) + " outside [0, " + std::to_string(fam.x_max) + "]");
  const auto sd = spectral_decompose(fam.sigma_star);
  const HermitianMatrix p = support_projector(sd);
  const HermitianMatrix slogs =
      sd.apply([](double s) { return s > 1e-300 ? s * std::log(s) : 0.0; });
  const HermitianMatrix phix = (1.0 - x) * p + x * fam.functional.phi;
  return -von_neumann_entropy(fam.at(x)) - trace_inner_product(phix, slogs);
}

enum class CpsStatus { Pass, SufficientPass, Fail };

inline const char *to_string(CpsStatus s) {
  switch (s) {
  case CpsStatus::Pass: return "PASS";
  case CpsStatus::SufficientPass: return "SUFFICIENT-PASS";
  case CpsStatus::Fail: return "FAIL";
  }
  return "?";
}

struct CpsOptions {
  int samples = 10000;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  bool use_solver = true;
  SolverConfig solver{};
};

struct CpsCertificate {
  CpsStatus status = CpsStatus::Fail;
  HermitianMatrix phi_hat; // L_{σ*}(ρ)
  double anchor_value = 0.0;
  double max_excess = 0.0; // max over battery of Tr[φ̂σ] - Tr[φ̂σ*]
  std::optional<HermitianMatrix> violator;
  PptDualCertificate dual;
  bool dual_certified = false;
  int checked = 0;
  bool sigma_star_singular = false;
};

/// Checks Tr[L_{σ*}(ρ) σ] <= Tr[L_{σ*}(ρ) σ*] over P with a dual-certificate
/// fit, random PPT states, product states and (optionally) a forward maximization.
inline CpsCertificate verify_cps(const HermitianMatrix &rho, const HermitianMatrix &sigma_star,
                                 const CpsOptions &opt = {}) {
  rho.check_same(sigma_star);
  require_state(rho, "rho");
  require_state(sigma_star, "sigma_star");
  if (!is_ppt(sigma_star, 1e-10))
    throw Error(ErrorKind::NotPpt, "candidate closest state is not PPT");
  const FrechetKernel k = log_kernel(sigma_star);
  if (weight_outside(k, rho) > kSupportTol)
    throw Error(ErrorKind::NotInDomain, "rho has weight outside the support of sigma_star");

  CpsCertificate c;
  c.sigma_star_singular = detail::is_singular(k);
  c.phi_hat = frechet_apply(k, rho);
  c.anchor_value = trace_inner_product(c.phi_hat, sigma_star);
  c.max_excess = -std::numeric_limits<double>::infinity();

  auto probe = [&](const HermitianMatrix &s) {
    const double e = trace_inner_product(c.phi_hat, s) - c.anchor_value;
    ++c.checked;
    if (e > c.max_excess) {
      c.max_excess = e;
      if (e > opt.tol)
        c.violator = s;
    }
  };

  c.dual = fit_ppt_dual(c.phi_hat, sigma_star);
  c.dual_certified = c.dual.upper_bound <= c.anchor_value + opt.tol;

  Rng rng(opt.seed);
  const Dims d = rho.dims();
  for (int i = 0; i < opt.samples; ++i)
    probe(random_ppt_state(d, rng));
  if (d.n1 == 2 && d.n2 == 2)
    for (const auto &s : qubit_product_grid())
      probe(s);
  else
    for (int i = 0; i < 500; ++i)
      probe(random_product_state(d, rng));
  if (opt.use_solver)
    probe(maximize_linear(c.phi_hat, SetTag::Ppt, opt.solver).sigma);

  if (c.max_excess > opt.tol)
    c.status = CpsStatus::Fail;
  else
    c.status = c.sigma_star_singular ? CpsStatus::SufficientPass : CpsStatus::Pass;
  return c;
}

struct AdditivityReport {
  double commutator = 0.0;       // ||[φ,σ*]||_F
  bool condition_ii_available = false;
  double pt_min = 0.0;           // min eig of (ρ σ*^{-1})^Γ
  double pt_max = 0.0;
  double literal_margin = 0.0;   // pt_min - 1
  double hermitian_defect = 0.0; // ||X - X†||_F for X = ρ σ*^{-1}
  bool rho_is_state = false;
  bool pass = false;
  std::string note;
};

/// Weak-additivity conditions for ρ = (1-x)σ* + x L‡(φ): [φ,σ*] = 0 and
/// ||(ρσ*^{-1})^Γ||_∞ <= 1. The literal lower bound (·)^Γ >= 1 is reported as
/// literal_margin; it cannot hold for a nonconstant φ of the PPT form.
inline AdditivityReport additivity_check(const HermitianMatrix &sigma_star,
                                         const SupportingFunctional &f, double x = 1.0,
                                         double tol = 1e-8) {
  detail::require_anchor(f, sigma_star);
  AdditivityReport r;
  r.commutator = commutator_norm(f.phi, sigma_star);
  const FrechetKernel k = log_kernel(sigma_star);
  if (detail::is_singular(k)) {
    r.note = "sigma_star is singular: condition (ii) needs its inverse";
    return r;
  }
  const HermitianMatrix rho = lerp(sigma_star, frechet_pinv_apply(k, f.phi), x);
  r.rho_is_state = is_state(rho, 1e-9);
  const ComplexMatrix inv = spectral_decompose(sigma_star).apply([](double s) { return 1.0 / s; }).mat();
  const ComplexMatrix xm = rho.mat() * inv;
  r.hermitian_defect = (xm - xm.adjoint()).norm();
  const HermitianMatrix xh(sigma_star.dims(), 0.5 * (xm + xm.adjoint()));
  const auto pt = spectral_decompose(partial_transpose(xh));
  r.condition_ii_available = true;
  r.pt_min = pt.eigenvalues(0);
  r.pt_max = pt.eigenvalues(pt.size() - 1);
  r.literal_margin = r.pt_min - 1.0;
  r.pass = r.commutator <= tol && r.hermitian_defect <= tol && r.pt_min >= -1.0 - tol &&
           r.pt_max <= 1.0 + tol && r.rho_is_state;
  if (!r.rho_is_state)
    r.note = "rho(x) is not a state at this x";
  return r;
}

/// Bell-diagonal state with weights p in the Bell basis, rotated by u ⊗ v.
inline HermitianMatrix bell_diagonal_state(const RealVector &p, const ComplexMatrix &u,
                                           const ComplexMatrix &v) {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
  bell(0, 0) = s, bell(3, 0) = s;  // Φ+
  bell(0, 1) = s, bell(3, 1) = -s; // Φ-
  bell(1, 2) = s, bell(2, 2) = s;  // Ψ+
  bell(1, 3) = s, bell(2, 3) = -s; // Ψ-
  ComplexMatrix uv(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index k = 0; k < 2; ++k)
        for (Index l = 0; l < 2; ++l)
          uv(i * 2 + k, j * 2 + l) = u(i, j) * v(k, l);
  const ComplexMatrix b = uv * bell;
  return {Dims{2, 2}, b * p.cast<Complex>().asDiagonal() * b.adjoint()};
}

struct AdditiveInstance {
  HermitianMatrix sigma_star;
  SupportingFunctional functional;
  AdditivityReport report;
  int tries = 0;
};

/// Seeded search over dims-(2,2) boundary anchors (generic ones from
/// random_boundary_state alternating with locally rotated Bell-diagonal ones)
/// for a pair passing additivity_check.
inline std::optional<AdditiveInstance> find_additive_instance(std::uint64_t seed,
                                                              int max_tries = 200) {
  Rng rng(seed);
  for (int t = 1; t <= max_tries; ++t) {
    HermitianMatrix s;
    if (t % 2 == 1) {
      s = random_boundary_state(Dims{2, 2}, rng());
    } else {
      RealVector p(4);
      RealVector rest(3);
      for (Index i = 0; i < 3; ++i)
        rest(i) = 0.05 + uniform01(rng);
      rest *= 0.5 / rest.sum();
      const Index top = Index(uniform01(rng) * 4) % 4;
      for (Index i = 0, j = 0; i < 4; ++i)
        p(i) = i == top ? 0.5 : rest(j++);
      s = bell_diagonal_state(p, random_unitary(2, rng), random_unitary(2, rng));
    }
    if (!is_boundary_of_P(s))
      continue;
    const auto f = ppt_functional(s);
    const auto rep = additivity_check(s, f);
    if (rep.pass)
      return AdditiveInstance{s, f, rep, t};
  }
  return std::nullopt;
}

} // namespace entconv
