#pragma once

// The Rains set T = {τ ⪰ 0 : ||τ^Γ||_1 <= 1}: supporting functionals of the
// trace-norm ball and of T, the converse ρ = L‡_{τ*}(φ), the closed-form Rains
// bound, and comparisons against E_P and the logarithmic negativity.

#include <entconv/divergences.hpp>
#include <entconv/forward_solver.hpp>
#include <entconv/frechet.hpp>
#include <entconv/ppt_geometry.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace entconv {

namespace detail {
struct SignSplit {
  HermitianMatrix pos, neg, null;
};

inline SignSplit sign_split(const HermitianMatrix &a, double rel = kRankRelTol) {
  const auto sd = spectral_decompose(a);
  const double thr = sd.zero_threshold(rel);
  return {sd.apply([thr](double x) { return x > thr ? 1.0 : 0.0; }),
          sd.apply([thr](double x) { return x < -thr ? 1.0 : 0.0; }),
          sd.apply([thr](double x) { return std::abs(x) <= thr ? 1.0 : 0.0; })};
}

inline HermitianMatrix sandwich(const HermitianMatrix &p, const HermitianMatrix &a) {
  return {a.dims(), p.mat() * a.mat() * p.mat()};
}

inline void require_nullspace_block(const HermitianMatrix &q, const HermitianMatrix &null) {
  if (frobenius_distance(sandwich(null, q), q) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "Q must be supported on the nullspace");
  if (operator_norm(q) > 1.0 + 1e-10)
    throw Error(ErrorKind::InvalidArgument, "Q must satisfy ||Q||_∞ <= 1");
}
} // namespace detail

/// ω = P_+ - P_- + Q for an anchor α with ||α||_1 = 1; Q lives on ker α.
inline HermitianMatrix ball_functional(const HermitianMatrix &alpha,
                                       std::optional<HermitianMatrix> q = std::nullopt) {
  const double nrm = trace_norm(alpha);
  if (std::abs(nrm - 1.0) > 1e-9)
    throw Error(ErrorKind::NotOnBoundary,
                "anchor trace norm is " + std::to_string(nrm) + ", expected 1");
  const auto s = detail::sign_split(alpha);
  HermitianMatrix w = s.pos - s.neg;
  if (q) {
    alpha.check_same(*q);
    detail::require_nullspace_block(*q, s.null);
    w += *q;
  }
  return w;
}

/// φ = (P1 - P2 + Q)^Γ from the spectral split of τ*^Γ; default Q = 0.
inline SupportingFunctional rains_functional(const HermitianMatrix &tau_star,
                                             std::optional<HermitianMatrix> q = std::nullopt) {
  if (!is_psd(tau_star, 1e-10))
    throw Error(ErrorKind::NotPositive, "tau_star must be PSD");
  const HermitianMatrix tg = partial_transpose(tau_star);
  const double nrm = trace_norm(tg);
  if (std::abs(nrm - 1.0) > 1e-9)
    throw Error(ErrorKind::NotOnBoundary,
                "||tau_star^Γ||_1 = " + std::to_string(nrm) + ", expected 1");
  const auto s = detail::sign_split(tg);
  HermitianMatrix qm = q ? *q : HermitianMatrix::zero(tau_star.dims());
  tau_star.check_same(qm);
  detail::require_nullspace_block(qm, s.null);
  return {partial_transpose(s.pos - s.neg + qm), tau_star, SetTag::RainsT, std::nullopt,
          RainsCertificate{s.pos, s.neg, qm}};
}

enum class RainsRefusal { None, NotOnSphere, SupportMismatch, DirectionNotPsd };

inline const char *to_string(RainsRefusal r) {
  switch (r) {
  case RainsRefusal::None: return "none";
  case RainsRefusal::NotOnSphere: return "||tau_star^Γ||_1 != 1";
  case RainsRefusal::SupportMismatch: return "functional not supported on tau_star";
  case RainsRefusal::DirectionNotPsd: return "L‡(φ) not PSD: no state is minimized here";
  }
  return "?";
}

struct RainsConverseResult {
  std::optional<HermitianMatrix> rho;
  RainsRefusal refusal = RainsRefusal::None;
  double min_eigenvalue = 0.0; // of L‡(φ)
  double trace = 0.0;

  [[nodiscard]] bool accepted() const { return rho.has_value(); }
};

inline RainsConverseResult rains_converse(const HermitianMatrix &tau_star,
                                          const SupportingFunctional &f) {
  tau_star.check_same(f.phi);
  RainsConverseResult r;
  if (std::abs(trace_norm(partial_transpose(tau_star)) - 1.0) > 1e-9) {
    r.refusal = RainsRefusal::NotOnSphere;
    return r;
  }
  const FrechetKernel k = log_kernel(tau_star);
  const HermitianMatrix p = k.support();
  if (frobenius_distance(detail::sandwich(p, f.phi), f.phi) > 1e-9) {
    r.refusal = RainsRefusal::SupportMismatch;
    return r;
  }
  const HermitianMatrix rho = frechet_pinv_apply(k, f.phi);
  r.min_eigenvalue = min_eigenvalue(rho);
  r.trace = rho.trace();
  if (r.min_eigenvalue < -1e-10) {
    r.refusal = RainsRefusal::DirectionNotPsd;
    return r;
  }
  r.rho = rho;
  return r;
}

struct RainsMinOptions {
  int samples = 10000;
  std::uint64_t seed = 0;
  double norm_tol = 1e-8;
  double form_tol = 1e-7;
  double battery_tol = 1e-8;
};

struct RainsMinReport {
  bool pass = false;
  bool trivial_ppt = false;
  double norm_gap = 0.0;   // | ||τ*^Γ||_1 - 1 |
  double form_error = 0.0; // block deviation of φ̂^Γ from P1 - P2 + Q
  double q_norm = 0.0;
  double max_excess = 0.0; // max over battery of Tr[φ̂τ] - 1
  int checked = 0;
  HermitianMatrix phi_hat;
  std::string reason;
};

/// Checks that τ* minimizes S(ρ||·) over T.
inline RainsMinReport verify_rains_min(const HermitianMatrix &rho, const HermitianMatrix &tau_star,
                                       const RainsMinOptions &opt = {}) {
  rho.check_same(tau_star);
  require_state(rho, "rho");
  if (!is_psd(tau_star, 1e-10))
    throw Error(ErrorKind::NotPositive, "tau_star must be PSD");
  const FrechetKernel k = log_kernel(tau_star);
  if (weight_outside(k, rho) > kSupportTol)
    throw Error(ErrorKind::NotInDomain, "rho has weight outside the support of tau_star");

  RainsMinReport r;
  r.phi_hat = frechet_apply(k, rho);
  const HermitianMatrix tg = partial_transpose(tau_star);
  r.norm_gap = std::abs(trace_norm(tg) - 1.0);

  if (is_ppt(rho, 1e-10)) {
    r.trivial_ppt = true;
    r.pass = frobenius_distance(rho, tau_star) <= opt.form_tol;
    if (!r.pass)
      r.reason = "rho is PPT, so its only minimizer is tau_star = rho";
    return r;
  }

  const auto s = detail::sign_split(tg);
  const HermitianMatrix fg = partial_transpose(r.phi_hat);
  auto block = [&](const HermitianMatrix &a, const HermitianMatrix &b) {
    return (a.mat() * fg.mat() * b.mat()).norm();
  };
  const HermitianMatrix q = detail::sandwich(s.null, fg);
  r.form_error = std::max({frobenius_distance(detail::sandwich(s.pos, fg), s.pos),
                           frobenius_distance(detail::sandwich(s.neg, fg), -s.neg),
                           block(s.pos, s.neg), block(s.pos, s.null), block(s.neg, s.null)});
  r.q_norm = operator_norm(q);

  Rng rng(opt.seed);
  r.max_excess = -std::numeric_limits<double>::infinity();
  const double anchor = trace_inner_product(r.phi_hat, tau_star);
  for (int i = 0; i < opt.samples; ++i) {
    const double e = trace_inner_product(r.phi_hat, random_t_element(rho.dims(), rng)) - anchor;
    r.max_excess = std::max(r.max_excess, e);
    ++r.checked;
  }

  if (r.norm_gap > opt.norm_tol)
    r.reason = "||tau_star^Γ||_1 != 1";
  else if (r.form_error > opt.form_tol)
    r.reason = "L_tau(rho)^Γ is not of the form P1 - P2 + Q";
  else if (r.q_norm > 1.0 + opt.form_tol)
    r.reason = "nullspace block has norm above 1";
  else if (r.checked > 0 && r.max_excess > opt.battery_tol)
    r.reason = "sampled element of T violates the supporting inequality";
  else
    r.pass = true;
  return r;
}

/// R(ρ) = -S(ρ) - Tr[φ τ* log τ*]
inline double rains_closed_form(const HermitianMatrix &tau_star, const SupportingFunctional &f,
                                const HermitianMatrix &rho) {
  RainsMinOptions opt;
  opt.samples = 0;
  const auto rep = verify_rains_min(rho, tau_star, opt);
  if (!rep.pass)
    throw Error(ErrorKind::InvalidArgument, "tau_star does not minimize: " + rep.reason);
  const HermitianMatrix tlogt = spectral_decompose(tau_star).apply(
      [](double s) { return s > 1e-300 ? s * std::log(s) : 0.0; });
  return -von_neumann_entropy(rho) - trace_inner_product(f.phi, tlogt);
}

enum class LnVerdict { Equal, Strict };

inline const char *to_string(LnVerdict v) { return v == LnVerdict::Equal ? "EQUAL" : "STRICT"; }

struct RainsVsLnReport {
  double ln = 0.0;
  double pt_norm = 0.0;  // ||ρ^Γ||_1
  double m = 0.0;        // max_T Tr[P_ρ τ]
  double scaled_m = 0.0; // ||ρ^Γ||_1 · m; equality iff <= 1
  bool full_rank = false;
  LnVerdict verdict = LnVerdict::Strict;
  double rains = 0.0; // forward solver
  SolveStatus rains_status = SolveStatus::NonConverged;
};

/// R(ρ) = LN(ρ) iff τ* = ρ/||ρ^Γ||_1 is optimal, i.e. ||ρ^Γ||_1 max_T Tr[P_ρ τ] <= 1.
inline RainsVsLnReport rains_vs_ln(const HermitianMatrix &rho, const SolverConfig &cfg = {},
                                   double tol = 1e-6) {
  require_state(rho, "rho");
  RainsVsLnReport r;
  const auto sd = spectral_decompose(rho);
  r.full_rank = sd.eigenvalues(0) > sd.zero_threshold();
  r.ln = log_negativity(rho);
  r.pt_norm = trace_norm(partial_transpose(rho));
  r.m = maximize_linear(support_projector(sd), SetTag::RainsT, cfg).value;
  r.scaled_m = r.pt_norm * r.m;
  r.verdict = r.scaled_m <= 1.0 + tol ? LnVerdict::Equal : LnVerdict::Strict;
  const auto sol = minimize_ree(rho, SetTag::RainsT, cfg);
  r.rains = sol.value;
  r.rains_status = sol.status;
  return r;
}

struct AuditSample {
  HermitianMatrix rho;
  double ep = 0.0;
  double rains = 0.0;
  double ln = 0.0;
  bool full_rank = false;
  bool converged = false;
};

struct QubitAuditReport {
  Dims dims;
  std::uint64_t seed = 0;
  std::vector<AuditSample> samples;
  double max_gap = 0.0; // max |R - E_P|
  bool covered = false; // one factor is a qubit
  bool pass = false;    // only meaningful when covered
};

/// Random non-PPT states with forward-solved E_P and R.
inline QubitAuditReport qubit_equality_audit(Dims d, int count, std::uint64_t seed,
                                             const SolverConfig &cfg = {}, double bar = 5e-4) {
  QubitAuditReport r;
  r.dims = d;
  r.seed = seed;
  r.covered = d.n1 == 2 || d.n2 == 2;
  Rng rng(seed);
  while (int(r.samples.size()) < count) {
    const Index rank = 1 + Index(uniform01(rng) * double(d.order()));
    HermitianMatrix rho = random_state(d, rng, std::min(rank, d.order()));
    if (is_ppt(rho, 0.0))
      continue;
    AuditSample s;
    s.rho = rho;
    const auto sd = spectral_decompose(rho);
    s.full_rank = sd.eigenvalues(0) > sd.zero_threshold();
    const auto ep = minimize_ree(rho, SetTag::Ppt, cfg);
    const auto rt = minimize_ree(rho, SetTag::RainsT, cfg);
    s.ep = ep.value;
    s.rains = rt.value;
    s.ln = log_negativity(rho);
    s.converged = ep.status == SolveStatus::Converged && rt.status == SolveStatus::Converged;
    r.max_gap = std::max(r.max_gap, std::abs(s.rains - s.ep));
    r.samples.push_back(std::move(s));
  }
  r.pass = r.covered && r.max_gap < bar;
  return r;
}

} // namespace entconv
