#pragma once

// Brute-force forward solver: spectral projected gradient for min_{σ∈C} S(ρ||σ)
// and projected ascent for max_{σ∈C} Tr[Mσ], with C = P or T. Projections onto
// the intersections are computed by Dykstra's algorithm.

#include <entconv/divergences.hpp>
#include <entconv/frechet.hpp>
#include <entconv/ppt_geometry.hpp>
#include <entconv/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace entconv {

struct SolverConfig {
  int max_iters = 30000;
  double step_init = 1.0;
  double armijo_beta = 0.5;
  double armijo_gamma = 1e-4;
  double tol_grad = 1e-11;
  double tol_feas = 1e-9;
  int dykstra_iters = 2000;
  double dykstra_tol = 1e-12;
  std::uint64_t seed = 0;
  int battery_samples = 200;
  double residual_tol = 1e-6;
  int max_restarts = 100; // inward nudges after a stalled line search

  void validate() const {
    if (max_iters <= 0 || step_init <= 0 || armijo_beta <= 0 || armijo_beta >= 1 ||
        armijo_gamma <= 0 || tol_grad <= 0 || tol_feas <= 0 || dykstra_iters <= 0 ||
        dykstra_tol <= 0 || battery_samples < 0 || residual_tol <= 0 || max_restarts < 0)
      throw Error(ErrorKind::InvalidArgument, "invalid solver configuration");
  }
};

enum class SolveStatus { Converged, NonConverged };

inline const char *to_string(SolveStatus s) {
  return s == SolveStatus::Converged ? "CONVERGED" : "NONCONVERGED";
}

/// Euclidean projection of v onto {x >= 0, Σx = 1}.
inline RealVector project_simplex(const RealVector &v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / double(k + 1);
    if (u[k] - t > 0.0)
      theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

/// Euclidean projection of v onto {||x||_1 <= 1}.
inline RealVector project_l1_ball(const RealVector &v) {
  if (v.cwiseAbs().sum() <= 1.0)
    return v;
  const RealVector w = project_simplex(v.cwiseAbs());
  return w.cwiseProduct(v.cwiseSign());
}

inline HermitianMatrix project_spectraplex(const HermitianMatrix &a) {
  const auto sd = spectral_decompose(a);
  const RealVector p = project_simplex(sd.eigenvalues);
  return {a.dims(), sd.eigenvectors * p.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint()};
}

inline HermitianMatrix project_trace_ball(const HermitianMatrix &a) {
  const auto sd = spectral_decompose(a);
  const RealVector p = project_l1_ball(sd.eigenvalues);
  return {a.dims(), sd.eigenvectors * p.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint()};
}

using Projector = std::function<HermitianMatrix(const HermitianMatrix &)>;

/// Dykstra's algorithm for the projection onto A ∩ B. Returns the last
/// B-iterate, so membership in B is exact.
inline HermitianMatrix dykstra(const HermitianMatrix &x0, const Projector &proj_a,
                               const Projector &proj_b, int max_iters, double tol,
                               int *iters_out = nullptr) {
  HermitianMatrix y = x0;
  HermitianMatrix p = HermitianMatrix::zero(x0.dims()), q = p;
  HermitianMatrix x = x0;
  int it = 0;
  for (; it < max_iters; ++it) {
    const HermitianMatrix xa = proj_a(y + p);
    p = y + p - xa;
    const HermitianMatrix yb = proj_b(xa + q);
    q = xa + q - yb;
    const double change = frobenius_distance(yb, y);
    const double gap = frobenius_distance(yb, xa);
    y = yb;
    x = xa;
    if (change < tol && gap < tol)
      break;
  }
  if (iters_out)
    *iters_out = it;
  return y;
}

/// Projection onto P: spectraplex ∩ Γ(spectraplex). The Dykstra residual is
/// removed by mixing in 1/n, so the output is an exact PPT state.
inline HermitianMatrix project_P(const HermitianMatrix &a, const SolverConfig &cfg = {}) {
  const Projector gamma_side = [](const HermitianMatrix &m) {
    return partial_transpose(project_spectraplex(partial_transpose(m)));
  };
  const HermitianMatrix y =
      dykstra(a, gamma_side, project_spectraplex, cfg.dykstra_iters, cfg.dykstra_tol);
  const double e = -min_eigenvalue(partial_transpose(y));
  if (e <= 0.0)
    return y;
  const double n = double(y.order());
  const double t = e / (e + 1.0 / n);
  return (1.0 - t) * y + (t / n) * HermitianMatrix::identity(y.dims());
}

/// Projection onto T: PSD cone ∩ {||X^Γ||_1 <= 1}. The Dykstra residual is
/// removed by rescaling, so the output is exactly in T.
inline HermitianMatrix project_T(const HermitianMatrix &a, const SolverConfig &cfg = {}) {
  const Projector ball_side = [](const HermitianMatrix &m) {
    return partial_transpose(project_trace_ball(partial_transpose(m)));
  };
  const HermitianMatrix y = dykstra(a, ball_side, psd_part, cfg.dykstra_iters, cfg.dykstra_tol);
  const double norm = trace_norm(partial_transpose(y));
  return norm > 1.0 ? y / norm : y;
}

inline HermitianMatrix project_onto(SetTag set, const HermitianMatrix &a, const SolverConfig &cfg) {
  return set == SetTag::Ppt ? project_P(a, cfg) : project_T(a, cfg);
}

inline bool in_set(SetTag set, const HermitianMatrix &a, double tol) {
  return set == SetTag::Ppt ? (is_state(a, tol) && is_ppt(a, tol)) : is_in_T(a, tol);
}

inline HermitianMatrix random_set_element(SetTag set, Dims d, Rng &rng) {
  return set == SetTag::Ppt ? random_ppt_state(d, rng) : random_t_element(d, rng);
}

struct ReeSolution {
  HermitianMatrix sigma;
  double value = 0.0;    // S(ρ||σ̂)
  double residual = 0.0; // max over battery of -f'(σ̂; σ - σ̂)
  double stationarity = 0.0;
  SolveStatus status = SolveStatus::NonConverged;
  int iterations = 0;
  int restarts = 0;
  bool monotone = true; // no accepted step increased the objective
  std::vector<double> objective_trace; // rises only at restarts
};

namespace detail {
/// -Tr[ρ log σ] restricted to the support of ρ; +inf when ρ has weight below
/// the gradient clamp.
inline double cross_entropy(const HermitianMatrix &rho, const SpectralDecomposition &ss) {
  double v = 0.0;
  for (Index i = 0; i < ss.size(); ++i) {
    const ComplexVector e = ss.vector(i);
    const double w = (e.adjoint() * rho.mat() * e)(0).real();
    if (ss.eigenvalues(i) <= 1e-12) {
      if (w > 1e-14)
        return std::numeric_limits<double>::infinity();
      continue;
    }
    v -= w * std::log(ss.eigenvalues(i));
  }
  return v;
}

inline bool boundary_stall(const HermitianMatrix &rho, const SpectralDecomposition &ss) {
  for (Index i = 0; i < ss.size(); ++i) {
    if (ss.eigenvalues(i) > 1e-9)
      break;
    const ComplexVector e = ss.vector(i);
    if ((e.adjoint() * rho.mat() * e)(0).real() > 1e-15)
      return true;
  }
  return false;
}

inline HermitianMatrix ree_gradient(const HermitianMatrix &rho, SpectralDecomposition ss) {
  for (Index i = 0; i < ss.size(); ++i)
    ss.eigenvalues(i) = std::max(ss.eigenvalues(i), 1e-12);
  return -frechet_apply(build_kernel(ScalarFunction::log(), ss), rho);
}
} // namespace detail

/// min_{σ∈C} S(ρ||σ) by spectral projected gradient (Barzilai-Borwein step,
/// monotone Armijo backtracking) from σ0 = 1/n unless `start` is given.
inline ReeSolution minimize_ree(const HermitianMatrix &rho, SetTag set,
                                const SolverConfig &cfg = {},
                                std::optional<HermitianMatrix> start = std::nullopt,
                                bool keep_trace = false) {
  cfg.validate();
  require_state(rho, "rho");
  const Dims d = rho.dims();
  const double neg_entropy = -von_neumann_entropy(rho);

  const HermitianMatrix mixed = HermitianMatrix::identity(d) / double(d.order());
  HermitianMatrix sigma = start ? project_onto(set, *start, cfg) : mixed;
  auto ss = spectral_decompose(sigma);
  double f = detail::cross_entropy(rho, ss);
  if (!std::isfinite(f)) {
    sigma = mixed;
    ss = spectral_decompose(sigma);
    f = detail::cross_entropy(rho, ss);
  }
  HermitianMatrix g = detail::ree_gradient(rho, ss);
  double alpha = cfg.step_init;
  HermitianMatrix best = sigma;
  double best_f = f;

  ReeSolution out;
  if (keep_trace)
    out.objective_trace.push_back(f + neg_entropy);
  // Objective after each of the last kWindow accepted steps.
  constexpr std::size_t kWindow = 100;
  std::deque<double> recent{f};
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const HermitianMatrix dir = project_onto(set, sigma - alpha * g, cfg) - sigma;
    const double gd = trace_inner_product(g, dir);
    // Bounds the unit-step projected gradient norm from above for any α.
    out.stationarity = dir.mat().norm() / std::min(alpha, 1.0);
    if (out.stationarity < cfg.tol_grad)
      break;

    double lam = 1.0;
    HermitianMatrix cand = sigma;
    SpectralDecomposition cs;
    double fc = std::numeric_limits<double>::infinity();
    bool accepted = false;
    while (gd < 0.0 && lam >= 1e-12) {
      cand = sigma + lam * dir;
      cs = spectral_decompose(cand);
      fc = detail::cross_entropy(rho, cs);
      if (fc <= f + cfg.armijo_gamma * lam * gd) {
        accepted = true;
        break;
      }
      lam *= cfg.armijo_beta;
    }
    if (!accepted) {
      // Stalled with ρ weight on a near-zero eigenvalue of σ, where the clamped
      // gradient is unreliable: nudge towards 1/n and resume.
      if (out.restarts == cfg.max_restarts || !detail::boundary_stall(rho, ss))
        break;
      ++out.restarts;
      sigma = (1.0 - 1e-6) * sigma + 1e-6 * mixed;
      ss = spectral_decompose(sigma);
      f = detail::cross_entropy(rho, ss);
      g = detail::ree_gradient(rho, ss);
      alpha = cfg.step_init;
      recent.assign(1, f);
      if (keep_trace)
        out.objective_trace.push_back(f + neg_entropy);
      continue;
    }

    const HermitianMatrix gn = detail::ree_gradient(rho, cs);
    const HermitianMatrix s = cand - sigma;
    const double sy = trace_inner_product(s, gn - g);
    const double ssq = trace_inner_product(s, s);
    alpha = sy > 0.0 ? std::clamp(ssq / sy, 1e-10, 1e10) : 1e4;

    if (fc > f)
      out.monotone = false;
    sigma = cand;
    ss = std::move(cs);
    f = fc;
    g = gn;
    if (f < best_f) {
      best = sigma;
      best_f = f;
    }
    if (keep_trace)
      out.objective_trace.push_back(f + neg_entropy);
    recent.push_back(f);
    if (recent.size() > kWindow) {
      recent.pop_front();
      if (recent.front() - f <= 1e-12 * std::max(1.0, std::abs(f)))
        break;
    }
  }
  if (best_f < f) {
    sigma = best;
    g = detail::ree_gradient(rho, spectral_decompose(sigma));
  }
  out.iterations = it;
  out.sigma = sigma;
  out.value = relative_entropy(rho, sigma).value_or_inf();

  // Residual battery: random set elements and projected-gradient points.
  Rng rng(cfg.seed);
  double res = 0.0;
  auto probe = [&](const HermitianMatrix &s) {
    res = std::max(res, -trace_inner_product(g, s - sigma));
  };
  for (int i = 0; i < cfg.battery_samples; ++i)
    probe(random_set_element(set, d, rng));
  for (double t : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0})
    probe(project_onto(set, sigma - t * g, cfg));
  out.residual = res;
  out.status = (res <= cfg.residual_tol && in_set(set, sigma, cfg.tol_feas))
                   ? SolveStatus::Converged
                   : SolveStatus::NonConverged;
  return out;
}

struct LinearSolution {
  HermitianMatrix sigma;
  double value = 0.0;       // Tr[M σ̂]
  double upper_bound = 0.0; // from the dual certificate (P) or a norm bound (T)
  SolveStatus status = SolveStatus::NonConverged;
  int iterations = 0;
  bool boundary = false;
  std::optional<PptDualCertificate> certificate;
  std::optional<SupportingFunctional> functional;
};

/// max_{σ∈C} Tr[Mσ] by projected ascent σ <- Proj(σ + tM) with growing t.
inline LinearSolution maximize_linear(const HermitianMatrix &m, SetTag set,
                                      const SolverConfig &cfg = {}) {
  cfg.validate();
  const Dims d = m.dims();
  HermitianMatrix sigma = HermitianMatrix::identity(d) / double(d.order());
  double value = trace_inner_product(m, sigma);
  double t = cfg.step_init;
  LinearSolution out;
  int it = 0, flat = 0;
  for (; it < cfg.max_iters; ++it) {
    const HermitianMatrix next = project_onto(set, sigma + t * m, cfg);
    const double nv = trace_inner_product(m, next);
    const double moved = frobenius_distance(next, sigma);
    sigma = next;
    flat = (std::abs(nv - value) < 1e-14 && moved < 1e-10) ? flat + 1 : 0;
    value = nv;
    t = std::min(t * 1.5, 1e3);
    if (flat >= 5)
      break;
  }
  out.iterations = it;
  out.sigma = sigma;
  out.value = value;
  if (set == SetTag::Ppt) {
    const auto pt = spectral_decompose(partial_transpose(sigma));
    out.boundary = pt.eigenvalues(0) <= 1e-6 * pt.max_abs();
    out.certificate = fit_ppt_dual(m, sigma, 1e-6);
    out.upper_bound = out.certificate->upper_bound;
    if (out.boundary && out.certificate->lambda > 0) {
      // Rescale M's dual form to the functional 1 - Z^Γ/λ.
      const auto zsd = spectral_decompose(out.certificate->z);
      std::vector<Index> keep;
      for (Index i = 0; i < zsd.size(); ++i)
        if (zsd.eigenvalues(i) > 1e-9 * std::max(1.0, zsd.max_abs()))
          keep.push_back(i);
      if (!keep.empty()) {
        RealVector a(Index(keep.size()));
        ComplexMatrix v(d.order(), Index(keep.size()));
        for (size_t k = 0; k < keep.size(); ++k) {
          a(Index(k)) = zsd.eigenvalues(keep[k]) / out.certificate->lambda;
          v.col(Index(k)) = zsd.vector(keep[k]);
        }
        const HermitianMatrix phi = HermitianMatrix::identity(d) -
                                    partial_transpose(detail::weighted_projector(d, v, a));
        out.functional = SupportingFunctional{phi, sigma, SetTag::Ppt, PptCertificate{a, v},
                                              std::nullopt};
      }
    }
  } else {
    out.upper_bound = std::min(operator_norm(partial_transpose(m)),
                               std::max(0.0, max_eigenvalue(m)));
  }
  out.status = (out.upper_bound - out.value <= 1e-6 && in_set(set, sigma, cfg.tol_feas))
                   ? SolveStatus::Converged
                   : SolveStatus::NonConverged;
  return out;
}

} // namespace entconv
