#include "fixtures.hpp"

using namespace entconv;
using namespace fixtures;

namespace {

HermitianMatrix diag(Dims d, std::initializer_list<double> xs) {
  RealVector v(Index(xs.size()));
  Index i = 0;
  for (double x : xs)
    v(i++) = x;
  return HermitianMatrix::diagonal(d, v);
}

// Random PSD τ scaled onto ||τ^Γ||_1 = 1.
HermitianMatrix random_t_sphere(Dims d, Rng &rng, Index rank = 0) {
  const auto t = random_state(d, rng, rank);
  return t / trace_norm(partial_transpose(t));
}

// Random Hermitian β with ||β||_1 <= 1.
HermitianMatrix random_trace_ball(Dims d, Rng &rng) {
  const auto h = random_hermitian(d, rng);
  return h * (uniform01(rng) / trace_norm(h));
}

} // namespace

TEST(IsInT, Examples) {
  Rng rng(1);
  const auto s = random_ppt_state(Dims{2, 3}, rng);
  EXPECT_TRUE(is_in_T(s));
  EXPECT_NEAR(trace_norm(partial_transpose(s)), 1.0, 1e-9);
  EXPECT_FALSE(is_in_T(bell()));
  EXPECT_NEAR(trace_norm(partial_transpose(bell())), 2.0, 1e-14);
  EXPECT_TRUE(is_in_T(HermitianMatrix::zero(Dims{2, 2})));
}

TEST(BallFunctional, FullRankIsSign) {
  const auto a = diag(Dims{3, 1}, {0.5, -0.3, 0.2});
  EXPECT_TRUE(matrices_near(ball_functional(a), diag(Dims{3, 1}, {1, -1, 1}), 1e-12));
}

TEST(BallFunctional, NullspaceFreedom) {
  const auto a = diag(Dims{2, 1}, {1, 0});
  EXPECT_TRUE(matrices_near(ball_functional(a), diag(Dims{2, 1}, {1, 0}), 1e-15));
  const auto w = ball_functional(a, diag(Dims{2, 1}, {0, -0.7}));
  EXPECT_TRUE(matrices_near(w, diag(Dims{2, 1}, {1, -0.7}), 1e-15));
  EXPECT_THROW((void)ball_functional(a, diag(Dims{2, 1}, {0, 1.5})), Error);
  EXPECT_THROW((void)ball_functional(a, diag(Dims{2, 1}, {0.3, 0})), Error);
  EXPECT_THROW((void)ball_functional(diag(Dims{2, 1}, {0.5, 0})), Error);
}

TEST(BallFunctional, SupportsTheTraceNormBall) {
  Rng rng(2);
  for (int rep = 0; rep < 5; ++rep) {
    const Dims d{2, 3};
    auto a = random_hermitian(d, rng);
    a = a / trace_norm(a);
    const auto w = ball_functional(a);
    EXPECT_NEAR(trace_inner_product(w, a), 1.0, 1e-10);
    double worst = -1e300;
    for (int i = 0; i < 1000; ++i)
      worst = std::max(worst, trace_inner_product(w, random_trace_ball(d, rng)));
    EXPECT_LE(worst, 1.0 + 1e-10);
  }
}

TEST(RainsFunctional, AnchorAndSampledInequality) {
  Rng rng(3);
  for (Dims d : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}}) {
    const auto tau = random_t_sphere(d, rng);
    const auto f = rains_functional(tau);
    EXPECT_EQ(f.set, SetTag::RainsT);
    ASSERT_TRUE(f.rains.has_value());
    EXPECT_NEAR(trace_inner_product(f.phi, tau), 1.0, 1e-9);
    EXPECT_LT((f.rains->p1.mat() * f.rains->p2.mat()).norm(), 1e-12);
    EXPECT_LE(operator_norm(f.rains->q), 1.0 + 1e-10);
    double worst = -1e300;
    for (int i = 0; i < 2000; ++i)
      worst = std::max(worst, trace_inner_product(f.phi, random_t_element(d, rng)));
    EXPECT_LE(worst, 1.0 + 1e-10);
  }
}

TEST(RainsFunctional, FullRankIsUniqueAndRejectsQ) {
  Rng rng(4);
  const auto tau = random_t_sphere(Dims{2, 2}, rng);
  const auto f = rains_functional(tau);
  const HermitianMatrix sgn = ball_functional(partial_transpose(tau));
  EXPECT_TRUE(matrices_near(f.phi, partial_transpose(sgn), 1e-12));
  EXPECT_THROW((void)rains_functional(tau, diag(Dims{2, 2}, {0.1, 0, 0, 0})), Error);
  EXPECT_THROW((void)rains_functional(tau * 0.9), Error);
}

TEST(RainsConverse, PptFixedPoint) {
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    const auto tau = random_ppt_state(Dims{2, 3}, rng);
    if (min_eigenvalue(partial_transpose(tau)) < 1e-6 || min_eigenvalue(tau) < 1e-6)
      continue;
    const auto f = rains_functional(tau);
    EXPECT_TRUE(matrices_near(f.phi, HermitianMatrix::identity(tau.dims()), 1e-9));
    const auto r = rains_converse(tau, f);
    ASSERT_TRUE(r.accepted());
    EXPECT_TRUE(matrices_near(*r.rho, tau, 1e-9));
    EXPECT_NEAR(rains_closed_form(tau, f, *r.rho), 0.0, 1e-9);
  }
}

TEST(RainsConverse, QubitAnchorsWithNegativePtEigenvalueRefuse) {
  Rng rng(6);
  int tried = 0;
  while (tried < 30) {
    const auto tau = random_t_sphere(Dims{2, 2}, rng);
    if (min_eigenvalue(partial_transpose(tau)) > -1e-6)
      continue;
    ++tried;
    const auto f = rains_functional(tau);
    // Positivity mechanism: φ cannot be positive definite.
    EXPECT_LE(min_eigenvalue(f.phi), 1e-9);
    const auto r = rains_converse(tau, f);
    EXPECT_FALSE(r.accepted());
    EXPECT_EQ(r.refusal, RainsRefusal::DirectionNotPsd);
  }
}

TEST(RainsConverse, QubitTimesQutritMechanism) {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto tau = random_t_sphere(Dims{2, 3}, rng);
    if (min_eigenvalue(partial_transpose(tau)) > -1e-6)
      continue;
    EXPECT_LE(min_eigenvalue(rains_functional(tau).phi), 1e-9);
  }
}

TEST(RainsConverse, NamedRefusals) {
  Rng rng(8);
  const auto tau = random_t_sphere(Dims{2, 2}, rng);
  const auto f = rains_functional(tau);
  EXPECT_EQ(rains_converse(0.5 * tau, f).refusal, RainsRefusal::NotOnSphere);

  const auto prod = random_product_state(Dims{2, 2}, rng);
  SupportingFunctional g{HermitianMatrix::identity(Dims{2, 2}), prod, SetTag::RainsT,
                         std::nullopt, std::nullopt};
  EXPECT_EQ(rains_converse(prod, g).refusal, RainsRefusal::SupportMismatch);
}

TEST(VerifyRainsMin, BellAndScaledAnchor) {
  const auto tau = bell() / 2.0;
  const auto rep = verify_rains_min(bell(), tau);
  EXPECT_TRUE(rep.pass) << rep.reason;
  EXPECT_LT(rep.form_error, 1e-9);
  EXPECT_LE(rep.max_excess, 1e-8);

  const auto bad = verify_rains_min(bell(), 0.9 * tau);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.reason, "||tau_star^Γ||_1 != 1");

  const auto f = rains_functional(tau);
  EXPECT_NEAR(rains_closed_form(tau, f, bell()), std::log(2.0), 1e-12);
}

TEST(VerifyRainsMin, PptStateIsTrivial) {
  Rng rng(9);
  const auto s = random_ppt_state(Dims{2, 2}, rng);
  const auto rep = verify_rains_min(s, s);
  EXPECT_TRUE(rep.trivial_ppt);
  EXPECT_TRUE(rep.pass);
  try {
    (void)verify_rains_min(random_state(Dims{2, 2}, rng), random_product_state(Dims{2, 2}, rng));
    FAIL() << "expected NotInDomain";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInDomain);
  }
}

TEST(VerifyRainsMin, ForwardSolvedRoundTrip) {
  SolverConfig cfg;
  cfg.tol_grad = 1e-13;
  for (const auto &rho : {state_a(), state_b()}) {
    const auto sol = minimize_ree(rho, SetTag::RainsT, cfg);
    RainsMinOptions opt;
    opt.samples = 2000;
    opt.norm_tol = 1e-7;
    opt.form_tol = 1e-5;
    opt.battery_tol = 1e-7;
    const auto rep = verify_rains_min(rho, sol.sigma, opt);
    EXPECT_TRUE(rep.pass) << rep.reason << " norm gap " << rep.norm_gap << " form " << rep.form_error;
    // φ̂ = L_τ(ρ) fed back through the converse reproduces ρ.
    SupportingFunctional f{rep.phi_hat, sol.sigma, SetTag::RainsT, std::nullopt, std::nullopt};
    const auto back = frechet_pinv_apply(log_kernel(sol.sigma), f.phi);
    EXPECT_TRUE(matrices_near(back, rho, 1e-8));
    EXPECT_NEAR(-von_neumann_entropy(rho) -
                    trace_inner_product(f.phi, spectral_decompose(sol.sigma).apply([](double s) {
                      return s > 0 ? s * std::log(s) : 0.0;
                    })),
                sol.value, 1e-8);
  }
}

TEST(RainsVsLn, Examples) {
  Rng rng(10);
  const auto ppt = random_ppt_state(Dims{2, 2}, rng);
  const auto r0 = rains_vs_ln(ppt);
  EXPECT_EQ(r0.verdict, LnVerdict::Equal);
  EXPECT_NEAR(r0.ln, 0.0, 1e-10);
  EXPECT_NEAR(r0.rains, 0.0, 1e-8);

  const auto full = random_non_ppt_state(Dims{2, 2}, rng);
  const auto r1 = rains_vs_ln(full);
  EXPECT_TRUE(r1.full_rank);
  EXPECT_EQ(r1.verdict, LnVerdict::Strict);
  EXPECT_LT(r1.rains, r1.ln);

  const auto rb = rains_vs_ln(bell());
  EXPECT_EQ(rb.verdict, LnVerdict::Equal);
  EXPECT_NEAR(rb.ln, std::log(2.0), 1e-12);
  EXPECT_NEAR(rb.rains, std::log(2.0), 1e-6);
}

TEST(QubitAudit, SmallBatchesAndOrdering) {
  for (Dims d : {Dims{2, 2}, Dims{2, 3}}) {
    const auto rep = qubit_equality_audit(d, 6, 21);
    EXPECT_TRUE(rep.covered);
    EXPECT_TRUE(rep.pass) << "max gap " << rep.max_gap;
    for (const auto &s : rep.samples) {
      EXPECT_LE(s.rains, s.ep + 5e-4);
      EXPECT_LE(s.rains, s.ln + 1e-8);
    }
  }
  EXPECT_FALSE(qubit_equality_audit(Dims{3, 3}, 1, 1).covered);
}
