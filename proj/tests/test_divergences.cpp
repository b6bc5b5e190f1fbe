#include "fixtures.hpp"

using namespace entconv;
using namespace fixtures;

namespace {

HermitianMatrix diag(std::initializer_list<double> xs) {
  RealVector d(Index(xs.size()));
  Index i = 0;
  for (double x : xs)
    d(i++) = x;
  return HermitianMatrix::diagonal(Dims{d.size(), 1}, d);
}

// Tr ρ(log ρ - log σ) via Schur-Parlett logs.
double oracle_relent(const HermitianMatrix &rho, const HermitianMatrix &sigma) {
  return (rho.mat() * (oracle_logm(rho.mat()) - oracle_logm(sigma.mat()))).trace().real();
}

// Principal matrix power via Schur-Parlett (Eigen unsupported).
ComplexMatrix oracle_pow(const ComplexMatrix &a, double p) { return a.pow(p); }

} // namespace

TEST(DivergenceValue, FiniteAndInfinite) {
  const auto f = DivergenceValue::finite(1.5);
  EXPECT_TRUE(f.is_finite());
  EXPECT_EQ(f.value(), 1.5);
  const auto inf = DivergenceValue::infinite();
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_TRUE(std::isinf(inf.value_or_inf()));
  EXPECT_THROW((void)inf.value(), Error);
}

TEST(VonNeumannEntropy, Examples) {
  Rng rng(1);
  EXPECT_NEAR(von_neumann_entropy(random_pure_state(Dims{2, 3}, rng)), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(HermitianMatrix::identity(Dims{2, 1}) / 2.0), std::log(2.0),
              1e-15);
  EXPECT_NEAR(von_neumann_entropy(diag({0.25, 0.75})), kEntropyQuarter, 1e-15);
  EXPECT_THROW((void)von_neumann_entropy(diag({0.5, 0.6})), Error);
}

TEST(RelativeEntropy, Examples) {
  Rng rng(2);
  const auto rho = random_state(Dims{2, 2}, rng);
  EXPECT_NEAR(relative_entropy(rho, rho).value(), 0.0, 1e-12);
  EXPECT_NEAR(relative_entropy(diag({1, 0}), diag({0.5, 0.5})).value(), std::log(2.0), 1e-15);
  EXPECT_TRUE(relative_entropy(diag({1, 0}), diag({0, 1})).is_infinite());
  EXPECT_THROW((void)relative_entropy(diag({1, -0.1}), diag({0.5, 0.5})), Error);
}

TEST(RelativeEntropy, MatchesSchurParlettOracle) {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const auto rho = random_positive(Dims{2, 3}, rng);
    const auto sigma = random_positive(Dims{2, 3}, rng);
    const auto r = rho / rho.trace(), s = sigma / sigma.trace();
    EXPECT_NEAR(relative_entropy(r, s).value(), oracle_relent(r, s), 1e-10);
  }
}

TEST(RelativeEntropy, NonnegativeZeroIffEqual) {
  Rng rng(4);
  for (int rep = 0; rep < 30; ++rep) {
    const Dims d{2, 2};
    const auto rho = random_state(d, rng, 1 + rep % 4);
    const auto sigma = random_state(d, rng);
    const double v = relative_entropy(rho, sigma).value();
    EXPECT_GE(v, -1e-10);
    if (frobenius_distance(rho, sigma) > 1e-3) {
      EXPECT_GT(v, 0.0);
    }
  }
}

TEST(RelativeEntropy, JointConvexity) {
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const Dims d{3, 2};
    const auto r1 = random_state(d, rng), r2 = random_state(d, rng, 3);
    const auto s1 = random_state(d, rng), s2 = random_state(d, rng);
    const double lhs = relative_entropy(0.5 * (r1 + r2), 0.5 * (s1 + s2)).value();
    const double rhs =
        0.5 * (relative_entropy(r1, s1).value() + relative_entropy(r2, s2).value());
    EXPECT_LE(lhs, rhs + 1e-10);
  }
}

TEST(LogNegativity, Examples) {
  Rng rng(6);
  EXPECT_NEAR(log_negativity(random_ppt_state(Dims{2, 2}, rng)), 0.0, 1e-10);
  EXPECT_NEAR(log_negativity(bell()), std::log(2.0), 1e-14);
  EXPECT_NEAR(log_negativity(HermitianMatrix::identity(Dims{2, 2}) / 4.0), 0.0, 1e-15);
}

TEST(QuasiRelativeEntropy, NegLogRecoversRelativeEntropy) {
  Rng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const auto rho = random_state(Dims{2, 2}, rng), sigma = random_state(Dims{2, 2}, rng);
    EXPECT_NEAR(quasi_f_relative_entropy(ScalarFunction::neg_log(), rho, sigma),
                relative_entropy(rho, sigma).value(), 1e-9);
  }
}

TEST(QuasiRelativeEntropy, CommutingDiagonal) {
  const auto f = ScalarFunction::power(0.3);
  const double p[] = {0.2, 0.8}, s[] = {0.6, 0.4};
  double expect = 0.0;
  for (int i = 0; i < 2; ++i)
    expect += p[i] * std::pow(s[i] / p[i], 0.3);
  EXPECT_NEAR(quasi_f_relative_entropy(f, diag({0.2, 0.8}), diag({0.6, 0.4})), expect, 1e-14);
}

TEST(QuasiRelativeEntropy, PowerIdentity) {
  Rng rng(8);
  for (double alpha : {0.2, 0.5, 0.8}) {
    const auto rho = random_state(Dims{2, 2}, rng), sigma = random_state(Dims{2, 2}, rng);
    const double direct =
        (oracle_pow(rho.mat(), 1.0 - alpha) * oracle_pow(sigma.mat(), alpha)).trace().real();
    EXPECT_NEAR(quasi_f_relative_entropy(ScalarFunction::power(alpha), rho, sigma), direct, 1e-9);
  }
}

TEST(QuasiRelativeEntropy, RejectsSingular) {
  EXPECT_THROW((void)quasi_f_relative_entropy(ScalarFunction::neg_log(), diag({1, 0}),
                                              diag({0.5, 0.5})),
               Error);
}

TEST(RenyiRelativeEntropy, Examples) {
  Rng rng(9);
  const auto rho = random_state(Dims{2, 2}, rng), sigma = random_state(Dims{2, 2}, rng);
  EXPECT_NEAR(renyi_relative_entropy(0.4, rho, rho), 0.0, 1e-12);

  const double a = 0.6;
  const double classical =
      std::log(std::pow(0.3, a) * std::pow(0.5, 1 - a) + std::pow(0.7, a) * std::pow(0.5, 1 - a)) /
      (a - 1);
  EXPECT_NEAR(renyi_relative_entropy(a, diag({0.3, 0.7}), diag({0.5, 0.5})), classical, 1e-14);

  EXPECT_NEAR(renyi_relative_entropy(1 - 1e-4, rho, sigma), relative_entropy(rho, sigma).value(),
              1e-3);
  for (double bad : {0.0, 1.0, 1.5, -0.2})
    EXPECT_THROW((void)renyi_relative_entropy(bad, rho, sigma), Error);
}

TEST(SandwichedRenyi, Examples) {
  Rng rng(10);
  const auto rho = random_state(Dims{2, 2}, rng), sigma = random_state(Dims{2, 2}, rng);
  EXPECT_NEAR(sandwiched_renyi(0.7, rho, rho), 0.0, 1e-12);

  const auto c1 = diag({0.1, 0.2, 0.3, 0.4}), c2 = diag({0.4, 0.3, 0.2, 0.1});
  for (double a : {0.5, 0.7, 0.9})
    EXPECT_NEAR(sandwiched_renyi(a, c1, c2), renyi_relative_entropy(a, c1, c2), 1e-12);

  const ComplexMatrix prod = oracle_pow(rho.mat(), 0.5) * oracle_pow(sigma.mat(), 0.5);
  const double fid = Eigen::JacobiSVD<ComplexMatrix>(prod).singularValues().sum();
  EXPECT_NEAR(sandwiched_renyi(0.5, rho, sigma), -2.0 * std::log(fid), 1e-9);

  EXPECT_THROW((void)sandwiched_renyi(0.4, rho, sigma), Error);
  EXPECT_THROW((void)sandwiched_renyi(0.7, rho, diag({1, 0, 0, 0})), Error);
}

TEST(SandwichedRenyi, NonnegativeAndMonotoneInAlpha) {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto rho = random_state(Dims{2, 3}, rng), sigma = random_state(Dims{2, 3}, rng);
    const double d5 = sandwiched_renyi(0.5, rho, sigma), d7 = sandwiched_renyi(0.7, rho, sigma),
                 d9 = sandwiched_renyi(0.9, rho, sigma);
    EXPECT_GT(d5, 0.0);
    EXPECT_LE(d5, d7 + 1e-12);
    EXPECT_LE(d7, d9 + 1e-12);
  }
}
