// Walks the converse pipeline once: boundary point, functional, family,
// closed-form REE, and the forward solver that should agree with it.

#include <entconv/entconv.hpp>

#include <cstdio>

using namespace entconv;

int main() {
  const Dims d{2, 2};
  const HermitianMatrix sigma_star = random_boundary_state(d, 7);
  const SupportingFunctional f = ppt_functional(sigma_star);
  const StateFamily fam = build_family(sigma_star, f);
  std::printf("x_max = %.6f\n", fam.x_max);

  for (double x : {0.25, 0.5, 1.0}) {
    const double xs = x * fam.x_max;
    const HermitianMatrix rho = fam.at(xs);
    const double closed = ree_closed_form(fam, xs);
    const ReeSolution fwd = minimize_ree(rho, SetTag::Ppt);
    std::printf("x = %.4f  closed form %.10f  forward %.10f  |sigma_hat - sigma*| = %.2e  %s\n", xs,
                closed, fwd.value, frobenius_distance(fwd.sigma, sigma_star),
                to_string(fwd.status));
  }

  ComplexVector phi_plus = ComplexVector::Zero(4);
  phi_plus(0) = phi_plus(3) = 1.0 / std::sqrt(2.0);
  const HermitianMatrix bell = HermitianMatrix::outer(d, phi_plus);
  std::printf("Bell: E_P %.8f  R %.8f  LN %.8f  h_PPT %.8f\n",
              minimize_ree(bell, SetTag::Ppt).value, minimize_ree(bell, SetTag::RainsT).value,
              log_negativity(bell), maximize_linear(bell, SetTag::Ppt).value);
  return 0;
}
