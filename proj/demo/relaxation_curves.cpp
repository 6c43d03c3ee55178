// Relaxation modulus G(t) of the fractional power-law medium (rho = A = a = 1) for several
// exponents, on t in [0.1, 10]. Prints CSV columns t, G_alpha... to standard output.
//
// For alpha < 1/2 the curve dips below zero inside the window: G is not completely monotone.

#include <iomanip>
#include <iostream>
#include <limits>
#include <vector>

#include "viscowave/viscowave.hpp"

int main() {
  namespace vw = viscowave;
  const std::vector<double> alphas = {0.3, 0.4, 0.5, 0.6, 0.9};
  std::vector<vw::MaterialModel> models;
  for (double a : alphas) models.push_back(vw::power_law_model(1.0, 1.0, 1.0, a));

  std::cout << "# relaxation modulus of the power-law medium, rho = A = a = 1\n";
  std::cout << "t";
  for (double a : alphas) std::cout << ",G_alpha_" << a;
  std::cout << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  const auto ts = vw::detail::log_grid(0.1, 10.0, 20);
  for (double t : ts) {
    std::cout << t;
    for (const auto& m : models) std::cout << ',' << vw::relaxation_modulus(m, t);
    std::cout << '\n';
  }

  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto& m = models[i];
    const auto v = vw::cm_check([&](double t) { return vw::relaxation_modulus(m, t); }, ts);
    std::cerr << "alpha = " << alphas[i] << ": "
              << (v.pass ? "completely monotone on [0.1, 10]" : "not completely monotone");
    if (v.first_violation)
      std::cerr << " (order " << v.first_violation->order << " at t = " << v.first_violation->t << ")";
    std::cerr << '\n';
  }
  return 0;
}
