// Prints the cat state's density matrix in two bases and what dephasing does to
// each.

#include <cstdio>

#include "qlab/density.hpp"

int main() {
  using namespace qlab;
  const auto rho = cat_density();
  const auto a = BasisChange::identity(2);
  const auto b = BasisChange::hadamard();

  auto show = [](const char* title, const ComplexMatrix& m) {
    std::printf("%s\n", title);
    for (std::size_t r = 0; r < m.rows(); ++r)
      std::printf("  [% .6f % .6f]\n", m(r, 0).real(), m(r, 1).real());
  };
  show("rho in basis A", rho.matrix());
  show("rho in basis B", change_basis(rho, b).matrix());
  show("dephased in A", dephase(rho, a).matrix());
  show("dephased in B (back in A)", dephase(rho, b).matrix());

  const auto pa = measurement_probabilities(rho, a);
  const auto pb = measurement_probabilities(rho, b);
  std::printf("P_A = (%.3f, %.3f)  P_B = (%.3f, %.3f)\n", pa[0], pa[1], pb[0], pb[1]);
  std::printf("defect = %.9f\n", dephasing_commutator_defect(rho, b));
}
