// Degree-one Airy system: exact matrix, quadrature seed, integration along the negative axis,
// and comparison with Ai through the modified Bessel function.
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qpl/qpl.hpp"
#include "qpl/serialize.hpp"

using namespace qpl;

namespace {

double airy_ai(double z) {
  if (z == 0.0) return 0.355028053887817239;
  const double zeta = 2.0 / 3.0 * std::pow(z, 1.5);
  return std::sqrt(z / 3.0) * std::cyl_bessel_k(1.0 / 3.0, zeta) / std::numbers::pi;
}

}  // namespace

int main() {
  ParamSet p;
  p.a = GaussQ(1);
  p.hbar = GaussQ(1);
  const auto H = build_hamiltonian_matrix(PainleveKind::II, p, 1);
  std::printf("matrix: %s\n", io::to_json(H.matrix).dump().c_str());

  ParamSet base = p;
  base.a = GaussQ(0);
  const auto seed = phi_m(PainleveKind::II, base, 1, 1, 0.0);
  const auto tr = integrate(schrodinger_system(PainleveKind::II, p, 1), 0.0, -3.0, to_eigen(seed));
  std::printf("%zu accepted steps\n", tr.nodes().size());

  // phi_1 = 2 pi i k Ai(-k t) with k = 2^(-1/3)
  const double k = std::pow(2.0, -1.0 / 3.0);
  std::printf("%6s %24s %24s %10s\n", "t", "Im phi_1 (ode)", "2 pi k Ai(-k t)", "rel err");
  for (int i = 0; i <= 6; ++i) {
    const double t = 0.0 - 0.5 * i;
    const cplx y = tr.state(t)(1);
    const double exact = 2.0 * std::numbers::pi * k * airy_ai(-k * t);
    std::printf("%6.2f %24.16e %24.16e %10.2e\n", t, y.imag(), exact, std::abs(y - cplx(0.0, exact)) / exact);
  }
}
