// Degree-one sixth-kind solution from the two-point integral, moved to the KZ side.
#include <cstdio>
#include <vector>

#include "qpl/qpl.hpp"

using namespace qpl;

int main() {
  ParamSet base;
  base.a = GaussQ(0);
  base.b = GaussQ::frac(-7, 2);
  base.c = GaussQ::frac(-1, 3);
  base.d = GaussQ::frac(1, 5);
  base.hbar = GaussQ(1);
  const unsigned m = 1;
  const ParamSet p = integral_params(PainleveKind::VI, base, 1, m);

  const auto rep = verify_theorem(PainleveKind::VI, p, m);
  std::printf("KZ identity %s, gauge scalars %s and %s\n", rep.pass ? "holds" : "FAILS", (*rep.gauge)[0].str().c_str(),
              (*rep.gauge)[1].str().c_str());
  const auto g = vi_weights(p, m);
  std::printf("weights %s %s %s\n", g[0].str().c_str(), g[1].str().c_str(), g[2].str().c_str());

  std::vector<cplx> ts;
  std::vector<Eigen::VectorXcd> phi, dphi;
  for (int k = 0; k < 8; ++k) {
    const cplx t(1.5 + 0.25 * k, 0.4);
    const auto pr = phi_m_with_derivative(PainleveKind::VI, base, 1, m, t);
    ts.push_back(t);
    phi.push_back(to_eigen(pr.phi));
    dphi.push_back(to_eigen(pr.dphi));
  }
  const auto tr = kz_solution_transport(p, m, 1.0, ts, phi, dphi);
  std::printf("prefactor t^(%g%+gi) (t-1)^(%g%+gi)\n", tr.alpha.real(), tr.alpha.imag(), tr.beta.real(),
              tr.beta.imag());
  for (const auto& s : tr.samples)
    std::printf("t=%5.2f%+5.2fi  psi=(%11.4e%+11.4ei, %11.4e%+11.4ei)  residual %.1e\n", s.t.real(), s.t.imag(),
                s.psi(0).real(), s.psi(0).imag(), s.psi(1).real(), s.psi(1).imag(), s.residual);
  std::printf("max residual %.2e\n", tr.max_residual);
}
