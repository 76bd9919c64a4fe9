#include <gtest/gtest.h>

#include "qpl/hamiltonians.hpp"
#include "support.hpp"

using namespace qpl;
using qpl::testing::make_params;
using qpl::testing::q;
using qpl::testing::RandomGauss;

namespace {

QMatrix mat(std::initializer_list<std::initializer_list<GaussQ>> rows) {
  QMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

using Poly = std::vector<GaussQ>;

// p(s x)
Poly substitute_scale(Poly p, const GaussQ& s) {
  GaussQ f(1);
  for (auto& c : p) {
    c *= f;
    f *= s;
  }
  return p;
}

Poly scaled(Poly p, const GaussQ& s) {
  for (auto& c : p) c *= s;
  return p;
}

GaussQ random_time(RandomGauss& rg) {
  GaussQ t;
  do t = rg.next();
  while (t.is_zero() || t == GaussQ(1));
  return t;
}

ParamSet negated(ParamSet p) {
  for (int i = 0; i < 4; ++i)
    if (p.slot(i)) p.slot(i) = -*p.slot(i);
  return p;
}

}  // namespace

TEST(BuildMatrix, AirySystem) {
  const auto H = build_hamiltonian_matrix(PainleveKind::II, make_params(GaussQ(1)), 1);
  EXPECT_EQ(H.matrix.M0, mat({{q(0), q(0)}, {q(1), q(0)}}));
  EXPECT_EQ(H.matrix.M1, mat({{q(0), q(-1, 2)}, {q(0), q(0)}}));
  EXPECT_TRUE(H.matrix.M2.is_zero());
  EXPECT_EQ(H.branch, InvarianceBranch::AEqualsMHbar);
}

TEST(BuildMatrix, TrivialDegreeZero) {
  const auto H = build_hamiltonian_matrix(PainleveKind::II, make_params(GaussQ(0)), 0);
  EXPECT_TRUE(H.matrix.is_zero());
  EXPECT_EQ(H.matrix.size(), 1u);
}

TEST(BuildMatrix, SecondDegreeAiryColumns) {
  RandomGauss rg(21);
  for (int k = 0; k < 5; ++k) {
    const GaussQ h = rg.nonzero();
    const auto H = build_hamiltonian_matrix(PainleveKind::II, make_params(GaussQ(2) * h, {}, {}, {}, h), 2).matrix;
    const GaussQ z(0);
    EXPECT_EQ(H.M0, mat({{z, z, h * h}, {GaussQ(2) * h, z, z}, {z, h, z}}));
    // the first-order term lowers degree: H x = (a - hbar) x^2 - (t hbar / 2)
    EXPECT_EQ(H.M1, mat({{z, -h / GaussQ(2), z}, {z, z, -h}, {z, z, z}}));
  }
}

TEST(BuildMatrix, RejectsWrongShape) {
  try {
    build_hamiltonian_matrix(PainleveKind::II, make_params(GaussQ(1), q(1)), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadParamShape);
  }
  try {
    build_hamiltonian_matrix(PainleveKind::V, make_params(GaussQ(1), q(1)), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadParamShape);
  }
  try {
    build_hamiltonian_matrix(PainleveKind::II, make_params(GaussQ(1)), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvarianceViolated);
  }
}

TEST(ApplyHamiltonian, AiryMonomialFormula) {
  RandomGauss rg(4);
  for (unsigned m = 0; m <= 5; ++m) {
    const GaussQ a = rg.next(), h = rg.nonzero(), t = rg.next();
    Poly xm(m + 1, GaussQ(0));
    xm[m] = GaussQ(1);
    const Poly out = apply_hamiltonian(PainleveKind::II, make_params(a, {}, {}, {}, h), xm, t);
    Poly expect(m + 2, GaussQ(0));
    const GaussQ mm(static_cast<long>(m));
    expect[m + 1] += a - mm * h;
    if (m >= 1) expect[m - 1] += -(t / GaussQ(2)) * mm * h;
    if (m >= 2) expect[m - 2] += q(1, 2) * mm * (mm - GaussQ(1)) * h * h;
    EXPECT_EQ(out, expect) << "m=" << m;
  }
}

TEST(ApplyHamiltonian, ZeroPolynomial) {
  RandomGauss rg(8);
  for (auto kind : kAllKinds) {
    const ParamSet p = rg.params(kind, 2);
    const Poly out = apply_hamiltonian(kind, p, Poly(3, GaussQ(0)), q(3));
    for (const auto& c : out) EXPECT_TRUE(c.is_zero());
  }
}

TEST(ApplyHamiltonian, PoleAtSingularTime) {
  const ParamSet p = make_params(GaussQ(1), q(1), q(1), q(1));
  for (GaussQ t : {q(0), q(1)}) {
    try {
      apply_hamiltonian(PainleveKind::VI, p, Poly{GaussQ(1)}, t);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::PoleAtT);
    }
  }
}

TEST(ApplyHamiltonian, SixthKindMatchesMatrixAtTwo) {
  const ParamSet p = make_params(GaussQ(1), q(1, 3), q(2, 5), q(-1, 7));
  const auto H = build_hamiltonian_matrix(PainleveKind::VI, p, 1).matrix;
  const Poly out = apply_hamiltonian(PainleveKind::VI, p, Poly{q(0), q(1)}, q(2));
  const auto col = H.at(q(2)).apply({q(0), q(1)});
  EXPECT_EQ(out[0], col[0]);
  EXPECT_EQ(out[1], col[1]);
  EXPECT_TRUE(out[2].is_zero());
}

// Matrix-vector product against direct differential-operator application.
TEST(ApplyHamiltonian, OracleEquivalenceRandom) {
  RandomGauss rg(2024);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto kind = kAllKinds[trial % 5];
    const unsigned m = static_cast<unsigned>(trial / 5 % 5);
    ParamSet p = rg.params(kind, m);
    if (kind == PainleveKind::VI && rg.coin()) {
      p.a = rg.next();
      p.d = GaussQ(static_cast<long>(m) - 1) * p.hbar - p.B() - p.C();
    }
    const auto H = build_hamiltonian_matrix(kind, p, m).matrix;
    const GaussQ t = random_time(rg);
    Poly v(m + 1);
    for (auto& c : v) c = rg.next();
    const Poly direct = apply_hamiltonian(kind, p, v, t);
    const auto via = H.at(t).apply(v);
    for (unsigned i = 0; i <= m; ++i) EXPECT_EQ(direct[i], via[i]) << to_string(kind) << " m=" << m;
    EXPECT_TRUE(direct[m + 1].is_zero());
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(Invariance, Examples) {
  EXPECT_TRUE(invariance_condition(PainleveKind::II, make_params(GaussQ(3)), 3).holds);
  const auto vi = invariance_condition(PainleveKind::VI, make_params(GaussQ(5), q(1, 2), q(1, 3), q(1, 6)), 2);
  EXPECT_TRUE(vi.holds);
  EXPECT_EQ(vi.branch, InvarianceBranch::SumEqualsShifted);
  const auto no = invariance_condition(PainleveKind::II, make_params(GaussQ(1)), 2);
  EXPECT_FALSE(no.holds);
  EXPECT_EQ(no.witness, GaussQ(-1));
}

// The x^{m+1} coefficient of H x^m is the witness times the kind's time scale.
TEST(Invariance, DegreeRaiseMatchesWitness) {
  RandomGauss rg(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kind = kAllKinds[trial % 5];
    const unsigned m = static_cast<unsigned>(trial % 4);
    ParamSet p = rg.params(kind, m);
    p.a = rg.next();
    const auto inv = invariance_condition(kind, p, m);
    const GaussQ t = random_time(rg);
    Poly xm(m + 1, GaussQ(0));
    xm[m] = GaussQ(1);
    const Poly out = apply_hamiltonian(kind, p, xm, t);
    EXPECT_EQ(out[m + 1], degree_raise_scale(kind, t) * inv.witness);
    EXPECT_EQ(inv.holds, out[m + 1].is_zero());
  }
}

TEST(BuildMatrix, PoleStructure) {
  RandomGauss rg(31);
  for (auto kind : kAllKinds)
    for (unsigned m = 0; m <= 4; ++m) {
      const auto H = build_hamiltonian_matrix(kind, rg.params(kind, m), m).matrix;
      switch (kind) {
        case PainleveKind::VI:
          EXPECT_TRUE(H.M0.is_zero() && H.M1.is_zero() && H.M2.is_zero());
          break;
        case PainleveKind::V:
        case PainleveKind::III:
          EXPECT_TRUE(H.M2.is_zero() && H.R1.is_zero());
          break;
        case PainleveKind::II:
        case PainleveKind::IV:
          EXPECT_TRUE(H.R0.is_zero() && H.R1.is_zero());
          break;
      }
    }
}

TEST(Flipped, AiryExample) {
  const auto F = hbar_flipped_matrix(PainleveKind::II, make_params(GaussQ(-1)), 1);
  EXPECT_EQ(F.M0, mat({{q(0), q(0)}, {q(-1), q(0)}}));
  EXPECT_EQ(F.M1, mat({{q(0), q(1, 2)}, {q(0), q(0)}}));
  EXPECT_TRUE(hbar_flipped_matrix(PainleveKind::II, make_params(GaussQ(0)), 0).is_zero());
}

TEST(Symmetry, AiryConjugation) {
  const auto rep = verify_symmetry(PainleveKind::II, make_params(GaussQ(-1)), 1);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.rhs.M1, mat({{q(0), q(1, 2)}, {q(0), q(0)}}));
}

TEST(Symmetry, FourthKindUnitExample) {
  EXPECT_TRUE(verify_symmetry(PainleveKind::IV, make_params(GaussQ(-1), GaussQ(-1)), 1).pass);
}

TEST(Symmetry, SixthKindDegreeZero) {
  RandomGauss rg(1);
  const auto rep = verify_symmetry(PainleveKind::VI, make_params(GaussQ(0), rg.next(), rg.next(), rg.next()), 0);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.lhs, rep.rhs);
}

TEST(Symmetry, AllKindsRandom) {
  RandomGauss rg(99);
  for (auto kind : kAllKinds)
    for (unsigned m = 0; m <= 4; ++m)
      for (int k = 0; k < 20; ++k) {
        const auto rep = verify_symmetry(kind, rg.params(kind, m, -1), m);
        EXPECT_TRUE(rep.pass) << to_string(kind) << " m=" << m << " " << (rep.mismatch ? rep.mismatch->str() : "");
      }
}

// Same identities, checked on polynomials through apply_hamiltonian instead of matrices.
TEST(Symmetry, OperatorFormOnPolynomials) {
  RandomGauss rg(404);
  const GaussQ i = GaussQ::i();
  for (auto kind : kAllKinds)
    for (int k = 0; k < 20; ++k) {
      const unsigned m = static_cast<unsigned>(k % 4);
      const ParamSet p = rg.params(kind, m, -1);
      ParamSet flipped = p;
      flipped.hbar = -p.hbar;
      const ParamSet neg = negated(p);
      const GaussQ t = random_time(rg);
      Poly v(m + 1);
      for (auto& c : v) c = rg.next();
      const Poly lhs = apply_hamiltonian(kind, flipped, v, t);
      Poly rhs;
      switch (kind) {
        case PainleveKind::VI: rhs = apply_hamiltonian(kind, neg, v, t); break;
        case PainleveKind::V: rhs = scaled(apply_hamiltonian(kind, neg, v, -t), GaussQ(-1)); break;
        case PainleveKind::II:
        case PainleveKind::III:
          rhs = substitute_scale(apply_hamiltonian(kind, neg, substitute_scale(v, GaussQ(-1)), t), GaussQ(-1));
          break;
        case PainleveKind::IV:
          rhs = scaled(substitute_scale(apply_hamiltonian(kind, neg, substitute_scale(v, -i), i * t), i), i);
          break;
      }
      EXPECT_EQ(lhs, rhs) << to_string(kind) << " m=" << m;
    }
}
