#include <gtest/gtest.h>

#include "qpl/matrix.hpp"
#include "qpl/rational.hpp"
#include "qpl/tpoly.hpp"
#include "support.hpp"

using namespace qpl;
using qpl::testing::q;
using qpl::testing::RandomGauss;

TEST(GaussQ, FieldArithmetic) {
  const GaussQ z = GaussQ::frac(1, 2, 3, 4), w = GaussQ::frac(-2, 3, 1, 5);
  EXPECT_EQ((z * w) / w, z);
  EXPECT_EQ(z - z, GaussQ(0));
  EXPECT_EQ(GaussQ::i() * GaussQ::i(), GaussQ(-1));
  EXPECT_EQ(z * z.conj(), GaussQ(z.norm2()));
  EXPECT_THROW(z / GaussQ(0), std::domain_error);
}

TEST(GaussQ, RandomFieldAxioms) {
  RandomGauss rg(11);
  for (int k = 0; k < 200; ++k) {
    const GaussQ a = rg.next(), b = rg.next(), c = rg.nonzero();
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a / c) * c, a);
    EXPECT_EQ(pow(c, 3) / c, c * c);
  }
}

TEST(GaussQ, ParseForms) {
  EXPECT_EQ(parse_gauss("7/3"), q(7, 3));
  EXPECT_EQ(parse_gauss("-1/2+3/4*i"), GaussQ::frac(-1, 2, 3, 4));
  EXPECT_EQ(parse_gauss("i"), GaussQ::i());
  EXPECT_EQ(parse_gauss("-2*i"), GaussQ::frac(0, 1, -2, 1));
  EXPECT_EQ(parse_gauss("0.25"), q(1, 4));
  EXPECT_EQ(parse_gauss("1e-3"), q(1, 1000));
  EXPECT_EQ(parse_gauss("1.5-0.5i"), GaussQ::frac(3, 2, -1, 2));
  EXPECT_EQ(parse_gauss(" 3 / 6 "), q(1, 2));
}

TEST(GaussQ, ParseRejects) {
  for (const char* bad : {"", "1/0", "abc", "1..2", "1+", "1+2+3i+4"}) {
    try {
      parse_gauss(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
    }
  }
}

TEST(GaussQ, StrRoundTrip) {
  RandomGauss rg(5);
  for (int k = 0; k < 100; ++k) {
    const GaussQ z = rg.next();
    EXPECT_EQ(parse_gauss(z.str()), z) << z.str();
  }
}

// Conversion agrees with IEEE division of the exact parts.
TEST(GaussQ, ToComplexRounds) {
  EXPECT_EQ(q(2, 5).to_complex().real(), 0.4);
  EXPECT_EQ(q(-1, 3).to_complex().real(), -1.0 / 3.0);
  EXPECT_EQ(GaussQ::frac(0, 1, 1, 10).to_complex().imag(), 0.1);
  RandomGauss rg(5);
  for (int k = 0; k < 200; ++k) {
    const GaussQ z = rg.next();
    const double want = z.re().get_num().get_d() / z.re().get_den().get_d();
    EXPECT_EQ(z.to_complex().real(), want);
  }
  const Rational huge(mpz_class(1) << 200, 3);
  EXPECT_NEAR(GaussQ(huge).to_complex().real() / std::ldexp(1.0 / 3.0, 200), 1.0, 1e-15);
}

TEST(TPoly, DivmodReconstructs) {
  RandomGauss rg(3);
  for (int k = 0; k < 50; ++k) {
    TPoly a({rg.next(), rg.next(), rg.next(), rg.next()});
    TPoly b({rg.next(), rg.nonzero()});
    auto [qq, r] = divmod(a, b);
    EXPECT_EQ(qq * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
  }
}

TEST(TPoly, DerivativeAndScaling) {
  const TPoly p({q(1), q(2), q(3)});  // 1 + 2t + 3t^2
  EXPECT_EQ(p.derivative(), TPoly({q(2), q(6)}));
  EXPECT_EQ(p.scaled(q(-1)), TPoly({q(1), q(-2), q(3)}));
  EXPECT_EQ(p(q(2)), q(17));
}

TEST(RatFunc, NormalizesCommonFactors) {
  const TPoly t = TPoly::t();
  const RatFunc f(t * (t - TPoly(1)), TPoly(2) * t);
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_EQ(f.num(), TPoly({q(-1, 2), q(1, 2)}));
  const RatFunc g = RatFunc(TPoly(1), t) + RatFunc(TPoly(1), t - TPoly(1));
  EXPECT_EQ(g * RatFunc(t * (t - TPoly(1))), RatFunc(TPoly(2) * t - TPoly(1)));
  EXPECT_EQ(RatFunc(TPoly(1), t).derivative(), RatFunc(TPoly(-1), t * t));
}

TEST(Matrix, InverseAndRank) {
  RandomGauss rg(9);
  for (int k = 0; k < 20; ++k) {
    Matrix<GaussQ> A(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) A(i, j) = rg.next();
    if (rank(A) < 3) {
      EXPECT_THROW(inverse(A), std::domain_error);
      continue;
    }
    EXPECT_EQ(A * inverse(A), Matrix<GaussQ>::identity(3));
  }
  Matrix<GaussQ> S(2, 2);
  S(0, 0) = q(1);
  S(0, 1) = q(2);
  S(1, 0) = q(2);
  S(1, 1) = q(4);
  EXPECT_EQ(rank(S), 1u);
}
