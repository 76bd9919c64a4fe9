#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qpl/painleve.hpp"
#include "qpl/rational.hpp"

namespace qpl::testing {

/// Seeded source of small Gaussian rationals p/q + (r/s) i.
class RandomGauss {
 public:
  explicit RandomGauss(std::uint32_t seed) : rng_(seed) {}

  GaussQ next(bool allow_imag = true) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    GaussQ z = GaussQ::frac(num(rng_), den(rng_));
    if (allow_imag && coin()) z += GaussQ::frac(0, 1, num(rng_), den(rng_));
    return z;
  }
  GaussQ nonzero(bool allow_imag = true) {
    GaussQ z;
    do z = next(allow_imag);
    while (z.is_zero());
    return z;
  }
  bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::mt19937& engine() { return rng_; }

  /// Parameters of the right shape for the kind with hbar random nonzero and a = a_factor * m * hbar.
  ParamSet params(PainleveKind kind, unsigned m, long a_factor = 1) {
    ParamSet p;
    p.hbar = nonzero();
    for (int i = 1; i < slot_count(kind); ++i) p.slot(i) = next();
    p.a = GaussQ(a_factor * static_cast<long>(m)) * p.hbar;
    return p;
  }

 private:
  std::mt19937 rng_;
};

inline ParamSet make_params(std::optional<GaussQ> a, std::optional<GaussQ> b = {}, std::optional<GaussQ> c = {},
                            std::optional<GaussQ> d = {}, GaussQ hbar = GaussQ(1)) {
  ParamSet p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.c = std::move(c);
  p.d = std::move(d);
  p.hbar = std::move(hbar);
  return p;
}

inline GaussQ q(long n, long d = 1) { return GaussQ::frac(n, d); }

/// Parameters admitted by the default contours, with the a-slot left for integral_params.
struct QuadCase {
  PainleveKind kind;
  ParamSet params;
  std::complex<double> t;
};

inline std::vector<QuadCase> quadrature_cases() {
  return {
      {PainleveKind::II, make_params(GaussQ(0)), {0.5, 0.2}},
      {PainleveKind::III, make_params(GaussQ(0), q(1, 3)), {-1.5, 0.3}},
      {PainleveKind::IV, make_params(GaussQ(0), q(-1, 2)), {0.4, 0.1}},
      {PainleveKind::V, make_params(GaussQ(0), q(-1, 2), q(-1, 3)), {2.0, 0.5}},
      {PainleveKind::VI, make_params(GaussQ(0), q(-7, 2), q(-1, 3), q(1, 5)), {2.5, 0.5}},
  };
}

}  // namespace qpl::testing
