#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qpl/errors.hpp"
#include "qpl/painleve.hpp"
#include "qpl/rational.hpp"
#include "qpl/rational_matrix_function.hpp"

namespace qpl {

/// Which polynomial-invariance condition made the space {x^0..x^m} invariant.
enum class InvarianceBranch {
  AEqualsMHbar,       // a = m hbar
  SumEqualsShifted,   // VI only: b + c + d = (m-1) hbar
};

inline const char* to_string(InvarianceBranch b) {
  return b == InvarianceBranch::AEqualsMHbar ? "a=m*hbar" : "b+c+d=(m-1)*hbar";
}

struct InvarianceReport {
  bool holds = false;
  /// Factors whose product is the x^{m+1} coefficient of H x^m, up to the kind's t-dependent scale.
  std::vector<GaussQ> factors;
  GaussQ witness;
  std::optional<InvarianceBranch> branch;
};

namespace detail {

inline std::vector<GaussQ> witness_factors(PainleveKind kind, const ParamSet& p, const GaussQ& hbar, unsigned m) {
  const GaussQ mm(static_cast<long>(m));
  std::vector<GaussQ> f{p.A() - mm * hbar};
  if (kind == PainleveKind::VI) f.push_back(p.B() + p.C() + p.D() - (mm - GaussQ(1)) * hbar);
  return f;
}

inline InvarianceReport invariance_with_hbar(PainleveKind kind, const ParamSet& p, const GaussQ& hbar, unsigned m) {
  InvarianceReport r;
  r.factors = witness_factors(kind, p, hbar, m);
  r.witness = GaussQ(1);
  for (const auto& f : r.factors) r.witness *= f;
  if (r.factors[0].is_zero()) r.branch = InvarianceBranch::AEqualsMHbar;
  else if (r.factors.size() > 1 && r.factors[1].is_zero()) r.branch = InvarianceBranch::SumEqualsShifted;
  r.holds = r.branch.has_value();
  return r;
}

struct Entry {
  int component;  // index into M0, M1, M2, R0, R1
  int row_offset;  // target degree minus source degree
  GaussQ value;
};

// Coefficients of H x^k, grouped by the matrix component they belong to.
inline std::vector<Entry> column_terms(PainleveKind kind, const ParamSet& p, const GaussQ& hbar, unsigned k) {
  const GaussQ kk(static_cast<long>(k));
  const GaussQ d1 = hbar * kk;
  const GaussQ d2 = hbar * hbar * kk * (kk - GaussQ(1));
  const GaussQ a = p.A(), b = p.B(), c = p.C(), d = p.D();
  const GaussQ half = GaussQ::frac(1, 2);
  switch (kind) {
    case PainleveKind::II:
      return {{0, -2, d2 * half}, {0, 1, a - d1}, {1, -1, -d1 * half}};
    case PainleveKind::IV:
      return {{0, -1, d2 - b * d1}, {0, 1, d1 - a}, {1, 0, -d1 - (a - GaussQ(2) * b)}};
    case PainleveKind::III:
      return {{3, 0, d2 - b * d1}, {3, 1, a - d1}, {0, -1, -d1}};
    case PainleveKind::V:
      return {{3, 0, d2 - (b + c) * d1 + a * (b + c - a + hbar)},
              {3, -1, -d2 + b * d1},
              {0, 1, d1 - a},
              {0, 0, a - d1}};
    case PainleveKind::VI: {
      // t(t-1)H = A + tB; H = -A/t + (A+B)/(t-1).
      const GaussQ s = b + c + d + hbar;
      const GaussQ a_up = d2 - (a + b + c + d) * d1 + s * a;
      const GaussQ a_0 = -d2 + (a + b + d) * d1;
      const GaussQ b_0 = -d2 + (a + b + c) * d1 - s * a;
      const GaussQ b_dn = d2 - (a + b) * d1;
      return {{3, 1, -a_up}, {3, 0, -a_0}, {4, 1, a_up}, {4, 0, a_0 + b_0}, {4, -1, b_dn}};
    }
  }
  return {};
}

inline RationalMatrixFunction build_with_hbar(PainleveKind kind, const ParamSet& p, const GaussQ& hbar, unsigned m) {
  RationalMatrixFunction f(m + 1);
  for (unsigned k = 0; k <= m; ++k) {
    for (const auto& e : column_terms(kind, p, hbar, k)) {
      if (e.value.is_zero()) continue;
      const long row = static_cast<long>(k) + e.row_offset;
      if (row < 0 || row > static_cast<long>(m))
        fail(ErrorCode::InvarianceViolated, "column " + std::to_string(k) + " leaves the polynomial space");
      f.component(e.component)(static_cast<std::size_t>(row), k) += e.value;
    }
  }
  return f;
}

}  // namespace detail

/// Checks whether H_J preserves polynomials of degree <= m.
inline InvarianceReport invariance_condition(PainleveKind kind, const ParamSet& params, unsigned m) {
  return detail::invariance_with_hbar(kind, shaped(kind, params), params.hbar, m);
}

/// Scale s_J(t) such that the x^{m+1} coefficient of H x^m equals s_J(t) * witness.
template <class S>
S degree_raise_scale(PainleveKind kind, const S& t) {
  switch (kind) {
    case PainleveKind::II: return S(1);
    case PainleveKind::III: return S(1) / t;
    case PainleveKind::IV:
    case PainleveKind::V: return S(-1);
    case PainleveKind::VI: return S(1) / (t * (t - S(1)));
  }
  return S(0);
}

struct HamiltonianMatrix {
  RationalMatrixFunction matrix;
  InvarianceBranch branch = InvarianceBranch::AEqualsMHbar;
};

/// Matrix of H_J on {x^0..x^m}; column k holds the coefficients of H_J x^k.
inline HamiltonianMatrix build_hamiltonian_matrix(PainleveKind kind, const ParamSet& params, unsigned m) {
  validate(kind, params);
  auto inv = invariance_condition(kind, params, m);
  if (!inv.holds)
    fail(ErrorCode::InvarianceViolated,
         std::string("kind ") + to_string(kind) + " with " + params.str() + " does not preserve degree <= " +
             std::to_string(m) + " (witness " + inv.witness.str() + ")");
  return {detail::build_with_hbar(kind, params, params.hbar, m), *inv.branch};
}

/// Matrix of the operator obtained by replacing hbar with -hbar everywhere.
inline RationalMatrixFunction hbar_flipped_matrix(PainleveKind kind, const ParamSet& params, unsigned m) {
  validate(kind, params);
  const GaussQ hbar = -params.hbar;
  auto inv = detail::invariance_with_hbar(kind, params, hbar, m);
  if (!inv.holds)
    fail(ErrorCode::InvarianceViolated,
         std::string("flipped ") + to_string(kind) + " with " + params.str() + " does not preserve degree <= " +
             std::to_string(m));
  return detail::build_with_hbar(kind, params, hbar, m);
}

namespace detail {

template <class S>
using Poly = std::vector<S>;

template <class S>
Poly<S> poly_add(Poly<S> a, const Poly<S>& b) {
  if (b.size() > a.size()) a.resize(b.size(), S(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

template <class S>
Poly<S> poly_mul(const Poly<S>& a, const Poly<S>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<S> r(a.size() + b.size() - 1, S(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

template <class S>
Poly<S> poly_scale(Poly<S> a, const S& s) {
  for (auto& v : a) v *= s;
  return a;
}

template <class S>
Poly<S> poly_diff(const Poly<S>& a) {
  Poly<S> r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * S(static_cast<long>(i)));
  return r;
}

}  // namespace detail

/// Applies H_J(t) to a polynomial by direct differential-operator arithmetic.
/// The result has length poly.size() + 1 (degree may rise by one).
template <class S>
std::vector<S> apply_hamiltonian(PainleveKind kind, const ParamSet& params, const std::vector<S>& poly, const S& t) {
  using detail::Poly;
  using detail::poly_add;
  using detail::poly_mul;
  using detail::poly_scale;
  const ParamSet p = shaped(kind, params);
  const S a = scalar_cast<S>(p.A()), b = scalar_cast<S>(p.B()), c = scalar_cast<S>(p.C()), d = scalar_cast<S>(p.D());
  const S hb = scalar_cast<S>(params.hbar);
  const S one(1), zero(0);
  const Poly<S> x{zero, one};
  auto cst = [](const S& v) { return Poly<S>{v}; };

  // Operator = (c2 D^2 + c1 D + c0) / prefactor with D = hbar d/dx.
  Poly<S> c2, c1, c0;
  S prefactor = one;
  switch (kind) {
    case PainleveKind::VI: {
      prefactor = t * (t - one);
      Poly<S> xm1{-one, one}, xmt{-t, one};
      c2 = poly_mul(poly_mul(x, xm1), xmt);
      Poly<S> inner = poly_scale(poly_mul(xm1, xmt), a + b);
      inner = poly_add(inner, poly_scale(poly_mul(x, xmt), c));
      inner = poly_add(inner, poly_scale(poly_mul(x, xm1), d));
      c1 = poly_scale(inner, -one);
      c0 = poly_scale(xmt, (b + c + d + hb) * a);
      break;
    }
    case PainleveKind::V:
      prefactor = t;
      c2 = poly_mul(x, Poly<S>{-one, one});
      c1 = Poly<S>{b, -(b + c + t), t};
      c0 = poly_scale(Poly<S>{b + c - a + hb + t, -t}, a);
      break;
    case PainleveKind::IV:
      c2 = x;
      c1 = Poly<S>{-b, -t, one};
      c0 = Poly<S>{-(a - S(2) * b) * t, -a};
      break;
    case PainleveKind::III:
      prefactor = t;
      c2 = poly_mul(x, x);
      c1 = poly_scale(Poly<S>{t, b, one}, -one);
      c0 = poly_scale(x, a);
      break;
    case PainleveKind::II:
      c2 = cst(one / S(2));
      c1 = poly_scale(Poly<S>{t / S(2), zero, one}, -one);
      c0 = poly_scale(x, a);
      break;
  }
  if (is_zero_scalar(prefactor))
    fail(ErrorCode::PoleAtT, std::string("H_") + to_string(kind) + " has a pole at this t");

  const Poly<S> d1 = poly_scale(detail::poly_diff(poly), hb);
  const Poly<S> d2 = poly_scale(detail::poly_diff(d1), hb);
  Poly<S> out = poly_add(poly_add(poly_mul(c2, d2), poly_mul(c1, d1)), poly_mul(c0, poly));
  out.resize(poly.size() + 1, zero);
  const S inv = one / prefactor;
  for (auto& v : out) v *= inv;
  return out;
}

struct SymmetryReport {
  bool pass = false;
  RationalMatrixFunction lhs, rhs;
  std::optional<Mismatch> mismatch;
};

/// Checks the hbar -> -hbar symmetry of H_J as an exact identity of matrix functions.
/// Requires a = -m hbar (or, for VI, the flipped second branch).
inline SymmetryReport verify_symmetry(PainleveKind kind, const ParamSet& params, unsigned m) {
  validate(kind, params);
  ParamSet neg = params;
  for (int i = 0; i < 4; ++i)
    if (neg.slot(i)) neg.slot(i) = -*neg.slot(i);

  SymmetryReport rep;
  rep.lhs = hbar_flipped_matrix(kind, params, m);
  const RationalMatrixFunction base = build_hamiltonian_matrix(kind, neg, m).matrix;

  std::vector<GaussQ> dg, dg_inv;
  switch (kind) {
    case PainleveKind::VI:
      rep.rhs = base;
      break;
    case PainleveKind::V:
      rep.rhs = base.time_scaled(GaussQ(-1)) * GaussQ(-1);
      break;
    case PainleveKind::II:
    case PainleveKind::III:
      for (unsigned j = 0; j <= m; ++j) dg.push_back(GaussQ(j % 2 ? -1 : 1));
      rep.rhs = base.sandwiched(QMatrix::diagonal(dg), QMatrix::diagonal(dg));
      break;
    case PainleveKind::IV: {
      const GaussQ i = GaussQ::i();
      for (unsigned j = 0; j <= m; ++j) {
        dg.push_back(pow(i, j));
        dg_inv.push_back(GaussQ(1) / pow(i, j));
      }
      rep.rhs = base.time_scaled(i).sandwiched(QMatrix::diagonal(dg), QMatrix::diagonal(dg_inv)) * i;
      break;
    }
  }
  rep.mismatch = first_mismatch(rep.lhs, rep.rhs);
  rep.pass = !rep.mismatch;
  return rep;
}

}  // namespace qpl
