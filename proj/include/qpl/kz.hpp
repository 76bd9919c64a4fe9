#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpl/errors.hpp"
#include "qpl/hamiltonians.hpp"
#include "qpl/matrix.hpp"
#include "qpl/painleve.hpp"
#include "qpl/rational.hpp"
#include "qpl/rational_matrix_function.hpp"
#include "qpl/tpoly.hpp"

namespace qpl {

// ---------------------------------------------------------------------------
// Truncated current algebra sl2 (x) C[z]/z^{r+1}, one copy per site.

enum class GenType { E, F, H };

struct Generator {
  GenType type;
  unsigned power = 0;
  std::size_t site = 0;

  friend bool operator==(const Generator& a, const Generator& b) {
    return a.type == b.type && a.power == b.power && a.site == b.site;
  }
};

inline Generator gen_e(unsigned p, std::size_t site) { return {GenType::E, p, site}; }
inline Generator gen_f(unsigned p, std::size_t site) { return {GenType::F, p, site}; }
inline Generator gen_h(unsigned p, std::size_t site) { return {GenType::H, p, site}; }

inline std::string to_string(const Generator& g) {
  const char* t = g.type == GenType::E ? "e" : g.type == GenType::F ? "f" : "h";
  return std::string(t) + "z" + std::to_string(g.power) + "@" + std::to_string(g.site);
}

struct Site {
  std::string label;
  unsigned rank = 0;
  // Primed sites kill e z^0, f z^0, e z^r, f z^r and have h z^0 acting by zero on the vacuum.
  bool primed = false;
};

class AlgebraSpec {
 public:
  AlgebraSpec() = default;
  explicit AlgebraSpec(std::vector<Site> sites) : sites_(std::move(sites)) {
    for (std::size_t s = 0; s < sites_.size(); ++s)
      for (unsigned p = 0; p <= sites_[s].rank; ++p)
        if (!killed(gen_f(p, s))) lowering_.push_back(gen_f(p, s));
  }

  const std::vector<Site>& sites() const { return sites_; }

  bool killed(const Generator& g) const {
    if (g.site >= sites_.size()) throw std::out_of_range("generator site out of range");
    const Site& s = sites_[g.site];
    if (g.power > s.rank) return true;
    return s.primed && g.type != GenType::H && (g.power == 0 || g.power == s.rank);
  }

  /// Lowering generators in PBW order: by site, then by power.
  const std::vector<Generator>& lowering() const { return lowering_; }

  std::optional<std::size_t> lowering_index(const Generator& g) const {
    for (std::size_t i = 0; i < lowering_.size(); ++i)
      if (lowering_[i] == g) return i;
    return std::nullopt;
  }

  /// [a, b] = coeff * g, or nullopt for zero (different sites, equal types, or truncated away).
  std::optional<std::pair<GaussQ, Generator>> bracket(const Generator& a, const Generator& b) const {
    if (a.site != b.site || a.type == b.type) return std::nullopt;
    const unsigned p = a.power + b.power;
    std::pair<GaussQ, Generator> r{GaussQ(1), gen_h(p, a.site)};
    using T = GenType;
    if (a.type == T::E && b.type == T::F) r = {GaussQ(1), gen_h(p, a.site)};
    else if (a.type == T::F && b.type == T::E) r = {GaussQ(-1), gen_h(p, a.site)};
    else if (a.type == T::H && b.type == T::E) r = {GaussQ(2), gen_e(p, a.site)};
    else if (a.type == T::E && b.type == T::H) r = {GaussQ(-2), gen_e(p, a.site)};
    else if (a.type == T::H && b.type == T::F) r = {GaussQ(-2), gen_f(p, a.site)};
    else r = {GaussQ(2), gen_f(p, a.site)};
    if (killed(r.second)) return std::nullopt;
    return r;
  }

 private:
  std::vector<Site> sites_;
  std::vector<Generator> lowering_;
};

/// gamma[site][p] is the eigenvalue of h z^p on the vacuum; t-dependent entries are polynomials in t.
struct HighestWeight {
  std::vector<std::vector<TPoly>> gamma;

  TPoly value(std::size_t site, unsigned p) const {
    if (site >= gamma.size() || p >= gamma[site].size()) return {};
    return gamma[site][p];
  }
};

/// Throws BadParamShape if the weight does not fit the algebra.
inline void validate(const AlgebraSpec& spec, const HighestWeight& hw) {
  if (hw.gamma.size() != spec.sites().size()) fail(ErrorCode::BadParamShape, "highest weight needs one entry per site");
  for (std::size_t s = 0; s < spec.sites().size(); ++s) {
    const Site& site = spec.sites()[s];
    const auto& g = hw.gamma[s];
    if (g.size() != site.rank + 1)
      fail(ErrorCode::BadParamShape, "site " + site.label + " needs " + std::to_string(site.rank + 1) + " weights");
    if (site.primed && !g[0].is_zero()) fail(ErrorCode::BadParamShape, "primed site " + site.label + " must have gamma_0 = 0");
    if (site.rank > 0 && g[site.rank].is_zero())
      fail(ErrorCode::BadParamShape, "top weight of site " + site.label + " must be nonzero");
  }
}

/// PBW word: exponent of each lowering generator, in AlgebraSpec::lowering() order.
using PbwWord = std::vector<unsigned>;
using ModuleElement = std::map<PbwWord, TPoly>;

namespace detail {

inline void accumulate(ModuleElement& into, const PbwWord& w, const TPoly& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = into.emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  }
}

inline ModuleElement apply_on_word(const AlgebraSpec& spec, const HighestWeight& hw, const Generator& g,
                                   const PbwWord& word) {
  ModuleElement out;
  if (spec.killed(g)) return out;
  if (g.type == GenType::F) {
    PbwWord w = word;
    ++w[*spec.lowering_index(g)];
    out.emplace(std::move(w), TPoly(1));
    return out;
  }
  std::size_t idx = 0;
  while (idx < word.size() && word[idx] == 0) ++idx;
  if (idx == word.size()) {
    if (g.type == GenType::H) accumulate(out, word, hw.value(g.site, g.power));
    return out;
  }
  PbwWord rest = word;
  --rest[idx];
  // g f rest = f (g rest) + [g, f] rest
  for (auto& [w, c] : apply_on_word(spec, hw, g, rest)) {
    PbwWord up = w;
    ++up[idx];
    accumulate(out, up, c);
  }
  if (auto br = spec.bracket(g, spec.lowering()[idx]))
    for (auto& [w, c] : apply_on_word(spec, hw, br->second, rest)) accumulate(out, w, c * TPoly(br->first));
  return out;
}

}  // namespace detail

/// Applies one generator to a module element, normal-ordering it against the vacuum.
inline ModuleElement normal_order_apply(const AlgebraSpec& spec, const HighestWeight& hw, const Generator& g,
                                        const ModuleElement& element) {
  ModuleElement out;
  for (const auto& [w, c] : element) {
    if (w.size() != spec.lowering().size()) fail(ErrorCode::BadParamShape, "PBW word length does not match the algebra");
    for (auto& [w2, c2] : detail::apply_on_word(spec, hw, g, w)) detail::accumulate(out, w2, c * c2);
  }
  return out;
}

/// coeff * g_1 g_2 ... g_k; the rightmost generator acts first.
struct OperatorTerm {
  TPoly coeff;
  std::vector<Generator> word;
};

inline ModuleElement apply_operator(const AlgebraSpec& spec, const HighestWeight& hw,
                                    const std::vector<OperatorTerm>& op, const ModuleElement& element) {
  ModuleElement out;
  for (const auto& term : op) {
    ModuleElement st = element;
    for (auto it = term.word.rbegin(); it != term.word.rend() && !st.empty(); ++it)
      st = normal_order_apply(spec, hw, *it, st);
    for (auto& [w, c] : st) detail::accumulate(out, w, c * term.coeff);
  }
  return out;
}

inline PbwWord vacuum_word(const AlgebraSpec& spec) { return PbwWord(spec.lowering().size(), 0); }

/// Matrix of `op` on the span of `basis`; column j holds the image of basis[j]. NotInSpan otherwise.
inline Matrix<TPoly> operator_matrix(const AlgebraSpec& spec, const HighestWeight& hw,
                                     const std::vector<OperatorTerm>& op, const std::vector<PbwWord>& basis) {
  Matrix<TPoly> M(basis.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (const auto& [w, c] : apply_operator(spec, hw, op, ModuleElement{{basis[j], TPoly(1)}})) {
      std::size_t i = 0;
      while (i < basis.size() && basis[i] != w) ++i;
      if (i == basis.size()) {
        std::string word;
        for (unsigned e : w) word += std::to_string(e) + " ";
        fail(ErrorCode::NotInSpan, "image of basis vector " + std::to_string(j) + " involves word [ " + word + "]");
      }
      M(i, j) = c;
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// Differential realization on polynomials in x1, x2, x3 (three Verma sites).

using TriPoly = std::map<std::array<unsigned, 3>, GaussQ>;

namespace detail {

inline void accumulate(TriPoly& into, const std::array<unsigned, 3>& k, const GaussQ& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = into.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  }
}

inline TriPoly tri_add(TriPoly a, const TriPoly& b, const GaussQ& s = GaussQ(1)) {
  for (const auto& [k, c] : b) accumulate(a, k, c * s);
  return a;
}

inline TriPoly tri_mul(const TriPoly& a, const TriPoly& b) {
  TriPoly r;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) accumulate(r, {ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
  return r;
}

}  // namespace detail

/// e = d/dx_i, h = -2 x_i d/dx_i + gamma_i, f = -x_i^2 d/dx_i + gamma_i x_i.
class ViRealization {
 public:
  explicit ViRealization(std::array<GaussQ, 3> gamma) : gamma_(std::move(gamma)) {}

  const std::array<GaussQ, 3>& gamma() const { return gamma_; }

  TriPoly e(std::size_t i, const TriPoly& p) const {
    TriPoly r;
    for (const auto& [k, c] : p)
      if (k[i] > 0) {
        auto kk = k;
        --kk[i];
        detail::accumulate(r, kk, c * GaussQ(static_cast<long>(k[i])));
      }
    return r;
  }
  TriPoly h(std::size_t i, const TriPoly& p) const {
    TriPoly r;
    for (const auto& [k, c] : p) detail::accumulate(r, k, c * (gamma_[i] - GaussQ(2L * k[i])));
    return r;
  }
  TriPoly f(std::size_t i, const TriPoly& p) const {
    TriPoly r;
    for (const auto& [k, c] : p) {
      auto kk = k;
      ++kk[i];
      detail::accumulate(r, kk, c * (gamma_[i] - GaussQ(static_cast<long>(k[i]))));
    }
    return r;
  }

  /// e_i f_j + f_i e_j + h_i h_j / 2.
  TriPoly omega(std::size_t i, std::size_t j, const TriPoly& p) const {
    TriPoly r = e(i, f(j, p));
    r = detail::tri_add(r, f(i, e(j, p)));
    return detail::tri_add(r, h(i, h(j, p)), GaussQ::frac(1, 2));
  }

 private:
  std::array<GaussQ, 3> gamma_;
};

/// (x1 - x2)^i (x1 - x3)^(m-i), i = 0..m.
inline std::vector<TriPoly> vi_weight_basis(unsigned m) {
  const TriPoly d12{{{1, 0, 0}, GaussQ(1)}, {{0, 1, 0}, GaussQ(-1)}};
  const TriPoly d13{{{1, 0, 0}, GaussQ(1)}, {{0, 0, 1}, GaussQ(-1)}};
  std::vector<TriPoly> out;
  for (unsigned i = 0; i <= m; ++i) {
    TriPoly p{{{0, 0, 0}, GaussQ(1)}};
    for (unsigned k = 0; k < i; ++k) p = detail::tri_mul(p, d12);
    for (unsigned k = i; k < m; ++k) p = detail::tri_mul(p, d13);
    out.push_back(std::move(p));
  }
  return out;
}

/// Coordinates of p in vi_weight_basis(m); NotInSpan if p is not in that span.
inline std::vector<GaussQ> vi_coordinates(const TriPoly& p, unsigned m) {
  // Restricting to x1 = 0, x2 = -y, x3 = -z sends the i-th basis vector to y^i z^(m-i).
  std::vector<GaussQ> c(m + 1);
  const GaussQ sign = m % 2 ? GaussQ(-1) : GaussQ(1);
  for (const auto& [k, v] : p)
    if (k[0] == 0 && k[1] + k[2] == m) c[k[1]] = v * sign;
  TriPoly back;
  const auto basis = vi_weight_basis(m);
  for (unsigned i = 0; i <= m; ++i) back = detail::tri_add(back, basis[i], c[i]);
  if (back != p) fail(ErrorCode::NotInSpan, "polynomial is not in the span of the degree-" + std::to_string(m) + " basis");
  return c;
}

/// Matrix of Omega^(i,j) on vi_weight_basis(m).
inline QMatrix vi_omega_matrix(const ViRealization& R, std::size_t i, std::size_t j, unsigned m) {
  QMatrix M(m + 1, m + 1);
  const auto basis = vi_weight_basis(m);
  for (unsigned col = 0; col <= m; ++col) {
    auto c = vi_coordinates(R.omega(i, j, basis[col]), m);
    for (unsigned row = 0; row <= m; ++row) M(row, col) = c[row];
  }
  return M;
}

/// Compares Omega^(1,2), Omega^(2,3) in the differential realization against the abstract
/// Verma-module engine, identifying x_i^n with f_i^n 1 / (gamma_i (gamma_i - 1) ... (gamma_i - n + 1)).
/// Needs the falling factorials up to degree m+1 to be nonzero.
inline std::optional<std::string> vi_engine_crosscheck(const std::array<GaussQ, 3>& gamma, unsigned m) {
  const AlgebraSpec spec({{"1", 0, false}, {"2", 0, false}, {"3", 0, false}});
  HighestWeight hw{{{gamma[0]}, {gamma[1]}, {gamma[2]}}};
  const ViRealization R(gamma);
  std::array<std::vector<GaussQ>, 3> falling;
  for (std::size_t s = 0; s < 3; ++s) {
    falling[s].push_back(GaussQ(1));
    for (unsigned n = 1; n <= m + 1; ++n) {
      falling[s].push_back(falling[s].back() * (gamma[s] - GaussQ(static_cast<long>(n) - 1)));
      if (falling[s].back().is_zero()) fail(ErrorCode::BadParamShape, "cross-check needs non-integer weights");
    }
  }
  auto to_module = [&](const TriPoly& p) {
    ModuleElement el;
    for (const auto& [k, c] : p) {
      GaussQ s = c / (falling[0][k[0]] * falling[1][k[1]] * falling[2][k[2]]);
      detail::accumulate(el, PbwWord{k[0], k[1], k[2]}, TPoly(s));
    }
    return el;
  };
  auto omega_terms = [](std::size_t i, std::size_t j) {
    return std::vector<OperatorTerm>{{TPoly(1), {gen_e(0, i), gen_f(0, j)}},
                                     {TPoly(1), {gen_f(0, i), gen_e(0, j)}},
                                     {TPoly(GaussQ::frac(1, 2)), {gen_h(0, i), gen_h(0, j)}}};
  };
  const std::array<std::pair<std::size_t, std::size_t>, 2> pairs{{{0, 1}, {1, 2}}};
  const auto basis = vi_weight_basis(m);
  for (const auto& [i, j] : pairs)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      ModuleElement lhs = to_module(R.omega(i, j, basis[b]));
      ModuleElement rhs = apply_operator(spec, hw, omega_terms(i, j), to_module(basis[b]));
      if (lhs != rhs)
        return "Omega(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") differs on basis vector " +
               std::to_string(b);
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Per-case models.

/// Weights of the three VI sites for parameters on either invariance branch.
inline std::array<GaussQ, 3> vi_weights(const ParamSet& params, unsigned m) {
  const GaussQ h = params.hbar, mm(static_cast<long>(m));
  const GaussQ a = params.A(), b = params.B(), c = params.C(), d = params.D();
  return {mm - GaussQ(1) - c / h, (a + b + c + d + (GaussQ(1) - mm) * h) / h, mm - GaussQ(1) - (a + b) / h};
}

/// Confluent KZ operator for kinds II..V on its weight basis.
struct KZModel {
  PainleveKind kind = PainleveKind::V;
  unsigned m = 0;
  AlgebraSpec algebra;
  HighestWeight weight;
  std::vector<OperatorTerm> op;
  std::vector<PbwWord> basis;
  /// Change of basis from weight-basis coordinates to {x^i} coordinates.
  QMatrix t_map;
};

namespace detail {

inline GaussQ binomial(unsigned n, unsigned k) {
  if (k > n) return GaussQ(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return GaussQ(Rational(r));
}

inline PbwWord word_of(const AlgebraSpec& spec, const std::vector<std::pair<Generator, unsigned>>& powers) {
  PbwWord w = vacuum_word(spec);
  for (const auto& [g, n] : powers) w[*spec.lowering_index(g)] += n;
  return w;
}

// Terms of -(1/4) h (h + 2) with h = sum of the given generators.
inline void push_quarter_shift(std::vector<OperatorTerm>& op, const std::vector<Generator>& hs) {
  const TPoly q(GaussQ::frac(-1, 4)), half(GaussQ::frac(-1, 2));
  for (const auto& a : hs) {
    for (const auto& b : hs) op.push_back({q, {a, b}});
    op.push_back({half, {a}});
  }
}

}  // namespace detail

inline QMatrix t_map(PainleveKind kind, unsigned m) {
  if (kind != PainleveKind::V) return QMatrix::identity(m + 1);
  // (f1)^i (f1 + f2)^(m-i) 1 = sum_n C(m-i, n-i) (f1)^n (f2)^(m-n) 1.
  QMatrix P(m + 1, m + 1);
  for (unsigned i = 0; i <= m; ++i)
    for (unsigned n = i; n <= m; ++n) P(n, i) = detail::binomial(m - i, n - i);
  return inverse(P);
}

/// Builds the confluent KZ operator with its weights read off the parameters.
/// For IV, Statement::Corrected flips the signs of both irregular weights at infinity.
inline KZModel kz_model(PainleveKind kind, const ParamSet& params, unsigned m,
                        Statement statement = Statement::Printed) {
  if (kind == PainleveKind::VI) fail(ErrorCode::BadParamShape, "kind VI uses the differential realization");
  const GaussQ h = params.hbar;
  if (h.is_zero()) fail(ErrorCode::BadParamShape, "hbar must be nonzero");
  const GaussQ b = params.B(), c = params.C(), mm(static_cast<long>(m));
  const TPoly t_over_h = TPoly::t() * TPoly(GaussQ(1) / h);
  const TPoly half(GaussQ::frac(1, 2)), quarter(GaussQ::frac(1, 4));

  KZModel M;
  M.kind = kind;
  M.m = m;
  M.t_map = t_map(kind, m);
  switch (kind) {
    case PainleveKind::V: {
      M.algebra = AlgebraSpec({{"1", 0, false}, {"2", 0, false}, {"inf", 1, true}});
      M.weight.gamma = {{TPoly(b / h)}, {TPoly(c / h)}, {TPoly(), t_over_h}};
      const TPoly g2 = M.weight.value(1, 0), ginf = M.weight.value(2, 1);
      const auto e1 = gen_e(0, 0), f1 = gen_f(0, 0), h1 = gen_h(0, 0);
      const auto e2 = gen_e(0, 1), f2 = gen_f(0, 1), h2 = gen_h(0, 1);
      M.op = {{-half * ginf, {h2}}, {TPoly(1), {e1, f2}}, {TPoly(1), {f1, e2}}, {half, {h1, h2}},
              {half, {e1, f1}},     {half, {f1, e1}},     {quarter, {h1, h1}}, {half, {e2, f2}},
              {half, {f2, e2}},     {quarter, {h2, h2}},  {half * g2 * ginf, {}}};
      detail::push_quarter_shift(M.op, {h1, h2});
      for (unsigned i = 0; i <= m; ++i) M.basis.push_back(detail::word_of(M.algebra, {{f1, i}, {f2, m - i}}));
      break;
    }
    case PainleveKind::IV: {
      M.algebra = AlgebraSpec({{"1", 0, false}, {"inf", 2, true}});
      const GaussQ s = statement == Statement::Printed ? GaussQ(1) : GaussQ(-1);
      M.weight.gamma = {{TPoly(b / h)}, {TPoly(), -t_over_h * TPoly(s), TPoly(s / h)}};
      const TPoly g1 = M.weight.value(1, 1);
      const auto e1 = gen_e(0, 0), f1 = gen_f(0, 0), h1 = gen_h(0, 0);
      const auto ez = gen_e(1, 1), fz = gen_f(1, 1), hinf = gen_h(0, 1);
      M.op = {{TPoly(-1), {e1, fz}}, {TPoly(1), {f1, ez}}, {half * g1, {h1}}, {half * g1, {h1}}, {half * g1, {hinf}}};
      for (unsigned i = 0; i <= m; ++i) M.basis.push_back(detail::word_of(M.algebra, {{f1, i}, {fz, m - i}}));
      break;
    }
    case PainleveKind::III: {
      M.algebra = AlgebraSpec({{"1", 1, false}, {"inf", 1, true}});
      M.weight.gamma = {{TPoly(GaussQ(2) * (mm - GaussQ(1)) - b / h), TPoly(GaussQ(1) / h)}, {TPoly(), -t_over_h}};
      const TPoly g1 = M.weight.value(0, 1), ginf = M.weight.value(1, 1);
      const auto e = gen_e(0, 0), f = gen_f(0, 0), h1 = gen_h(0, 0), hz = gen_h(1, 0), fz = gen_f(1, 0);
      M.op = {{half, {e, f}}, {half, {f, e}}, {quarter, {h1, h1}}, {-half * ginf, {hz}}, {half * g1 * ginf, {}}};
      detail::push_quarter_shift(M.op, {h1, gen_h(0, 1)});
      for (unsigned i = 0; i <= m; ++i) M.basis.push_back(detail::word_of(M.algebra, {{f, i}, {fz, m - i}}));
      break;
    }
    case PainleveKind::II: {
      M.algebra = AlgebraSpec({{"inf", 3, true}});
      M.weight.gamma = {{TPoly(), t_over_h, TPoly(), TPoly(GaussQ(2) / h)}};
      const TPoly g1 = M.weight.value(0, 1), g2 = M.weight.value(0, 2);
      const auto ez = gen_e(1, 0), fz = gen_f(1, 0), hz = gen_h(1, 0), fz2 = gen_f(2, 0), h0 = gen_h(0, 0);
      M.op = {{half, {ez, fz}},
              {half, {fz, ez}},
              {quarter, {hz, hz}},
              {-quarter * g1 * g1 - half * g2, {}},
              {half * g2, {h0}}};
      for (unsigned i = 0; i <= m; ++i) M.basis.push_back(detail::word_of(M.algebra, {{fz, i}, {fz2, m - i}}));
      break;
    }
    case PainleveKind::VI: break;
  }
  validate(M.algebra, M.weight);
  return M;
}

namespace detail {

inline RationalMatrixFunction from_tpoly_matrix(const Matrix<TPoly>& A) {
  RationalMatrixFunction r(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const TPoly& p = A(i, j);
      if (p.degree() > 2) fail(ErrorCode::BadParamShape, "KZ matrix entry of degree > 2 in t");
      for (int k = 0; k <= p.degree(); ++k) r.component(k)(i, j) = p.coeff(static_cast<std::size_t>(k));
    }
  return r;
}

// t * F(t); F must have no pole at 1 and no t^2 term.
inline RationalMatrixFunction times_t(const RationalMatrixFunction& F) {
  if (F.has_pole_at_1() || !F.M2.is_zero()) throw std::invalid_argument("times_t: unsupported shape");
  RationalMatrixFunction r(F.size());
  r.M0 = F.R0;
  r.M1 = F.M0;
  r.M2 = F.M1;
  return r;
}

}  // namespace detail

/// Matrix of the KZ operator in {x^i} coordinates (T K T^-1).
inline RationalMatrixFunction hamiltonian_matrix_kz(const KZModel& model) {
  const auto K = detail::from_tpoly_matrix(operator_matrix(model.algebra, model.weight, model.op, model.basis));
  return K.sandwiched(model.t_map, inverse(model.t_map));
}

/// Omega12/t + Omega23/(t-1) on vi_weight_basis(m).
inline RationalMatrixFunction hamiltonian_matrix_kz_vi(const std::array<GaussQ, 3>& gamma, unsigned m) {
  const ViRealization R(gamma);
  RationalMatrixFunction H(m + 1);
  H.R0 = vi_omega_matrix(R, 0, 1, m);
  H.R1 = vi_omega_matrix(R, 1, 2, m);
  return H;
}

inline RationalMatrixFunction hamiltonian_matrix_kz(PainleveKind kind, const ParamSet& params, unsigned m,
                                                    Statement statement = Statement::Printed) {
  if (kind == PainleveKind::VI) return hamiltonian_matrix_kz_vi(vi_weights(params, m), m);
  return hamiltonian_matrix_kz(kz_model(kind, params, m, statement));
}

// ---------------------------------------------------------------------------
// Identity checks.

struct KZReport {
  PainleveKind kind = PainleveKind::V;
  unsigned m = 0;
  ParamSet params;
  Statement statement = Statement::Printed;
  bool pass = false;
  /// VI only: the scalars (s1, s2) of the residual gauge s1/t + s2/(t-1).
  std::optional<std::array<GaussQ, 2>> gauge;
  std::optional<Mismatch> first_mismatch;
  RationalMatrixFunction lhs, rhs;
};

namespace detail {

inline ParamSet kz_params(PainleveKind kind, ParamSet params, unsigned m) {
  const GaussQ am = GaussQ(static_cast<long>(m)) * params.hbar;
  if (kind != PainleveKind::VI) {
    if (params.a && *params.a != am)
      fail(ErrorCode::BadParamShape, "the KZ identity for this kind needs a = m*hbar (= " + am.str() + ")");
    params.a = am;
  }
  validate(kind, params);
  if (!invariance_condition(kind, params, m).holds)
    fail(ErrorCode::InvarianceViolated, "parameters are on neither invariance branch");
  return params;
}

}  // namespace detail

/// Checks the KZ/Painleve correspondence as an identity of rational matrix functions of t.
/// Kinds II..V: lhs = KZ operator in x-coordinates, rhs = the scaled Painleve Hamiltonian, exact equality.
/// Kind VI: lhs = hbar^2 H_KZ, rhs = H_VI + a(b+c+d+hbar)/(t-1); their difference must be
/// (s1/t + s2/(t-1)) Id, otherwise GaugeNotScalar is thrown.
inline KZReport verify_theorem(PainleveKind kind, const ParamSet& input, unsigned m,
                               Statement statement = Statement::Printed) {
  KZReport rep;
  rep.kind = kind;
  rep.m = m;
  rep.statement = statement;
  rep.params = detail::kz_params(kind, input, m);
  const ParamSet& p = rep.params;
  const GaussQ h = p.hbar, inv_h2 = GaussQ(1) / (h * h);
  const RationalMatrixFunction H = build_hamiltonian_matrix(kind, p, m).matrix;
  const std::size_t n = m + 1;
  const QMatrix I = QMatrix::identity(n);

  switch (kind) {
    case PainleveKind::VI: {
      rep.lhs = hamiltonian_matrix_kz_vi(vi_weights(p, m), m) * (h * h);
      rep.rhs = H;
      rep.rhs.R1 += I * (p.A() * (p.B() + p.C() + p.D() + h));
      const RationalMatrixFunction diff = rep.lhs - rep.rhs;
      const GaussQ s1 = diff.R0(0, 0), s2 = diff.R1(0, 0);
      RationalMatrixFunction gauge(n);
      gauge.R0 = I * s1;
      gauge.R1 = I * s2;
      if (auto mm = first_mismatch(diff, gauge))
        fail(ErrorCode::GaugeNotScalar, "VI difference is not scalar: " + mm->str());
      rep.gauge = std::array<GaussQ, 2>{s1, s2};
      rep.pass = true;
      return rep;
    }
    case PainleveKind::V:
    case PainleveKind::III:
      rep.rhs = detail::times_t(H) * inv_h2;
      break;
    case PainleveKind::IV:
      rep.rhs = H * inv_h2;
      if (statement == Statement::Corrected) rep.rhs.M1 -= I * (p.B() * inv_h2);
      break;
    case PainleveKind::II:
      rep.rhs = H * (GaussQ(2) * inv_h2);
      break;
  }
  rep.lhs = hamiltonian_matrix_kz(kz_model(kind, p, m, statement));
  rep.first_mismatch = first_mismatch(rep.lhs, rep.rhs);
  rep.pass = !rep.first_mismatch;
  return rep;
}

// ---------------------------------------------------------------------------
// Transport of a Painleve VI solution to a KZ solution.

struct KZSample {
  std::complex<double> t;
  Eigen::VectorXcd psi;
  Eigen::VectorXcd dpsi;
  double residual = 0.0;
};

struct KZTransport {
  /// Exponents of t and t-1 in the scalar prefactor.
  std::complex<double> alpha, beta;
  std::vector<KZSample> samples;
  double max_residual = 0.0;
};

/// Psi = t^alpha (t-1)^beta Phi (the basis change is the identity for VI), with alpha, beta fixed by the
/// gauge scalars so that kappa dPsi/dt = H_KZ Psi whenever hbar dPhi/dt = H_VI Phi and kappa = 1/hbar.
/// phi/dphi are the Painleve state and its t-derivative at each t. Residual is
/// |kappa dPsi - H_KZ Psi| / |H_KZ Psi| (principal branches of the powers).
inline KZTransport kz_solution_transport(const ParamSet& params, unsigned m, std::complex<double> kappa,
                                         const std::vector<std::complex<double>>& ts,
                                         const std::vector<Eigen::VectorXcd>& phi,
                                         const std::vector<Eigen::VectorXcd>& dphi) {
  if (ts.size() != phi.size() || ts.size() != dphi.size())
    fail(ErrorCode::BadParamShape, "transport needs matching t, phi and dphi lists");
  if (kappa == 0.0) fail(ErrorCode::BadParamShape, "kappa must be nonzero");
  const KZReport rep = verify_theorem(PainleveKind::VI, params, m);
  const ParamSet& p = rep.params;
  const std::complex<double> h2 = (p.hbar * p.hbar).to_complex();
  const std::complex<double> shift = (p.A() * (p.B() + p.C() + p.D() + p.hbar)).to_complex();
  KZTransport out;
  out.alpha = (*rep.gauge)[0].to_complex() / (h2 * kappa);
  out.beta = ((*rep.gauge)[1].to_complex() + shift) / (h2 * kappa);
  const NumericMatrixFunction H(hamiltonian_matrix_kz_vi(vi_weights(p, m), m));
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto t = ts[k];
    if (t == 0.0 || t == 1.0) fail(ErrorCode::PoleAtT, "transport evaluated at a pole");
    if (phi[k].size() != static_cast<Eigen::Index>(m + 1) || dphi[k].size() != phi[k].size())
      fail(ErrorCode::BadParamShape, "state length must be m+1");
    const std::complex<double> pre = std::pow(t, out.alpha) * std::pow(t - 1.0, out.beta);
    const std::complex<double> logd = out.alpha / t + out.beta / (t - 1.0);
    KZSample s{t, pre * phi[k], pre * (dphi[k] + logd * phi[k]), 0.0};
    const Eigen::VectorXcd hp = H(t) * s.psi;
    const double scale = hp.norm() > 0.0 ? hp.norm() : 1.0;
    s.residual = (kappa * s.dpsi - hp).norm() / scale;
    out.max_residual = std::max(out.max_residual, s.residual);
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace qpl
