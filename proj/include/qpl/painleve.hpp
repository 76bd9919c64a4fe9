#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpl/errors.hpp"
#include "qpl/rational.hpp"

namespace qpl {

enum class PainleveKind { II, III, IV, V, VI };

inline constexpr PainleveKind kAllKinds[] = {PainleveKind::II, PainleveKind::III, PainleveKind::IV,
                                             PainleveKind::V, PainleveKind::VI};

inline const char* to_string(PainleveKind k) {
  switch (k) {
    case PainleveKind::II: return "II";
    case PainleveKind::III: return "III";
    case PainleveKind::IV: return "IV";
    case PainleveKind::V: return "V";
    case PainleveKind::VI: return "VI";
  }
  return "?";
}

inline PainleveKind parse_kind(std::string_view s) {
  for (auto k : kAllKinds)
    if (s == to_string(k)) return k;
  fail(ErrorCode::ParseError, "unknown kind '" + std::string(s) + "'");
}

/// Number of parameter slots (a, b, c, d) used by each kind.
inline int slot_count(PainleveKind k) {
  switch (k) {
    case PainleveKind::II: return 1;
    case PainleveKind::III:
    case PainleveKind::IV: return 2;
    case PainleveKind::V: return 3;
    case PainleveKind::VI: return 4;
  }
  return 0;
}

struct ParamSet {
  std::optional<GaussQ> a, b, c, d;
  GaussQ hbar{1};

  const std::optional<GaussQ>& slot(int i) const {
    switch (i) {
      case 0: return a;
      case 1: return b;
      case 2: return c;
      default: return d;
    }
  }
  std::optional<GaussQ>& slot(int i) { return const_cast<std::optional<GaussQ>&>(std::as_const(*this).slot(i)); }

  /// Value of a slot that validate() guarantees to be present.
  GaussQ A() const { return a.value_or(GaussQ(0)); }
  GaussQ B() const { return b.value_or(GaussQ(0)); }
  GaussQ C() const { return c.value_or(GaussQ(0)); }
  GaussQ D() const { return d.value_or(GaussQ(0)); }

  std::string str() const {
    std::string out;
    const char* names[] = {"a", "b", "c", "d"};
    for (int i = 0; i < 4; ++i)
      if (slot(i)) out += std::string(names[i]) + "=" + slot(i)->str() + " ";
    return out + "hbar=" + hbar.str();
  }
};

/// Throws BadParamShape unless exactly the kind's slots are present and hbar is nonzero.
inline void validate(PainleveKind kind, const ParamSet& p) {
  if (p.hbar.is_zero()) fail(ErrorCode::BadParamShape, "hbar must be nonzero");
  const int n = slot_count(kind);
  const char* names[] = {"a", "b", "c", "d"};
  for (int i = 0; i < 4; ++i) {
    bool want = i < n;
    if (want && !p.slot(i))
      fail(ErrorCode::BadParamShape, std::string("kind ") + to_string(kind) + " needs parameter " + names[i]);
    if (!want && p.slot(i))
      fail(ErrorCode::BadParamShape, std::string("kind ") + to_string(kind) + " does not use parameter " + names[i]);
  }
}

/// Drops slots the kind does not use and fills missing ones with zero.
inline ParamSet shaped(PainleveKind kind, ParamSet p) {
  const int n = slot_count(kind);
  for (int i = 0; i < 4; ++i) {
    if (i < n && !p.slot(i)) p.slot(i) = GaussQ(0);
    if (i >= n) p.slot(i).reset();
  }
  return p;
}

/// Which form of a kind-IV statement to check: as printed, or the repaired one.
/// Kinds other than IV ignore it.
enum class Statement { Printed, Corrected };

inline const char* to_string(Statement s) { return s == Statement::Printed ? "printed" : "corrected"; }

/// Polynomial state sum_i coeffs[i] x^i, with an optional quadrature error estimate.
struct CoeffVector {
  std::vector<std::complex<double>> coeffs;
  double err = 0.0;

  std::size_t m() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

template <class S>
S scalar_cast(const GaussQ& z);

template <>
inline GaussQ scalar_cast<GaussQ>(const GaussQ& z) {
  return z;
}
template <>
inline std::complex<double> scalar_cast<std::complex<double>>(const GaussQ& z) {
  return z.to_complex();
}

inline bool is_zero_scalar(const GaussQ& z) { return z.is_zero(); }
inline bool is_zero_scalar(const std::complex<double>& z) { return z == std::complex<double>(0.0); }

}  // namespace qpl
