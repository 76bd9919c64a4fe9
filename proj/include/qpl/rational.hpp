#pragma once

#include <gmpxx.h>

#include <cctype>
#include <complex>
#include <ostream>
#include <string>
#include <string_view>

#include "qpl/errors.hpp"

namespace qpl {

using Rational = mpq_class;

/// Exact complex number with arbitrary-precision rational parts.
class GaussQ {
 public:
  GaussQ() = default;
  GaussQ(long v) : re_(v) {}                // NOLINT(google-explicit-constructor)
  GaussQ(int v) : re_(v) {}                 // NOLINT(google-explicit-constructor)
  GaussQ(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  GaussQ(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussQ frac(long num, long den, long inum = 0, long iden = 1) {
    Rational re(num, den), im(inum, iden);
    re.canonicalize();
    im.canonicalize();
    return {re, im};
  }
  static GaussQ i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_integer() const { return is_real() && re_.get_den() == 1; }

  GaussQ conj() const { return {re_, -im_}; }
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  std::complex<double> to_complex() const { return {to_double(re_), to_double(im_)}; }

  /// Correctly rounded when numerator and denominator are exact doubles (get_d truncates).
  static double to_double(const Rational& q) {
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 53) return n.get_d() / d.get_d();
    return q.get_d();
  }

  GaussQ& operator+=(const GaussQ& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussQ& operator-=(const GaussQ& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussQ& operator*=(const GaussQ& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussQ& operator/=(const GaussQ& o) {
    Rational n = o.norm2();
    if (sgn(n) == 0) throw std::domain_error("GaussQ division by zero");
    Rational r = (re_ * o.re_ + im_ * o.im_) / n;
    Rational i = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }

  friend GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
  friend GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
  friend GaussQ operator*(GaussQ a, const GaussQ& b) { return a *= b; }
  friend GaussQ operator/(GaussQ a, const GaussQ& b) { return a /= b; }
  friend GaussQ operator-(const GaussQ& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const GaussQ& a, const GaussQ& b) { return !(a == b); }

  /// Canonical text form: "p/q", "r/s*i", or "p/q+r/s*i".
  std::string str() const {
    if (sgn(im_) == 0) return re_.get_str();
    std::string im_part;
    if (im_ == 1) {
      im_part = "i";
    } else if (im_ == -1) {
      im_part = "-i";
    } else {
      im_part = im_.get_str() + "*i";
    }
    if (sgn(re_) == 0) return im_part;
    if (im_part[0] == '-') return re_.get_str() + im_part;
    return re_.get_str() + "+" + im_part;
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussQ& z) { return os << z.str(); }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline GaussQ pow(const GaussQ& z, unsigned n) {
  GaussQ r(1), b = z;
  while (n) {
    if (n & 1U) r *= b;
    b *= b;
    n >>= 1U;
  }
  return r;
}

namespace detail {

// Parses an unsigned rational literal: "7", "7/3", or a decimal "0.25", "1e-3".
inline Rational parse_unsigned_rational(std::string_view s) {
  if (s.empty()) fail(ErrorCode::ParseError, "empty number");
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    auto num = parse_unsigned_rational(s.substr(0, slash));
    auto den = parse_unsigned_rational(s.substr(slash + 1));
    if (sgn(den) == 0) fail(ErrorCode::ParseError, "zero denominator");
    return num / den;
  }
  std::string mant(s);
  long exp10 = 0;
  auto epos = mant.find_first_of("eE");
  if (epos != std::string::npos) {
    try {
      std::size_t used = 0;
      exp10 = std::stol(mant.substr(epos + 1), &used);
      if (used != mant.size() - epos - 1) fail(ErrorCode::ParseError, "bad exponent");
    } catch (const std::logic_error&) {
      fail(ErrorCode::ParseError, "bad exponent in '" + mant + "'");
    }
    mant.resize(epos);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (char ch : mant) {
    if (ch == '.') {
      if (seen_dot) fail(ErrorCode::ParseError, "two decimal points");
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_dot) ++frac_digits;
    } else {
      fail(ErrorCode::ParseError, std::string("unexpected character '") + ch + "'");
    }
  }
  if (digits.empty()) fail(ErrorCode::ParseError, "no digits");
  mpz_class num(digits, 10);
  long shift = exp10 - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift < 0 ? Rational(num, scale) : Rational(num * scale);
  r.canonicalize();
  return r;
}

}  // namespace detail

/// Parses "p/q", "p/q+r/s*i", "r/s*i", "i", "-2*i", "0.5", "1.5-0.5i".
inline GaussQ parse_gauss(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) fail(ErrorCode::ParseError, "empty scalar");

  GaussQ out;
  std::size_t pos = 0;
  int terms = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (terms > 0) {
      fail(ErrorCode::ParseError, "expected '+' or '-' in '" + s + "'");
    }
    // A term ends at the next sign that does not follow an exponent marker.
    std::size_t end = pos;
    while (end < s.size()) {
      char ch = s[end];
      if ((ch == '+' || ch == '-') && end > pos && s[end - 1] != 'e' && s[end - 1] != 'E') break;
      ++end;
    }
    std::string_view term(s.data() + pos, end - pos);
    if (term.empty()) fail(ErrorCode::ParseError, "dangling sign in '" + s + "'");
    bool imag = false;
    if (term.back() == 'i' || term.back() == 'I') {
      imag = true;
      term.remove_suffix(1);
      if (!term.empty() && term.back() == '*') term.remove_suffix(1);
    }
    Rational value = term.empty() ? Rational(1) : detail::parse_unsigned_rational(term);
    if (sign < 0) value = -value;
    out += imag ? GaussQ(Rational(0), value) : GaussQ(value);
    pos = end;
    if (++terms > 2) fail(ErrorCode::ParseError, "too many terms in '" + s + "'");
  }
  return out;
}

}  // namespace qpl
