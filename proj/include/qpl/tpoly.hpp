#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qpl/rational.hpp"

namespace qpl {

/// Univariate polynomial in t with Gaussian-rational coefficients; coeffs_[k] multiplies t^k.
class TPoly {
 public:
  TPoly() = default;
  TPoly(const GaussQ& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) coeffs_.push_back(c);
  }
  TPoly(long c) : TPoly(GaussQ(c)) {}  // NOLINT(google-explicit-constructor)
  TPoly(int c) : TPoly(GaussQ(c)) {}   // NOLINT(google-explicit-constructor)
  explicit TPoly(std::vector<GaussQ> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static TPoly t() { return TPoly(std::vector<GaussQ>{GaussQ(0), GaussQ(1)}); }
  static TPoly monomial(const GaussQ& c, std::size_t k) {
    std::vector<GaussQ> v(k + 1);
    v[k] = c;
    return TPoly(std::move(v));
  }

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  GaussQ coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : GaussQ(0); }
  const std::vector<GaussQ>& coeffs() const { return coeffs_; }
  GaussQ lead() const { return coeffs_.empty() ? GaussQ(0) : coeffs_.back(); }

  GaussQ operator()(const GaussQ& t) const {
    GaussQ r(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * t + *it;
    return r;
  }
  std::complex<double> operator()(std::complex<double> t) const {
    std::complex<double> r(0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * t + it->to_complex();
    return r;
  }

  TPoly derivative() const {
    std::vector<GaussQ> d;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * GaussQ(static_cast<long>(k)));
    return TPoly(std::move(d));
  }

  /// p(s*t) as a polynomial in t.
  TPoly scaled(const GaussQ& s) const {
    std::vector<GaussQ> v(coeffs_);
    GaussQ p(1);
    for (auto& c : v) {
      c *= p;
      p *= s;
    }
    return TPoly(std::move(v));
  }

  TPoly& operator+=(const TPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  TPoly& operator-=(const TPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  TPoly& operator*=(const TPoly& o) { return *this = *this * o; }

  friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
  friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }
  friend TPoly operator-(TPoly a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend TPoly operator*(const TPoly& a, const TPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<GaussQ> r(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return TPoly(std::move(r));
  }
  /// Division by a nonzero constant polynomial only; general division goes through divmod.
  TPoly& operator/=(const TPoly& o) {
    if (o.degree() != 0) throw std::domain_error("TPoly division by non-constant");
    for (auto& c : coeffs_) c /= o.coeffs_[0];
    return *this;
  }
  friend TPoly operator/(TPoly a, const TPoly& b) { return a /= b; }

  friend bool operator==(const TPoly& a, const TPoly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const TPoly& a, const TPoly& b) { return !(a == b); }

  /// Euclidean division: a = q*b + r with deg r < deg b.
  friend std::pair<TPoly, TPoly> divmod(const TPoly& a, const TPoly& b) {
    if (b.is_zero()) throw std::domain_error("TPoly division by zero");
    TPoly r = a;
    std::vector<GaussQ> q(a.coeffs_.size() >= b.coeffs_.size() ? a.coeffs_.size() - b.coeffs_.size() + 1 : 0);
    while (!r.is_zero() && r.degree() >= b.degree()) {
      std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
      GaussQ f = r.lead() / b.lead();
      q[shift] += f;
      r -= monomial(f, shift) * b;
    }
    return {TPoly(std::move(q)), r};
  }

  TPoly monic() const {
    if (is_zero()) return *this;
    TPoly r = *this;
    GaussQ l = lead();
    for (auto& c : r.coeffs_) c /= l;
    return r;
  }

  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      const GaussQ& c = coeffs_[k];
      if (c.is_zero()) continue;
      std::string cs = c.str();
      if (!c.is_real() && sgn(c.re()) != 0) cs = "(" + cs + ")";
      std::string term;
      if (k == 0) {
        term = cs;
      } else {
        std::string mon = k == 1 ? var : var + "^" + std::to_string(k);
        if (c == GaussQ(1)) term = mon;
        else if (c == GaussQ(-1)) term = "-" + mon;
        else term = cs + "*" + mon;
      }
      if (out.empty()) out = term;
      else if (term[0] == '-') out += term;
      else out += "+" + term;
    }
    return out;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<GaussQ> coeffs_;
};

inline TPoly gcd(TPoly a, TPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Exact rational function num/den in t, kept with monic denominator and no common factor.
class RatFunc {
 public:
  RatFunc() : num_(), den_(1) {}
  RatFunc(const TPoly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const GaussQ& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(long c) : RatFunc(GaussQ(c)) {}         // NOLINT(google-explicit-constructor)
  RatFunc(TPoly num, TPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  const TPoly& num() const { return num_; }
  const TPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  RatFunc derivative() const { return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_}; }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RatFunc operator-(const RatFunc& a) { return {-a.num_, a.den_}; }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("RatFunc division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  std::complex<double> operator()(std::complex<double> t) const { return num_(t) / den_(t); }
  GaussQ operator()(const GaussQ& t) const { return num_(t) / den_(t); }

  std::string str() const {
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("RatFunc with zero denominator");
    if (num_.is_zero()) {
      den_ = TPoly(1);
      return;
    }
    TPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
    GaussQ l = den_.lead();
    num_ /= TPoly(l);
    den_ /= TPoly(l);
  }

  TPoly num_;
  TPoly den_;
};

}  // namespace qpl
