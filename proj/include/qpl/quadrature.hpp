#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <iterator>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace qpl {

struct GaussLegendre {
  std::vector<double> x;  // nodes on [-1, 1], ascending
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussLegendre gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre needs n >= 1");
  GaussLegendre r;
  r.x.resize(n);
  r.w.resize(n);
  const double nd = static_cast<double>(n);
  // P_n(z) and P_n'(z) by the three-term recurrence.
  auto legendre = [n, nd](double z) {
    double p0 = 1.0, p1 = z;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    return std::pair{p1, nd * (z * p1 - p0) / (z * z - 1.0)};
  };
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(z);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double dp = legendre(z).second;
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    r.w[i] = wi;
    r.w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

/// Pairwise (cascade) summation over [first, last); fixed order, so results are reproducible.
template <class It>
auto pairwise_sum(It first, It last) -> std::decay_t<decltype(*first)> {
  using T = std::decay_t<decltype(*first)>;
  const auto n = std::distance(first, last);
  if (n <= 0) return T(0);
  if (n <= 8) {
    T s(0);
    for (; first != last; ++first) s += *first;
    return s;
  }
  It mid = first;
  std::advance(mid, n / 2);
  return pairwise_sum(first, mid) + pairwise_sum(mid, last);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.begin(), v.end());
}

/// Points and weights of a 1-D contour rule: integral of g(u) du ~ sum_k w[k] g(u[k]).
/// Each point is also kept as base + off with off exact, so that distances to a panel's endpoint
/// do not suffer cancellation.
struct ContourRule {
  std::vector<std::complex<double>> u;
  std::vector<std::complex<double>> w;
  std::vector<std::complex<double>> base;
  std::vector<std::complex<double>> off;

  std::size_t size() const { return u.size(); }
  void push(std::complex<double> b, std::complex<double> o, std::complex<double> weight) {
    base.push_back(b);
    off.push_back(o);
    u.push_back(b + o);
    w.push_back(weight);
  }
  void append(const ContourRule& o) {
    u.insert(u.end(), o.u.begin(), o.u.end());
    w.insert(w.end(), o.w.begin(), o.w.end());
    base.insert(base.end(), o.base.begin(), o.base.end());
    off.insert(off.end(), o.off.begin(), o.off.end());
  }
};

/// Rule on the straight segment p -> q.
inline ContourRule linear_panel(std::complex<double> p, std::complex<double> q, std::size_t n) {
  const auto gl = gauss_legendre(n);
  ContourRule r;
  const auto half = 0.5 * (q - p);
  for (std::size_t k = 0; k < n; ++k) r.push(p, half * (gl.x[k] + 1.0), half * gl.w[k]);
  return r;
}

/// Rule on p -> q mapped u = p + (q - p) s^sigma, s in [0, 1]; clusters nodes at p.
inline ContourRule graded_panel(std::complex<double> p, std::complex<double> q, int sigma, std::size_t n) {
  const auto gl = gauss_legendre(n);
  ContourRule r;
  const auto len = q - p;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = 0.5 * (gl.x[k] + 1.0);
    const double ws = 0.5 * gl.w[k];
    r.push(p, len * std::pow(s, sigma), len * (static_cast<double>(sigma) * std::pow(s, sigma - 1) * ws));
  }
  return r;
}

}  // namespace qpl
