#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qpl/errors.hpp"
#include "qpl/hamiltonians.hpp"
#include "qpl/painleve.hpp"
#include "qpl/rational_matrix_function.hpp"
#include "qpl/tpoly.hpp"

namespace qpl {

using cvec = Eigen::VectorXcd;

/// hbar dphi/dt = M(t) phi.
class LinearSystem {
 public:
  LinearSystem(RationalMatrixFunction matrix, std::complex<double> hbar)
      : matrix_(std::move(matrix)), numeric_(matrix_), hbar_(hbar) {
    if (hbar_ == 0.0) fail(ErrorCode::BadParamShape, "hbar must be nonzero");
  }
  LinearSystem(RationalMatrixFunction matrix, const GaussQ& hbar) : LinearSystem(std::move(matrix), hbar.to_complex()) {}

  const RationalMatrixFunction& matrix() const { return matrix_; }
  const NumericMatrixFunction& numeric() const { return numeric_; }
  std::complex<double> hbar() const { return hbar_; }
  std::size_t size() const { return matrix_.size(); }

  /// Points where the matrix has poles, a subset of {0, 1}.
  std::vector<std::complex<double>> singularities() const {
    std::vector<std::complex<double>> s;
    if (numeric_.has_pole_at_0()) s.emplace_back(0.0);
    if (numeric_.has_pole_at_1()) s.emplace_back(1.0);
    return s;
  }

  /// dphi/dt.
  cvec rhs(std::complex<double> t, const cvec& y) const { return numeric_(t) * y / hbar_; }

 private:
  RationalMatrixFunction matrix_;
  NumericMatrixFunction numeric_;
  std::complex<double> hbar_;
};

/// Schrodinger system of kind J on polynomials of degree <= m.
inline LinearSystem schrodinger_system(PainleveKind kind, const ParamSet& params, unsigned m) {
  return {build_hamiltonian_matrix(kind, params, m).matrix, params.hbar};
}

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Minimum distance between the segment and any pole.
  double pole_margin = 1e-3;
  std::size_t max_steps = 1000000;
};

/// Solution on the straight segment t(s) = t0 + s (t1 - t0), s in [0, 1].
/// Each accepted step stores y and its first two s-derivatives, so dense output is a quintic Hermite interpolant.
class Trajectory {
 public:
  struct Node {
    double s;
    std::complex<double> t;
    cvec y, dy, d2y;  // derivatives with respect to s
  };

  Trajectory(std::complex<double> t0, std::complex<double> t1) : t0_(t0), t1_(t1) {}

  std::complex<double> t0() const { return t0_; }
  std::complex<double> t1() const { return t1_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t steps() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }

  std::vector<std::complex<double>> grid() const {
    std::vector<std::complex<double>> g;
    for (const auto& n : nodes_) g.push_back(n.t);
    return g;
  }
  const cvec& final_state() const { return nodes_.back().y; }

  /// Parameter s of a point on the segment (projection).
  double parameter(std::complex<double> t) const {
    const std::complex<double> d = t1_ - t0_;
    if (d == 0.0) return 0.0;
    const double s = ((t - t0_) / d).real();
    if (s < -1e-12 || s > 1.0 + 1e-12) fail(ErrorCode::BadParamShape, "point outside the integrated segment");
    return std::clamp(s, 0.0, 1.0);
  }

  cvec state(std::complex<double> t) const { return eval(parameter(t), 0); }

  /// dphi/dt from the interpolant.
  cvec state_derivative(std::complex<double> t) const {
    const std::complex<double> d = t1_ - t0_;
    if (d == 0.0) return nodes_.front().dy;
    return eval(parameter(t), 1) / d;
  }

  void push(Node n) { nodes_.push_back(std::move(n)); }

 private:
  cvec eval(double s, int order) const {
    if (nodes_.size() == 1) return order == 0 ? nodes_[0].y : cvec::Zero(nodes_[0].y.size());
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s, [](double v, const Node& n) { return v < n.s; });
    std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (i + 1 >= nodes_.size()) i = nodes_.size() - 2;
    const Node& a = nodes_[i];
    const Node& b = nodes_[i + 1];
    const double h = b.s - a.s;
    const double th = (s - a.s) / h;
    const auto H = hermite_basis(th, order);
    const double scale = order == 0 ? 1.0 : 1.0 / h;
    return scale * (H[0] * a.y + H[1] * h * a.dy + H[2] * h * h * a.d2y + H[3] * b.y + H[4] * h * b.dy +
                    H[5] * h * h * b.d2y);
  }

  // Quintic Hermite basis on [0, 1] (order 0) or its derivative in theta (order 1).
  static std::array<double, 6> hermite_basis(double x, int order) {
    const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
    if (order == 0)
      return {1 - 10 * x3 + 15 * x4 - 6 * x5,           x - 6 * x3 + 8 * x4 - 3 * x5,
              0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5, 10 * x3 - 15 * x4 + 6 * x5,
              -4 * x3 + 7 * x4 - 3 * x5,                 0.5 * x3 - x4 + 0.5 * x5};
    return {-30 * x2 + 60 * x3 - 30 * x4,  1 - 18 * x2 + 32 * x3 - 15 * x4, x - 4.5 * x2 + 6 * x3 - 2.5 * x4,
            30 * x2 - 60 * x3 + 30 * x4,   -12 * x2 + 28 * x3 - 15 * x4,    1.5 * x2 - 4 * x3 + 2.5 * x4};
  }

  std::complex<double> t0_, t1_;
  std::vector<Node> nodes_;
};

namespace detail {

// Distance from point p to the segment a -> b.
inline double segment_distance(std::complex<double> p, std::complex<double> a, std::complex<double> b) {
  const std::complex<double> d = b - a;
  if (d == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) / d).real(), 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

// Dormand-Prince 5(4) tableau.
struct DP54 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) integration of the system from t0 to t1 along the straight segment.
inline Trajectory integrate(const LinearSystem& sys, std::complex<double> t0, std::complex<double> t1, const cvec& phi0,
                            IntegrateOptions opt = {}) {
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) fail(ErrorCode::BadParamShape, "rtol and atol must be positive");
  if (static_cast<std::size_t>(phi0.size()) != sys.size())
    fail(ErrorCode::BadParamShape, "initial state has length " + std::to_string(phi0.size()) + ", expected " +
                                       std::to_string(sys.size()));
  for (auto p : sys.singularities())
    if (detail::segment_distance(p, t0, t1) < opt.pole_margin)
      fail(ErrorCode::SingularityInInterval, "segment passes within " + std::to_string(opt.pole_margin) +
                                                 " of the pole at t=" + std::to_string(p.real()));

  const std::complex<double> delta = t1 - t0;
  const auto& Mf = sys.numeric();
  const std::complex<double> hbar = sys.hbar();
  auto tof = [&](double s) { return t0 + s * delta; };
  auto f = [&](double s, const cvec& y) -> cvec { return delta * sys.rhs(tof(s), y); };
  auto second = [&](double s, const cvec& y, const cvec& dy) -> cvec {
    const auto t = tof(s);
    return (delta / hbar) * (delta * (Mf.derivative(t) * y) + Mf(t) * dy);
  };

  Trajectory traj(t0, t1);
  cvec y = phi0;
  cvec k1 = f(0.0, y);
  traj.push({0.0, t0, y, k1, second(0.0, y, k1)});
  if (delta == 0.0) return traj;

  auto err_norm = [&](const cvec& e, const cvec& a, const cvec& b) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(a(i)), std::abs(b(i)));
      r = std::max(r, std::abs(e(i)) / sc);
    }
    return r;
  };

  // Initial step from the derivative scale.
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y(i));
      d0 = std::max(d0, std::abs(y(i)) / sc);
      d1 = std::max(d1, std::abs(k1(i)) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::clamp(h, 1e-6, 0.1);
  }

  using T = detail::DP54;
  double s = 0.0, prev_err = 1.0;
  std::size_t count = 0;
  while (s < 1.0) {
    if (++count > opt.max_steps) fail(ErrorCode::StepUnderflow, "step limit reached");
    if (h < 1e-14) fail(ErrorCode::StepUnderflow, "step size fell below 1e-14 of the interval");
    const bool last = s + h >= 1.0;
    if (last) h = 1.0 - s;
    const cvec k2 = f(s + T::c2 * h, y + h * (T::a21 * k1));
    const cvec k3 = f(s + T::c3 * h, y + h * (T::a31 * k1 + T::a32 * k2));
    const cvec k4 = f(s + T::c4 * h, y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
    const cvec k5 = f(s + T::c5 * h, y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
    const cvec k6 = f(s + h, y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5));
    const cvec ynew = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
    const double snew = last ? 1.0 : s + h;
    const cvec k7 = f(snew, ynew);
    const cvec e = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
    const double err = err_norm(e, y, ynew);
    if (!std::isfinite(err)) {
      h *= 0.2;
      continue;
    }
    if (err > 1.0) {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      continue;
    }
    s = snew;
    y = ynew;
    k1 = k7;
    traj.push({s, tof(s), y, k1, second(s, y, k1)});
    // PI controller.
    const double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(prev_err, 0.4 / 5.0);
    h *= std::clamp(fac, 0.2, 5.0);
    prev_err = std::max(err, 1e-4);
  }
  return traj;
}

/// ||hbar state_dt - M(t) state|| / max(1, ||M(t) state||).
inline double residual(const LinearSystem& sys, std::complex<double> t, const cvec& state, const cvec& state_dt) {
  const cvec My = sys.numeric()(t) * state;
  return (sys.hbar() * state_dt - My).norm() / std::max(1.0, My.norm());
}

/// phi_1'' + p(t) phi_1' + q(t) phi_1 = 0 for the m = 1 system.
struct ClassicalReduction {
  RatFunc p, q;
};

/// Eliminates phi_0 from a 2x2 system hbar phi' = M phi using the coupling entry M[1][0].
inline ClassicalReduction classical_reduction(const RationalMatrixFunction& M, const GaussQ& hbar) {
  if (M.size() != 2) fail(ErrorCode::BadParamShape, "classical reduction needs a 2x2 system");
  auto entry = [&](std::size_t r, std::size_t c) {
    RatFunc v = TPoly(std::vector<GaussQ>{M.M0(r, c), M.M1(r, c), M.M2(r, c)});
    if (!M.R0(r, c).is_zero()) v = v + RatFunc(TPoly(M.R0(r, c)), TPoly::t());
    if (!M.R1(r, c).is_zero()) v = v + RatFunc(TPoly(M.R1(r, c)), TPoly::t() - TPoly(GaussQ(1)));
    return v / RatFunc(hbar);
  };
  const RatFunc a00 = entry(0, 0), a01 = entry(0, 1), a10 = entry(1, 0), a11 = entry(1, 1);
  if (a10.is_zero()) fail(ErrorCode::EliminationSingular, "coupling entry of the m=1 system vanishes identically");
  const RatFunc l = a10.derivative() / a10;
  return {-(a00 + a11 + l), -(a10 * a01 - a00 * a11 + a11.derivative() - a11 * l)};
}

inline ClassicalReduction classical_reduction_m1(PainleveKind kind, const ParamSet& params) {
  return classical_reduction(build_hamiltonian_matrix(kind, params, 1).matrix, params.hbar);
}

}  // namespace qpl
