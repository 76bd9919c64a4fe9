#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include "qpl/errors.hpp"
#include "qpl/matrix.hpp"
#include "qpl/rational.hpp"

namespace qpl {

using QMatrix = Matrix<GaussQ>;

/// First component/entry at which two matrix functions disagree.
struct Mismatch {
  std::string component;
  std::size_t row = 0, col = 0;
  std::string lhs, rhs;

  std::string str() const {
    return component + "[" + std::to_string(row) + "][" + std::to_string(col) + "]: " + lhs + " != " + rhs;
  }
};

/// M(t) = M0 + M1 t + M2 t^2 + R0/t + R1/(t-1), all components square of equal size.
struct RationalMatrixFunction {
  QMatrix M0, M1, M2, R0, R1;

  RationalMatrixFunction() = default;
  explicit RationalMatrixFunction(std::size_t n) : M0(n, n), M1(n, n), M2(n, n), R0(n, n), R1(n, n) {}

  std::size_t size() const { return M0.rows(); }

  static constexpr std::array<const char*, 5> kNames{"M0", "M1", "M2", "R0", "R1"};

  const QMatrix& component(int i) const {
    switch (i) {
      case 0: return M0;
      case 1: return M1;
      case 2: return M2;
      case 3: return R0;
      default: return R1;
    }
  }
  QMatrix& component(int i) { return const_cast<QMatrix&>(static_cast<const RationalMatrixFunction&>(*this).component(i)); }

  bool has_pole_at_0() const { return !R0.is_zero(); }
  bool has_pole_at_1() const { return !R1.is_zero(); }
  bool is_zero() const {
    for (int i = 0; i < 5; ++i)
      if (!component(i).is_zero()) return false;
    return true;
  }

  /// Exact value at a Gaussian-rational point; PoleAtT at a pole.
  QMatrix at(const GaussQ& t) const {
    check_pole(t.is_zero(), t == GaussQ(1));
    QMatrix r = M0 + M1 * t + M2 * (t * t);
    if (has_pole_at_0()) r += R0 * (GaussQ(1) / t);
    if (has_pole_at_1()) r += R1 * (GaussQ(1) / (t - GaussQ(1)));
    return r;
  }

  RationalMatrixFunction& operator+=(const RationalMatrixFunction& o) {
    for (int i = 0; i < 5; ++i) component(i) += o.component(i);
    return *this;
  }
  RationalMatrixFunction& operator-=(const RationalMatrixFunction& o) {
    for (int i = 0; i < 5; ++i) component(i) -= o.component(i);
    return *this;
  }
  RationalMatrixFunction& operator*=(const GaussQ& s) {
    for (int i = 0; i < 5; ++i) component(i) *= s;
    return *this;
  }
  friend RationalMatrixFunction operator+(RationalMatrixFunction a, const RationalMatrixFunction& b) { return a += b; }
  friend RationalMatrixFunction operator-(RationalMatrixFunction a, const RationalMatrixFunction& b) { return a -= b; }
  friend RationalMatrixFunction operator*(RationalMatrixFunction a, const GaussQ& s) { return a *= s; }
  friend RationalMatrixFunction operator*(const GaussQ& s, RationalMatrixFunction a) { return a *= s; }

  /// Componentwise equality, i.e. identity of rational functions of t.
  friend bool operator==(const RationalMatrixFunction& a, const RationalMatrixFunction& b) {
    return !first_mismatch(a, b);
  }

  friend std::optional<Mismatch> first_mismatch(const RationalMatrixFunction& a, const RationalMatrixFunction& b) {
    if (a.size() != b.size()) return Mismatch{"size", a.size(), b.size(), "", ""};
    for (int i = 0; i < 5; ++i) {
      if (auto pos = first_difference(a.component(i), b.component(i))) {
        auto [r, c] = *pos;
        return Mismatch{kNames[i], r, c, a.component(i)(r, c).str(), b.component(i)(r, c).str()};
      }
    }
    return std::nullopt;
  }

  /// t -> s t. Only defined when the pole at 1 is absent or s = 1.
  RationalMatrixFunction time_scaled(const GaussQ& s) const {
    if (s.is_zero()) throw std::invalid_argument("time scale must be nonzero");
    if (has_pole_at_1() && s != GaussQ(1)) throw std::invalid_argument("time scaling would move the pole at t=1");
    RationalMatrixFunction r = *this;
    r.M1 *= s;
    r.M2 *= s * s;
    r.R0 *= GaussQ(1) / s;
    return r;
  }

  /// P * M(t) * Q for constant P, Q.
  RationalMatrixFunction sandwiched(const QMatrix& P, const QMatrix& Q) const {
    RationalMatrixFunction r;
    for (int i = 0; i < 5; ++i) r.component(i) = P * component(i) * Q;
    return r;
  }

  /// Floating-point value at complex t.
  Eigen::MatrixXcd at(std::complex<double> t) const {
    check_pole(t == 0.0, t == 1.0);
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXcd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        auto idx = [&](const QMatrix& m) { return m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).to_complex(); };
        std::complex<double> v = idx(M0) + idx(M1) * t + idx(M2) * t * t;
        if (has_pole_at_0()) v += idx(R0) / t;
        if (has_pole_at_1()) v += idx(R1) / (t - 1.0);
        r(i, j) = v;
      }
    return r;
  }

 private:
  void check_pole(bool at0, bool at1) const {
    if (at0 && has_pole_at_0()) fail(ErrorCode::PoleAtT, "matrix function has a pole at t=0");
    if (at1 && has_pole_at_1()) fail(ErrorCode::PoleAtT, "matrix function has a pole at t=1");
  }
};

/// Double-precision copy of a RationalMatrixFunction for repeated numeric evaluation.
class NumericMatrixFunction {
 public:
  NumericMatrixFunction() = default;
  explicit NumericMatrixFunction(const RationalMatrixFunction& f) {
    for (int i = 0; i < 5; ++i) {
      const auto& q = f.component(i);
      Eigen::MatrixXcd m(static_cast<Eigen::Index>(q.rows()), static_cast<Eigen::Index>(q.cols()));
      for (std::size_t r = 0; r < q.rows(); ++r)
        for (std::size_t c = 0; c < q.cols(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = q(r, c).to_complex();
      comp_[static_cast<std::size_t>(i)] = m;
    }
    pole0_ = f.has_pole_at_0();
    pole1_ = f.has_pole_at_1();
  }

  Eigen::Index size() const { return comp_[0].rows(); }
  bool has_pole_at_0() const { return pole0_; }
  bool has_pole_at_1() const { return pole1_; }

  Eigen::MatrixXcd operator()(std::complex<double> t) const {
    if (pole0_ && t == 0.0) fail(ErrorCode::PoleAtT, "matrix function has a pole at t=0");
    if (pole1_ && t == 1.0) fail(ErrorCode::PoleAtT, "matrix function has a pole at t=1");
    Eigen::MatrixXcd r = comp_[0] + comp_[1] * t + comp_[2] * (t * t);
    if (pole0_) r += comp_[3] / t;
    if (pole1_) r += comp_[4] / (t - 1.0);
    return r;
  }

  /// dM/dt.
  Eigen::MatrixXcd derivative(std::complex<double> t) const {
    Eigen::MatrixXcd r = comp_[1] + comp_[2] * (2.0 * t);
    if (pole0_) r -= comp_[3] / (t * t);
    if (pole1_) r -= comp_[4] / ((t - 1.0) * (t - 1.0));
    return r;
  }

 private:
  std::array<Eigen::MatrixXcd, 5> comp_;
  bool pole0_ = false, pole1_ = false;
};

}  // namespace qpl
