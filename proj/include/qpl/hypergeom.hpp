#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "qpl/errors.hpp"
#include "qpl/hamiltonians.hpp"
#include "qpl/painleve.hpp"
#include "qpl/quadrature.hpp"
#include "qpl/weights.hpp"

namespace qpl {

inline constexpr double kDefaultEvalBudget = 1e7;

struct SelbergOptions {
  /// Quadrature points per integration variable.
  std::size_t nodes = 128;
  /// Upper bound on nodes^m integrand evaluations.
  double budget = kDefaultEvalBudget;
  ContourOptions contour{};
};

/// Integrand data after fixing the contour rule: points u_k and weights w_k * rho(u_k).
struct SelbergGrid {
  std::vector<cplx> u;
  std::vector<cplx> weight;
  std::vector<cplx> dt_log;  // d/dt log rho at u_k
};

inline SelbergGrid selberg_grid(PainleveKind kind, const ParamSet& params, cplx t, const ContourSpec& spec,
                                std::size_t nodes) {
  const ContourRule rule = contour_rule(spec, nodes);
  SelbergGrid g;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    g.u.push_back(rule.u[k]);
    g.weight.push_back(rule.w[k] * std::exp(log_master_at(kind, params, rule.base[k], rule.off[k], t)));
    g.dt_log.push_back(dt_log_master(kind, params, rule.u[k], t));
  }
  return g;
}

namespace detail {

inline cplx int_pow(cplx z, unsigned n) {
  cplx r(1.0);
  while (n) {
    if (n & 1U) r *= z;
    z *= z;
    n >>= 1U;
  }
  return r;
}

}  // namespace detail

/// Tensor-product evaluation of <F>_m = sum over k_1..k_m of prod_i weight(k_i) prod_{i<j} (u_i - u_j)^{2 hbar} F(u).
/// `leaf(idx, out)` receives the chosen node indices and adds nout values of F into out.
/// Each level sums its children pairwise, so the result does not depend on thread or call order.
template <class Leaf>
std::vector<cplx> selberg_brackets(const SelbergGrid& g, unsigned hbar, unsigned m, std::size_t nout, Leaf&& leaf) {
  const std::size_t n = g.u.size();
  std::vector<cplx> result(nout, 0.0);
  if (m == 0) {
    std::vector<std::size_t> none;
    leaf(none, result.data());
    return result;
  }
  // buffers[l] holds per-node contributions at level l, nout values each.
  std::vector<std::vector<cplx>> buffers(m, std::vector<cplx>(n * nout));
  std::vector<std::size_t> idx(m);
  std::vector<cplx> scratch(nout);

  auto reduce = [&](std::vector<cplx>& buf, cplx* out) {
    std::vector<cplx> column(n);
    for (std::size_t o = 0; o < nout; ++o) {
      for (std::size_t k = 0; k < n; ++k) column[k] = buf[k * nout + o];
      out[o] = pairwise_sum(column);
    }
  };

  auto level = [&](auto&& self, unsigned l, cplx* out) -> void {
    std::vector<cplx>& buf = buffers[l];
    for (std::size_t k = 0; k < n; ++k) {
      cplx* slot = &buf[k * nout];
      cplx factor = g.weight[k];
      for (unsigned i = 0; i < l && factor != 0.0; ++i) factor *= detail::int_pow(g.u[idx[i]] - g.u[k], 2 * hbar);
      if (factor == 0.0) {
        std::fill(slot, slot + nout, cplx(0.0));
        continue;
      }
      idx[l] = k;
      if (l + 1 == m) {
        std::fill(scratch.begin(), scratch.end(), cplx(0.0));
        leaf(idx, scratch.data());
        for (std::size_t o = 0; o < nout; ++o) slot[o] = factor * scratch[o];
      } else {
        self(self, l + 1, slot);
        for (std::size_t o = 0; o < nout; ++o) slot[o] *= factor;
      }
    }
    reduce(buf, out);
  };
  level(level, 0, result.data());
  return result;
}

/// Elementary symmetric polynomials e_0..e_m of the values.
inline std::vector<cplx> elementary_symmetric(const std::vector<cplx>& v) {
  std::vector<cplx> e(v.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += v[i] * e[j - 1];
  return e;
}

/// e_0..e_m from power sums p_1..p_m by Newton's identities.
inline std::vector<cplx> elementary_from_power_sums(const std::vector<cplx>& v) {
  const std::size_t m = v.size();
  std::vector<cplx> p(m + 1, 0.0), e(m + 1, 0.0);
  for (std::size_t k = 1; k <= m; ++k)
    for (auto x : v) p[k] += detail::int_pow(x, static_cast<unsigned>(k));
  e[0] = 1.0;
  for (std::size_t k = 1; k <= m; ++k) {
    cplx s = 0.0;
    for (std::size_t i = 1; i <= k; ++i) s += ((i % 2) ? 1.0 : -1.0) * e[k - i] * p[i];
    e[k] = s / static_cast<double>(k);
  }
  return e;
}

enum class SymmetricExpansion { Elementary, PowerSums };

struct PhiOptions : SelbergOptions {
  SymmetricExpansion expansion = SymmetricExpansion::Elementary;
};

/// Parameters with the a-slot set as the integral solution requires: a = m hbar, except on the
/// VI branch b + c + d = (m - 1) hbar where the given a is kept.
inline ParamSet integral_params(PainleveKind kind, ParamSet params, unsigned hbar, unsigned m) {
  params.hbar = GaussQ(static_cast<long>(hbar));
  const GaussQ mh(static_cast<long>(m * hbar));
  if (kind == PainleveKind::VI && params.a &&
      params.B() + params.C() + params.D() == GaussQ(static_cast<long>(m) - 1) * params.hbar)
    return params;
  params.a = mh;
  return params;
}

struct PhiPair {
  CoeffVector phi;
  CoeffVector dphi;
};

namespace detail {

inline void check_budget(std::size_t nodes, unsigned m, double budget) {
  const double evals = std::pow(static_cast<double>(nodes), static_cast<double>(m));
  if (evals > budget)
    fail(ErrorCode::BudgetExceeded, std::to_string(nodes) + "^" + std::to_string(m) + " evaluations exceed budget " +
                                        std::to_string(static_cast<long long>(budget)));
}

inline void check_hbar(unsigned hbar) {
  if (hbar < 1) fail(ErrorCode::BadParamShape, "quadrature needs a positive integer hbar");
}

// Phi and dPhi/dt at one node count.
inline PhiPair phi_pair_at(PainleveKind kind, const ParamSet& p, unsigned hbar, unsigned m, cplx t,
                           const ContourSpec& spec, std::size_t nodes, SymmetricExpansion mode) {
  const SelbergGrid g = selberg_grid(kind, p, t, spec, nodes);
  std::vector<cplx> chosen(m);
  auto leaf = [&](const std::vector<std::size_t>& idx, cplx* out) {
    cplx s = 0.0;
    for (unsigned i = 0; i < m; ++i) {
      chosen[i] = g.u[idx[i]];
      s += g.dt_log[idx[i]];
    }
    const auto e = mode == SymmetricExpansion::Elementary ? elementary_symmetric(chosen) : elementary_from_power_sums(chosen);
    for (unsigned j = 0; j <= m; ++j) {
      out[j] += e[j];
      out[m + 1 + j] += s * e[j];
    }
  };
  const auto br = selberg_brackets(g, hbar, m, 2 * (m + 1), leaf);
  PhiPair r;
  r.phi.coeffs.resize(m + 1);
  r.dphi.coeffs.resize(m + 1);
  for (unsigned i = 0; i <= m; ++i) {
    const double sign = ((m - i) % 2) ? -1.0 : 1.0;
    r.phi.coeffs[i] = sign * br[m - i];
    r.dphi.coeffs[i] = sign * br[m + 1 + m - i];
  }
  return r;
}

inline double rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(a[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace detail

/// Integral solution Phi_m and its t-derivative; err fields hold the nodes vs nodes/2 relative difference.
inline PhiPair phi_m_with_derivative(PainleveKind kind, const ParamSet& params, unsigned hbar, unsigned m, cplx t,
                                     PhiOptions opt = {}) {
  detail::check_hbar(hbar);
  if (opt.nodes < 8) fail(ErrorCode::BadParamShape, "nodes must be at least 8");
  const ParamSet p = integral_params(kind, params, hbar, m);
  validate(kind, p);
  if (m == 0) {
    PhiPair r;
    r.phi.coeffs = {1.0};
    r.dphi.coeffs = {0.0};
    return r;
  }
  detail::check_budget(opt.nodes, m, opt.budget);
  const ContourSpec spec = default_contour(kind, p, t, opt.contour);
  PhiPair fine = detail::phi_pair_at(kind, p, hbar, m, t, spec, opt.nodes, opt.expansion);
  const PhiPair coarse = detail::phi_pair_at(kind, p, hbar, m, t, spec, opt.nodes / 2, opt.expansion);
  fine.phi.err = detail::rel_diff(fine.phi.coeffs, coarse.phi.coeffs);
  fine.dphi.err = detail::rel_diff(fine.dphi.coeffs, coarse.dphi.coeffs);
  return fine;
}

inline CoeffVector phi_m(PainleveKind kind, const ParamSet& params, unsigned hbar, unsigned m, cplx t,
                         PhiOptions opt = {}) {
  return phi_m_with_derivative(kind, params, hbar, m, t, opt).phi;
}

inline CoeffVector phi_m_time_derivative(PainleveKind kind, const ParamSet& params, unsigned hbar, unsigned m, cplx t,
                                         PhiOptions opt = {}) {
  return phi_m_with_derivative(kind, params, hbar, m, t, opt).dphi;
}

inline Eigen::VectorXcd to_eigen(const CoeffVector& v) {
  Eigen::VectorXcd r(static_cast<Eigen::Index>(v.coeffs.size()));
  for (std::size_t i = 0; i < v.coeffs.size(); ++i) r(static_cast<Eigen::Index>(i)) = v.coeffs[i];
  return r;
}

/// ||hbar dPhi - M Phi|| / ||M Phi||, zero when both vanish.
inline double relative_schrodinger_residual(const RationalMatrixFunction& M, cplx hbar, cplx t, const CoeffVector& phi,
                                            const CoeffVector& dphi) {
  const Eigen::VectorXcd y = to_eigen(phi), dy = to_eigen(dphi);
  const Eigen::VectorXcd My = M.at(t) * y;
  const double num = (hbar * dy - My).norm(), den = My.norm();
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

// For kind IV the printed weight solves hbar dPhi/dt = (-H_IV + 2(b - m hbar) t) Phi rather than
// hbar dPhi/dt = H_IV Phi; Statement::Corrected selects that operator.

/// Matrix the integral solution Phi_m is expected to satisfy, hbar dPhi/dt = M(t) Phi.
/// `params` must already carry the a-slot fixed by integral_params.
inline RationalMatrixFunction integral_hamiltonian(PainleveKind kind, const ParamSet& params, unsigned m,
                                                   Statement statement = Statement::Printed) {
  RationalMatrixFunction M = build_hamiltonian_matrix(kind, params, m).matrix;
  if (statement == Statement::Printed || kind != PainleveKind::IV) return M;
  M *= GaussQ(-1);
  const GaussQ shift = GaussQ(2) * (params.B() - GaussQ(static_cast<long>(m)) * params.hbar);
  M.M1 += QMatrix::identity(m + 1) * shift;
  return M;
}

inline double schrodinger_residual(PainleveKind kind, const ParamSet& params, unsigned hbar, unsigned m, cplx t,
                                   PhiOptions opt = {}, Statement statement = Statement::Printed) {
  const auto pair = phi_m_with_derivative(kind, params, hbar, m, t, opt);
  const ParamSet p = integral_params(kind, params, hbar, m);
  const auto M = integral_hamiltonian(kind, p, m, statement);
  return relative_schrodinger_residual(M, static_cast<double>(hbar), t, pair.phi, pair.dphi);
}

/// phi_1 of the m = 1 solution (the moment tau^(0)) with its first two t-derivatives.
struct LeadingJet {
  cplx value, first, second;
  double err = 0.0;
};

inline LeadingJet leading_jet(PainleveKind kind, const ParamSet& params, unsigned hbar, cplx t, MomentOptions opt = {}) {
  const ParamSet p = integral_params(kind, params, hbar, 1);
  validate(kind, p);
  const auto v = moments(kind, p, t, 0, opt);
  const auto d1 = weighted_moments(kind, p, t, 0, [&](cplx u) { return dt_log_master(kind, p, u, t); }, opt);
  const auto d2 = weighted_moments(kind, p, t, 0, [&](cplx u) { return dt2_over_master(kind, p, u, t); }, opt);
  return {v.tau[0], d1.tau[0], d2.tau[0], std::max({v.err[0], d1.err[0], d2.err[0]})};
}

/// Bordered Hankel determinant P_m (hbar = 1) with its t-derivative.
struct HankelBorderedDet {
  unsigned m = 0;
  MomentTable table;
  MomentTable dtable;  // moments of u^k d/dt rho
  CoeffVector value;
  CoeffVector derivative;
  cplx hankel{1.0};
};

namespace detail {

// Moment matrix rows i = 0..m-1 and columns j = 0..m, dropping column `skip`; row `swap_row` taken from `alt`.
inline Eigen::MatrixXcd moment_minor(const std::vector<cplx>& tau, unsigned m, unsigned skip,
                                     const std::vector<cplx>* alt = nullptr, unsigned swap_row = 0) {
  Eigen::MatrixXcd A(m, m);
  for (unsigned i = 0; i < m; ++i) {
    const auto& src = (alt && i == swap_row) ? *alt : tau;
    unsigned c = 0;
    for (unsigned j = 0; j <= m; ++j) {
      if (j == skip) continue;
      A(i, c++) = src[i + j];
    }
  }
  return A;
}

inline cplx minor_det(const std::vector<cplx>& tau, unsigned m, unsigned skip) {
  if (m == 0) return 1.0;
  return moment_minor(tau, m, skip).determinant();
}

}  // namespace detail

/// Pure Hankel determinant det(tau_{i+j})_{0<=i,j<m}; 1 for m = 0.
inline cplx hankel_determinant(const std::vector<cplx>& tau, unsigned m) { return detail::minor_det(tau, m, m); }

/// Coefficients of the bordered determinant: x^j multiplies (-1)^{m+j} times the minor without column j.
inline CoeffVector bordered_coefficients(const std::vector<cplx>& tau, unsigned m) {
  CoeffVector v;
  v.coeffs.resize(m + 1);
  for (unsigned j = 0; j <= m; ++j) {
    const double sign = ((m + j) % 2) ? -1.0 : 1.0;
    v.coeffs[j] = j == m ? hankel_determinant(tau, m) : sign * detail::minor_det(tau, m, j);
  }
  return v;
}

/// d/dt of bordered_coefficients given moment derivatives, by differentiating one row at a time.
inline CoeffVector bordered_derivative(const std::vector<cplx>& tau, const std::vector<cplx>& dtau, unsigned m) {
  CoeffVector v;
  v.coeffs.assign(m + 1, 0.0);
  for (unsigned j = 0; j <= m; ++j) {
    const double sign = ((m + j) % 2) ? -1.0 : 1.0;
    cplx s = 0.0;
    for (unsigned r = 0; r < m; ++r) s += detail::moment_minor(tau, m, j, &dtau, r).determinant();
    v.coeffs[j] = sign * s;
  }
  return v;
}

struct DeterminantOptions {
  std::size_t nodes = 128;
  double tol = 1e-8;
  ContourOptions contour{};
};

/// P_m from one moment table. `params` is used as given (no a-slot adjustment).
inline HankelBorderedDet determinant_from_params(PainleveKind kind, const ParamSet& params, unsigned m, cplx t,
                                                 std::size_t kmax, DeterminantOptions opt = {}) {
  HankelBorderedDet out;
  out.m = m;
  MomentOptions mo{opt.nodes, opt.tol, opt.contour};
  out.table = moments(kind, params, t, kmax, mo);
  out.dtable = weighted_moments(kind, params, t, kmax, [&](cplx u) { return dt_log_master(kind, params, u, t); }, mo);
  out.value = bordered_coefficients(out.table.tau, m);
  out.derivative = bordered_derivative(out.table.tau, out.dtable.tau, m);
  out.hankel = hankel_determinant(out.table.tau, m);
  double e = 0.0;
  for (auto x : out.table.err) e = std::max(e, x);
  out.value.err = e;
  return out;
}

/// Determinant solution at hbar = 1 with a = m (or the VI alternate branch).
inline HankelBorderedDet determinant_solution(PainleveKind kind, const ParamSet& params, unsigned m, cplx t,
                                              DeterminantOptions opt = {}) {
  const ParamSet p = integral_params(kind, params, 1, m);
  validate(kind, p);
  const std::size_t kmax = m == 0 ? 0 : 2 * m - 1;
  return determinant_from_params(kind, p, m, t, kmax, opt);
}

/// Schrodinger residual of the determinant solution against M_J with a = m, hbar = 1.
inline double determinant_residual(PainleveKind kind, const ParamSet& params, unsigned m, cplx t,
                                   DeterminantOptions opt = {}, Statement statement = Statement::Printed) {
  const auto det = determinant_solution(kind, params, m, t, opt);
  const ParamSet p = integral_params(kind, params, 1, m);
  const auto M = integral_hamiltonian(kind, p, m, statement);
  return relative_schrodinger_residual(M, 1.0, t, det.value, det.derivative);
}

/// sin of the angle between two coefficient vectors (0 when parallel).
inline double angular_deviation(const CoeffVector& a, const CoeffVector& b) {
  const Eigen::VectorXcd u = to_eigen(a), v = to_eigen(b);
  if (u.norm() == 0.0 || v.norm() == 0.0) return (u.norm() == v.norm()) ? 0.0 : 1.0;
  const cplx proj = u.dot(v) / u.squaredNorm();
  return (v - proj * u).norm() / v.norm();
}

/// Normalized inner product sum p_i q_j tau_{i+j} / sum |p_i q_j tau_{i+j}| of P_m and P_n on one table.
inline cplx orthogonality_check(PainleveKind kind, const ParamSet& params, unsigned m, unsigned n, cplx t,
                                DeterminantOptions opt = {}) {
  if (m == n) fail(ErrorCode::BadParamShape, "orthogonality_check needs m != n");
  ParamSet p = params;
  p.hbar = GaussQ(1);
  validate(kind, p);
  const unsigned top = std::max(m, n);
  const std::size_t kmax = std::max<std::size_t>(m + n, top == 0 ? 0 : 2 * top - 1);
  MomentOptions mo{opt.nodes, opt.tol, opt.contour};
  const MomentTable tab = moments(kind, p, t, kmax, mo);
  const CoeffVector P = bordered_coefficients(tab.tau, m), Q = bordered_coefficients(tab.tau, n);
  std::vector<cplx> terms;
  double mag = 0.0;
  for (unsigned i = 0; i <= m; ++i)
    for (unsigned j = 0; j <= n; ++j) {
      terms.push_back(P.coeffs[i] * Q.coeffs[j] * tab.tau[i + j]);
      mag += std::abs(terms.back());
    }
  const cplx s = pairwise_sum(terms);
  return mag > 0.0 ? s / mag : cplx(0.0);
}

struct LemmaReport {
  /// Relative residual of the integration-by-parts identity for k = 0..m-1.
  std::vector<double> lemma;
  /// Relative residual of the t(t-1) d/dt <phi_k> recurrence for k = 0..m.
  std::vector<double> recurrence;
  double max_residual = 0.0;
  bool empty() const { return lemma.empty() && recurrence.empty(); }
};

namespace detail {

// Calls f(perm) for every permutation of 0..m-1.
template <class F>
void for_each_permutation(unsigned m, F&& f) {
  std::vector<unsigned> perm(m);
  std::iota(perm.begin(), perm.end(), 0U);
  do {
    f(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline double factorial(unsigned m) {
  double r = 1.0;
  for (unsigned i = 2; i <= m; ++i) r *= i;
  return r;
}

inline double rel_residual(cplx lhs, cplx rhs, double scale) {
  const double den = std::max({std::abs(lhs), std::abs(rhs), scale});
  return den > 0.0 ? std::abs(lhs - rhs) / den : 0.0;
}

}  // namespace detail

/// Checks, by literal symmetrization and quadrature, the VI integration-by-parts identity
///   t(t-1) <Sym[d/(t-u_{m-k}) prod_{l<m-k} u_l]> = -(a+b+d(1-t)-k hbar)<phi_{k+1}> + (a+b+c+d-(m+k-1)hbar)<phi_k>
/// for k = 0..m-1, and the recurrence for t(t-1) d/dt <phi_k>, k = 0..m, where phi_k = Sym[prod_{l<=m-k} u_l].
inline LemmaReport verify_lemma_recurrences(const ParamSet& params, unsigned hbar, unsigned m, cplx t,
                                            SelbergOptions opt = {}) {
  LemmaReport rep;
  if (m == 0) return rep;
  if (m > 3) fail(ErrorCode::BadParamShape, "lemma check limited to m <= 3");
  detail::check_hbar(hbar);
  const PainleveKind kind = PainleveKind::VI;
  const ParamSet p = integral_params(kind, params, hbar, m);
  validate(kind, p);
  detail::check_budget(opt.nodes, m, opt.budget);
  const ContourSpec spec = default_contour(kind, p, t, opt.contour);
  const SelbergGrid g = selberg_grid(kind, p, t, spec, opt.nodes);
  const cplx a = p.A().to_complex(), b = p.B().to_complex(), c = p.C().to_complex(), d = p.D().to_complex();
  const double h = hbar;
  const double norm = 1.0 / detail::factorial(m);

  // Outputs: [0..m] <phi_k>, [m+1..2m+1] <phi_k * sum dlog>, [2m+2..3m+1] lemma brackets k = 0..m-1.
  const std::size_t nout = 3 * m + 2;
  std::vector<cplx> uu(m);
  auto leaf = [&](const std::vector<std::size_t>& idx, cplx* out) {
    cplx s = 0.0;
    for (unsigned i = 0; i < m; ++i) s += g.dt_log[idx[i]];
    detail::for_each_permutation(m, [&](const std::vector<unsigned>& perm) {
      for (unsigned i = 0; i < m; ++i) uu[i] = g.u[idx[perm[i]]];
      for (unsigned k = 0; k <= m; ++k) {
        cplx prod = 1.0;
        for (unsigned l = 0; l < m - k; ++l) prod *= uu[l];
        out[k] += norm * prod;
        out[m + 1 + k] += norm * prod * s;
      }
      for (unsigned k = 0; k < m; ++k) {
        // d / (t - u_{m-k}) times prod_{l=1}^{m-k-1} u_l, with 1-based variable labels.
        cplx prod = d / (t - uu[m - k - 1]);
        for (unsigned l = 0; l + 1 < m - k; ++l) prod *= uu[l];
        out[2 * m + 2 + k] += norm * prod;
      }
    });
  };
  const auto br = selberg_brackets(g, hbar, m, nout, leaf);
  auto phi = [&](unsigned k) { return k <= m ? br[k] : cplx(0.0); };
  double scale = 0.0;
  for (unsigned k = 0; k <= m; ++k) scale = std::max(scale, std::abs(br[k]));
  const cplx tt = t * (t - 1.0);

  for (unsigned k = 0; k < m; ++k) {
    const double kd = k;
    const cplx lhs = tt * br[2 * m + 2 + k];
    const cplx rhs = -(a + b + d * (1.0 - t) - kd * h) * phi(k + 1) + (a + b + c + d - (m + kd - 1.0) * h) * phi(k);
    rep.lemma.push_back(detail::rel_residual(lhs, rhs, scale * std::abs(tt)));
  }
  for (unsigned k = 0; k <= m; ++k) {
    const double kd = k, md = m;
    const cplx lhs = tt * br[m + 1 + k];
    const cplx rhs = (md - kd) * t * (a + b - kd * h) * phi(k + 1) -
                     ((md - kd) * t * (a + b + c + d - (md + kd - 1.0) * h) - kd * (a + b + d * (1.0 - t) - (kd - 1.0) * h)) *
                         phi(k) -
                     (k == 0 ? cplx(0.0) : kd * (a + b + c + d - (md + kd - 2.0) * h) * phi(k - 1));
    rep.recurrence.push_back(detail::rel_residual(lhs, rhs, scale * std::abs(tt)));
  }
  for (double r : rep.lemma) rep.max_residual = std::max(rep.max_residual, r);
  for (double r : rep.recurrence) rep.max_residual = std::max(rep.max_residual, r);
  return rep;
}

}  // namespace qpl
