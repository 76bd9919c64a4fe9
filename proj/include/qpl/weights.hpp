#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "qpl/errors.hpp"
#include "qpl/painleve.hpp"
#include "qpl/quadrature.hpp"

namespace qpl {

using cplx = std::complex<double>;

/// Straight contour p -> q. alpha_* is the exponent of the integrand at that end (0 when regular);
/// sigma_* is the grading power of the endpoint substitution u = end + (mid - end) s^sigma.
struct Segment {
  cplx p, q;
  cplx alpha_p{0.0}, alpha_q{0.0};
  int sigma_p = 1, sigma_q = 1;
  /// q is a truncation point of an infinite contour rather than a zero of the integrand.
  bool truncated_q = false;
};

/// Ray origin + direction * r for r in [r_min, R]. With log_map the rule is built in v = log r.
struct Ray {
  cplx origin{0.0};
  cplx direction{1.0};
  double R = 1.0;
  double r_min = 0.0;
  bool log_map = false;
};

/// Incoming ray along angle theta_minus into joint, then outgoing along theta_plus, each of length R.
struct TwoRay {
  double theta_minus = 0.0, theta_plus = 0.0;
  double R = 1.0;
  cplx joint{0.0};
};

using ContourSpec = std::variant<Segment, Ray, TwoRay>;

inline std::string describe(const ContourSpec& c) {
  char buf[256];
  if (auto s = std::get_if<Segment>(&c)) {
    std::snprintf(buf, sizeof buf, "Segment(%g%+gi -> %g%+gi, sigma=%d,%d)", s->p.real(), s->p.imag(), s->q.real(),
                  s->q.imag(), s->sigma_p, s->sigma_q);
  } else if (auto r = std::get_if<Ray>(&c)) {
    std::snprintf(buf, sizeof buf, "Ray(origin=%g%+gi, dir=%g%+gi, r in [%g, %g]%s)", r->origin.real(), r->origin.imag(),
                  r->direction.real(), r->direction.imag(), r->r_min, r->R, r->log_map ? ", log map" : "");
  } else {
    auto& w = std::get<TwoRay>(c);
    std::snprintf(buf, sizeof buf, "TwoRay(theta-=%g, theta+=%g, R=%g)", w.theta_minus, w.theta_plus, w.R);
  }
  return buf;
}

namespace detail {

inline cplx to_c(const GaussQ& z) { return z.to_complex(); }

// Principal-branch z^alpha written as exp(alpha log z).
inline cplx log_power(cplx z, cplx alpha) { return alpha * std::log(z); }

}  // namespace detail

/// log rho_J at u = base + off on the principal branch. Distances to 0, 1 and t are formed from
/// base and off separately, so points close to a panel endpoint keep full relative accuracy.
inline cplx log_master_at(PainleveKind kind, const ParamSet& params, cplx base, cplx off, cplx t) {
  const ParamSet p = shaped(kind, params);
  const cplx a = detail::to_c(p.A()), b = detail::to_c(p.B()), c = detail::to_c(p.C()), d = detail::to_c(p.D());
  const cplx u = base + off;
  auto need_nonzero = [&](cplx z, const char* what) {
    if (z == 0.0) fail(ErrorCode::SingularPoint, std::string("master function singular at u=") + what);
  };
  switch (kind) {
    case PainleveKind::II:
      return -(u * t + 2.0 / 3.0 * u * u * u);
    case PainleveKind::III:
      need_nonzero(u, "0");
      return detail::log_power(u, -b - 1.0) + t / u - u;
    case PainleveKind::IV:
      need_nonzero(u, "0");
      return detail::log_power(u, -b - 1.0) - u * t + 0.5 * u * u;
    case PainleveKind::V: {
      const cplx one_minus = (1.0 - base) - off;
      need_nonzero(u, "0");
      need_nonzero(one_minus, "1");
      return detail::log_power(u, -b - 1.0) + detail::log_power(one_minus, -c - 1.0) + u * t;
    }
    case PainleveKind::VI: {
      const cplx one_minus = (1.0 - base) - off, t_minus = (t - base) - off;
      need_nonzero(u, "0");
      need_nonzero(one_minus, "1");
      need_nonzero(t_minus, "t");
      return detail::log_power(u, -a - b - 1.0) + detail::log_power(one_minus, -c - 1.0) +
             detail::log_power(t_minus, -d);
    }
  }
  return 0.0;
}

/// log rho_J(u, t) on the principal branch; throws SingularPoint on the kind's singular locus.
inline cplx log_master_function(PainleveKind kind, const ParamSet& params, cplx u, cplx t) {
  return log_master_at(kind, params, u, 0.0, t);
}

inline cplx master_function(PainleveKind kind, const ParamSet& params, cplx u, cplx t) {
  return std::exp(log_master_function(kind, params, u, t));
}

/// d/dt log rho_J.
inline cplx dt_log_master(PainleveKind kind, const ParamSet& params, cplx u, cplx t) {
  switch (kind) {
    case PainleveKind::II:
    case PainleveKind::IV: return -u;
    case PainleveKind::III: return 1.0 / u;
    case PainleveKind::V: return u;
    case PainleveKind::VI: return -detail::to_c(params.D()) / (t - u);
  }
  return 0.0;
}

/// (d/dt)^2 rho_J / rho_J.
inline cplx dt2_over_master(PainleveKind kind, const ParamSet& params, cplx u, cplx t) {
  const cplx g = dt_log_master(kind, params, u, t);
  if (kind == PainleveKind::VI) {
    const cplx d = detail::to_c(params.D());
    return g * g + d / ((t - u) * (t - u));
  }
  return g * g;
}

namespace detail {

// Grading power for an endpoint where the integrand behaves like (u - end)^alpha.
inline int endpoint_sigma(const GaussQ& alpha_plus_one) {
  if (alpha_plus_one.is_real()) {
    const auto& q = alpha_plus_one.re();
    if (sgn(q) > 0 && q.get_den() <= 12) return static_cast<int>(q.get_den().get_si());
  }
  const double re = alpha_plus_one.re().get_d();
  if (re <= 0.0) return 1;
  return std::clamp(static_cast<int>(std::ceil(8.0 / re)), 1, 40);
}

// Scans v on [v0, v1]. The peak is taken from `level`; the kept window is where `padded`
// (level plus the polynomial allowance) stays within `drop` of that peak.
inline std::pair<double, double> tail_window(const std::function<double(double)>& level,
                                             const std::function<double(double)>& padded, double v0, double v1,
                                             double drop) {
  constexpr int kSteps = 6000;
  const double h = (v1 - v0) / kSteps;
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSteps; ++i) {
    const double lv = level(v0 + h * i);
    if (std::isfinite(lv)) peak = std::max(peak, lv);
  }
  int lo = kSteps, hi = 0;
  for (int i = 0; i <= kSteps; ++i)
    if (padded(v0 + h * i) >= peak - drop) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  if (lo > hi) return {v0, v1};
  return {v0 + h * std::max(lo - 1, 0), v0 + h * std::min(hi + 1, kSteps)};
}

inline constexpr double kTailDrop = 40.0;

}  // namespace detail

struct ContourOptions {
  /// Extra polynomial degree the truncation must tolerate (moments u^k, Vandermonde factors).
  double degree_allowance = 16.0;
};

/// Concrete endpoint-vanishing contour for the kind; throws NoConvergentContour outside its domain.
inline ContourSpec default_contour(PainleveKind kind, const ParamSet& params, cplx t, ContourOptions opt = {}) {
  validate(kind, params);
  const double D = opt.degree_allowance;
  auto logabs = [&](cplx u) { return std::real(log_master_function(kind, params, u, t)); };
  auto bad = [&](const std::string& why) -> ContourSpec {
    fail(ErrorCode::NoConvergentContour, std::string("kind ") + to_string(kind) + ": " + why);
  };
  switch (kind) {
    case PainleveKind::II: {
      const double th = 2.0 * std::numbers::pi / 3.0;
      double R = 0.0;
      for (double s : {-1.0, 1.0}) {
        const cplx dir = std::polar(1.0, s * th);
        auto level = [&](double r) { return logabs(dir * r); };
        auto padded = [&](double r) { return logabs(dir * r) + D * std::log(std::max(r, 1.0)); };
        R = std::max(R, detail::tail_window(level, padded, 0.0, 20.0 + 2.0 * std::abs(t), detail::kTailDrop).second);
      }
      return TwoRay{-th, th, R, 0.0};
    }
    case PainleveKind::III: {
      if (!(t.real() < 0.0)) return bad("needs Re t < 0 so that exp(t/u) vanishes at u=0");
      // Work in v = log u; include the du = u dv Jacobian and the degree allowance.
      auto level = [&](double v) { return logabs(std::exp(v)) + v; };
      auto padded = [&](double v) { return level(v) + D * std::max(v, 0.0); };
      auto [v0, v1] = detail::tail_window(level, padded, -60.0, 60.0, detail::kTailDrop);
      Ray r;
      r.log_map = true;
      r.r_min = std::exp(v0);
      r.R = std::exp(v1);
      return r;
    }
    case PainleveKind::IV: {
      if (!(params.B().re() < 0)) return bad("needs Re b < 0 for the endpoint at u=0");
      const cplx dir(0.0, 1.0);
      auto level = [&](double r) { return logabs(dir * r); };
      auto padded = [&](double r) { return logabs(dir * r) + D * std::log(std::max(r, 1.0)); };
      const double R = detail::tail_window(level, padded, 1e-6, 40.0 + 2.0 * std::abs(t), detail::kTailDrop).second;
      Segment s{0.0, dir * R};
      s.truncated_q = true;
      s.alpha_p = detail::to_c(-params.B() - GaussQ(1));
      s.sigma_p = detail::endpoint_sigma(-params.B());
      return s;
    }
    case PainleveKind::V: {
      if (!(params.B().re() < 0) || !(params.C().re() < 0)) return bad("needs Re b < 0 and Re c < 0");
      Segment s{0.0, 1.0};
      s.alpha_p = detail::to_c(-params.B() - GaussQ(1));
      s.alpha_q = detail::to_c(-params.C() - GaussQ(1));
      s.sigma_p = detail::endpoint_sigma(-params.B());
      s.sigma_q = detail::endpoint_sigma(-params.C());
      return s;
    }
    case PainleveKind::VI: {
      if (!((params.A() + params.B()).re() < 0) || !(params.C().re() < 0))
        return bad("needs Re(a+b) < 0 and Re c < 0");
      if (t.imag() == 0.0 && t.real() >= 0.0 && t.real() <= 1.0) return bad("t must lie off the segment [0,1]");
      Segment s{0.0, 1.0};
      s.alpha_p = detail::to_c(-params.A() - params.B() - GaussQ(1));
      s.alpha_q = detail::to_c(-params.C() - GaussQ(1));
      s.sigma_p = detail::endpoint_sigma(-params.A() - params.B());
      s.sigma_q = detail::endpoint_sigma(-params.C());
      return s;
    }
  }
  return bad("unknown kind");
}

/// Quadrature rule with `nodes` points in total (split evenly between the contour's two pieces).
inline ContourRule contour_rule(const ContourSpec& spec, std::size_t nodes) {
  if (nodes < 8) throw std::invalid_argument("contour_rule needs at least 8 nodes");
  const std::size_t half = nodes / 2;
  ContourRule rule;
  if (auto s = std::get_if<Segment>(&spec)) {
    const cplx mid = 0.5 * (s->p + s->q);
    rule.append(graded_panel(s->p, mid, s->sigma_p, half));
    ContourRule back = graded_panel(s->q, mid, s->sigma_q, nodes - half);
    for (auto& w : back.w) w = -w;
    rule.append(back);
  } else if (auto r = std::get_if<Ray>(&spec)) {
    if (r->log_map) {
      const double v0 = std::log(r->r_min), v1 = std::log(r->R), vm = 0.5 * (v0 + v1);
      for (auto [lo, hi, n] : {std::tuple{v0, vm, half}, std::tuple{vm, v1, nodes - half}}) {
        ContourRule pr = linear_panel(lo, hi, n);
        for (std::size_t k = 0; k < pr.size(); ++k) {
          const cplx off = r->direction * std::exp(pr.u[k].real());
          rule.push(r->origin, off, pr.w[k] * off);
        }
      }
    } else {
      const cplx a = r->origin + r->direction * r->r_min, b = r->origin + r->direction * r->R;
      const cplx mid = 0.5 * (a + b);
      rule.append(linear_panel(a, mid, half));
      rule.append(linear_panel(mid, b, nodes - half));
    }
  } else {
    const auto& w = std::get<TwoRay>(spec);
    ContourRule in = linear_panel(w.joint + std::polar(w.R, w.theta_minus), w.joint, half);
    ContourRule out = linear_panel(w.joint, w.joint + std::polar(w.R, w.theta_plus), nodes - half);
    rule.append(in);
    rule.append(out);
  }
  return rule;
}

/// Far ends of the contour together with whether the integrand (times |u|^D) is negligible there.
inline bool decay_check(PainleveKind kind, const ParamSet& params, const ContourSpec& spec, cplx t,
                        ContourOptions opt = {}) {
  const double D = opt.degree_allowance;
  auto level = [&](cplx u) {
    return std::real(log_master_function(kind, params, u, t)) + D * std::log(std::max(std::abs(u), 1e-300));
  };
  const ContourRule probe = contour_rule(spec, 64);
  double peak = -std::numeric_limits<double>::infinity();
  for (auto u : probe.u) peak = std::max(peak, level(u));
  std::vector<cplx> ends;
  if (auto s = std::get_if<Segment>(&spec)) {
    // Algebraic endpoints: integrable and vanishing boundary terms need Re(alpha + 1) > 0.
    return (s->alpha_p.real() + 1.0 > 0.0) && (s->alpha_q.real() + 1.0 > 0.0) &&
           (!s->truncated_q || level(s->q) < peak - 36.0);
  }
  if (auto r = std::get_if<Ray>(&spec)) {
    ends = {r->origin + r->direction * r->R};
    if (r->log_map) ends.push_back(r->origin + r->direction * r->r_min);
  } else {
    const auto& w = std::get<TwoRay>(spec);
    ends = {w.joint + std::polar(w.R, w.theta_minus), w.joint + std::polar(w.R, w.theta_plus)};
  }
  for (auto u : ends)
    if (!(level(u) < peak - 36.0)) return false;
  return true;
}

/// Moments tau^(k) = integral of u^k rho_J(u) du over the default contour, k = 0..kmax.
struct MomentTable {
  PainleveKind kind = PainleveKind::II;
  cplx t{0.0};
  std::vector<cplx> tau;
  std::vector<double> err;

  std::size_t kmax() const { return tau.empty() ? 0 : tau.size() - 1; }
};

struct MomentOptions {
  std::size_t nodes = 128;
  /// Relative node-doubling tolerance; NotConverged above it.
  double tol = 1e-8;
  ContourOptions contour{};
};

/// Integrals of u^k g(u) rho(u) for k = 0..kmax on a given rule.
inline std::vector<cplx> weighted_moments_on_rule(PainleveKind kind, const ParamSet& params, cplx t,
                                                  const ContourRule& rule, std::size_t kmax,
                                                  const std::function<cplx(cplx)>& g) {
  std::vector<std::vector<cplx>> terms(kmax + 1, std::vector<cplx>(rule.size()));
  for (std::size_t n = 0; n < rule.size(); ++n) {
    const cplx u = rule.u[n];
    cplx v = rule.w[n] * std::exp(log_master_at(kind, params, rule.base[n], rule.off[n], t));
    if (g) v *= g(u);
    for (std::size_t k = 0; k <= kmax; ++k) {
      terms[k][n] = v;
      v *= u;
    }
  }
  std::vector<cplx> out(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) out[k] = pairwise_sum(terms[k]);
  return out;
}

/// Moments of u^k g(u) rho(u), reported from the 2*nodes rule with the nodes-vs-2*nodes difference as error.
inline MomentTable weighted_moments(PainleveKind kind, const ParamSet& params, cplx t, std::size_t kmax,
                                    const std::function<cplx(cplx)>& g, MomentOptions opt = {}) {
  if (opt.nodes < 8) fail(ErrorCode::BadParamShape, "nodes must be at least 8");
  const ContourSpec spec = default_contour(kind, params, t, opt.contour);
  const auto coarse = weighted_moments_on_rule(kind, params, t, contour_rule(spec, opt.nodes), kmax, g);
  const auto fine = weighted_moments_on_rule(kind, params, t, contour_rule(spec, 2 * opt.nodes), kmax, g);
  MomentTable tab{kind, t, fine, std::vector<double>(kmax + 1)};
  double scale = 0.0, worst = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    tab.err[k] = std::abs(fine[k] - coarse[k]);
    scale = std::max(scale, std::abs(fine[k]));
    worst = std::max(worst, tab.err[k]);
  }
  if (worst > opt.tol * scale)
    fail(ErrorCode::NotConverged, "moment node doubling error " + std::to_string(worst / std::max(scale, 1e-300)) +
                                      " exceeds tolerance " + std::to_string(opt.tol));
  return tab;
}

inline MomentTable moments(PainleveKind kind, const ParamSet& params, cplx t, std::size_t kmax,
                           MomentOptions opt = {}) {
  return weighted_moments(kind, params, t, kmax, nullptr, opt);
}

namespace detail {

using CPoly = std::vector<cplx>;

inline CPoly cpoly_mul(const CPoly& a, const CPoly& b) {
  if (a.empty() || b.empty()) return {};
  CPoly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}
inline CPoly cpoly_add(CPoly a, const CPoly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}
inline CPoly cpoly_scale(CPoly a, cplx s) {
  for (auto& v : a) v *= s;
  return a;
}
inline CPoly cpoly_diff(const CPoly& a) {
  CPoly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<double>(i));
  return r;
}

// Clearing polynomial c(u) and P(u) = c(u) rho'(u)/rho(u), both polynomial in u.
inline std::pair<CPoly, CPoly> clearing_pair(PainleveKind kind, const ParamSet& params, cplx t) {
  const ParamSet p = shaped(kind, params);
  const cplx a = to_c(p.A()), b = to_c(p.B()), c = to_c(p.C()), d = to_c(p.D());
  const CPoly u{0.0, 1.0}, one_minus_u{1.0, -1.0}, t_minus_u{t, -1.0};
  switch (kind) {
    case PainleveKind::II:
      return {{1.0}, {-t, 0.0, -2.0}};
    case PainleveKind::III:
      return {{0.0, 0.0, 1.0}, {-t, -b - 1.0, -1.0}};
    case PainleveKind::IV:
      return {u, {-b - 1.0, -t, 1.0}};
    case PainleveKind::V: {
      CPoly cu = cpoly_mul(u, one_minus_u);
      CPoly P = cpoly_add(cpoly_scale(one_minus_u, -b - 1.0), cpoly_scale(u, c + 1.0));
      P = cpoly_add(P, cpoly_scale(cu, t));
      return {cu, P};
    }
    case PainleveKind::VI: {
      CPoly cu = cpoly_mul(cpoly_mul(u, one_minus_u), t_minus_u);
      CPoly P = cpoly_scale(cpoly_mul(one_minus_u, t_minus_u), -a - b - 1.0);
      P = cpoly_add(P, cpoly_scale(cpoly_mul(u, t_minus_u), c + 1.0));
      P = cpoly_add(P, cpoly_scale(cpoly_mul(u, one_minus_u), d));
      return {cu, P};
    }
  }
  return {};
}

}  // namespace detail

struct IdentityReport {
  /// Relative residual of the k-th integration-by-parts relation, k = 0..kmax-2.
  std::vector<double> residuals;
  double max_residual = 0.0;
};

/// Coefficients (in u^j) of d/du(u^k c(u) rho)/rho, whose rho-integral vanishes on the contour.
inline std::vector<cplx> moment_relation(PainleveKind kind, const ParamSet& params, cplx t, std::size_t k) {
  auto [c, P] = detail::clearing_pair(kind, params, t);
  detail::CPoly uk(k + 1, 0.0);
  uk[k] = 1.0;
  detail::CPoly q = detail::cpoly_mul(detail::cpoly_diff(uk), c);
  q = detail::cpoly_add(q, detail::cpoly_mul(uk, detail::cpoly_diff(c)));
  q = detail::cpoly_add(q, detail::cpoly_mul(uk, P));
  return q;
}

inline IdentityReport moment_identities(PainleveKind kind, const ParamSet& params, cplx t, const MomentTable& table) {
  IdentityReport rep;
  if (table.tau.size() < 3) return rep;
  double tau_mag = 0.0;
  for (const auto& v : table.tau) tau_mag = std::max(tau_mag, std::abs(v));
  for (std::size_t k = 0; k + 2 <= table.kmax(); ++k) {
    const auto q = moment_relation(kind, params, t, k);
    // Residual relative to |coefficients| times the largest moment in the table.
    cplx sum = 0.0;
    double coeff_mag = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (j >= table.tau.size()) {
        if (q[j] != 0.0) throw std::logic_error("moment relation exceeds table");
        continue;
      }
      sum += q[j] * table.tau[j];
      coeff_mag += std::abs(q[j]);
    }
    const double mag = coeff_mag * tau_mag;
    const double r = mag > 0.0 ? std::abs(sum) / mag : 0.0;
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
  }
  return rep;
}

}  // namespace qpl
