#pragma once

// JSON views of the library's result types. Exact scalars are strings ("p/q+r/s*i"),
// floating complex values are [re, im] pairs.

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpl/hamiltonians.hpp"
#include "qpl/hypergeom.hpp"
#include "qpl/kz.hpp"
#include "qpl/ode.hpp"
#include "qpl/weights.hpp"

namespace qpl::io {

using json = nlohmann::ordered_json;

/// Integral values print without a fractional part; everything else keeps round-trip precision.
inline json number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  return v;
}

inline json number_list(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline json to_json(std::complex<double> z) { return json::array({number(z.real()), number(z.imag())}); }
inline json to_json(const GaussQ& z) { return z.str(); }

template <class V>
json complex_list(const V& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(std::complex<double>(z)));
  return a;
}

inline json to_json(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline json to_json(const QMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).str());
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json to_json(const RationalMatrixFunction& f) {
  json j;
  j["size"] = f.size();
  for (int i = 0; i < 5; ++i) j[RationalMatrixFunction::kNames[static_cast<std::size_t>(i)]] = to_json(f.component(i));
  return j;
}

inline json to_json(const ParamSet& p) {
  json j = json::object();
  const char* names[] = {"a", "b", "c", "d"};
  for (int i = 0; i < 4; ++i)
    if (p.slot(i)) j[names[i]] = p.slot(i)->str();
  j["hbar"] = p.hbar.str();
  return j;
}

inline json to_json(const Mismatch& m) {
  return {{"component", m.component}, {"row", m.row}, {"col", m.col}, {"lhs", m.lhs}, {"rhs", m.rhs}};
}

inline json to_json(const CoeffVector& v) {
  return {{"m", v.m()}, {"coeffs", complex_list(v.coeffs)}, {"err", number(v.err)}};
}

inline json to_json(const MomentTable& t) {
  return {{"kind", to_string(t.kind)}, {"t", to_json(t.t)}, {"tau", complex_list(t.tau)}, {"err", number_list(t.err)}};
}

inline json to_json(const InvarianceReport& r) {
  json f = json::array();
  for (const auto& v : r.factors) f.push_back(v.str());
  return {{"holds", r.holds},
          {"witness", r.witness.str()},
          {"factors", f},
          {"branch", r.branch ? json(to_string(*r.branch)) : json(nullptr)}};
}

inline json to_json(const SymmetryReport& r) {
  return {{"pass", r.pass}, {"first_mismatch", r.mismatch ? to_json(*r.mismatch) : json(nullptr)}};
}

inline json to_json(const KZReport& r) {
  json j;
  j["case"] = to_string(r.kind);
  j["m"] = r.m;
  j["params"] = to_json(r.params);
  j["statement"] = to_string(r.statement);
  j["pass"] = r.pass;
  j["gauge"] = r.gauge ? json::array({(*r.gauge)[0].str(), (*r.gauge)[1].str()}) : json(nullptr);
  j["first_mismatch"] = r.first_mismatch ? to_json(*r.first_mismatch) : json(nullptr);
  return j;
}

inline json to_json(const LemmaReport& r) {
  return {{"lemma", number_list(r.lemma)},
          {"recurrence", number_list(r.recurrence)},
          {"max_residual", number(r.max_residual)}};
}

inline json to_json(const HankelBorderedDet& d) {
  return {{"m", d.m},
          {"t", to_json(d.table.t)},
          {"value", to_json(d.value)},
          {"derivative", to_json(d.derivative)},
          {"hankel", to_json(d.hankel)},
          {"moments", to_json(d.table)}};
}

/// One entry per accepted step: t, phi(t).
inline json to_json(const Trajectory& tr) {
  json nodes = json::array();
  const std::complex<double> d = tr.t1() - tr.t0();
  for (const auto& n : tr.nodes()) {
    json node;
    node["t"] = to_json(n.t);
    node["phi"] = to_json(n.y);
    node["dphi"] = to_json(Eigen::VectorXcd(d == 0.0 ? n.dy : Eigen::VectorXcd(n.dy / d)));
    nodes.push_back(std::move(node));
  }
  return {{"t0", to_json(tr.t0())}, {"t1", to_json(tr.t1())}, {"steps", tr.steps()}, {"nodes", nodes}};
}

/// CSV with header t,re_phi0,im_phi0,...; t is written as its real part, or re+im*i off the real axis.
inline std::string to_csv(const Trajectory& tr) {
  std::ostringstream os;
  os.precision(17);
  const auto n = tr.nodes().empty() ? 0 : tr.nodes().front().y.size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",re_phi" << i << ",im_phi" << i;
  os << "\n";
  for (const auto& node : tr.nodes()) {
    if (node.t.imag() == 0.0) os << node.t.real();
    else os << node.t.real() << (node.t.imag() < 0 ? "" : "+") << node.t.imag() << "i";
    for (Eigen::Index i = 0; i < n; ++i) os << "," << node.y(i).real() << "," << node.y(i).imag();
    os << "\n";
  }
  return os.str();
}

}  // namespace qpl::io
