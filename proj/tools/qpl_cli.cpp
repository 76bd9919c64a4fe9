#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpl/qpl.hpp"
#include "qpl/serialize.hpp"

using namespace qpl;
using io::json;

namespace {

enum Exit { kPass = 0, kFailed = 1, kUsage = 2, kNumerical = 3 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::IdentityFailed:
    case ErrorCode::GaugeNotScalar:
    case ErrorCode::NotInSpan: return kFailed;
    case ErrorCode::NoConvergentContour:
    case ErrorCode::NotConverged:
    case ErrorCode::BudgetExceeded:
    case ErrorCode::StepUnderflow: return kNumerical;
    default: return kUsage;
  }
}

struct Config {
  std::string kind;
  unsigned m = 0, n = 1;
  std::optional<std::string> a, b, c, d;
  std::string hbar = "1";
  std::string t = "1", t0, t1;
  std::optional<std::string> phi0;
  std::size_t nodes = 128, kmax = 4;
  double tol = 1e-8, rtol = 1e-10, atol = 1e-12, threshold = 1e-6;
  std::string format = "json", statement = "printed", source = "phi";
};

ParamSet params_of(const Config& cfg, PainleveKind kind) {
  ParamSet p;
  const std::optional<std::string>* slots[] = {&cfg.a, &cfg.b, &cfg.c, &cfg.d};
  for (int i = 0; i < 4; ++i)
    if (*slots[i]) p.slot(i) = parse_gauss(**slots[i]);
  p.hbar = parse_gauss(cfg.hbar);
  // Slots the kind does not use may be left out; the remaining ones default to 0.
  for (int i = 1; i < slot_count(kind); ++i)
    if (!p.slot(i)) p.slot(i) = GaussQ(0);
  return p;
}

std::complex<double> complex_of(const std::string& s) { return parse_gauss(s).to_complex(); }

unsigned integer_hbar(const ParamSet& p) {
  if (!p.hbar.is_integer() || sgn(p.hbar.re()) <= 0)
    fail(ErrorCode::BadParamShape, "quadrature needs hbar to be a positive integer");
  return static_cast<unsigned>(p.hbar.re().get_num().get_ui());
}

Statement statement_of(const std::string& s) {
  if (s == "printed") return Statement::Printed;
  if (s == "corrected") return Statement::Corrected;
  fail(ErrorCode::ParseError, "statement must be 'printed' or 'corrected'");
}

double eval_budget() {
  const char* env = std::getenv("QPL_EVAL_BUDGET");
  if (!env || !*env) return kDefaultEvalBudget;
  try {
    std::size_t used = 0;
    const double v = std::stod(env, &used);
    if (used != std::string(env).size() || !(v > 0)) throw std::invalid_argument("budget");
    return v;
  } catch (const std::logic_error&) {
    fail(ErrorCode::ParseError, std::string("QPL_EVAL_BUDGET is not a positive number: ") + env);
  }
}

PhiOptions phi_options(const Config& cfg) {
  PhiOptions o;
  o.nodes = cfg.nodes;
  o.budget = eval_budget();
  return o;
}

std::vector<std::complex<double>> parse_list(const std::string& s) {
  std::vector<std::complex<double>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(complex_of(item));
  return out;
}

json header(const char* cmd, PainleveKind kind, const Config& cfg, const ParamSet& p) {
  json j;
  j["command"] = cmd;
  j["kind"] = to_string(kind);
  j["m"] = cfg.m;
  j["params"] = io::to_json(p);
  return j;
}

int emit(const json& j, bool pass = true) {
  std::cout << j.dump() << "\n";
  return pass ? kPass : kFailed;
}

int run_matrix(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  const ParamSet p = params_of(cfg, kind);
  const auto H = build_hamiltonian_matrix(kind, p, cfg.m);
  json j = header("matrix", kind, cfg, p);
  j["branch"] = to_string(H.branch);
  j["matrix"] = io::to_json(H.matrix);
  return emit(j);
}

int run_invariance(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  ParamSet p = params_of(cfg, kind);
  if (!p.a) p.a = GaussQ(0);
  validate(kind, p);
  const auto rep = invariance_condition(kind, p, cfg.m);
  json j = header("invariance", kind, cfg, p);
  j["report"] = io::to_json(rep);
  return emit(j, rep.holds);
}

int run_integrate(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  ParamSet p = params_of(cfg, kind);
  if (cfg.t0.empty() || cfg.t1.empty()) fail(ErrorCode::ParseError, "integrate needs --t0 and --t1");
  const auto t0 = complex_of(cfg.t0), t1 = complex_of(cfg.t1);
  cvec y0;
  if (cfg.phi0) {
    const auto v = parse_list(*cfg.phi0);
    y0 = Eigen::Map<const cvec>(v.data(), static_cast<Eigen::Index>(v.size()));
    if (!p.a) p.a = GaussQ(static_cast<long>(cfg.m)) * p.hbar;
  } else {
    const unsigned h = integer_hbar(p);
    y0 = to_eigen(phi_m(kind, p, h, cfg.m, t0, phi_options(cfg)));
    p = integral_params(kind, p, h, cfg.m);
  }
  const auto sys = schrodinger_system(kind, p, cfg.m);
  IntegrateOptions opt;
  opt.rtol = cfg.rtol;
  opt.atol = cfg.atol;
  const auto tr = integrate(sys, t0, t1, y0, opt);
  if (cfg.format == "csv") {
    std::cout << io::to_csv(tr);
    return kPass;
  }
  json j = header("integrate", kind, cfg, p);
  j["trajectory"] = io::to_json(tr);
  return emit(j);
}

int run_moments(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  ParamSet p = params_of(cfg, kind);
  if (!p.a) p.a = GaussQ(0);
  MomentOptions o;
  o.nodes = cfg.nodes;
  o.tol = cfg.tol;
  const auto tab = moments(kind, p, complex_of(cfg.t), cfg.kmax, o);
  json j = io::to_json(tab);
  j["identities"] = io::number_list(moment_identities(kind, p, tab.t, tab).residuals);
  return emit(j);
}

int run_phi(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  const ParamSet p = params_of(cfg, kind);
  const auto t = complex_of(cfg.t);
  const auto pr = phi_m_with_derivative(kind, p, integer_hbar(p), cfg.m, t, phi_options(cfg));
  json j = io::to_json(pr.phi);
  j["kind"] = to_string(kind);
  j["t"] = io::to_json(t);
  j["dcoeffs"] = io::complex_list(pr.dphi.coeffs);
  return emit(j);
}

int run_det(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  const ParamSet p = params_of(cfg, kind);
  DeterminantOptions o;
  o.nodes = cfg.nodes;
  o.tol = cfg.tol;
  const auto det = determinant_solution(kind, p, cfg.m, complex_of(cfg.t), o);
  json j = io::to_json(det);
  j["kind"] = to_string(kind);
  return emit(j);
}

int run_residual(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  const ParamSet p = params_of(cfg, kind);
  const auto t = complex_of(cfg.t);
  const auto st = statement_of(cfg.statement);
  double r = 0.0;
  if (cfg.source == "phi") {
    r = schrodinger_residual(kind, p, integer_hbar(p), cfg.m, t, phi_options(cfg), st);
  } else if (cfg.source == "det") {
    DeterminantOptions o;
    o.nodes = cfg.nodes;
    o.tol = cfg.tol;
    r = determinant_residual(kind, p, cfg.m, t, o, st);
  } else {
    fail(ErrorCode::ParseError, "source must be 'phi' or 'det'");
  }
  json j = header("residual", kind, cfg, p);
  j["t"] = io::to_json(t);
  j["source"] = cfg.source;
  j["statement"] = cfg.statement;
  j["residual"] = io::number(r);
  j["threshold"] = io::number(cfg.threshold);
  j["pass"] = r <= cfg.threshold;
  return emit(j, r <= cfg.threshold);
}

int run_ortho(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  ParamSet p = params_of(cfg, kind);
  if (!p.a) p.a = GaussQ(0);
  DeterminantOptions o;
  o.nodes = cfg.nodes;
  o.tol = cfg.tol;
  const auto t = complex_of(cfg.t);
  const auto v = orthogonality_check(kind, p, cfg.m, cfg.n, t, o);
  json j = header("ortho", kind, cfg, p);
  j["n"] = cfg.n;
  j["t"] = io::to_json(t);
  j["value"] = io::to_json(v);
  j["abs"] = io::number(std::abs(v));
  j["pass"] = std::abs(v) <= cfg.threshold;
  return emit(j, std::abs(v) <= cfg.threshold);
}

int run_verify_kz(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  const ParamSet p = params_of(cfg, kind);
  const auto rep = verify_theorem(kind, p, cfg.m, statement_of(cfg.statement));
  return emit(io::to_json(rep), rep.pass);
}

int run_verify_symmetry(const Config& cfg) {
  const auto kind = parse_kind(cfg.kind);
  ParamSet p = params_of(cfg, kind);
  if (!p.a) p.a = -GaussQ(static_cast<long>(cfg.m)) * p.hbar;
  const auto rep = verify_symmetry(kind, p, cfg.m);
  json j = header("verify-symmetry", kind, cfg, p);
  j["report"] = io::to_json(rep);
  return emit(j, rep.pass);
}

int run_verify_lemma(const Config& cfg) {
  const ParamSet p = params_of(cfg, PainleveKind::VI);
  SelbergOptions o;
  o.nodes = cfg.nodes;
  o.budget = eval_budget();
  const auto t = complex_of(cfg.t);
  const auto rep = verify_lemma_recurrences(p, integer_hbar(p), cfg.m, t, o);
  json j = header("verify-lemma", PainleveKind::VI, cfg, p);
  j["t"] = io::to_json(t);
  j["report"] = io::to_json(rep);
  j["pass"] = rep.max_residual <= cfg.threshold;
  return emit(j, rep.max_residual <= cfg.threshold);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Painleve toolkit: Hamiltonian matrices, integral solutions and KZ checks"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub, bool needs_kind = true) {
    if (needs_kind) sub->add_option("--kind,--case", cfg.kind, "II, III, IV, V or VI")->required();
    sub->add_option("--m", cfg.m, "polynomial degree");
    sub->add_option("--a", cfg.a, "parameter a (p/q or p/q+r/s*i)");
    sub->add_option("--b", cfg.b, "parameter b");
    sub->add_option("--c", cfg.c, "parameter c");
    sub->add_option("--d", cfg.d, "parameter d");
    sub->add_option("--hbar", cfg.hbar, "Planck constant (exact)");
  };
  auto add_t = [&](CLI::App* sub) { sub->add_option("--t", cfg.t, "time (floating, complex allowed)"); };
  auto add_nodes = [&](CLI::App* sub) {
    sub->add_option("--nodes", cfg.nodes, "quadrature nodes per variable")->check(CLI::Range(8, 1 << 20));
    sub->add_option("--tol", cfg.tol, "node-doubling tolerance");
  };
  auto add_threshold = [&](CLI::App* sub) { sub->add_option("--threshold", cfg.threshold, "pass threshold"); };

  std::vector<std::pair<CLI::App*, int (*)(const Config&)>> subs;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Config&)) {
    CLI::App* s = app.add_subcommand(name, help);
    subs.emplace_back(s, fn);
    return s;
  };

  add_common(sub("matrix", "exact matrix of H_J on polynomials of degree <= m", run_matrix));
  add_common(sub("invariance", "check whether H_J preserves degree <= m", run_invariance));

  auto* integ = sub("integrate", "integrate the Schrodinger system along a segment", run_integrate);
  add_common(integ);
  integ->add_option("--t0", cfg.t0)->required();
  integ->add_option("--t1", cfg.t1)->required();
  integ->add_option("--phi0", cfg.phi0, "comma-separated initial coefficients (default: quadrature)");
  integ->add_option("--rtol", cfg.rtol)->check(CLI::PositiveNumber);
  integ->add_option("--atol", cfg.atol)->check(CLI::PositiveNumber);
  integ->add_option("--nodes", cfg.nodes, "quadrature nodes for the seed")->check(CLI::Range(8, 1 << 20));
  integ->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));

  auto* mom = sub("moments", "moments of the master function", run_moments);
  add_common(mom);
  add_t(mom);
  add_nodes(mom);
  mom->add_option("--kmax", cfg.kmax);

  auto* phi = sub("phi", "integral solution Phi_m(x, t)", run_phi);
  add_common(phi);
  add_t(phi);
  phi->add_option("--nodes", cfg.nodes)->check(CLI::Range(8, 1 << 20));

  auto* det = sub("det", "Hankel-bordered determinant solution (hbar = 1)", run_det);
  add_common(det);
  add_t(det);
  add_nodes(det);

  auto* res = sub("residual", "Schrodinger residual of Phi_m or of the determinant solution", run_residual);
  add_common(res);
  add_t(res);
  add_nodes(res);
  add_threshold(res);
  res->add_option("--source", cfg.source)->check(CLI::IsMember({"phi", "det"}));
  res->add_option("--statement", cfg.statement)->check(CLI::IsMember({"printed", "corrected"}));

  auto* ortho = sub("ortho", "orthogonality of P_m and P_n", run_ortho);
  add_common(ortho);
  add_t(ortho);
  add_nodes(ortho);
  add_threshold(ortho);
  ortho->add_option("--n", cfg.n);

  auto* kz = sub("verify-kz", "exact KZ / Painleve identity", run_verify_kz);
  add_common(kz);
  kz->add_option("--statement", cfg.statement)->check(CLI::IsMember({"printed", "corrected"}));

  add_common(sub("verify-symmetry", "hbar -> -hbar symmetry", run_verify_symmetry));

  auto* lem = sub("verify-lemma", "integration-by-parts lemma and recurrence (VI)", run_verify_lemma);
  add_common(lem, false);
  add_t(lem);
  add_threshold(lem);
  lem->add_option("--nodes", cfg.nodes)->check(CLI::Range(8, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (auto& [s, fn] : subs)
      if (s->parsed()) return fn(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
