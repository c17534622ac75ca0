#include "jengap/problem.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "jengap/verify.hpp"
#include "jengap/version.hpp"

namespace jengap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path, msg);
}

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing field");
  return j.at(key);
}

double need_number(const json& j, const std::string& path, const char* key) {
  const json& v = need(j, path, key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::string need_string(const json& j, const std::string& path, const char* key) {
  const json& v = need(j, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

MeasureSpec parse_measure(const json& j, const std::string& path,
                          ProblemKind kind) {
  MeasureSpec m;
  if (!j.is_object()) fail(path, "expected an object");
  if (kind == ProblemKind::Discrete) {
    const json& atoms = need(j, path, "atoms");
    const json& weights = need(j, path, "weights");
    if (!atoms.is_array() || atoms.empty()) fail(path + ".atoms", "expected a nonempty array");
    if (!weights.is_array()) fail(path + ".weights", "expected an array");
    for (const auto& a : atoms) {
      if (!a.is_string()) fail(path + ".atoms", "atom labels must be strings");
      m.atoms.push_back(a.get<std::string>());
    }
    for (const auto& w : weights) {
      if (!w.is_number()) fail(path + ".weights", "weights must be numbers");
      m.weights.push_back(w.get<double>());
    }
    m.family = MeasureSpec::Family::Atoms;
    try {
      DiscreteMeasure check(m.atoms, m.weights);  // full invariant check
    } catch (const InvalidMeasure& e) {
      fail(path + ".weights", e.what());
    }
    return m;
  }
  const std::string family = need_string(j, path, "family");
  if (family == "lebesgue") {
    m.family = MeasureSpec::Family::Lebesgue;
  } else if (family == "gaussian") {
    m.family = MeasureSpec::Family::Gaussian;
    m.mean = need_number(j, path, "mean");
    m.sigma = need_number(j, path, "sigma");
    if (!(m.sigma > 0.0)) fail(path + ".sigma", "sigma must be positive");
    return m;
  } else if (family == "density") {
    m.family = MeasureSpec::Family::DensityExpr;
    m.expr = need_string(j, path, "expr");
    try {
      parse_expr(m.expr);
    } catch (const ParseError& e) {
      fail(path + ".expr", e.what());
    }
  } else {
    fail(path + ".family", "expected lebesgue | gaussian | density");
  }
  const json& support = need(j, path, "support");
  if (!support.is_array() || support.size() != 2 || !support[0].is_number() ||
      !support[1].is_number()) {
    fail(path + ".support", "expected [lo, hi]");
  }
  m.lo = support[0].get<double>();
  m.hi = support[1].get<double>();
  if (!(m.lo < m.hi)) fail(path + ".support", "need lo < hi");
  return m;
}

}  // namespace

ProblemSpec load_problem(const json& doc) {
  ProblemSpec spec;
  spec.raw = doc;
  if (!doc.is_object()) fail("$", "problem file must hold a JSON object");
  const json& ver = need(doc, "$", "schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != 1) {
    fail("$.schema_version", "expected 1");
  }
  const std::string kind = need_string(doc, "$", "kind");
  if (kind == "discrete") spec.kind = ProblemKind::Discrete;
  else if (kind == "continuous") spec.kind = ProblemKind::Continuous;
  else fail("$.kind", "expected discrete | continuous");

  spec.p = parse_measure(need(doc, "$", "P"), "$.P", spec.kind);
  spec.q = parse_measure(need(doc, "$", "Q"), "$.Q", spec.kind);
  if (spec.kind == ProblemKind::Discrete && spec.p.atoms != spec.q.atoms) {
    fail("$.Q.atoms", "P and Q must share the same ordered atom list");
  }

  const json& x = need(doc, "$", "X");
  if (x.is_array()) {
    if (spec.kind == ProblemKind::Continuous) {
      fail("$.X", "continuous problems need X as an expression string");
    }
    for (const auto& v : x) {
      if (!v.is_number()) fail("$.X", "expected numbers");
      spec.x_values.push_back(v.get<double>());
    }
    if (spec.x_values.size() != spec.p.atoms.size()) {
      fail("$.X", "X must align with the atom list");
    }
    spec.x_is_values = true;
  } else if (x.is_string()) {
    spec.x_expr = x.get<std::string>();
    try {
      parse_expr(spec.x_expr);
    } catch (const ParseError& e) {
      fail("$.X", e.what());
    }
  } else {
    fail("$.X", "expected an expression string or an array of numbers");
  }

  const json& phi = need(doc, "$", "phi");
  const std::string intent = need_string(phi, "$.phi", "intent");
  if (intent == "convex") spec.intent = PhiIntent::Convex;
  else if (intent == "concave") spec.intent = PhiIntent::Concave;
  else if (intent == "amgm") spec.intent = PhiIntent::AmGm;
  else fail("$.phi.intent", "expected convex | concave | amgm");
  if (spec.intent != PhiIntent::AmGm) {
    spec.phi_expr = need_string(phi, "$.phi", "expr");
    try {
      parse_expr(spec.phi_expr);
    } catch (const ParseError& e) {
      fail("$.phi.expr", e.what());
    }
  } else if (phi.contains("expr") && phi.at("expr").is_string()) {
    spec.phi_expr = phi.at("expr").get<std::string>();
  }

  if (doc.contains("options")) {
    const json& opt = doc.at("options");
    if (!opt.is_object()) fail("$.options", "expected an object");
    if (opt.contains("tol")) {
      if (!opt.at("tol").is_number()) fail("$.options.tol", "expected a number");
      spec.options.tol = opt.at("tol").get<double>();
      if (!(spec.options.tol > 0.0)) fail("$.options.tol", "must be positive");
    }
    if (opt.contains("quad_tol")) {
      if (!opt.at("quad_tol").is_number()) {
        fail("$.options.quad_tol", "expected a number");
      }
      spec.options.quad_tol = opt.at("quad_tol").get<double>();
      if (!(spec.options.quad_tol >= 1e-12)) {
        fail("$.options.quad_tol", "must be at least 1e-12");
      }
    }
    if (opt.contains("grid")) {
      if (!opt.at("grid").is_number_integer()) {
        fail("$.options.grid", "expected an integer");
      }
      spec.options.grid = opt.at("grid").get<int>();
      if (spec.options.grid < 16) fail("$.options.grid", "must be at least 16");
    }
  }
  return spec;
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("$", "cannot open problem file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("$", std::string("JSON parse error: ") + e.what());
  }
  return load_problem(doc);
}

// ---------------------------------------------------------------------------
// report assembly

namespace {

json report_envelope(const char* command, const json& problem) {
  return json{{"schema_version", 1},
              {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
              {"command", command},
              {"problem", problem},
              {"report", json::object()},
              {"warnings", json::array()}};
}

json bounds_to_json(const GapBoundReport& rep) {
  json b;
  b["gap_P"] = rep.gap_p_infinite ? json() : json(rep.gap_p);
  b["gap_P_divergent"] = rep.gap_p_infinite;
  b["gap_Q"] = rep.gap_q_infinite ? json() : json(rep.gap_q);
  b["gap_Q_divergent"] = rep.gap_q_infinite;
  b["ess_sup"] = std::isfinite(rep.ess_sup) ? json(rep.ess_sup) : json();
  b["ess_inf"] = rep.ess_inf;
  const bool finite = !rep.gap_p_infinite && !rep.gap_q_infinite &&
                      std::isfinite(rep.upper_bound);
  b["upper_bound"] = finite ? json(rep.upper_bound) : json();
  b["lower_bound"] = rep.gap_q_infinite ? json() : json(rep.lower_bound);
  b["upper_slack"] = finite ? json(rep.upper_slack) : json();
  b["lower_slack"] = finite ? json(rep.lower_slack) : json();
  b["reverse_dominates"] = rep.reverse_dominates;
  b["reverse_ess_sup"] =
      rep.reverse_dominates ? json(rep.reverse_ess_sup) : json();
  return b;
}

const char* intent_name(PhiIntent intent) {
  switch (intent) {
    case PhiIntent::Convex: return "convex";
    case PhiIntent::Concave: return "concave";
    case PhiIntent::AmGm: return "amgm";
  }
  return "?";
}

struct DiscreteInputs {
  DiscreteMeasure p;
  DiscreteMeasure q;
  std::vector<double> x;
  FuncExpr phi;  // unused for amgm
  GapOptions opts;
};

DiscreteInputs build_discrete(const ProblemSpec& spec) {
  DiscreteMeasure p(spec.p.atoms, spec.p.weights);
  DiscreteMeasure q(spec.q.atoms, spec.q.weights);
  std::vector<double> x;
  if (spec.x_is_values) {
    x = spec.x_values;
  } else {
    const FuncExpr xe = parse_expr(spec.x_expr);
    for (const std::string& label : spec.p.atoms) {
      char* end = nullptr;
      const double t = std::strtod(label.c_str(), &end);
      if (end == label.c_str() || *end != '\0') {
        fail("$.X",
             "atom label '" + label +
                 "' is not numeric; an expression X needs numeric labels");
      }
      x.push_back(eval(xe, t));
    }
  }
  FuncExpr phi = spec.intent == PhiIntent::AmGm ? parse_expr("t")
                                                : parse_expr(spec.phi_expr);
  GapOptions opts;
  opts.tol = spec.options.tol;
  opts.convexity_grid = spec.options.grid;
  return DiscreteInputs{std::move(p), std::move(q), std::move(x),
                        std::move(phi), opts};
}

struct ContinuousInputs {
  Density p;
  Density q;
  FuncExpr x;
  FuncExpr phi;
};

Density build_density(const MeasureSpec& m, double quad_tol) {
  switch (m.family) {
    case MeasureSpec::Family::Lebesgue:
      return lebesgue_density(Interval::closed(m.lo, m.hi), quad_tol);
    case MeasureSpec::Family::Gaussian:
      return gaussian_density(m.mean, m.sigma, quad_tol);
    case MeasureSpec::Family::DensityExpr:
      return make_density(parse_expr(m.expr), Interval::closed(m.lo, m.hi),
                          quad_tol);
    case MeasureSpec::Family::Atoms:
      break;
  }
  throw InvalidArgument("not a continuous measure description");
}

ContinuousInputs build_continuous(const ProblemSpec& spec) {
  return ContinuousInputs{
      build_density(spec.p, spec.options.quad_tol),
      build_density(spec.q, spec.options.quad_tol),
      parse_expr(spec.x_expr),
      spec.intent == PhiIntent::AmGm ? parse_expr("t")
                                     : parse_expr(spec.phi_expr)};
}

/// Essential bounds of the density quotient. Exact for the same-mean
/// gaussian pair; estimated on a probe grid otherwise.
void continuous_ess_bounds(const ProblemSpec& spec, const ContinuousInputs& in,
                           GapBoundReport& rep, json& warnings) {
  const auto& pm = spec.p;
  const auto& qm = spec.q;
  if (pm.family == MeasureSpec::Family::Gaussian &&
      qm.family == MeasureSpec::Family::Gaussian && pm.mean == qm.mean &&
      pm.sigma <= qm.sigma) {
    rep.ess_sup = qm.sigma / pm.sigma;
    const GaussianRatio gr = gaussian_ratio(pm.sigma, qm.sigma);
    rep.ess_inf = eval(gr.ratio.ast, 8.0 * qm.sigma);
    return;
  }
  const int probes = 2049;
  const Interval s = in.q.support;
  double sup = 0.0, inf = std::numeric_limits<double>::infinity();
  bool ac_broken = false;
  for (int i = 1; i <= probes; ++i) {
    const double t = s.lo + s.width() * i / (probes + 1);
    const double qv = eval(in.q.expr.ast, t);
    double pv = 0.0;
    if (in.p.support.contains(t)) pv = eval(in.p.expr.ast, t);
    if (qv <= 1e-300) {
      if (pv > 1e-12) ac_broken = true;
      continue;
    }
    const double r = pv / qv;
    sup = std::max(sup, r);
    inf = std::min(inf, r);
  }
  // P-mass outside Q's support also breaks domination.
  if (in.p.support.lo < s.lo - 1e-12 || in.p.support.hi > s.hi + 1e-12) {
    ac_broken = true;
  }
  rep.ess_sup = sup;
  rep.ess_inf = std::isfinite(inf) ? inf : 0.0;
  warnings.push_back(
      "ess_sup/ess_inf estimated on a 2049-point probe grid of the density "
      "quotient");
  if (ac_broken) {
    warnings.push_back(
        "absolute continuity appears violated (P mass where Q vanishes); the "
        "upper bound is not valid");
  }
}

json run_bounds_discrete(const ProblemSpec& spec) {
  const DiscreteInputs in = build_discrete(spec);
  GapBoundReport rep;
  switch (spec.intent) {
    case PhiIntent::Convex:
      rep = dragomir_lower(in.p, in.q, in.x, in.phi, in.opts);
      break;
    case PhiIntent::Concave:
      rep = concave_bounds(in.p, in.q, in.x, in.phi, in.opts);
      break;
    case PhiIntent::AmGm:
      rep = amgm_bounds(in.p, in.q, in.x, in.opts);
      break;
  }
  json out = report_envelope("bounds", spec.raw);
  out["report"]["intent"] = intent_name(spec.intent);
  out["report"]["bounds"] = bounds_to_json(rep);
  return out;
}

double continuous_amgm_gap(const Density& dens, const FuncExpr& x, double tol) {
  const RealFn mean_fn = [&](double t) {
    return eval(x.ast, t) * eval(dens.expr.ast, t);
  };
  const RealFn log_fn = [&](double t) {
    const double v = eval(x.ast, t);
    if (!(v > 0.0)) throw NonpositiveValue("X must be positive for amgm");
    return std::log(v) * eval(dens.expr.ast, t);
  };
  const double mean = integrate(mean_fn, dens.support, tol, dens.breakpoints).value;
  const double geo =
      std::exp(integrate(log_fn, dens.support, tol, dens.breakpoints).value);
  const double raw = mean - geo;
  const double band = 1e-9 * std::max({1.0, std::abs(mean), std::abs(geo)});
  return std::abs(raw) <= band ? 0.0 : raw;
}

json run_bounds_continuous(const ProblemSpec& spec) {
  const ContinuousInputs in = build_continuous(spec);
  const double qtol = spec.options.quad_tol;
  json out = report_envelope("bounds", spec.raw);
  json& warnings = out["warnings"];

  GapBoundReport rep;
  if (spec.intent == PhiIntent::AmGm) {
    rep.gap_p = continuous_amgm_gap(in.p, in.x, qtol);
    rep.gap_q = continuous_amgm_gap(in.q, in.x, qtol);
  } else {
    const FuncExpr phi =
        spec.intent == PhiIntent::Concave ? negate(in.phi) : in.phi;
    const ContinuousGap gp = continuous_gap(in.p, in.x, phi, qtol);
    const ContinuousGap gq = continuous_gap(in.q, in.x, phi, qtol);
    rep.gap_p = gp.value;
    rep.gap_p_infinite = gp.divergent;
    rep.gap_q = gq.value;
    rep.gap_q_infinite = gq.divergent;
    if (gp.divergent) warnings.push_back("gap_P diverges (growing refinement trend)");
    if (gq.divergent) warnings.push_back("gap_Q diverges (growing refinement trend)");
  }
  continuous_ess_bounds(spec, in, rep, warnings);
  if (!rep.gap_p_infinite && !rep.gap_q_infinite) {
    rep.upper_bound = rep.gap_q == 0.0 ? 0.0 : rep.ess_sup * rep.gap_q;
    rep.lower_bound = rep.ess_inf * rep.gap_q;
    rep.upper_slack = rep.upper_bound - rep.gap_p;
    rep.lower_slack = rep.gap_p - rep.lower_bound;
  }
  if (rep.ess_inf > 0.0) {
    rep.reverse_dominates = true;
    rep.reverse_ess_sup = 1.0 / rep.ess_inf;
  }
  out["report"]["intent"] = intent_name(spec.intent);
  out["report"]["bounds"] = bounds_to_json(rep);
  return out;
}

}  // namespace

json run_bounds(const ProblemSpec& spec) {
  json out = spec.kind == ProblemKind::Discrete ? run_bounds_discrete(spec)
                                                : run_bounds_continuous(spec);
  validate_report(out);
  return out;
}

json run_diagnose(const ProblemSpec& spec) {
  if (spec.kind != ProblemKind::Discrete) {
    fail("$.kind",
         "diagnose works on discrete problems; the divergence (case-1) "
         "diagnosis is provided by the counterexample command");
  }
  if (spec.intent != PhiIntent::Convex) {
    fail("$.phi.intent", "diagnose needs a (strictly) convex phi");
  }
  const DiscreteInputs in = build_discrete(spec);
  const EqualityDiagnosis d = classify_equality(in.p, in.q, in.x, in.phi, in.opts);
  const GapBoundReport rep = dragomir_lower(in.p, in.q, in.x, in.phi, in.opts);

  json out = report_envelope("diagnose", spec.raw);
  out["report"]["intent"] = intent_name(spec.intent);
  out["report"]["bounds"] = bounds_to_json(rep);
  json diag;
  diag["case"] = to_string(d.kind);
  diag["shared_value"] = d.has_shared_value ? json(d.shared_value) : json();
  diag["conditions"] = {{"a", d.cond_a}, {"b", d.cond_b}, {"c", d.cond_c}};
  diag["constant_c"] = d.has_constant ? json(d.constant_c) : json();
  json max_set = json::array();
  for (std::size_t i : d.max_set) max_set.push_back(in.q.atoms()[i]);
  diag["max_set"] = max_set;
  diag["means"] = {{"E_Q_X", d.mean_x_q},
                   {"mean_A_under_Q", d.mean_x_a_q},
                   {"E_P_X", d.mean_x_p},
                   {"mean_A_under_P", d.mean_x_a_p}};
  diag["numeric_equal"] = d.numeric_equal;
  diag["gap_P"] = d.gap_p;
  diag["gap_Q"] = d.gap_q;
  diag["upper_bound"] = d.upper_bound;
  out["report"]["diagnosis"] = diag;
  validate_report(out);
  return out;
}

json run_verify_report(std::uint64_t seed, int count) {
  const VerifyReport rep = run_all_suites(seed, count);
  json out = report_envelope("verify", json());
  out["report"]["seed"] = seed;
  out["report"]["count"] = count;
  json suites = json::array();
  for (const SuiteOutcome& s : rep.suites) {
    suites.push_back({{"name", s.name}, {"pass", s.pass}, {"fail", s.fail}});
  }
  out["report"]["suites"] = suites;
  out["report"]["total_pass"] = rep.total_pass;
  out["report"]["total_fail"] = rep.total_fail;
  out["report"]["failures"] = rep.first_failure.is_null()
                                  ? json::array()
                                  : json::array({rep.first_failure});
  validate_report(out);
  return out;
}

json run_counterexample(const std::string& name, std::optional<double> p,
                        std::optional<double> eps) {
  json out = report_envelope("counterexample", json());
  json& rep = out["report"];
  if (name == "remark1") {
    const Remark1Report r = remark1_instance();
    rep["name"] = "remark1";
    rep["gap_P"] = r.gap_p;
    rep["gap_Q"] = r.gap_q;
    rep["ratio_on_support"] = r.ratio_on_support;
    rep["upper_bound_fails"] = r.upper_bound_fails;
    rep["hypothesis_violated"] =
        "P << Q holds only on {X != 0}; P keeps mass where Q vanishes";
    rep["verdict"] = r.verdict;
  } else if (name == "remark2") {
    const Remark2Report r = remark2_instance(p.value_or(1.0), eps.value_or(1e-9));
    rep["name"] = "remark2";
    rep["p"] = r.p;
    rep["eps"] = r.eps;
    rep["C"] = r.normalizer;
    rep["gap_Q"] = r.gap_q;
    rep["gap_Q_closed"] = r.gap_q_closed;
    rep["lp_norm"] = r.lp_norm;
    rep["lp_norm_closed"] = r.lp_norm_closed;
    rep["mean_P"] = r.mean_p;
    rep["gap_P_truncated"] = r.gap_p_truncated;
    rep["ratio"] = r.ratio;
    rep["diagnosis"] = {{"case", "case1-both-infinite"},
                        {"phi_moment_divergent", r.phi_moment_divergent},
                        {"ratio_unbounded", r.ratio_unbounded}};
    rep["verdict"] = r.verdict;
  } else {
    fail("$.name", "unknown counterexample '" + name +
                       "'; expected remark1 | remark2");
  }
  validate_report(out);
  return out;
}

// ---------------------------------------------------------------------------
// report validation and summaries

namespace {

void require_schema(bool ok, const std::string& where) {
  if (!ok) throw ValidationError(where, "emitted report fails its schema");
}

void check_number_or_null(const json& j, const std::string& where) {
  require_schema(j.is_number() || j.is_null(), where);
}

void check_bounds_block(const json& b, const std::string& where) {
  require_schema(b.is_object(), where);
  for (const char* key : {"gap_P", "gap_Q", "ess_sup", "upper_bound",
                          "lower_bound", "upper_slack", "lower_slack",
                          "reverse_ess_sup"}) {
    require_schema(b.contains(key), where + "." + key);
    check_number_or_null(b.at(key), where + "." + key);
  }
  require_schema(b.contains("ess_inf") && b.at("ess_inf").is_number(),
                 where + ".ess_inf");
  for (const char* key : {"gap_P_divergent", "gap_Q_divergent", "reverse_dominates"}) {
    require_schema(b.contains(key) && b.at(key).is_boolean(), where + "." + key);
  }
}

}  // namespace

void validate_report(const json& report) {
  require_schema(report.is_object(), "$");
  require_schema(report.contains("schema_version") &&
                     report.at("schema_version") == 1,
                 "$.schema_version");
  const json& tool = report.at("tool");
  require_schema(tool.is_object() && tool.at("name").is_string() &&
                     tool.at("version").is_string(),
                 "$.tool");
  require_schema(report.contains("command") && report.at("command").is_string(),
                 "$.command");
  require_schema(report.contains("warnings") && report.at("warnings").is_array(),
                 "$.warnings");
  const std::string command = report.at("command").get<std::string>();
  const json& rep = report.at("report");
  if (command == "bounds" || command == "diagnose") {
    check_bounds_block(rep.at("bounds"), "$.report.bounds");
  }
  if (command == "diagnose") {
    const json& d = rep.at("diagnosis");
    require_schema(d.is_object() && d.at("case").is_string(),
                   "$.report.diagnosis");
    const std::string c = d.at("case").get<std::string>();
    require_schema(c == "case1-both-infinite" || c == "case2-both-zero" ||
                       c == "case3-equal-finite" || c == "strict-inequality" ||
                       c == "trivial-equal-measures",
                   "$.report.diagnosis.case");
    const json& conds = d.at("conditions");
    require_schema(conds.at("a").is_boolean() && conds.at("b").is_boolean() &&
                       conds.at("c").is_boolean(),
                   "$.report.diagnosis.conditions");
    require_schema(d.at("numeric_equal").is_boolean(),
                   "$.report.diagnosis.numeric_equal");
  }
  if (command == "verify") {
    require_schema(rep.at("suites").is_array(), "$.report.suites");
    for (const json& s : rep.at("suites")) {
      require_schema(s.at("name").is_string() &&
                         s.at("pass").is_number_integer() &&
                         s.at("fail").is_number_integer(),
                     "$.report.suites[]");
    }
    require_schema(rep.at("total_pass").is_number_integer() &&
                       rep.at("total_fail").is_number_integer() &&
                       rep.at("failures").is_array(),
                   "$.report.totals");
  }
  if (command == "counterexample") {
    const std::string name = rep.at("name").get<std::string>();
    require_schema(name == "remark1" || name == "remark2", "$.report.name");
  }
}

std::string summarize_report(const json& report) {
  std::ostringstream os;
  os.precision(12);
  const std::string command = report.at("command").get<std::string>();
  const json& rep = report.at("report");
  if (command == "bounds" || command == "diagnose") {
    const json& b = rep.at("bounds");
    const auto show = [&](const char* key) -> std::string {
      const json& v = b.at(key);
      if (v.is_null()) return "divergent";
      std::ostringstream s;
      s.precision(12);
      s << v.get<double>();
      return s.str();
    };
    os << "gap_P = " << show("gap_P") << ", gap_Q = " << show("gap_Q")
       << ", ess_sup = " << show("ess_sup")
       << ", ess_inf = " << b.at("ess_inf").get<double>() << "\n"
       << "bounds: " << show("lower_bound") << " <= gap_P <= "
       << show("upper_bound") << " (slack " << show("upper_slack") << ")";
    if (command == "diagnose") {
      os << "\nequality case: "
         << rep.at("diagnosis").at("case").get<std::string>();
    }
  } else if (command == "verify") {
    os << "verify seed=" << rep.at("seed").get<std::uint64_t>()
       << " count=" << rep.at("count").get<int>() << ": "
       << rep.at("total_pass").get<int>() << " pass, "
       << rep.at("total_fail").get<int>() << " fail";
    for (const json& s : rep.at("suites")) {
      os << "\n  " << s.at("name").get<std::string>() << ": "
         << s.at("pass").get<int>() << "/"
         << (s.at("pass").get<int>() + s.at("fail").get<int>()) << " pass";
    }
  } else if (command == "counterexample") {
    os << rep.at("name").get<std::string>() << ": "
       << rep.at("verdict").get<std::string>();
  }
  for (const json& w : report.at("warnings")) {
    os << "\nwarning: " << w.get<std::string>();
  }
  return os.str();
}

}  // namespace jengap
