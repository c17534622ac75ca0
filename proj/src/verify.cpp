#include "jengap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "jengap/gap.hpp"

namespace jengap {

namespace {

using nlohmann::json;

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void normalize(std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v;
  for (double& v : w) v /= s;
}

const FuncExpr& phi_square() {
  static const FuncExpr e = parse_expr("t^2");
  return e;
}
const FuncExpr& phi_exp() {
  static const FuncExpr e = parse_expr("exp(t)");
  return e;
}
const FuncExpr& phi_quartic() {
  static const FuncExpr e = parse_expr("t^4");
  return e;
}
const FuncExpr& phi_abs() {
  static const FuncExpr e = parse_expr("abs(t)");
  return e;
}

const std::vector<const FuncExpr*>& strict_phis() {
  static const std::vector<const FuncExpr*> v{&phi_square(), &phi_exp(),
                                              &phi_quartic()};
  return v;
}

}  // namespace

Instance make_instance(std::uint64_t seed, int index) {
  std::mt19937_64 eng(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(index) + 1)));
  std::uniform_int_distribution<int> natoms(2, 8);
  std::uniform_real_distribution<double> qweight(0.05, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> xval(-10.0, 10.0);

  const int k = natoms(eng);
  std::vector<std::string> labels(k);
  for (int i = 0; i < k; ++i) labels[i] = "w" + std::to_string(i + 1);

  std::vector<double> q(k);
  for (double& w : q) w = qweight(eng);
  int dead = -1;
  if (k >= 3 && unit(eng) < 0.15) {
    dead = std::uniform_int_distribution<int>(0, k - 1)(eng);
    q[dead] = 0.0;  // atom outside both supports
  }
  normalize(q);

  std::vector<double> p(k, 0.0);
  bool any = false;
  for (int i = 0; i < k; ++i) {
    if (i == dead) continue;
    const double drop = unit(eng);
    const double mass = unit(eng);
    if (drop < 0.25) continue;  // P << Q allows P to miss atoms of Q
    p[i] = 0.05 + mass;
    any = true;
  }
  if (!any) p[dead == 0 ? 1 : 0] = 1.0;
  normalize(p);

  std::vector<double> x(k);
  for (double& v : x) v = xval(eng);

  return Instance{DiscreteMeasure(labels, p), DiscreteMeasure(labels, q),
                  std::move(x)};
}

json instance_to_json(const Instance& inst) {
  return json{{"atoms", inst.q.atoms()},
              {"P", inst.p.weights()},
              {"Q", inst.q.weights()},
              {"X", inst.x}};
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::Sandwich: return "sandwich";
    case Suite::ClassifierSoundness: return "classifier-soundness";
    case Suite::TiltIdentities: return "tilt-identities";
    case Suite::EqualityTransfer: return "equality-transfer";
    case Suite::TruncationConvergence: return "truncation-convergence";
    case Suite::NullSets: return "null-sets";
    case Suite::ScaleCovariance: return "scale-covariance";
    case Suite::ConditioningConsistency: return "conditioning-consistency";
  }
  return "?";
}

namespace {

[[noreturn]] void fail_check(const std::string& what) { throw Error(what); }

void require(bool ok, const std::string& what) {
  if (!ok) fail_check(what);
}

void check_sandwich(const Instance& inst) {
  for (const FuncExpr* phi : strict_phis()) {
    const GapBoundReport rep = dragomir_upper(inst.p, inst.q, inst.x, *phi);
    const double band = 1e-9 * std::max(1.0, rep.gap_q);
    require(rep.gap_p <= rep.upper_bound + band,
            "upper bound violated for phi = " + phi->source);
    require(rep.lower_bound <= rep.gap_p + band,
            "lower bound violated for phi = " + phi->source);
  }
}

void check_classifier(const Instance& inst) {
  for (const FuncExpr* phi : strict_phis()) {
    const EqualityDiagnosis d = classify_equality(inst.p, inst.q, inst.x, *phi);
    if (d.kind == EqualityCase::TrivialEqualMeasures) continue;
    const bool cases_equal = d.kind == EqualityCase::BothZero ||
                             d.kind == EqualityCase::EqualFinite;
    require(cases_equal == d.numeric_equal,
            "classifier disagrees with the numeric comparison for phi = " +
                phi->source);
    require(d.numeric_equal == numeric_equality(d.gap_p, d.upper_bound),
            "numeric_equal flag inconsistent for phi = " + phi->source);
  }
}

void check_tilt(const Instance& inst) {
  const RatioProfile ratio = density_ratio(inst.p, inst.q);
  const double mean_p = expectation(inst.p, inst.x);
  const TiltedMeasure t = tilt(inst.p, inst.q, mean_p);

  double sum = 0.0;
  for (double w : t.base.weights()) sum += w;
  require(std::abs(sum - 1.0) <= 1e-12, "tilted weights do not sum to 1");
  for (std::size_t i : ratio.max_set) {
    require(t.base.weight(i) == 0.0, "tilted measure not zero on the max set");
  }
  require(t.base.weight(t.base.size() - 1) == t.y_mass,
          "fresh-atom weight differs from y_mass");

  double e_tilde = t.y_mass * t.x_tilde_at_y;
  for (std::size_t i = 0; i < inst.x.size(); ++i) {
    e_tilde += t.base.weight(i) * inst.x[i];
  }
  const double e_q = expectation(inst.q, inst.x);
  require(std::abs(e_tilde - e_q) <= 1e-12,
          "mean of the extension under the tilted measure differs from E_Q[X]");
}

void check_transfer(const Instance& inst) {
  // Piecewise-affine phi with the support inside one linear piece forces
  // gap_Q = 0; equality must transfer to every P << Q.
  std::vector<double> absx(inst.x.size());
  for (std::size_t i = 0; i < inst.x.size(); ++i) absx[i] = std::abs(inst.x[i]);
  require(equality_transfer_check(inst.p, inst.q, absx, phi_abs()),
          "transfer failed for piecewise-affine phi");

  require(equality_transfer_check(inst.p, inst.q, inst.x, phi_square()),
          "transfer failed for strictly convex phi");

  std::vector<double> constant(inst.x.size(), inst.x[0]);
  require(equality_transfer_check(inst.p, inst.q, constant, phi_square()),
          "transfer failed for constant X");
}

void check_truncation(const Instance& inst) {
  const RatioProfile ratio = density_ratio(inst.p, inst.q);
  std::vector<double> levels{1.0, 2.0, 4.0, ratio.ess_sup};
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const double mean_p = expectation(inst.p, inst.x);
  const double gap_p = jensen_gap(inst.p, inst.x, phi_square());

  // The diagnostic trend tracks the quantities monotone convergence actually
  // controls: the mass and the four unnormalized signed moments. The
  // normalized mean and gap converge (exactly at n = ess_sup) but may
  // overshoot along the way, so their errors are not asserted monotone.
  double prev_mass = -1.0;
  std::array<double, 3> prev_moments{-1e300, -1e300, -1e300};
  for (double n : levels) {
    const TruncatedMeasure tr = truncate(inst.p, inst.q, n);
    require(tr.mass >= prev_mass - 1e-14, "truncated mass decreased");
    prev_mass = tr.mass;

    // X+, X-, and phi(X) = X^2 (whose negative part vanishes).
    std::array<double, 3> moments{0.0, 0.0, 0.0};
    double mean_n = 0.0, ephi_n = 0.0;
    for (std::size_t i = 0; i < tr.weights.size(); ++i) {
      const double w = tr.weights[i];
      const double x = inst.x[i];
      moments[0] += w * std::max(x, 0.0);
      moments[1] += w * std::max(-x, 0.0);
      moments[2] += w * x * x;
      mean_n += w * x;
      ephi_n += w * x * x;
    }
    for (int m = 0; m < 3; ++m) {
      require(moments[m] >= prev_moments[m] - 1e-12,
              "unnormalized moment decreased along the sweep");
      prev_moments[m] = moments[m];
    }

    if (n == ratio.ess_sup) {
      require(tr.weights == inst.p.weights(),
              "truncation at ess_sup does not reproduce P exactly");
      double p_sum = 0.0;
      for (double w : inst.p.weights()) p_sum += w;
      require(tr.mass == p_sum, "mass at ess_sup differs from P's total mass");
      mean_n /= tr.mass;
      ephi_n /= tr.mass;
      const double gap_n = ephi_n - mean_n * mean_n;
      require(std::abs(mean_n - mean_p) <= 1e-12 * std::max(1.0, std::abs(mean_p)),
              "normalized mean at ess_sup differs from the P mean");
      require(std::abs(gap_n - gap_p) <= 1e-10 * std::max(1.0, gap_p),
              "normalized gap at ess_sup differs from the P gap");
    }
  }
}

void check_null_sets(const Instance& inst, std::mt19937_64& aux) {
  const RatioProfile ratio = density_ratio(inst.p, inst.q);

  // On the maximizing set P = ess_sup * Q, so the two measures share null
  // atoms there.
  for (std::size_t i : ratio.max_set) {
    require((inst.p.weight(i) == 0.0) == (inst.q.weight(i) == 0.0),
            "max-set atom is null under one measure only");
  }

  const TiltedMeasure t = tilt(inst.p, inst.q, expectation(inst.p, inst.x));
  std::vector<bool> in_max(inst.q.size(), false);
  for (std::size_t i : ratio.max_set) in_max[i] = true;

  std::uniform_int_distribution<int> coin(0, 1);
  double tilt_mass = 0.0, q_mass = 0.0;
  for (std::size_t i = 0; i < inst.q.size(); ++i) {
    if (in_max[i]) continue;
    if (coin(aux) == 0) continue;
    tilt_mass += t.base.weight(i);
    q_mass += inst.q.weight(i);
  }
  require((tilt_mass == 0.0) == (q_mass == 0.0),
          "tilted measure and Q disagree on a null subset off the max set");
}

// Gap values within tol * max(1, |E phi(X)|, |phi(E X)|) of zero snap to 0,
// so each side of the covariance identity may have been moved by its own
// band; the comparison must budget for both.
double snap_band(const DiscreteMeasure& mu, std::span<const double> x,
                 const FuncExpr& phi) {
  double e_phi = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weight(i) <= 0.0) continue;
    e_phi += mu.weight(i) * eval(phi, x[i]);
    mean += mu.weight(i) * x[i];
  }
  return 1e-9 * std::max({1.0, std::abs(e_phi), std::abs(eval(phi, mean))});
}

void check_scale_covariance(const Instance& inst, std::mt19937_64& aux) {
  std::uniform_real_distribution<double> lam_d(0.5, 3.0);
  std::uniform_real_distribution<double> ab_d(-2.0, 2.0);
  const double lam = lam_d(aux);
  const double a = ab_d(aux);
  const double b = ab_d(aux);

  for (const FuncExpr* phi : {&phi_square(), &phi_exp()}) {
    const FuncExpr scaled = from_ast(
        expr_add(expr_mul(expr_const(lam), phi->ast),
                 expr_add(expr_mul(expr_const(a), expr_var()), expr_const(b))));
    const GapBoundReport base = dragomir_upper(inst.p, inst.q, inst.x, *phi);
    const GapBoundReport rep = dragomir_upper(inst.p, inst.q, inst.x, scaled);

    const double budget_p =
        snap_band(inst.p, inst.x, scaled) + lam * snap_band(inst.p, inst.x, *phi);
    const double budget_q =
        snap_band(inst.q, inst.x, scaled) + lam * snap_band(inst.q, inst.x, *phi);
    const auto close = [&](double got, double want, double budget) {
      return std::abs(got - lam * want) <=
             budget + 1e-9 * std::max(1.0, lam * std::abs(want));
    };
    require(close(rep.gap_p, base.gap_p, budget_p),
            "gap_P does not scale with lambda");
    require(close(rep.gap_q, base.gap_q, budget_q),
            "gap_Q does not scale with lambda");
    require(close(rep.upper_bound, base.upper_bound, rep.ess_sup * budget_q),
            "upper bound does not scale with lambda");
    require(close(rep.lower_bound, base.lower_bound, rep.ess_inf * budget_q),
            "lower bound does not scale with lambda");
    require(close(rep.upper_slack, base.upper_slack,
                  budget_p + rep.ess_sup * budget_q),
            "upper slack does not scale with lambda");
  }
}

void check_conditioning(const Instance& inst, std::mt19937_64& aux) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<std::size_t> event;
  for (int tries = 0; tries < 10 && event.empty(); ++tries) {
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < inst.p.size(); ++i) {
      if (coin(aux)) cand.push_back(i);
    }
    if (!cand.empty() && inst.p.mass(cand) > 0.0) event = std::move(cand);
  }
  if (event.empty()) event = inst.p.support();

  const ConditionalVariance cv =
      conditional_variance_bound(inst.p, event, inst.x);
  const GapBoundReport rep =
      dragomir_upper(condition(inst.p, event), inst.p, inst.x, phi_square());
  require(cv.var_conditional == rep.gap_p,
          "conditional variance differs from the conditioned Jensen gap");
  require(cv.var_conditional <= cv.bound + 1e-9 * std::max(1.0, cv.bound),
          "conditional variance exceeds var / P(event)");
}

void dispatch(Suite suite, const Instance& inst, std::mt19937_64& aux) {
  switch (suite) {
    case Suite::Sandwich: check_sandwich(inst); return;
    case Suite::ClassifierSoundness: check_classifier(inst); return;
    case Suite::TiltIdentities: check_tilt(inst); return;
    case Suite::EqualityTransfer: check_transfer(inst); return;
    case Suite::TruncationConvergence: check_truncation(inst); return;
    case Suite::NullSets: check_null_sets(inst, aux); return;
    case Suite::ScaleCovariance: check_scale_covariance(inst, aux); return;
    case Suite::ConditioningConsistency: check_conditioning(inst, aux); return;
  }
}

}  // namespace

SuiteOutcome run_suite(Suite suite, std::uint64_t seed, int count) {
  if (count < 1) throw InvalidArgument("count must be at least 1");
  SuiteOutcome out;
  out.name = to_string(suite);
  for (int i = 0; i < count; ++i) {
    const Instance inst = make_instance(seed, i);
    std::mt19937_64 aux(splitmix(splitmix(seed) ^
                                 (static_cast<std::uint64_t>(i) * 2 + 1) ^
                                 static_cast<std::uint64_t>(suite)));
    try {
      dispatch(suite, inst, aux);
      ++out.pass;
    } catch (const std::exception& e) {
      ++out.fail;
      if (out.first_failure.is_null()) {
        out.first_failure = json{{"suite", out.name},
                                 {"index", i},
                                 {"error", e.what()},
                                 {"instance", instance_to_json(inst)}};
      }
    }
  }
  return out;
}

VerifyReport run_all_suites(std::uint64_t seed, int count) {
  VerifyReport rep;
  for (Suite s : {Suite::Sandwich, Suite::ClassifierSoundness,
                  Suite::TiltIdentities, Suite::EqualityTransfer,
                  Suite::TruncationConvergence, Suite::NullSets,
                  Suite::ScaleCovariance, Suite::ConditioningConsistency}) {
    SuiteOutcome out = run_suite(s, seed, count);
    rep.total_pass += out.pass;
    rep.total_fail += out.fail;
    if (rep.first_failure.is_null() && !out.first_failure.is_null()) {
      rep.first_failure = out.first_failure;
    }
    rep.suites.push_back(std::move(out));
  }
  return rep;
}

}  // namespace jengap
