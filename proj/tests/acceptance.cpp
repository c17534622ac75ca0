// Acceptance suite: every release criterion checked at its stated tolerance,
// one pass/fail line each. Exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "jengap/gap.hpp"
#include "jengap/measure.hpp"
#include "jengap/quad.hpp"
#include "jengap/verify.hpp"

using namespace jengap;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr int kCount = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

DiscreteMeasure make(std::vector<double> w) {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < w.size(); ++i) atoms.push_back("w" + std::to_string(i + 1));
  return DiscreteMeasure(atoms, std::move(w));
}

Outcome from_suite(Suite suite) {
  const SuiteOutcome out = run_suite(suite, kSeed, kCount);
  Outcome o;
  o.pass = out.fail == 0;
  o.detail = std::to_string(out.pass) + "/" + std::to_string(out.pass + out.fail) +
             " instances clean";
  if (!o.pass) o.detail += "; first failure: " + out.first_failure.dump();
  return o;
}

Outcome sandwich_with_runtime() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o = from_suite(Suite::Sandwich);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail += fmt(", %.2f s", seconds);
  if (seconds >= 5.0) {
    o.pass = false;
    o.detail += " (over the 5 s budget)";
  }
  return o;
}

Outcome equality_case3() {
  const auto p = make({0.4, 0.4, 0.2});
  const auto q = make({0.25, 0.25, 0.5});
  const std::vector<double> x{1.0, -1.0, 0.0};
  const FuncExpr phi = parse_expr("t^2");

  const GapBoundReport rep = dragomir_upper(p, q, x, phi);
  const EqualityDiagnosis d = classify_equality(p, q, x, phi);

  Outcome o;
  const bool tight = std::abs(rep.gap_p - 0.8) <= 1e-12 &&
                     std::abs(rep.upper_bound - 0.8) <= 1e-12;
  const bool classified = d.kind == EqualityCase::EqualFinite && d.cond_a &&
                          d.cond_b && d.cond_c && std::abs(d.constant_c) <= 1e-12;
  o.pass = tight && classified;
  o.detail = fmt("gap_P=%.17g, upper=%.17g", rep.gap_p, rep.upper_bound) +
             ", case=" + to_string(d.kind) + fmt(", c=%.3g", d.constant_c) +
             ", conditions a/b/c " +
             (d.cond_a && d.cond_b && d.cond_c ? "all hold" : "broken");
  return o;
}

Outcome classifier_soundness() {
  int checked = 0;
  for (int i = 0; i < kCount; ++i) {
    const Instance inst = make_instance(kSeed, i);
    for (const char* src : {"t^2", "exp(t)", "t^4"}) {
      const FuncExpr phi = parse_expr(src);
      EqualityDiagnosis d;
      try {
        d = classify_equality(inst.p, inst.q, inst.x, phi);
      } catch (const std::exception& e) {
        return {false, std::string("instance ") + std::to_string(i) + " phi=" +
                           src + ": " + e.what()};
      }
      if (d.kind == EqualityCase::TrivialEqualMeasures) continue;
      const bool cases = d.kind == EqualityCase::BothZero ||
                         d.kind == EqualityCase::EqualFinite;
      const bool numeric = numeric_equality(d.gap_p, d.upper_bound);
      if (cases != numeric) {
        return {false, std::string("equivalence broken at instance ") +
                           std::to_string(i) + " phi=" + src};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " classifications, equivalence holds, "
                "zero contradictions"};
}

Outcome remark1() {
  const Remark1Report rep = remark1_instance();
  Outcome o;
  o.pass = std::abs(rep.gap_p - 0.25) <= 1e-9 && rep.gap_q == 0.0;
  o.detail = fmt("gap_P=%.12g (want 0.25), gap_Q=%.12g (want exactly 0)",
                 rep.gap_p, rep.gap_q);
  return o;
}

Outcome remark2() {
  Outcome o;
  o.pass = true;

  const Remark2Report base = remark2_instance(1.0, 1e-3);
  if (std::abs(base.gap_q - 2.0 / 9.0) > 1e-6) {
    o.pass = false;
    o.detail += fmt("gap_Q=%.9g off 2/9; ", base.gap_q);
  }

  double remainders[3];
  double ratios[3];
  const double eps_values[3] = {1e-3, 1e-6, 1e-9};
  for (int k = 0; k < 3; ++k) {
    const Remark2Report rep = remark2_instance(1.0, eps_values[k]);
    remainders[k] = rep.gap_p_truncated - 0.5 * std::log(1.0 / eps_values[k]);
    ratios[k] = rep.ratio;
  }
  const double variation =
      std::max({remainders[0], remainders[1], remainders[2]}) -
      std::min({remainders[0], remainders[1], remainders[2]});
  if (variation >= 0.01) {
    o.pass = false;
    o.detail += fmt("remainder variation %.3g >= 0.01; ", variation);
  }
  if (!(ratios[0] < ratios[1] && ratios[1] < ratios[2])) {
    o.pass = false;
    o.detail += "ratio not strictly increasing; ";
  }
  if (o.pass) {
    o.detail = fmt("gap_Q=%.9g, remainder variation %.2g", base.gap_q, variation) +
               fmt(", ratios %.3g < %.3g", ratios[0], ratios[1]) +
               fmt(" < %.3g", ratios[2]);
  }
  return o;
}

Outcome example1() {
  const auto p = make({0.25, 0.25, 0.5});
  const std::vector<std::size_t> event{0, 1};
  const std::vector<double> x{1.0, -1.0, 0.0};
  const ConditionalVariance cv = conditional_variance_bound(p, event, x);
  Outcome o;
  o.pass = std::abs(cv.var_conditional - 1.0) <= 1e-12 &&
           std::abs(cv.bound - 1.0) <= 1e-12 &&
           std::abs(cv.var_conditional - cv.bound) <= 1e-12;
  o.detail = fmt("Var_A=%.17g, Var/P(A)=%.17g (equality to 1e-12)",
                 cv.var_conditional, cv.bound);
  return o;
}

Outcome example2() {
  Outcome o;
  o.pass = true;

  const FuncExpr hat = parse_expr("max(0, 1 - 2*abs(t - 1.5))");
  GaussianVarianceBounds b;
  try {
    b = gaussian_variance_bounds(hat, 1.0, 1.5, Interval::closed(1.0, 2.0), 1e-10);
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
  if (b.var1 > b.upper_factor * b.var2 + 1e-6 ||
      b.lower_factor * b.var2 > b.var1 + 1e-6) {
    o.pass = false;
    o.detail += "variance bounds violated; ";
  }

  const GaussianRatio gr = gaussian_ratio(1.0, 1.5);
  double worst = 0.0;
  for (int i = 0; i < 101; ++i) {
    const double x = -7.5 + 15.0 * i / 100.0;  // [-5 sigma2, 5 sigma2]
    const double lhs = eval(gr.ratio.ast, x) * normal_pdf(x, 1.5);
    worst = std::max(worst, std::abs(lhs - normal_pdf(x, 1.0)));
  }
  if (worst > 1e-12) {
    o.pass = false;
    o.detail += fmt("ratio identity off by %.3g; ", worst);
  }
  if (o.pass) {
    o.detail = fmt("%.4g <= var1=%.4g <= %.4g", b.lower_factor * b.var2, b.var1,
                   b.upper_factor * b.var2) +
               fmt(", identity max deviation %.2g on 101 points", worst);
  }
  return o;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "sandwich property, 1000 seeded instances, phi in {t^2, exp, t^4}",
       sandwich_with_runtime},
      {2, "equality case 3 reproduction at 1e-12", equality_case3},
      {3, "classifier soundness over the criterion-1 instances",
       classifier_soundness},
      {4, "domination only on {X != 0} breaks the upper bound", remark1},
      {5, "no finite-p norm replaces the essential supremum (p = 1)", remark2},
      {6, "conditional variance equality instance", example1},
      {7, "gaussian variance bounds and density-ratio identity", example2},
      {8, "tilted-measure identities on 1000 instances",
       [] { return from_suite(Suite::TiltIdentities); }},
      {9, "equality transfer on 1000 instances",
       [] { return from_suite(Suite::EqualityTransfer); }},
      {10, "truncation convergence sweep {1, 2, 4, ess_sup}",
       [] { return from_suite(Suite::TruncationConvergence); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d [%s] %s: %s\n", c.id, o.pass ? "PASS" : "FAIL",
                c.name, o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failures,
              criteria.size());
  return failures;
}
