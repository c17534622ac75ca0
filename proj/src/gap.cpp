#include "jengap/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace jengap {

namespace {

const FuncExpr& square_expr() {
  static const FuncExpr sq = parse_expr("t^2");
  return sq;
}

double eval_phi_at(const FuncExpr& phi, double x) {
  if (!phi.domain.contains(x)) {
    std::ostringstream os;
    os.precision(17);
    os << "value " << x << " lies outside the domain of " << phi.source;
    throw RangeNotContained(os.str());
  }
  try {
    return eval(phi, x);
  } catch (const DomainError& e) {
    std::ostringstream os;
    os.precision(17);
    os << phi.source << " is not evaluable at " << x << " (" << e.what() << ")";
    throw RangeNotContained(os.str());
  }
}

struct Range {
  double lo = 0.0, hi = 0.0;
  bool degenerate = true;
};

Range support_range(const DiscreteMeasure& mu, std::span<const double> x) {
  Range r;
  bool first = true;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weight(i) <= 0.0) continue;
    if (first) {
      r.lo = r.hi = x[i];
      first = false;
    } else {
      r.lo = std::min(r.lo, x[i]);
      r.hi = std::max(r.hi, x[i]);
    }
  }
  r.degenerate = !(r.hi > r.lo);
  return r;
}

/// Convexity gate on the data range. Narrow ranges are widened to
/// min_gate_width (falling back to the exact range when the widening leaves
/// the evaluable region); a degenerate range returns nullopt and passes
/// every gate vacuously.
std::optional<Convexity> gate_classification(const FuncExpr& phi, Range range,
                                             const GapOptions& opts) {
  if (range.degenerate) return std::nullopt;
  Interval exact = Interval::closed(range.lo, range.hi);
  if (exact.width() < opts.min_gate_width) {
    const double mid = 0.5 * (range.lo + range.hi);
    Interval wide = Interval::closed(mid - 0.5 * opts.min_gate_width,
                                     mid + 0.5 * opts.min_gate_width);
    try {
      return check_convexity(phi, wide, opts.convexity_grid, opts.tol)
          .classification;
    } catch (const DomainError&) {
      // widening left the domain; judge on the data range alone
    }
  }
  return check_convexity(phi, exact, opts.convexity_grid, opts.tol)
      .classification;
}

bool is_convex(Convexity c) {
  return c == Convexity::StrictlyConvex || c == Convexity::Convex ||
         c == Convexity::Affine;
}

bool is_concave(Convexity c) {
  return c == Convexity::StrictlyConcave || c == Convexity::Concave ||
         c == Convexity::Affine;
}

double snap(double raw, double scale, const GapOptions& opts) {
  const double band = opts.tol * std::max(1.0, scale);
  if (raw < -band) {
    std::ostringstream os;
    os.precision(17);
    os << "Jensen gap came out " << raw
       << ", negative beyond tolerance; implementation bug";
    throw TheoremViolation(os.str());
  }
  return std::abs(raw) <= band ? 0.0 : raw;
}

GapBoundReport assemble_report(double gap_p, double gap_q,
                               const RatioProfile& ratio,
                               const GapOptions& opts) {
  GapBoundReport rep;
  rep.gap_p = gap_p;
  rep.gap_q = gap_q;
  rep.ess_sup = ratio.ess_sup;
  rep.ess_inf = ratio.ess_inf;
  // inf * 0 = 0: a vanishing Q-gap forces a vanishing upper bound.
  rep.upper_bound = gap_q == 0.0 ? 0.0 : ratio.ess_sup * gap_q;
  rep.lower_bound = ratio.ess_inf * gap_q;
  rep.upper_slack = rep.upper_bound - gap_p;
  rep.lower_slack = gap_p - rep.lower_bound;
  if (ratio.ess_inf > 0.0) {
    rep.reverse_dominates = true;
    rep.reverse_ess_sup = 1.0 / ratio.ess_inf;
  }
  const double band = opts.tol * std::max(1.0, gap_q);
  if (rep.gap_p > rep.upper_bound + band) {
    std::ostringstream os;
    os.precision(17);
    os << "upper bound violated: gap_P=" << gap_p << " > ess_sup*gap_Q="
       << rep.upper_bound << "; implementation bug";
    throw TheoremViolation(os.str());
  }
  if (rep.lower_bound > gap_p + band) {
    std::ostringstream os;
    os.precision(17);
    os << "lower bound violated: ess_inf*gap_Q=" << rep.lower_bound
       << " > gap_P=" << gap_p << "; implementation bug";
    throw TheoremViolation(os.str());
  }
  return rep;
}

void require_aligned(const DiscreteMeasure& p, const DiscreteMeasure& q,
                     std::span<const double> x) {
  if (p.atoms() != q.atoms()) {
    throw AtomSetMismatch("P and Q must share the same ordered atom list");
  }
  if (x.size() != p.size()) {
    throw InvalidArgument("X values not aligned with the atom list");
  }
}

}  // namespace

double jensen_gap(const DiscreteMeasure& mu, std::span<const double> x,
                  const FuncExpr& phi, const GapOptions& opts) {
  if (x.size() != mu.size()) {
    throw InvalidArgument("X values not aligned with the atom list");
  }
  double e_phi = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double w = mu.weight(i);
    if (w <= 0.0) continue;
    e_phi += w * eval_phi_at(phi, x[i]);
    mean += w * x[i];
  }
  const double phi_mean = eval_phi_at(phi, mean);
  const double raw = e_phi - phi_mean;
  return snap(raw, std::max(std::abs(e_phi), std::abs(phi_mean)), opts);
}

GapBoundReport dragomir_upper(const DiscreteMeasure& p, const DiscreteMeasure& q,
                              std::span<const double> x, const FuncExpr& phi,
                              const GapOptions& opts) {
  require_aligned(p, q, x);
  const RatioProfile ratio = density_ratio(p, q);
  const auto cls = gate_classification(phi, support_range(q, x), opts);
  if (cls && !is_convex(*cls)) {
    throw NotConvex(std::string("phi classified ") + to_string(*cls) +
                    " on the data range");
  }
  const double gap_q = jensen_gap(q, x, phi, opts);
  const double gap_p = jensen_gap(p, x, phi, opts);
  return assemble_report(gap_p, gap_q, ratio, opts);
}

GapBoundReport dragomir_lower(const DiscreteMeasure& p, const DiscreteMeasure& q,
                              std::span<const double> x, const FuncExpr& phi,
                              const GapOptions& opts) {
  // Same computation; the report already carries the lower bound and the
  // reverse-domination note.
  return dragomir_upper(p, q, x, phi, opts);
}

GapBoundReport concave_bounds(const DiscreteMeasure& p, const DiscreteMeasure& q,
                              std::span<const double> x, const FuncExpr& phi,
                              const GapOptions& opts) {
  require_aligned(p, q, x);
  const auto cls = gate_classification(phi, support_range(q, x), opts);
  if (cls && !is_concave(*cls)) {
    throw NotConcave(std::string("phi classified ") + to_string(*cls) +
                     " on the data range");
  }
  // phi(E X) - E phi(X) equals the Jensen gap of -phi, so delegate and let
  // the report's gap fields carry the concave reading.
  return dragomir_upper(p, q, x, negate(phi), opts);
}

GapBoundReport amgm_bounds(const DiscreteMeasure& p, const DiscreteMeasure& q,
                           std::span<const double> x, const GapOptions& opts) {
  require_aligned(p, q, x);
  const RatioProfile ratio = density_ratio(p, q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if ((p.weight(i) > 0.0 || q.weight(i) > 0.0) && !(x[i] > 0.0)) {
      std::ostringstream os;
      os << "X must be strictly positive on the support; atom "
         << q.atoms()[i] << " carries X = " << x[i];
      throw NonpositiveValue(os.str());
    }
  }
  const auto amgm_gap = [&](const DiscreteMeasure& mu) {
    double mean = 0.0, log_mean = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double w = mu.weight(i);
      if (w <= 0.0) continue;
      mean += w * x[i];
      log_mean += w * std::log(x[i]);
    }
    const double geo = std::exp(log_mean);
    return snap(mean - geo, std::max(std::abs(mean), std::abs(geo)), opts);
  };
  return assemble_report(amgm_gap(p), amgm_gap(q), ratio, opts);
}

bool numeric_equality(double gap_p, double upper_bound, double tol) {
  if (gap_p == 0.0 && upper_bound == 0.0) return true;
  return std::abs(gap_p - upper_bound) <=
         tol * std::max(std::abs(gap_p), std::abs(upper_bound));
}

const char* to_string(EqualityCase c) {
  switch (c) {
    case EqualityCase::BothInfinite: return "case1-both-infinite";
    case EqualityCase::BothZero: return "case2-both-zero";
    case EqualityCase::EqualFinite: return "case3-equal-finite";
    case EqualityCase::StrictInequality: return "strict-inequality";
    case EqualityCase::TrivialEqualMeasures: return "trivial-equal-measures";
  }
  return "?";
}

namespace {

/// Weighted constancy check over a subset: near-equality of every value to
/// the weighted mean within the equality tolerance.
struct ConstancyCheck {
  bool constant = false;
  double value = 0.0;
};

ConstancyCheck constant_on(const DiscreteMeasure& mu,
                           std::span<const double> x,
                           const std::vector<std::size_t>& subset,
                           double tol) {
  ConstancyCheck c;
  double mass = 0.0, mean = 0.0;
  for (std::size_t i : subset) {
    mass += mu.weight(i);
    mean += mu.weight(i) * x[i];
  }
  if (mass <= 0.0) return c;
  mean /= mass;
  c.value = mean;
  for (std::size_t i : subset) {
    if (mu.weight(i) > 0.0 &&
        std::abs(x[i] - mean) > tol * std::max(1.0, std::abs(mean))) {
      return c;
    }
  }
  c.constant = true;
  return c;
}

}  // namespace

EqualityDiagnosis classify_equality(const DiscreteMeasure& p,
                                    const DiscreteMeasure& q,
                                    std::span<const double> x,
                                    const FuncExpr& phi,
                                    const GapOptions& opts) {
  require_aligned(p, q, x);

  EqualityDiagnosis d;

  bool measures_equal = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p.weight(i) - q.weight(i)) > 1e-12) {
      measures_equal = false;
      break;
    }
  }
  if (measures_equal) {
    // Excluded from the case taxonomy: both sides coincide identically.
    const double g = jensen_gap(q, x, phi, opts);
    d.kind = EqualityCase::TrivialEqualMeasures;
    d.gap_p = d.gap_q = d.upper_bound = g;
    d.numeric_equal = true;
    d.has_shared_value = true;
    d.shared_value = g;
    return d;
  }

  const auto cls = gate_classification(phi, support_range(q, x), opts);
  if (cls && *cls != Convexity::StrictlyConvex) {
    throw NotStrictlyConvex(std::string("phi classified ") + to_string(*cls) +
                            "; the equality cases need strict convexity");
  }

  const RatioProfile ratio = density_ratio(p, q);
  const double gap_q = jensen_gap(q, x, phi, opts);
  const double gap_p = jensen_gap(p, x, phi, opts);
  d.gap_p = gap_p;
  d.gap_q = gap_q;
  d.upper_bound = gap_q == 0.0 ? 0.0 : ratio.ess_sup * gap_q;
  d.max_set = ratio.max_set;
  d.numeric_equal = numeric_equality(gap_p, d.upper_bound, opts.tol);

  // Condition a: finiteness. Automatic on a finite atom list; keep the
  // arithmetic honest anyway.
  d.cond_a = std::isfinite(gap_q) && std::isfinite(ratio.ess_sup);

  const auto whole = constant_on(q, x, ratio.q_support, opts.tol);
  if (whole.constant) {
    d.kind = EqualityCase::BothZero;
    d.has_shared_value = true;
    d.shared_value = 0.0;
    d.has_constant = true;
    d.constant_c = whole.value;
    if (!d.numeric_equal || gap_q != 0.0) {
      throw ClassifierContradiction(
          "X constant on the Q-support but the gaps did not both vanish");
    }
    return d;
  }

  // Condition b: X constant off the maximizing set, non-constant overall.
  std::vector<std::size_t> complement;
  std::vector<bool> in_max(q.size(), false);
  for (std::size_t i : ratio.max_set) in_max[i] = true;
  for (std::size_t i : ratio.q_support) {
    if (!in_max[i]) complement.push_back(i);
  }
  if (complement.empty()) {
    // The maximizing set swallows the whole support; condition b is vacuous
    // and c pins the constant to the global mean.
    d.cond_b = true;
    d.has_constant = true;
    d.constant_c = expectation(q, x);
  } else {
    const auto off_max = constant_on(q, x, complement, opts.tol);
    d.cond_b = off_max.constant;
    if (off_max.constant) {
      d.has_constant = true;
      d.constant_c = off_max.value;
    }
  }

  // Condition c: positive mass on the maximizing set and the four means all
  // agree with c. Each mean is compared to c separately so the evidence
  // fields stand on their own.
  const double q_a = q.mass(ratio.max_set);
  const double p_a = p.mass(ratio.max_set);
  d.mean_x_q = expectation(q, x);
  d.mean_x_p = expectation(p, x);
  double mean_a_q = 0.0, mean_a_p = 0.0;
  if (q_a > 0.0 && p_a > 0.0) {
    for (std::size_t i : ratio.max_set) {
      mean_a_q += q.weight(i) * x[i];
      mean_a_p += p.weight(i) * x[i];
    }
    mean_a_q /= q_a;
    mean_a_p /= p_a;
  }
  d.mean_x_a_q = mean_a_q;
  d.mean_x_a_p = mean_a_p;
  if (d.has_constant && q_a > 0.0 && p_a > 0.0) {
    const double c = d.constant_c;
    const auto close = [&](double m) {
      return std::abs(m - c) <=
             opts.tol * std::max({1.0, std::abs(c), std::abs(m)});
    };
    d.cond_c = close(d.mean_x_q) && close(mean_a_q) && close(d.mean_x_p) &&
               close(mean_a_p);
  }

  const bool conditions_equal = d.cond_a && d.cond_b && d.cond_c;
  if (conditions_equal != d.numeric_equal) {
    std::ostringstream os;
    os.precision(17);
    os << "equality conditions say " << (conditions_equal ? "equal" : "strict")
       << " but |gap_P - ess_sup*gap_Q| = " << std::abs(gap_p - d.upper_bound)
       << "; the two must agree";
    throw ClassifierContradiction(os.str());
  }
  if (conditions_equal) {
    d.kind = EqualityCase::EqualFinite;
    d.has_shared_value = true;
    d.shared_value = gap_p;
  } else {
    d.kind = EqualityCase::StrictInequality;
  }
  return d;
}

bool equality_transfer_check(const DiscreteMeasure& p, const DiscreteMeasure& q,
                             std::span<const double> x, const FuncExpr& phi,
                             const GapOptions& opts) {
  require_aligned(p, q, x);
  density_ratio(p, q);  // enforce P << Q
  const auto cls = gate_classification(phi, support_range(q, x), opts);
  if (cls && !is_convex(*cls)) {
    throw NotConvex(std::string("phi classified ") + to_string(*cls) +
                    " on the data range");
  }
  const double gap_q = jensen_gap(q, x, phi, opts);
  if (gap_q != 0.0) return true;  // vacuous
  const double gap_p = jensen_gap(p, x, phi, opts);
  if (gap_p == 0.0) return true;
  std::ostringstream os;
  os.precision(17);
  os << "gap_Q = 0 but gap_P = " << gap_p
     << "; equality must transfer to every P << Q";
  throw TheoremViolation(os.str());
}

ConditionalVariance conditional_variance_bound(const DiscreteMeasure& p,
                                               std::span<const std::size_t> event,
                                               std::span<const double> x,
                                               const GapOptions& opts) {
  const double pa = p.mass(event);
  if (!(pa > 0.0)) {
    throw EmptyConditioningEvent("conditioning event has zero mass");
  }
  ConditionalVariance out;
  out.var_conditional = jensen_gap(condition(p, event), x, square_expr(), opts);
  out.var = jensen_gap(p, x, square_expr(), opts);
  out.bound = out.var / pa;
  if (out.var_conditional > out.bound + opts.tol * std::max(1.0, out.bound)) {
    std::ostringstream os;
    os.precision(17);
    os << "conditional variance " << out.var_conditional
       << " exceeds var/P(event) = " << out.bound << "; implementation bug";
    throw TheoremViolation(os.str());
  }
  return out;
}

}  // namespace jengap
