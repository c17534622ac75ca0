#pragma once

#include <span>
#include <vector>

#include "jengap/funcspace.hpp"
#include "jengap/measure.hpp"

namespace jengap {

struct GapOptions {
  /// Absolute tolerance for equality decisions, scaled by
  /// max(1, magnitude of the compared quantities).
  double tol = 1e-9;
  /// Grid size for the convexity gate.
  int convexity_grid = 129;
  /// The gate interval is widened to at least this width (clipped back to
  /// the exact data range if the function is not evaluable on the widening);
  /// on very narrow ranges second differences would otherwise sink below
  /// tol for genuinely strictly convex functions.
  double min_gate_width = 2.0;
};

/// Both Jensen gaps and the two-sided change-of-measure bounds.
/// upper_bound applies the convention inf * 0 = 0: a vanishing Q-gap forces
/// a vanishing upper bound no matter the essential supremum.
struct GapBoundReport {
  double gap_p = 0.0;
  double gap_q = 0.0;
  bool gap_p_infinite = false;  // only the continuous module can set these
  bool gap_q_infinite = false;
  double ess_sup = 1.0;
  double ess_inf = 1.0;
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  double upper_slack = 0.0;  // upper_bound - gap_p
  double lower_slack = 0.0;  // gap_p - lower_bound
  /// When ess_inf > 0, Q is absolutely continuous with respect to P and the
  /// reverse derivative is bounded by 1/ess_inf.
  bool reverse_dominates = false;
  double reverse_ess_sup = 0.0;
};

enum class EqualityCase {
  BothInfinite,        // diagnosed only by the continuous module
  BothZero,            // X constant on the Q-support
  EqualFinite,         // conditions a, b, c all hold
  StrictInequality,
  TrivialEqualMeasures,  // P == Q atomwise; excluded from the taxonomy
};

const char* to_string(EqualityCase c);

/// Which equality case holds, with the evidence for each condition:
/// the constant c of condition b, the maximizing set, and the four means of
/// condition c, plus the purely numeric comparison they must agree with.
struct EqualityDiagnosis {
  EqualityCase kind = EqualityCase::StrictInequality;
  bool has_shared_value = false;
  double shared_value = 0.0;
  bool cond_a = false;
  bool cond_b = false;
  bool cond_c = false;
  bool has_constant = false;
  double constant_c = 0.0;
  std::vector<std::size_t> max_set;
  double mean_x_q = 0.0;
  double mean_x_a_q = 0.0;
  double mean_x_p = 0.0;
  double mean_x_a_p = 0.0;
  bool numeric_equal = false;
  double gap_p = 0.0;
  double gap_q = 0.0;
  double upper_bound = 0.0;
};

struct ConditionalVariance {
  double var_conditional = 0.0;
  double var = 0.0;
  double bound = 0.0;
};

/// E[phi(X)] - phi(E[X]) under mu. Nonnegative for convex phi; results within
/// tol * max(1, magnitudes) of zero snap to exactly 0. Convexity of phi is
/// the caller's contract here; the bound operations run the gate.
double jensen_gap(const DiscreteMeasure& mu, std::span<const double> x,
                  const FuncExpr& phi, const GapOptions& opts = {});

/// The equality comparison behind the classifier: gap_P against its upper
/// bound, resolved relative to the gap magnitudes. An absolute band cannot
/// tell a tiny strict instance (slack below it) from true equality, while
/// the rounding noise of the gap sums stays orders below tol * scale.
bool numeric_equality(double gap_p, double upper_bound, double tol = 1e-9);

/// gap_P <= ess_sup(dP/dQ) * gap_Q, with the full report.
GapBoundReport dragomir_upper(const DiscreteMeasure& p, const DiscreteMeasure& q,
                              std::span<const double> x, const FuncExpr& phi,
                              const GapOptions& opts = {});

/// ess_inf(dP/dQ) * gap_Q <= gap_P, noting the reverse domination when
/// ess_inf > 0.
GapBoundReport dragomir_lower(const DiscreteMeasure& p, const DiscreteMeasure& q,
                              std::span<const double> x, const FuncExpr& phi,
                              const GapOptions& opts = {});

/// Bounds on phi(E[X]) - E[phi(X)] for concave phi, by negating and
/// delegating; the report's gap fields carry the concave gaps.
GapBoundReport concave_bounds(const DiscreteMeasure& p, const DiscreteMeasure& q,
                              std::span<const double> x, const FuncExpr& phi,
                              const GapOptions& opts = {});

/// Arithmetic-minus-geometric-mean gaps E[X] - exp(E[log X]) under P and Q,
/// bounded by the same essential ratio multipliers. X must be strictly
/// positive wherever either measure puts mass.
GapBoundReport amgm_bounds(const DiscreteMeasure& p, const DiscreteMeasure& q,
                           std::span<const double> x, const GapOptions& opts = {});

/// Decides which equality case holds for strictly convex phi and P != Q,
/// cross-checking the condition logic against the numeric comparison.
EqualityDiagnosis classify_equality(const DiscreteMeasure& p,
                                    const DiscreteMeasure& q,
                                    std::span<const double> x,
                                    const FuncExpr& phi,
                                    const GapOptions& opts = {});

/// True iff gap_Q = 0 implies gap_P = 0 on this instance. Convex phi,
/// strictness not required. A false outcome is impossible; it surfaces as
/// TheoremViolation instead of a return value.
bool equality_transfer_check(const DiscreteMeasure& p, const DiscreteMeasure& q,
                             std::span<const double> x, const FuncExpr& phi,
                             const GapOptions& opts = {});

/// Variance of X under P conditioned on the event, the unconditional
/// variance, and the bound var / P(event) that must dominate it.
ConditionalVariance conditional_variance_bound(const DiscreteMeasure& p,
                                               std::span<const std::size_t> event,
                                               std::span<const double> x,
                                               const GapOptions& opts = {});

}  // namespace jengap
