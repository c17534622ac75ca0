#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jengap/funcspace.hpp"

namespace jengap {

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  bool converged = false;
  int subdivisions = 0;
};

using RealFn = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod 7-15 integration over a bounded interval.
/// Panels split worst-error-first; breakpoints pre-split the initial panels
/// so discontinuities sit on panel boundaries (nodes are interior, so
/// integrable endpoint singularities are approached geometrically). Returns
/// an unconverged result instead of throwing when the panel cap (2^16) or
/// the minimum panel width is reached.
QuadResult try_integrate(const RealFn& f, Interval interval, double tol,
                         std::span<const double> breakpoints = {});
QuadResult try_integrate(const FuncExpr& f, Interval interval, double tol,
                         std::span<const double> breakpoints = {});

/// Same, but an unconverged outcome raises NonConvergence carrying the
/// partial value and the refinement trend.
QuadResult integrate(const RealFn& f, Interval interval, double tol,
                     std::span<const double> breakpoints = {});
QuadResult integrate(const FuncExpr& f, Interval interval, double tol,
                     std::span<const double> breakpoints = {});

/// Heuristic divergence reading of a refinement trend: the latest increments
/// neither shrink nor stay below noise.
bool trend_diverges(std::span<const double> trend, double tol);

/// Partial integrals with the singular endpoint cut off at geometrically
/// shrinking distances; `divergent` when the increments refuse to decay.
struct EndpointTrend {
  std::vector<double> cutoffs;
  std::vector<double> values;
  bool divergent = false;
};

enum class EndpointSide { Left, Right };

EndpointTrend probe_endpoint(const RealFn& f, Interval interval,
                             EndpointSide side, double tol);

/// A probability density on an interval: expression, support, the computed
/// normalization integral (must be 1 within 1e-6), and the breakpoints its
/// integrands need.
struct Density {
  FuncExpr expr;
  Interval support;
  double normalization_check = 0.0;
  std::vector<double> breakpoints;
};

/// Validates nonnegativity on a probe grid and the normalization integral.
Density make_density(FuncExpr expr, Interval support, double quad_tol = 1e-9,
                     std::vector<double> breakpoints = {});

/// Uniform density 1/(b-a) on [a, b].
Density lebesgue_density(Interval support, double quad_tol = 1e-9);

/// Normal density truncated to mean +- 8 sigma; the discarded tail mass is
/// checked to be below 1e-14 rather than assumed.
Density gaussian_density(double mean, double sigma, double quad_tol = 1e-9);

double normal_pdf(double x, double sigma, double mean = 0.0);

/// E[phi(X)] - phi(E[X]) under the density, or the divergence flags when a
/// moment integral refuses to converge with a growing trend.
struct ContinuousGap {
  double value = 0.0;
  bool divergent = false;        // the phi-moment diverges
  bool mean_divergent = false;   // already the mean diverges
  double mean = 0.0;
  double phi_moment = 0.0;
};

ContinuousGap continuous_gap(const Density& density, const FuncExpr& x,
                             const FuncExpr& phi, double tol = 1e-9,
                             std::span<const double> extra_breakpoints = {});

/// Exact quotient of the N(0, sigma1) and N(0, sigma2) densities,
/// (s2/s1) * exp(t^2 (s1^2 - s2^2) / (2 s1^2 s2^2)), with its essential
/// supremum s2/s1 attained at 0. Requires sigma1 <= sigma2.
struct GaussianRatio {
  FuncExpr ratio;
  double ess_sup = 1.0;
};

GaussianRatio gaussian_ratio(double sigma1, double sigma2);

/// Variances of g(X) under N(0, sigma1) and N(0, sigma2) for g supported in
/// [c, d] with 0 < c < d, and the two multiplicative factors bounding var1
/// between lower_factor * var2 and upper_factor * var2. The inequalities are
/// verified before returning.
struct GaussianVarianceBounds {
  double upper_factor = 1.0;
  double lower_factor = 1.0;
  double var1 = 0.0;
  double var2 = 0.0;
};

GaussianVarianceBounds gaussian_variance_bounds(const FuncExpr& g,
                                                double sigma1, double sigma2,
                                                Interval support,
                                                double tol = 1e-9);

/// The fixed instance with P Lebesgue on [0,1], Q twice the indicator of
/// [1/2, 1], X that indicator, phi = t^2: the P-gap is 1/4 while the bound's
/// right-hand side vanishes, because domination holds only on {X != 0}.
struct Remark1Report {
  double gap_p = 0.0;
  double gap_q = 0.0;
  double ratio_on_support = 0.0;
  bool upper_bound_fails = false;
  std::string verdict;
};

Remark1Report remark1_instance(double tol = 1e-9);

/// The family showing no finite-p norm of dP/dQ can replace the essential
/// supremum: on (0,1], X = t^(-1/2 + 1/(4p)), dP = C t^(-1/(2p)) dt with
/// C = (2p-1)/(2p). The Q-gap and the p-norm are finite; the phi-moment
/// under P diverges logarithmically, so the truncated gap outgrows any
/// multiple of the p-norm-scaled right-hand side. The mean E_P[X] = 2
/// converges and is integrated over the full interval; only the divergent
/// phi-moment is cut off at eps.
struct Remark2Report {
  double p = 1.0;
  double eps = 0.0;
  double normalizer = 0.0;        // C, verified by quadrature
  double gap_q = 0.0;
  double gap_q_closed = 0.0;      // 2p - (4p/(2p+1))^2
  double lp_norm = 0.0;
  double lp_norm_closed = 0.0;    // (2 C^p)^(1/p)
  double mean_p = 0.0;            // quadrature; closed form is 2
  double gap_p_truncated = 0.0;
  double ratio = 0.0;             // gap_p_truncated / (lp_norm * gap_q)
  bool phi_moment_divergent = false;
  bool ratio_unbounded = false;
  std::string verdict;
};

Remark2Report remark2_instance(double p, double eps, double tol = 1e-9);

}  // namespace jengap
