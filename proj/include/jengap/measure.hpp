#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jengap/errors.hpp"

namespace jengap {

namespace tol {
/// Absolute tolerance for a weight vector to count as a probability.
inline constexpr double weight_sum = 1e-12;
/// Relative tolerance for membership in the maximizing set of dP/dQ.
inline constexpr double max_set_rel = 1e-12;
/// Default absolute tolerance for equality decisions, scaled by
/// max(1, magnitude of the compared quantities).
inline constexpr double equality = 1e-9;
}  // namespace tol

/// A probability measure with finite support: ordered atom labels plus
/// nonnegative weights summing to 1 within tol::weight_sum. Immutable after
/// construction; all operations on measures are pure functions.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<std::string> atoms, std::vector<double> weights);

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_.at(i); }

  /// Total mass of a subset of atoms, given as indices.
  double mass(std::span<const std::size_t> subset) const;

  /// Indices of atoms with strictly positive weight.
  std::vector<std::size_t> support() const;

 private:
  std::vector<std::string> atoms_;
  std::vector<double> weights_;
};

/// Sum of weight(i) * x[i]; x must be aligned with the atom list.
double expectation(const DiscreteMeasure& mu, std::span<const double> x);

/// The Radon-Nikodym derivative dP/dQ on a shared finite atom list.
/// `values` are per-atom ratios (0 on atoms outside the Q-support);
/// ess_sup / ess_inf range over the Q-support only, and max_set collects
/// the Q-support atoms whose value is within relative tolerance
/// tol::max_set_rel of ess_sup.
struct RatioProfile {
  std::vector<double> values;
  double ess_sup = 1.0;
  double ess_inf = 1.0;
  std::vector<std::size_t> max_set;
  std::vector<std::size_t> q_support;
};

/// The auxiliary probability on the enlarged atom list: the original atoms
/// plus one fresh atom y carrying mass 1/ess_sup, with the extension of X
/// taking the value mean_P(X) at y. The base measure vanishes on the
/// maximizing set.
struct TiltedMeasure {
  DiscreteMeasure base;
  std::string y_label;
  double y_mass = 0.0;
  double x_tilde_at_y = 0.0;
};

/// Unnormalized truncation min(dP/dQ, n) dQ. `weights` is a sub-probability;
/// `mass` is its total. Kept unnormalized because downstream diagnostics need
/// both the raw weights and the normalizer.
struct TruncatedMeasure {
  std::vector<double> weights;
  double mass = 0.0;
};

/// Per-atom quotient of weights. Requires the same ordered atom list on both
/// measures. Throws AbsoluteContinuityViolated if P puts mass where Q does
/// not. Atoms where both vanish are dropped from the support and excluded
/// from ess_sup / ess_inf / max_set.
RatioProfile density_ratio(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Builds the tilted probability: weight Q(w) - P(w)/ess_sup on each original
/// atom (exactly 0 on the maximizing set), 1/ess_sup on the fresh atom.
/// mean_p_of_x becomes the extension value at the fresh atom.
TiltedMeasure tilt(const DiscreteMeasure& p, const DiscreteMeasure& q,
                   double mean_p_of_x);

/// weights[i] = min(dP/dQ, level) * Q(i), reported with its total mass.
TruncatedMeasure truncate(const DiscreteMeasure& p, const DiscreteMeasure& q,
                          double level);

/// Conditional probability P(. | event): P(w)/P(event) on the event, 0 off
/// it. Throws EmptyConditioningEvent when the event has no mass.
DiscreteMeasure condition(const DiscreteMeasure& p,
                          std::span<const std::size_t> event);

}  // namespace jengap
