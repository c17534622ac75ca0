#include "jengap/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace jengap {

DiscreteMeasure::DiscreteMeasure(std::vector<std::string> atoms,
                                 std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) {
    throw InvalidMeasure("measure needs at least one atom");
  }
  if (atoms_.size() != weights_.size()) {
    std::ostringstream os;
    os << "atom/weight length mismatch: " << atoms_.size() << " atoms vs "
       << weights_.size() << " weights";
    throw InvalidMeasure(os.str());
  }
  std::unordered_set<std::string> seen;
  for (const auto& a : atoms_) {
    if (!seen.insert(a).second) {
      throw InvalidMeasure("duplicate atom label: " + a);
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0) {
      std::ostringstream os;
      os << "weight of atom " << atoms_[i] << " is " << w
         << "; weights must be finite and nonnegative";
      throw InvalidMeasure(os.str());
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol::weight_sum) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << sum << ", expected 1 within " << tol::weight_sum;
    throw InvalidMeasure(os.str());
  }
}

double DiscreteMeasure::mass(std::span<const std::size_t> subset) const {
  double m = 0.0;
  for (std::size_t i : subset) m += weights_.at(i);
  return m;
}

std::vector<std::size_t> DiscreteMeasure::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] > 0.0) s.push_back(i);
  }
  return s;
}

double expectation(const DiscreteMeasure& mu, std::span<const double> x) {
  if (x.size() != mu.size()) {
    throw InvalidArgument("value vector not aligned with atom list");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (mu.weight(i) > 0.0) e += mu.weight(i) * x[i];
  }
  return e;
}

static void require_same_atoms(const DiscreteMeasure& p,
                               const DiscreteMeasure& q) {
  if (p.atoms() != q.atoms()) {
    throw AtomSetMismatch("P and Q must share the same ordered atom list");
  }
}

RatioProfile density_ratio(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require_same_atoms(p, q);
  RatioProfile r;
  r.values.assign(q.size(), 0.0);
  r.ess_sup = -std::numeric_limits<double>::infinity();
  r.ess_inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q.weight(i) > 0.0) {
      const double v = p.weight(i) / q.weight(i);
      r.values[i] = v;
      r.q_support.push_back(i);
      r.ess_sup = std::max(r.ess_sup, v);
      r.ess_inf = std::min(r.ess_inf, v);
    } else if (p.weight(i) > 0.0) {
      throw AbsoluteContinuityViolated(
          "P puts mass on atom " + q.atoms()[i] +
          " where Q vanishes; dP/dQ does not exist");
    }
    // Atoms where both P and Q vanish stay at value 0 and are excluded
    // from the support; any representative of dP/dQ may be redefined on a
    // null set.
  }
  if (r.q_support.empty()) {
    throw InvalidMeasure("Q has empty support");
  }
  // Both measures are probabilities, so the Q-weighted mean of the ratio is
  // 1 and the essential bounds must straddle it. tilt() relies on this to
  // keep the fresh-atom mass 1/ess_sup inside (0, 1].
  if (r.ess_inf > 1.0 + 1e-9 || r.ess_sup < 1.0 - 1e-9) {
    throw TheoremViolation("density ratio bounds do not straddle 1");
  }
  for (std::size_t i : r.q_support) {
    if (r.values[i] >= r.ess_sup * (1.0 - tol::max_set_rel)) {
      r.max_set.push_back(i);
    }
  }
  return r;
}

TiltedMeasure tilt(const DiscreteMeasure& p, const DiscreteMeasure& q,
                   double mean_p_of_x) {
  const RatioProfile ratio = density_ratio(p, q);
  const double m = ratio.ess_sup;

  std::vector<double> weights(q.size(), 0.0);
  std::vector<bool> in_max_set(q.size(), false);
  for (std::size_t i : ratio.max_set) in_max_set[i] = true;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (in_max_set[i]) continue;  // exactly zero on the maximizing set
    double w = q.weight(i) - p.weight(i) / m;
    if (w < 0.0) {
      if (w < -1e-15) {
        throw TheoremViolation("tilted weight negative beyond rounding");
      }
      w = 0.0;
    }
    weights[i] = w;
  }

  std::string y = "y";
  const auto& labels = q.atoms();
  while (std::find(labels.begin(), labels.end(), y) != labels.end()) {
    y += "'";  // reserved label, guaranteed fresh
  }
  std::vector<std::string> atoms = labels;
  atoms.push_back(y);
  weights.push_back(1.0 / m);

  return TiltedMeasure{DiscreteMeasure(std::move(atoms), std::move(weights)),
                       y, 1.0 / m, mean_p_of_x};
}

TruncatedMeasure truncate(const DiscreteMeasure& p, const DiscreteMeasure& q,
                          double level) {
  if (!(level > 0.0)) {
    throw InvalidArgument("truncation level must be positive");
  }
  const RatioProfile ratio = density_ratio(p, q);
  TruncatedMeasure t;
  t.weights.assign(q.size(), 0.0);
  for (std::size_t i : ratio.q_support) {
    // min(v, level)*Q(i); when the clamp is inactive this is P(i) exactly,
    // so the sweep agrees with P bit for bit at level = ess_sup.
    t.weights[i] =
        ratio.values[i] > level ? level * q.weight(i) : p.weight(i);
    t.mass += t.weights[i];
  }
  return t;
}

DiscreteMeasure condition(const DiscreteMeasure& p,
                          std::span<const std::size_t> event) {
  const double pa = p.mass(event);
  if (!(pa > 0.0)) {
    throw EmptyConditioningEvent("conditioning event has zero mass");
  }
  std::vector<double> weights(p.size(), 0.0);
  for (std::size_t i : event) weights.at(i) = p.weight(i) / pa;
  return DiscreteMeasure(p.atoms(), std::move(weights));
}

}  // namespace jengap
