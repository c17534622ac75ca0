#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jengap/funcspace.hpp"
#include "jengap/gap.hpp"
#include "jengap/measure.hpp"
#include "jengap/quad.hpp"

namespace jengap {

enum class ProblemKind { Discrete, Continuous };
enum class PhiIntent { Convex, Concave, AmGm };

/// One measure description from a problem file. Discrete problems carry
/// atoms + weights; continuous ones carry a named family.
struct MeasureSpec {
  enum class Family { Atoms, Lebesgue, Gaussian, DensityExpr };
  Family family = Family::Atoms;
  std::vector<std::string> atoms;
  std::vector<double> weights;
  double mean = 0.0;
  double sigma = 1.0;
  std::string expr;
  double lo = 0.0;
  double hi = 1.0;
};

struct ProblemOptions {
  double tol = 1e-9;
  double quad_tol = 1e-9;
  int grid = 129;
};

/// A validated problem file. `raw` keeps the original document for echoing
/// into reports.
struct ProblemSpec {
  nlohmann::json raw;
  ProblemKind kind = ProblemKind::Discrete;
  MeasureSpec p;
  MeasureSpec q;
  bool x_is_values = false;
  std::vector<double> x_values;
  std::string x_expr;
  std::string phi_expr;
  PhiIntent intent = PhiIntent::Convex;
  ProblemOptions options;
};

/// Parses and validates a problem document; every rejection names the
/// offending field path.
ProblemSpec load_problem(const nlohmann::json& doc);
ProblemSpec load_problem_file(const std::string& path);

/// Commands, as library calls returning the report document.
nlohmann::json run_bounds(const ProblemSpec& spec);
nlohmann::json run_diagnose(const ProblemSpec& spec);
nlohmann::json run_verify_report(std::uint64_t seed, int count);
nlohmann::json run_counterexample(const std::string& name,
                                  std::optional<double> p,
                                  std::optional<double> eps);

/// Structural check every emitted report must pass.
void validate_report(const nlohmann::json& report);

/// Human-readable one-paragraph summary for standard error.
std::string summarize_report(const nlohmann::json& report);

}  // namespace jengap
