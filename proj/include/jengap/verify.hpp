#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "jengap/measure.hpp"

namespace jengap {

/// One randomized test instance: P << Q on a shared atom list (2..8 atoms,
/// occasionally with a dead atom carrying no mass under either), X in
/// [-10, 10]. Instances are derived from (seed, index) alone, so every suite
/// sees the identical instance stream.
struct Instance {
  DiscreteMeasure p;
  DiscreteMeasure q;
  std::vector<double> x;
};

Instance make_instance(std::uint64_t seed, int index);
nlohmann::json instance_to_json(const Instance& inst);

enum class Suite {
  Sandwich,
  ClassifierSoundness,
  TiltIdentities,
  EqualityTransfer,
  TruncationConvergence,
  NullSets,
  ScaleCovariance,
  ConditioningConsistency,
};

const char* to_string(Suite s);

struct SuiteOutcome {
  std::string name;
  int pass = 0;
  int fail = 0;
  nlohmann::json first_failure;  // null when clean
};

/// Runs one property suite over `count` seeded instances.
SuiteOutcome run_suite(Suite suite, std::uint64_t seed, int count);

struct VerifyReport {
  std::vector<SuiteOutcome> suites;
  int total_pass = 0;
  int total_fail = 0;
  nlohmann::json first_failure;  // earliest by (suite order, instance index)
};

VerifyReport run_all_suites(std::uint64_t seed, int count);

}  // namespace jengap
