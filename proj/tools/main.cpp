#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "jengap/errors.hpp"
#include "jengap/problem.hpp"
#include "jengap/version.hpp"

namespace {

// Exit codes: 0 success, 1 verify found violations, 2 input/validation
// errors, 3 theorem violation (an internal bug, never a property of the
// input).
constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;
constexpr int kTheoremViolation = 3;

void emit(const nlohmann::json& report) {
  std::cout << report.dump(2) << "\n";
  std::cerr << jengap::summarize_report(report) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jensen gaps and two-sided change-of-measure bounds"};
  app.set_version_flag("--version", std::string(jengap::kToolVersion));
  app.require_subcommand(1);

  std::string problem_path;
  auto* bounds = app.add_subcommand(
      "bounds", "compute both gaps and the two-sided bounds for a problem file");
  bounds->add_option("file", problem_path, "problem file (JSON)")->required();

  std::string diagnose_path;
  auto* diagnose = app.add_subcommand(
      "diagnose", "classify the equality case for a strictly convex problem");
  diagnose->add_option("file", diagnose_path, "problem file (JSON)")->required();

  std::uint64_t seed = 42;
  int count = 1000;
  auto* verify = app.add_subcommand(
      "verify", "run the randomized property suites; deterministic per seed");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--count", count, "instances per suite")
      ->check(CLI::PositiveNumber);

  std::string name;
  double p_param = 1.0;
  double eps_param = 1e-9;
  auto* counter = app.add_subcommand(
      "counterexample", "reproduce a canned counterexample (remark1 | remark2)");
  counter->add_option("name", name, "remark1 | remark2")->required();
  counter->add_option("--p", p_param, "norm exponent for remark2 (>= 1)");
  counter->add_option("--eps", eps_param, "truncation cutoff for remark2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (bounds->parsed()) {
      emit(jengap::run_bounds(jengap::load_problem_file(problem_path)));
      return kOk;
    }
    if (diagnose->parsed()) {
      emit(jengap::run_diagnose(jengap::load_problem_file(diagnose_path)));
      return kOk;
    }
    if (verify->parsed()) {
      const nlohmann::json report = jengap::run_verify_report(seed, count);
      emit(report);
      return report.at("report").at("total_fail").get<int>() == 0
                 ? kOk
                 : kVerifyFailed;
    }
    if (counter->parsed()) {
      emit(jengap::run_counterexample(name, p_param, eps_param));
      return kOk;
    }
  } catch (const jengap::TheoremViolation& e) {
    std::cerr << "theorem violation (internal bug): " << e.what() << "\n";
    return kTheoremViolation;
  } catch (const jengap::ClassifierContradiction& e) {
    std::cerr << "classifier contradiction (internal bug): " << e.what() << "\n";
    return kTheoremViolation;
  } catch (const jengap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
