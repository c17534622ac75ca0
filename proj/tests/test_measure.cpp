#include <doctest.h>

#include <cmath>

#include "jengap/measure.hpp"
#include "oracles.hpp"

using namespace jengap;

namespace {

DiscreteMeasure make(std::vector<double> w) {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < w.size(); ++i) atoms.push_back("w" + std::to_string(i + 1));
  return DiscreteMeasure(atoms, std::move(w));
}

}  // namespace

TEST_CASE("measure invariants") {
  CHECK_THROWS_AS(make({0.5, 0.6}), InvalidMeasure);        // sum 1.1
  CHECK_THROWS_AS(make({0.5, -0.1, 0.6}), InvalidMeasure);  // negative
  CHECK_THROWS_AS(DiscreteMeasure({"a", "a"}, {0.5, 0.5}), InvalidMeasure);
  CHECK_THROWS_AS(DiscreteMeasure({"a"}, {0.5, 0.5}), InvalidMeasure);
  const DiscreteMeasure m = make({0.25, 0.75});
  CHECK(m.size() == 2);
  CHECK(m.support() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("density_ratio on the worked instance") {
  const auto p = make({0.4, 0.4, 0.2});
  const auto q = make({0.25, 0.25, 0.5});
  const RatioProfile r = density_ratio(p, q);

  // Oracle: atomwise quotient.
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.values[i] == doctest::Approx(p.weight(i) / q.weight(i)).epsilon(1e-15));
  }
  CHECK(r.ess_sup == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(r.ess_inf == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(r.max_set == std::vector<std::size_t>{0, 1});
  CHECK(r.q_support == std::vector<std::size_t>{0, 1, 2});

  double total = 0.0;
  for (std::size_t i : r.q_support) total += r.values[i] * q.weight(i);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("density_ratio identity and violation cases") {
  const auto p = make({0.5, 0.5});
  const RatioProfile r = density_ratio(p, p);
  CHECK(r.ess_sup == 1.0);
  CHECK(r.ess_inf == 1.0);
  CHECK(r.max_set.size() == 2);

  CHECK_THROWS_AS(density_ratio(make({0.5, 0.5}), make({1.0, 0.0})),
                  AbsoluteContinuityViolated);
  CHECK_THROWS_AS(density_ratio(make({0.5, 0.5}),
                                DiscreteMeasure({"a", "b"}, {0.5, 0.5})),
                  AtomSetMismatch);
}

TEST_CASE("atoms dead under both measures leave the support") {
  const DiscreteMeasure p({"a", "b", "c"}, {0.5, 0.0, 0.5});
  const DiscreteMeasure q({"a", "b", "c"}, {0.25, 0.0, 0.75});
  const RatioProfile r = density_ratio(p, q);
  CHECK(r.q_support == std::vector<std::size_t>{0, 2});
  CHECK(r.values[1] == 0.0);
  CHECK(r.ess_sup == doctest::Approx(2.0));
  CHECK(r.ess_inf == doctest::Approx(2.0 / 3.0));
  CHECK(r.max_set == std::vector<std::size_t>{0});
}

TEST_CASE("tilt on the worked instance") {
  const auto p = make({0.4, 0.4, 0.2});
  const auto q = make({0.25, 0.25, 0.5});
  const TiltedMeasure t = tilt(p, q, 0.4);

  CHECK(t.base.size() == 4);
  CHECK(t.base.weight(0) == 0.0);
  CHECK(t.base.weight(1) == 0.0);
  CHECK(t.base.weight(2) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(t.base.weight(3) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(t.y_label == "y");
  CHECK(t.y_mass == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(t.x_tilde_at_y == 0.4);
}

TEST_CASE("tilt of equal measures is a point mass at the fresh atom") {
  const auto p = make({0.3, 0.7});
  const TiltedMeasure t = tilt(p, p, 1.0);
  CHECK(t.base.weight(0) == 0.0);
  CHECK(t.base.weight(1) == 0.0);
  CHECK(t.base.weight(2) == 1.0);
}

TEST_CASE("tilt picks a label distinct from every atom") {
  const DiscreteMeasure p({"y", "y'"}, {0.5, 0.5});
  const TiltedMeasure t = tilt(p, p, 0.0);
  CHECK(t.y_label == "y''");
}

TEST_CASE("truncate on the worked instance") {
  const auto p = make({0.4, 0.4, 0.2});
  const auto q = make({0.25, 0.25, 0.5});

  const TruncatedMeasure t1 = truncate(p, q, 1.0);
  CHECK(t1.weights[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(t1.weights[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(t1.weights[2] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(t1.mass == doctest::Approx(0.7).epsilon(1e-15));

  // Clamp inactive at or above ess_sup: exactly P.
  for (double level : {1.6, 2.0, 100.0}) {
    const TruncatedMeasure t = truncate(p, q, level);
    CHECK(t.weights == p.weights());
    CHECK(t.mass == doctest::Approx(1.0).epsilon(1e-13));
  }

  double prev = -1.0;
  for (double level : {1.0, 2.0, 4.0, 8.0}) {
    const TruncatedMeasure t = truncate(p, q, level);
    CHECK(t.mass >= prev);
    prev = t.mass;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(truncate(p, q, 0.0), InvalidArgument);
}

TEST_CASE("condition on the worked instance") {
  const auto p = make({0.25, 0.25, 0.5});
  const std::vector<std::size_t> event{0, 1};
  const DiscreteMeasure pa = condition(p, event);
  CHECK(pa.weight(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pa.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pa.weight(2) == 0.0);

  // ess_sup of d P_A / dP is 1 / P(A).
  const RatioProfile r = density_ratio(pa, p);
  CHECK(r.ess_sup == doctest::Approx(2.0).epsilon(1e-15));

  const std::vector<std::size_t> full{0, 1, 2};
  const DiscreteMeasure same = condition(p, full);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(same.weight(i) == doctest::Approx(p.weight(i)).epsilon(1e-13));
  }

  const DiscreteMeasure zero_atom({"a", "b"}, {1.0, 0.0});
  const std::vector<std::size_t> null_event{1};
  CHECK_THROWS_AS(condition(zero_atom, null_event), EmptyConditioningEvent);
}

TEST_CASE("expectation matches the direct sum") {
  const auto p = make({0.4, 0.4, 0.2});
  const std::vector<double> x{1.0, -1.0, 2.0};
  CHECK(expectation(p, x) ==
        doctest::Approx(oracle::expectation(p.weights(), x)).epsilon(1e-15));
}
