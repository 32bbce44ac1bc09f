#include <doctest.h>

#include <cmath>

#include "normgeo/norms.hpp"
#include "normgeo/rng.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace normgeo;
using normgeo::testing::gauge_by_pair_enumeration;
using normgeo::testing::hexagon_norm;

TEST_CASE("norm evaluation matches the classical values") {
  CHECK(Norm::p_norm(2, 2)(Vec{3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(Norm::sup_norm(2)(Vec{3, -4}) == doctest::Approx(4.0).epsilon(1e-15));
  const Norm cross = Norm::polytope_gauge(
      {Vec{1, 0}, Vec{-1, 0}, Vec{0, 1}, Vec{0, -1}});
  CHECK(cross(Vec{0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm construction validates its inputs") {
  CHECK_THROWS_AS(Norm::p_norm(0.5, 2), Error);
  CHECK_THROWS_AS(Norm::p_norm(2, 2)(Vec{1, 2, 3}), DimensionMismatch);
  // not symmetric member-for-member
  CHECK_THROWS_AS(Norm::polytope_gauge({Vec{1, 0}, Vec{0, 1}, Vec{0, -1}}),
                  DegenerateBody);
  // symmetric but rank deficient
  CHECK_THROWS_AS(Norm::polytope_gauge({Vec{1, 0}, Vec{-1, 0}}),
                  DegenerateBody);
}

TEST_CASE("polytope gauge agrees with pair-enumeration on 2D bodies") {
  const std::vector<Vec> square = {Vec{1, 1}, Vec{-1, 1}, Vec{1, -1},
                                   Vec{-1, -1}};
  CHECK(polytope_gauge_value(square, Vec{2, 1}) == doctest::Approx(2.0));
  const std::vector<Vec> cross = {Vec{1, 0}, Vec{-1, 0}, Vec{0, 1},
                                  Vec{0, -1}};
  CHECK(polytope_gauge_value(cross, Vec{1, 1}) == doctest::Approx(2.0));
  const Norm hex = hexagon_norm();
  CHECK(hex(Vec{1, 1}) == doctest::Approx(1.0));

  Rng rng(99);
  for (int k = 0; k < 50; ++k) {
    const Vec v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (is_zero(v)) continue;
    CHECK(hex(v) ==
          doctest::Approx(gauge_by_pair_enumeration(hex.vertices(), v))
              .epsilon(1e-9));
    CHECK(polytope_gauge_value(square, v) ==
          doctest::Approx(gauge_by_pair_enumeration(square, v)).epsilon(1e-9));
  }
}

TEST_CASE("polytope gauges reproduce the p-norm balls they model") {
  const Norm l1 = Norm::p_norm(1, 2);
  const Norm linf = Norm::sup_norm(2);
  const Norm cross = Norm::polytope_gauge(
      {Vec{1, 0}, Vec{-1, 0}, Vec{0, 1}, Vec{0, -1}});
  const Norm square = Norm::polytope_gauge(
      {Vec{1, 1}, Vec{-1, 1}, Vec{1, -1}, Vec{-1, -1}});
  for (double x = -1.0; x <= 1.0; x += 0.25) {
    for (double y = -1.0; y <= 1.0; y += 0.25) {
      const Vec v{x, y};
      CHECK(cross(v) == doctest::Approx(l1(v)).epsilon(1e-9));
      CHECK(square(v) == doctest::Approx(linf(v)).epsilon(1e-9));
    }
  }
}

TEST_CASE("homogeneity and the triangle inequality hold on samples") {
  Rng rng(7);
  for (const auto& [name, norm] : normgeo::testing::corpus_norms()) {
    CAPTURE(name);
    for (int k = 0; k < 60; ++k) {
      const Vec v{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const Vec w{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const double lambda = rng.uniform(-4, 4);
      CHECK(norm(lambda * v) ==
            doctest::Approx(std::abs(lambda) * norm(v)).epsilon(1e-12));
      CHECK(norm(v + w) <= norm(v) + norm(w) + 1e-12);
    }
    CHECK(norm(Vec{0, 0}) == 0.0);
  }
}

TEST_CASE("right derivatives match closed forms") {
  const Norm l2 = Norm::p_norm(2, 2);
  CHECK(right_derivative(l2, Vec{3, 4}, Vec{1, 0}) ==
        doctest::Approx(0.6).epsilon(1e-9));
  const Norm l1 = Norm::p_norm(1, 2);
  CHECK(right_derivative(l1, Vec{1, 0}, Vec{0, 1}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const Norm linf = Norm::sup_norm(2);
  CHECK(right_derivative(linf, Vec{1, 1}, Vec{1, 0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(right_derivative(l2, Vec{0, 0}, Vec{1, 0}), ZeroBasePoint);
}

TEST_CASE("derivatives are bounded by the norm of the direction") {
  Rng rng(21);
  for (const auto& [name, norm] : normgeo::testing::corpus_norms()) {
    CAPTURE(name);
    for (int k = 0; k < 25; ++k) {
      const Vec h{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      const Vec v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      if (euclid(h) < 0.1 || is_zero(v)) continue;
      const double d = right_derivative(norm, h, v);
      CHECK(std::abs(d) <= norm(v) + 1e-7);
    }
  }
}

TEST_CASE("difference quotients decrease monotonically to the derivative") {
  Rng rng(22);
  const Norm l3 = Norm::p_norm(3, 2);
  for (int k = 0; k < 10; ++k) {
    const Vec h{rng.uniform(0.5, 2), rng.uniform(-2, 2)};
    const Vec v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (is_zero(v)) continue;
    const DerivativeTrace trace = right_derivative_traced(l3, h, v);
    for (double q : trace.quotients) CHECK(q >= trace.value - 1e-7);
  }
}

TEST_CASE("smoothness verdicts find the kinks and only the kinks") {
  const Norm l1 = Norm::p_norm(1, 2);
  const auto probes = direction_grid(2, 16);

  const SmoothnessVerdict axis = smoothness_at(l1, Vec{1, 0}, probes);
  CHECK_FALSE(axis.smooth);
  CHECK(axis.worst_defect == doctest::Approx(2.0).epsilon(1e-9));
  const SmoothnessVerdict kink_probe =
      smoothness_at(l1, Vec{1, 0}, {Vec{0, 1}});
  CHECK(kink_probe.worst_defect == doctest::Approx(2.0).epsilon(1e-9));

  CHECK(smoothness_at(l1, Vec{1, 0.5}, probes).smooth);
  const Norm l2 = Norm::p_norm(2, 2);
  const SmoothnessVerdict round = smoothness_at(l2, Vec{3, 4}, probes);
  CHECK(round.smooth);
  CHECK(round.worst_defect <= 1e-9);
  CHECK_THROWS_AS(smoothness_at(l1, Vec{0, 0}, probes), ZeroBasePoint);
}

TEST_CASE("non-smooth directions on a fine grid are isolated") {
  const auto grid = direction_grid(2, 1024);
  const Norm l1 = Norm::p_norm(1, 2);
  const Norm linf = Norm::sup_norm(2);
  const auto probes = direction_grid(2, 16);
  std::size_t l1_kinks = 0, linf_kinks = 0;
  for (const auto& h : grid) {
    if (!smoothness_at(l1, h, probes).smooth) ++l1_kinks;
    if (!smoothness_at(linf, h, probes).smooth) ++linf_kinks;
  }
  CHECK(l1_kinks == 4);    // the coordinate axes
  CHECK(linf_kinks == 4);  // the diagonals
}

TEST_CASE("strict convexity verdicts") {
  const ConvexityVerdict l2v = strict_convexity_witness(Norm::p_norm(2, 2));
  CHECK(l2v.status == ConvexityStatus::certified_strictly_convex);

  const Norm l1 = Norm::p_norm(1, 2);
  const ConvexityVerdict l1v = strict_convexity_witness(l1);
  REQUIRE(l1v.status == ConvexityStatus::witness_not_strictly_convex);
  REQUIRE(l1v.witness.has_value());
  const auto& [v, w] = *l1v.witness;
  CHECK(l1(v + w) ==
        doctest::Approx(l1(v) + l1(w)).epsilon(1e-9));
  CHECK(std::abs(cross2(v, w)) > 1e-9);

  const Norm linf = Norm::sup_norm(2);
  const ConvexityVerdict linfv = strict_convexity_witness(linf);
  REQUIRE(linfv.status == ConvexityStatus::witness_not_strictly_convex);
  const auto& [a, b] = *linfv.witness;
  CHECK(linf(a + b) == doctest::Approx(linf(a) + linf(b)).epsilon(1e-9));

  const ConvexityVerdict hexv = strict_convexity_witness(hexagon_norm());
  CHECK(hexv.status == ConvexityStatus::witness_not_strictly_convex);
}
