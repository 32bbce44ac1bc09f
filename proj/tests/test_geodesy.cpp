#include <doctest.h>

#include <cmath>

#include "normgeo/geodesy.hpp"
#include "support/instances.hpp"

using namespace normgeo;

namespace {

GeodesicRecord parabola_record(int steps = 5, double dt = 0.1) {
  GeodesicRecord r;
  for (int k = 0; k <= steps; ++k)
    r.stations.push_back({dt * k, "q" + std::to_string(k)});
  return r;
}

MetricSample parabola_sample(const Norm& norm, int steps = 5, double dt = 0.1) {
  std::vector<PointRecord> recs;
  for (int k = 0; k <= steps; ++k) {
    const double t = dt * k;
    recs.push_back({"q" + std::to_string(k), Vec{t, t * t}});
  }
  std::vector<std::tuple<std::string, std::string, double>> table;
  for (std::size_t a = 0; a < recs.size(); ++a)
    for (std::size_t b = a + 1; b < recs.size(); ++b)
      table.emplace_back(recs[a].id, recs[b].id,
                         norm(*recs[a].coords - *recs[b].coords));
  return MetricSample(std::move(recs), std::move(table));
}

}  // namespace

TEST_CASE("metric_from_norm tabulates the induced distances") {
  CHECK(metric_from_norm(Norm::p_norm(2, 2), {Vec{0, 0}, Vec{3, 4}})
            .distance("p0", "p1") == doctest::Approx(5.0));
  CHECK(metric_from_norm(Norm::p_norm(1, 2), {Vec{0, 0}, Vec{1, 1}})
            .distance("p0", "p1") == doctest::Approx(2.0));
  CHECK(metric_from_norm(Norm::sup_norm(2), {Vec{0, 0}, Vec{1, 1}})
            .distance("p0", "p1") == doctest::Approx(1.0));
  CHECK_THROWS_AS(metric_from_norm(Norm::p_norm(2, 2), {Vec{1, 2, 3}}),
                  DimensionMismatch);
}

TEST_CASE("norm-induced samples satisfy the metric axioms") {
  const MetricSample sample = normgeo::testing::make_lattice_sample(
      normgeo::testing::hexagon_norm(), 5);
  const MetricAudit audit = audit_metric(sample, 1e-12);
  CHECK(audit.ok);
  CHECK(audit.worst_triangle <= 1e-12);
  CHECK(audit.worst_symmetry == 0.0);
}

TEST_CASE("linear intervals validate as geodesics in any norm") {
  for (const auto& [name, norm] : normgeo::testing::corpus_norms()) {
    CAPTURE(name);
    const Vec x{0.1, 0.2}, y{0.8, -0.4};
    const double len = norm(y - x);
    std::vector<Vec> points;
    GeodesicRecord record;
    for (int k = 0; k <= 4; ++k) {
      const double t = len * k / 4.0;
      points.push_back(linear_bicombing_point(norm, x, y, t));
      record.stations.push_back({t, "p" + std::to_string(k)});
    }
    const MetricSample space = metric_from_norm(norm, points);
    CHECK(validate_geodesic(space, record).ok);
  }
}

TEST_CASE("linear bicombing points and failure modes") {
  const Norm l2 = Norm::p_norm(2, 2);
  const Vec mid = linear_bicombing_point(l2, Vec{0, 0}, Vec{2, 0}, 1.0);
  CHECK(mid[0] == doctest::Approx(1.0));
  CHECK(mid[1] == doctest::Approx(0.0));

  const Norm l1 = Norm::p_norm(1, 2);
  const Vec half = linear_bicombing_point(l1, Vec{0, 0}, Vec{1, 1}, 1.0);
  CHECK(half[0] == doctest::Approx(0.5));
  CHECK(half[1] == doctest::Approx(0.5));

  const Vec start = linear_bicombing_point(l2, Vec{0.5, 0.25}, Vec{1, 1}, 0.0);
  CHECK(start[0] == doctest::Approx(0.5));

  CHECK_THROWS_AS(linear_bicombing_point(l2, Vec{1, 1}, Vec{1, 1}, 0.0),
                  CoincidentEndpoints);
  CHECK_THROWS_AS(linear_bicombing_point(l2, Vec{0, 0}, Vec{1, 0}, 2.0),
                  ParameterOutOfRange);
}

TEST_CASE("the parabola is a sup-norm geodesic but not a Euclidean one") {
  const GeodesicRecord record = parabola_record();
  const GeodesicCheck under_linf =
      validate_geodesic(parabola_sample(Norm::sup_norm(2)), record);
  CHECK(under_linf.ok);
  CHECK(under_linf.worst_violation <= 1e-12);

  const GeodesicCheck under_l2 =
      validate_geodesic(parabola_sample(Norm::p_norm(2, 2)), record);
  CHECK_FALSE(under_l2.ok);
  CHECK(under_l2.worst_violation >= 1e-2);
}

TEST_CASE("geodesic records enforce their preconditions") {
  const MetricSample space =
      metric_from_norm(Norm::p_norm(2, 2), {Vec{0, 0}, Vec{1, 0}});
  GeodesicRecord bad;
  bad.stations = {{0.0, "p0"}};
  CHECK_THROWS_AS(validate_geodesic(space, bad), InvalidGeodesic);
  GeodesicRecord unordered;
  unordered.stations = {{1.0, "p0"}, {0.0, "p1"}};
  CHECK_THROWS_AS(validate_geodesic(space, unordered), InvalidGeodesic);
  GeodesicRecord unknown;
  unknown.stations = {{0.0, "p0"}, {1.0, "zz"}};
  CHECK_THROWS_AS(validate_geodesic(space, unknown), UnknownPointId);
}

TEST_CASE("midpoint stations split validated geodesics evenly") {
  const auto inst = normgeo::testing::make_l2_grid_instance(3);
  for (const auto& record : inst.records) {
    REQUIRE(record.stations.size() == 3);
    const auto& [t0, a] = record.stations[0];
    const auto& [tm, m] = record.stations[1];
    const auto& [t1, b] = record.stations[2];
    const double d = inst.space.distance(a, b);
    CHECK(inst.space.distance(a, m) == doctest::Approx(d / 2).epsilon(1e-12));
    CHECK(inst.space.distance(m, b) == doctest::Approx(d / 2).epsilon(1e-12));
    CHECK(tm - t0 == doctest::Approx(d / 2).epsilon(1e-12));
    CHECK(t1 - t0 == doctest::Approx(d).epsilon(1e-12));
  }
}

namespace {

BicombingTable linear_table(const Norm& norm, const std::vector<Vec>& points,
                            MetricSample& space_out) {
  // all-pairs linear bicombing with midpoint stations, both orientations
  std::vector<Vec> all = points;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < points.size(); ++i)
    ids.push_back("p" + std::to_string(i));
  std::vector<std::string> mid_ids;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      all.push_back(0.5 * (points[i] + points[j]));
      mid_ids.push_back("p" + std::to_string(all.size() - 1));
      pairs.emplace_back(i, j);
    }
  space_out = metric_from_norm(norm, all);

  BicombingTable table;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [i, j] = pairs[k];
    const double d = norm(points[i] - points[j]);
    GeodesicRecord fwd{{{0.0, ids[i]}, {d / 2, mid_ids[k]}, {d, ids[j]}}};
    GeodesicRecord bwd{{{0.0, ids[j]}, {d / 2, mid_ids[k]}, {d, ids[i]}}};
    table.insert(ids[i], ids[j], fwd);
    table.insert(ids[j], ids[i], bwd);
  }
  return table;
}

}  // namespace

TEST_CASE("the linear bicombing on a grid passes validation") {
  std::vector<Vec> pts;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) pts.push_back(Vec{i * 0.5, j * 0.5});
  MetricSample space = metric_from_norm(Norm::p_norm(2, 2), {Vec{0, 0}});
  const BicombingTable table = linear_table(Norm::p_norm(2, 2), pts, space);
  for (const auto& [key, record] : table.entries())
    REQUIRE(validate_geodesic(space, record).ok);
  const BicombingReport report = validate_bicombing(space, table);
  CHECK(report.ok());
}

TEST_CASE("bicombing violations are detected and attributed") {
  const Norm linf = Norm::sup_norm(2);
  // Points on [0,1] x {0, 0.3}: two distinct sup-norm geodesics exist
  // between the horizontal endpoints.
  const std::vector<Vec> pts = {Vec{0, 0},     Vec{1, 0},
                                Vec{0.5, 0},   Vec{0.5, 0.3},
                                Vec{0.75, 0},  Vec{0.75, 0.2}};
  const MetricSample space = metric_from_norm(linf, pts);

  SUBCASE("orientation") {
    BicombingTable table;
    GeodesicRecord fwd{{{0.0, "p0"}, {0.5, "p2"}, {1.0, "p1"}}};
    GeodesicRecord not_reversed{{{0.0, "p1"}, {0.5, "p3"}, {1.0, "p0"}}};
    table.insert("p0", "p1", fwd);
    table.insert("p1", "p0", not_reversed);
    const BicombingReport report = validate_bicombing(space, table);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].kind == BicombingViolation::Kind::orientation);
  }

  SUBCASE("sub-geodesic replaced by a different geodesic") {
    BicombingTable table;
    GeodesicRecord whole{{{0.0, "p0"}, {0.5, "p2"}, {0.75, "p4"}, {1.0, "p1"}}};
    // from p2 the table stores the bent geodesic through p5 instead of the
    // tail of `whole` through p4
    GeodesicRecord bent{{{0.0, "p2"}, {0.25, "p5"}, {0.5, "p1"}}};
    REQUIRE(validate_geodesic(space, bent).ok);
    table.insert("p0", "p1", whole);
    table.insert("p2", "p1", bent);
    const BicombingReport report = validate_bicombing(space, table);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].kind ==
          BicombingViolation::Kind::sub_geodesic);
    CHECK(report.violations[0].m == "p2");
  }

  SUBCASE("consistent tail passes") {
    BicombingTable table;
    GeodesicRecord whole{{{0.0, "p0"}, {0.5, "p2"}, {0.75, "p4"}, {1.0, "p1"}}};
    GeodesicRecord tail{{{0.0, "p2"}, {0.25, "p4"}, {0.5, "p1"}}};
    table.insert("p0", "p1", whole);
    table.insert("p2", "p1", tail);
    CHECK(validate_bicombing(space, table).ok());
  }
}

TEST_CASE("oracle-backed samples memoize distances") {
  int calls = 0;
  std::vector<PointRecord> recs = {{"a", Vec{0, 0}}, {"b", Vec{1, 1}}};
  const MetricSample space(std::move(recs),
                           [&calls](const Vec& x, const Vec& y) {
                             ++calls;
                             return euclid(x - y);
                           });
  const double d1 = space.distance("a", "b");
  const double d2 = space.distance("b", "a");
  CHECK(d1 == d2);
  CHECK(calls == 1);
  CHECK_THROWS_AS(space.distance("a", "zz"), UnknownPointId);
}
