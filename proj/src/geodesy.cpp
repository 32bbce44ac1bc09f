#include "normgeo/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normgeo/rng.hpp"

namespace normgeo {

void MetricSample::index_points() {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].id.empty()) throw Error("point with empty id");
    if (!index_.emplace(points_[i].id, i).second)
      throw Error("duplicate point id: " + points_[i].id);
  }
}

MetricSample::MetricSample(
    std::vector<PointRecord> points,
    std::vector<std::tuple<std::string, std::string, double>> table)
    : points_(std::move(points)) {
  index_points();
  const std::size_t n = points_.size();
  table_.assign(n * n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) table_[i * n + i] = 0.0;
  for (const auto& [a, b, d] : table) {
    const std::size_t i = index_of(a), j = index_of(b);
    if (d < 0.0 || !std::isfinite(d))
      throw Error("invalid distance for pair (" + a + ", " + b + ")");
    table_[i * n + j] = d;
    table_[j * n + i] = d;
  }
}

MetricSample::MetricSample(std::vector<PointRecord> points, DistanceFn oracle)
    : points_(std::move(points)),
      oracle_(std::move(oracle)),
      cache_(std::make_unique<MemoCache>()) {
  index_points();
  for (const auto& p : points_) {
    if (!p.coords)
      throw Error("oracle-backed samples need coordinates for every point");
  }
}

bool MetricSample::has_point(const std::string& id) const {
  return index_.count(id) != 0;
}

std::size_t MetricSample::index_of(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw UnknownPointId("unknown point id: " + id);
  return it->second;
}

double MetricSample::distance(std::size_t i, std::size_t j) const {
  const std::size_t n = points_.size();
  if (i >= n || j >= n) throw UnknownPointId("point index out of range");
  if (i == j) return 0.0;
  if (!table_.empty()) {
    const double d = table_[i * n + j];
    if (std::isnan(d))
      throw Error("distance not tabulated for pair (" + points_[i].id + ", " +
                  points_[j].id + ")");
    return d;
  }
  const std::uint64_t key =
      (static_cast<std::uint64_t>(std::min(i, j)) << 32) |
      static_cast<std::uint64_t>(std::max(i, j));
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    const auto it = cache_->values.find(key);
    if (it != cache_->values.end()) return it->second;
  }
  const double d = oracle_(*points_[i].coords, *points_[j].coords);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->values.emplace(key, d).first->second;
}

double MetricSample::distance(const std::string& a,
                              const std::string& b) const {
  return distance(index_of(a), index_of(b));
}

GeodesicCheck validate_geodesic(const MetricSample& space,
                                const GeodesicRecord& record, double tol) {
  if (record.stations.size() < 2)
    throw InvalidGeodesic("geodesic record needs at least two stations");
  for (std::size_t k = 1; k < record.stations.size(); ++k) {
    if (!(record.stations[k].t > record.stations[k - 1].t))
      throw InvalidGeodesic("station parameters must strictly increase");
  }
  GeodesicCheck check;
  check.worst_violation = 0.0;
  for (std::size_t a = 0; a < record.stations.size(); ++a) {
    for (std::size_t b = a + 1; b < record.stations.size(); ++b) {
      const auto& sa = record.stations[a];
      const auto& sb = record.stations[b];
      const double d = space.distance(sa.point, sb.point);
      const double v = std::abs(d - (sb.t - sa.t));
      if (v > check.worst_violation) {
        check.worst_violation = v;
        check.worst_pair = {sa.point, sb.point};
      }
    }
  }
  check.ok = check.worst_violation <= tol;
  return check;
}

void BicombingTable::insert(const std::string& from, const std::string& to,
                            GeodesicRecord record) {
  entries_[{from, to}] = std::move(record);
}

const GeodesicRecord* BicombingTable::find(const std::string& from,
                                           const std::string& to) const {
  const auto it = entries_.find({from, to});
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

GeodesicRecord reversed(const GeodesicRecord& r) {
  GeodesicRecord out;
  const double total = r.stations.back().t;
  for (auto it = r.stations.rbegin(); it != r.stations.rend(); ++it)
    out.stations.push_back({total - it->t, it->point});
  return out;
}

// The stored geodesic from an interior station m to the far endpoint must
// agree with the tail of the enclosing record: same id => same parameter
// offset, same parameter => same id.
void check_tail(const GeodesicRecord& whole, std::size_t from_index,
                const GeodesicRecord& part, const std::string& x,
                const std::string& m, const std::string& y, double tol,
                std::vector<BicombingViolation>& out) {
  const double t0 = whole.stations[from_index].t;
  for (const auto& ps : part.stations) {
    for (std::size_t k = from_index; k < whole.stations.size(); ++k) {
      const auto& ws = whole.stations[k];
      const bool same_param = std::abs((ws.t - t0) - ps.t) <= tol;
      const bool same_id = ws.point == ps.point;
      if (same_id && !same_param) {
        out.push_back({BicombingViolation::Kind::sub_geodesic, x, m, y,
                       "station " + ps.point + " sits at offset " +
                           std::to_string(ps.t) + " but the enclosing record "
                           "places it at " + std::to_string(ws.t - t0)});
      } else if (same_param && !same_id) {
        out.push_back({BicombingViolation::Kind::sub_geodesic, x, m, y,
                       "parameter " + std::to_string(ps.t) + " is " +
                           ps.point + " in the sub-record but " + ws.point +
                           " in the enclosing record"});
      }
    }
  }
}

}  // namespace

BicombingReport validate_bicombing(const MetricSample& space,
                                   const BicombingTable& table, double tol) {
  BicombingReport report;
  for (const auto& [key, record] : table.entries()) {
    const auto& [x, y] = key;
    for (const auto& s : record.stations) space.index_of(s.point);

    if (record.stations.front().point != x || record.stations.back().point != y)
      report.violations.push_back(
          {BicombingViolation::Kind::orientation, x, "", y,
           "record endpoints do not match the table key"});

    if (const GeodesicRecord* rev = table.find(y, x)) {
      const GeodesicRecord expect = reversed(record);
      bool match = rev->stations.size() == expect.stations.size();
      if (match) {
        for (std::size_t k = 0; k < expect.stations.size(); ++k) {
          if (rev->stations[k].point != expect.stations[k].point ||
              std::abs(rev->stations[k].t - expect.stations[k].t) > tol) {
            match = false;
            break;
          }
        }
      }
      if (!match)
        report.violations.push_back(
            {BicombingViolation::Kind::orientation, x, "", y,
             "record for (" + y + ", " + x + ") is not the reversal"});
    }

    // Sub-geodesic consistency against stored records from interior
    // stations, in both directions along the record.
    for (std::size_t k = 1; k + 1 < record.stations.size(); ++k) {
      const std::string& m = record.stations[k].point;
      if (const GeodesicRecord* tail = table.find(m, y))
        check_tail(record, k, *tail, x, m, y, tol, report.violations);
      if (const GeodesicRecord* head = table.find(m, x)) {
        const GeodesicRecord rev = reversed(record);
        const std::size_t rk = record.stations.size() - 1 - k;
        check_tail(rev, rk, *head, y, m, x, tol, report.violations);
      }
    }
  }
  return report;
}

MetricSample metric_from_norm(const Norm& norm,
                              const std::vector<Vec>& points) {
  std::vector<PointRecord> recs;
  std::vector<std::tuple<std::string, std::string, double>> table;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dim() != norm.dim())
      throw DimensionMismatch("point dimension does not match the norm");
    recs.push_back({"p" + std::to_string(i), points[i]});
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      table.emplace_back("p" + std::to_string(i), "p" + std::to_string(j),
                         norm(points[i] - points[j]));
  return MetricSample(std::move(recs), std::move(table));
}

Vec linear_bicombing_point(const Norm& norm, const Vec& x, const Vec& y,
                           double t) {
  const Vec diff = y - x;
  const double len = norm(diff);
  if (len == 0.0)
    throw CoincidentEndpoints("linear interval with coincident endpoints");
  if (t < 0.0 || t > len + 1e-12)
    throw ParameterOutOfRange("arclength parameter outside [0, " +
                              std::to_string(len) + "]");
  return x + (t / len) * diff;
}

MetricAudit audit_metric(const MetricSample& space, double tol,
                         std::size_t max_triples, std::uint64_t seed) {
  MetricAudit audit;
  const std::size_t n = space.size();
  audit.min_distinct_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    audit.worst_self = std::max(audit.worst_self, std::abs(space.distance(i, i)));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = space.distance(i, j);
      const double dji = space.distance(j, i);
      audit.worst_symmetry = std::max(audit.worst_symmetry, std::abs(dij - dji));
      audit.min_distinct_distance = std::min(audit.min_distinct_distance, dij);
    }
  }

  auto check_triple = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double gap =
        space.distance(a, c) - space.distance(a, b) - space.distance(b, c);
    audit.worst_triangle = std::max(audit.worst_triangle, gap);
    ++audit.triples_checked;
  };
  const std::size_t total = n * n * n;
  if (n >= 3 && total <= max_triples * 6) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (a != b && b != c && a != c) check_triple(a, b, c);
  } else if (n >= 3) {
    Rng rng(seed);
    for (std::size_t k = 0; k < max_triples; ++k) {
      const std::size_t a = rng.next_u64() % n;
      const std::size_t b = rng.next_u64() % n;
      const std::size_t c = rng.next_u64() % n;
      if (a != b && b != c && a != c) check_triple(a, b, c);
    }
  }
  audit.ok = audit.worst_self <= tol && audit.worst_symmetry <= tol &&
             audit.worst_triangle <= tol &&
             (n < 2 || audit.min_distinct_distance > tol);
  return audit;
}

}  // namespace normgeo
