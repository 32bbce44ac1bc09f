#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "normgeo/norms.hpp"
#include "normgeo/vec.hpp"

namespace normgeo {

struct PointRecord {
  std::string id;
  std::optional<Vec> coords;  // ambient coordinates, when known
};

/// A finite labeled point set with pairwise distances, given either as an
/// explicit symmetric table or as an oracle. Oracle distances are memoized
/// lazily; the cache is single-writer-consistent under concurrent readers.
class MetricSample {
 public:
  using DistanceFn = std::function<double(const Vec&, const Vec&)>;

  MetricSample(std::vector<PointRecord> points,
               std::vector<std::tuple<std::string, std::string, double>> table);
  MetricSample(std::vector<PointRecord> points, DistanceFn oracle);

  std::size_t size() const { return points_.size(); }
  const std::vector<PointRecord>& points() const { return points_; }
  const PointRecord& point(std::size_t i) const { return points_[i]; }
  bool has_point(const std::string& id) const;
  std::size_t index_of(const std::string& id) const;  // throws UnknownPointId

  double distance(std::size_t i, std::size_t j) const;
  double distance(const std::string& a, const std::string& b) const;

  bool has_table() const { return !table_.empty(); }

 private:
  struct MemoCache {
    std::unordered_map<std::uint64_t, double> values;
    std::mutex mutex;
  };

  void index_points();
  std::vector<PointRecord> points_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> table_;  // dense n*n when table-backed, else empty
  DistanceFn oracle_;
  std::unique_ptr<MemoCache> cache_;
};

struct Station {
  double t = 0.0;
  std::string point;
};

/// An arclength-parametrized geodesic claim: stations with strictly
/// increasing parameters whose pairwise distances should equal parameter
/// gaps. Endpoints are the first and last stations.
struct GeodesicRecord {
  std::vector<Station> stations;
};

struct GeodesicCheck {
  bool ok = false;
  double worst_violation = 0.0;
  std::pair<std::string, std::string> worst_pair;
};

GeodesicCheck validate_geodesic(const MetricSample& space,
                                const GeodesicRecord& record,
                                double tol = 1e-7);

/// Partial bicombing: one stored geodesic per ordered point pair. A finite
/// sample can only record finitely many pairs, so absent entries are simply
/// unchecked.
class BicombingTable {
 public:
  void insert(const std::string& from, const std::string& to,
              GeodesicRecord record);
  const GeodesicRecord* find(const std::string& from,
                             const std::string& to) const;
  const std::map<std::pair<std::string, std::string>, GeodesicRecord>&
  entries() const {
    return entries_;
  }

 private:
  std::map<std::pair<std::string, std::string>, GeodesicRecord> entries_;
};

struct BicombingViolation {
  enum class Kind { orientation, sub_geodesic } kind = Kind::orientation;
  std::string x, m, y;  // offending triple (m empty for orientation cases)
  std::string detail;
};

struct BicombingReport {
  std::vector<BicombingViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks orientation reversal (the record for (y,x) is the reversed record
/// for (x,y)) and sub-geodesic consistency (a stored record starting at an
/// interior station agrees with the tail of the enclosing record on shared
/// stations and shared parameters).
BicombingReport validate_bicombing(const MetricSample& space,
                                   const BicombingTable& table,
                                   double tol = 1e-7);

/// Distance table induced by a norm on explicit ambient points; ids are
/// assigned as p0, p1, ...
MetricSample metric_from_norm(const Norm& norm, const std::vector<Vec>& points);

/// Point at arclength t along the linear interval from x to y.
Vec linear_bicombing_point(const Norm& norm, const Vec& x, const Vec& y,
                           double t);

struct MetricAudit {
  bool ok = false;
  double worst_symmetry = 0.0;
  double worst_triangle = 0.0;       // max of d(a,c) - d(a,b) - d(b,c)
  double worst_self = 0.0;           // max |d(x,x)|
  double min_distinct_distance = 0.0;
  std::size_t triples_checked = 0;
};

/// Metric-axiom audit; checks all triples up to `max_triples`, then samples.
MetricAudit audit_metric(const MetricSample& space, double tol = 1e-9,
                         std::size_t max_triples = 20000,
                         std::uint64_t seed = 7);

}  // namespace normgeo
