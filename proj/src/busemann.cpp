#include "normgeo/busemann.hpp"

#include <cmath>

namespace normgeo {

double busemann_linear(const Norm& norm, const Vec& ray_dir, const Vec& v,
                       const DerivativeOptions& opts) {
  if (is_zero(ray_dir)) throw ZeroBasePoint("Busemann ray with zero direction");
  return right_derivative(norm, ray_dir, -v, opts);
}

GeodesicCheck validate_ray(const MetricSample& space, const SampledRay& ray,
                           double tol) {
  GeodesicRecord record;
  if (ray.stations.empty() || ray.stations.front().first > 0.0)
    record.stations.push_back({0.0, ray.base});
  else if (ray.stations.front().second != ray.base)
    throw InvalidGeodesic("ray base does not match the parameter-0 station");
  for (const auto& [t, id] : ray.stations) record.stations.push_back({t, id});
  return validate_geodesic(space, record, tol);
}

RayLimitTrace busemann_ray_traced(const MetricSample& space,
                                  const SampledRay& ray, const std::string& x,
                                  double tol) {
  if (ray.stations.size() < 2)
    throw NotConverged("ray needs at least two stations");
  RayLimitTrace trace;
  for (const auto& [t, id] : ray.stations) {
    if (t < 0.0) throw InvalidGeodesic("ray station with negative parameter");
    trace.estimates.push_back(space.distance(id, x) - t);
  }
  const std::size_t n = trace.estimates.size();
  if (std::abs(trace.estimates[n - 1] - trace.estimates[n - 2]) > tol)
    throw NotConverged("Busemann estimates did not stabilize within tolerance");
  trace.value = trace.estimates[n - 1];
  return trace;
}

double busemann_ray(const MetricSample& space, const SampledRay& ray,
                    const std::string& x, double tol) {
  return busemann_ray_traced(space, ray, x, tol).value;
}

}  // namespace normgeo
