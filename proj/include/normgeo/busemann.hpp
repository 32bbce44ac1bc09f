#pragma once

#include <string>
#include <utility>
#include <vector>

#include "normgeo/geodesy.hpp"
#include "normgeo/norms.hpp"

namespace normgeo {

/// Busemann value of the linear ray spanned by `ray_dir` at `v`, computed
/// through the small-step form (the right derivative of ||h - t v|| at 0).
/// The value is invariant under positive rescaling of `ray_dir` and lies in
/// [-||v||, ||v||].
double busemann_linear(const Norm& norm, const Vec& ray_dir, const Vec& v,
                       const DerivativeOptions& opts = {1e-2, 1e-8, 22});

/// A ray recorded inside a MetricSample: stations at increasing parameters,
/// starting from `base` at parameter 0.
struct SampledRay {
  std::string base;
  std::vector<std::pair<double, std::string>> stations;
};

struct RayLimitTrace {
  std::vector<double> estimates;  // d(station, x) - t per station, in order
  double value = 0.0;
};

/// Isometric-embedding check of a sampled ray: pairwise station distances
/// must equal parameter gaps, with the base point sitting at parameter 0.
GeodesicCheck validate_ray(const MetricSample& space, const SampledRay& ray,
                           double tol = 1e-7);

/// Busemann value of a sampled metric ray at point `x`: the stabilized limit
/// of d(ray(t), x) - t. The estimates decrease toward the limit; the last two
/// must agree within `tol` or NotConverged is thrown.
RayLimitTrace busemann_ray_traced(const MetricSample& space,
                                  const SampledRay& ray, const std::string& x,
                                  double tol = 1e-5);

double busemann_ray(const MetricSample& space, const SampledRay& ray,
                    const std::string& x, double tol = 1e-5);

}  // namespace normgeo
