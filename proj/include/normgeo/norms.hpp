#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "normgeo/vec.hpp"

namespace normgeo {

enum class NormKind { p_norm, sup_norm, polytope_gauge };

/// A finite-dimensional norm: either a parametric p-norm (with the sup norm
/// as a distinguished variant rather than a large exponent) or the Minkowski
/// gauge of a centrally symmetric polytope given by its vertices.
class Norm {
 public:
  static Norm p_norm(double p, std::size_t dim);
  static Norm sup_norm(std::size_t dim);
  static Norm polytope_gauge(std::vector<Vec> vertices);

  NormKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double p() const { return p_; }
  const std::vector<Vec>& vertices() const { return vertices_; }

  /// Evaluate the norm; zero exactly on the zero vector.
  double operator()(const Vec& v) const;

 private:
  Norm() = default;
  NormKind kind_ = NormKind::p_norm;
  std::size_t dim_ = 0;
  double p_ = 2.0;
  std::vector<Vec> vertices_;
};

/// Least lambda >= 0 with v in lambda * conv(vertices), by a small LP over
/// convex-combination weights. The vertex set must be centrally symmetric
/// (verbatim, member for member) and span the space.
double polytope_gauge_value(const std::vector<Vec>& vertices, const Vec& v);

struct DerivativeOptions {
  double step0 = 1e-2;      // initial step of the halving schedule
  double rel_tol = 1e-9;    // stop when successive extrapolants agree to this
  int max_halvings = 22;
};

/// Right derivative of t -> ||base + t dir|| at t = 0, by difference
/// quotients on a halving schedule with two-stage Richardson extrapolation.
/// Throws ZeroBasePoint when base = 0 and NonConvergent when the
/// extrapolants fail to settle.
double right_derivative(const Norm& norm, const Vec& base, const Vec& dir,
                        const DerivativeOptions& opts = {});

struct DerivativeTrace {
  std::vector<double> steps;
  std::vector<double> quotients;  // raw difference quotients, same order
  double value = 0.0;
};

/// Same computation with the quotient schedule exposed (the quotients of a
/// convex function decrease monotonically toward the derivative).
DerivativeTrace right_derivative_traced(const Norm& norm, const Vec& base,
                                        const Vec& dir,
                                        const DerivativeOptions& opts = {});

struct SmoothnessVerdict {
  bool smooth = false;
  double worst_defect = 0.0;
  Vec worst_direction;
};

/// Gateaux-differentiability test at `base`: for each probe direction v the
/// defect |D+(v) + D+(-v)| vanishes iff the two one-sided derivatives agree.
SmoothnessVerdict smoothness_at(const Norm& norm, const Vec& base,
                                const std::vector<Vec>& directions,
                                double tol = 1e-7,
                                const DerivativeOptions& opts = {});

enum class ConvexityStatus {
  certified_strictly_convex,
  witness_not_strictly_convex,
  inconclusive
};

struct ConvexityVerdict {
  ConvexityStatus status = ConvexityStatus::inconclusive;
  std::optional<std::pair<Vec, Vec>> witness;  // unit vectors, ||v+w||=||v||+||w||
  double defect = 0.0;                         // ||v||+||w||-||v+w|| at the witness
};

struct ConvexitySearchOptions {
  std::uint64_t seed = 20240501;
  std::size_t budget = 10000;  // candidate pairs
  double tol = 1e-9;
};

/// p-norms with 1 < p < inf are certified analytically; otherwise searches
/// deterministic low-discrepancy pairs of unit vectors for a triangle
/// equality witness. Exhausting the budget yields `inconclusive`.
ConvexityVerdict strict_convexity_witness(
    const Norm& norm, const ConvexitySearchOptions& opts = {});

/// Evenly spread unit directions: an angle grid in 2D, seeded sphere points
/// in higher dimension.
std::vector<Vec> direction_grid(std::size_t dim, std::size_t count,
                                std::uint64_t seed = 1);

}  // namespace normgeo
