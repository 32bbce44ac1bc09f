#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "normgeo/geodesy.hpp"
#include "normgeo/norms.hpp"

namespace normgeo {

/// Axis-aligned open box domain.
struct Box {
  Vec lo, hi;

  std::size_t dim() const { return lo.dim(); }
  bool contains(const Vec& x, double margin = 0.0) const;
  /// Distance from x to the boundary (sup-metric inradius at x).
  double inradius_at(const Vec& x) const;
};

/// A metric given as a distance procedure over an open convex box. The
/// hypotheses under test are that linear intervals inside the domain are
/// constant-speed geodesics; the probes below detect violations.
class MetricOracle {
 public:
  using DistFn = std::function<double(const Vec&, const Vec&)>;

  MetricOracle(Box domain, DistFn fn, std::string name = "custom");

  /// Distances induced by a translation-invariant norm.
  static MetricOracle from_norm(Box domain, Norm norm);
  /// Built-in counterexample: d(x,y) = (1 + (x1+y1)/2) * ||x-y||_2, whose
  /// unit speeds depend on the base point.
  static MetricOracle affine_scaled_euclidean(Box domain);

  double operator()(const Vec& a, const Vec& b) const { return fn_(a, b); }
  const Box& domain() const { return domain_; }
  const std::string& name() const { return name_; }

 private:
  Box domain_;
  DistFn fn_;
  std::string name_;
};

struct FinslerProbe {
  double value = 0.0;
  double eps_residual = 0.0;  // relative spread across the epsilon schedule
};

struct ProbeOptions {
  std::vector<double> eps_factors = {1e-1, 5e-2, 1e-2, 5e-3};
  double residual_tol = 1e-7;
};

/// Norm of v in the metric at x, as d(x, x+eps v)/eps over a decreasing
/// epsilon schedule scaled to the domain inradius at x. The quotients must
/// agree (the schedule spread is the hypothesis detector); EpsInconsistent
/// is thrown past `residual_tol`. Zero directions return 0 without oracle
/// calls.
FinslerProbe finsler_at(const MetricOracle& oracle, const Vec& x, const Vec& v,
                        const ProbeOptions& opts = {});

/// Non-throwing variant: the value is the schedule's linear extrapolation to
/// eps -> 0, which agrees with finsler_at when the quotients are consistent
/// and still returns the limiting speed when they are not.
FinslerProbe finsler_at_raw(const MetricOracle& oracle, const Vec& x,
                            const Vec& v, const ProbeOptions& opts = {});

struct TranslationReport {
  bool pass = false;
  double max_deviation = 0.0;
  double worst_t = 0.0;
};

/// Checks |v|_{x+tv} = |v|_x across the parameter grid.
TranslationReport check_translation_invariance(const MetricOracle& oracle,
                                               const Vec& x, const Vec& v,
                                               const std::vector<double>& t_grid,
                                               double tol = 1e-6,
                                               const ProbeOptions& opts = {});

/// Direction table of the metric's norm at a base point. `extra` directions
/// are appended (deduplicated) after the regular grid.
struct DirectionTable {
  std::vector<Vec> dirs;      // unit (Euclidean) directions, full circle
  std::vector<double> values; // norm of each direction
};

DirectionTable extract_norm_table(const MetricOracle& oracle, const Vec& x,
                                  std::size_t count = 256,
                                  const std::vector<Vec>& extra = {},
                                  bool raw = true,
                                  const ProbeOptions& opts = {});

/// Polytope gauge through the table's unit points (dir/value, symmetrized).
Norm norm_from_table(const DirectionTable& table);

struct FirstVariationOptions {
  double t0_factor = 1e-2;       // of inradius(x)/||v||
  std::size_t table_dirs = 256;  // direction table resolution at x
  double kink_threshold = 5e-2;  // defect below which the base is smooth
  ProbeOptions probe;
  bool skip_smooth_check = false;
};

struct FirstVariationResult {
  double derivative = 0.0;   // estimated f'(0) for f(t) = |h|_{x+tv}
  bool smooth_base = true;   // the norm at x is smooth at h
  double smooth_defect = 0.0;
};

/// Central-difference estimate of f'(0), f(t) = |h|_{x+tv}, with two-level
/// Richardson refinement. The smoothness of h in the norm extracted at x is
/// a hypothesis of the vanishing statement; when it fails the derivative is
/// still reported but `smooth_base` is false and no vanishing is implied.
FirstVariationResult first_variation(const MetricOracle& oracle, const Vec& x,
                                     const Vec& h, const Vec& v,
                                     const FirstVariationOptions& opts = {});

struct ConstancyReport {
  bool pass = false;
  double max_deviation = 0.0;
  Vec worst_x, worst_y, worst_dir;
};

/// Checks that the extracted norm is the same at every grid point.
ConstancyReport check_constancy(const MetricOracle& oracle,
                                const std::vector<Vec>& grid,
                                const std::vector<Vec>& directions,
                                double tol = 1e-6,
                                const ProbeOptions& opts = {});

struct RepresentationPair {
  std::string x, xbar;  // v = scale * (coords(x) - coords(xbar))
  double scale = 0.0;
  double value = 0.0;  // scale * d(x, xbar)
};

struct WellDefWitness {
  Vec direction;
  RepresentationPair a, b;
  double spread = 0.0;  // relative disagreement between the two values
};

/// Reconstructed norm: direction table plus gauge-of-the-hull interpolation.
/// Evaluation at a direction parallel to a table entry reproduces the table
/// value exactly; other directions go through the polytope gauge of the
/// table's unit points.
class ReconstructedNorm {
 public:
  explicit ReconstructedNorm(DirectionTable table);
  double operator()(const Vec& v) const;
  const DirectionTable& table() const { return table_; }

 private:
  DirectionTable table_;
  std::optional<Norm> hull_;  // absent when the table does not span
};

struct ReconstructionReport {
  enum class Verdict { consistent, violated };
  DirectionTable table;
  double welldef_residual = 0.0;  // max relative spread across representations
  std::vector<WellDefWitness> witnesses;
  Verdict verdict = Verdict::violated;
  double triangle_residual = 0.0;  // audit on sampled table triples

  ReconstructedNorm norm() const { return ReconstructedNorm(table); }
  bool consistent() const { return verdict == Verdict::consistent; }
};

struct ReconstructOptions {
  double welldef_tol = 1e-8;    // relative spread allowed per direction
  double parallel_tol = 1e-9;   // Euclidean rejection for parallel detection
  std::size_t min_representations = 2;
  std::size_t max_witnesses = 16;
};

/// Rebuilds the norm that induces the sampled metric: every direction value
/// is scale * d(x, xbar) over all sampled representations of the direction as
/// a positive multiple of a coordinate difference. Directions with fewer than
/// `min_representations` representations raise InsufficientRepresentations;
/// disagreeing representations yield a `violated` verdict with witnesses.
ReconstructionReport reconstruct_norm(const MetricSample& space,
                                      const std::vector<Vec>& sample_dirs,
                                      const ReconstructOptions& opts = {});

/// Exception form of a violated reconstruction, carrying the first witness.
struct WellDefinednessViolation : Error {
  WellDefinednessViolation(std::string msg, WellDefWitness w)
      : Error(std::move(msg)), witness(std::move(w)) {}
  WellDefWitness witness;
};

/// Throws WellDefinednessViolation when the report's verdict is violated.
void require_consistent(const ReconstructionReport& report);

/// Distinct unit directions realized as coordinate differences of sampled
/// point pairs, restricted to those with at least `min_representations`
/// parallel pairs. Both orientations are returned, sorted by angle in 2D.
std::vector<Vec> difference_directions(const MetricSample& space,
                                       std::size_t min_representations = 2,
                                       double parallel_tol = 1e-9);

/// Up to `count` directions from `dirs` spread as evenly as possible by
/// angle (2D); returns all of them when fewer exist.
std::vector<Vec> pick_spread_directions(const std::vector<Vec>& dirs,
                                        std::size_t count);

}  // namespace normgeo
