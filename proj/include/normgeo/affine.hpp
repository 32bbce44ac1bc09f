#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "normgeo/geodesy.hpp"

namespace normgeo {

/// One linear equality over per-point function values; the right-hand side
/// is always zero and the coefficients sum to zero, so constants are always
/// feasible.
struct ConstraintRow {
  std::vector<std::pair<std::size_t, double>> coeffs;  // (point index, coeff)
};

/// Encodes "f is affine along every recorded geodesic" as collinearity
/// equalities over consecutive station triples.
class AffineConstraintSystem {
 public:
  static AffineConstraintSystem build(const MetricSample& space,
                                      const std::vector<GeodesicRecord>& records,
                                      double geodesic_tol = 1e-7);

  const std::vector<std::string>& point_ids() const { return ids_; }
  std::size_t num_points() const { return ids_.size(); }
  std::size_t index_of(const std::string& id) const;
  const std::vector<ConstraintRow>& rows() const { return rows_; }

  /// Max |row . values| over all rows.
  double residual(const std::vector<double>& values) const;

 private:
  std::vector<std::string> ids_;
  std::vector<ConstraintRow> rows_;
};

struct AffineWitness {
  std::vector<double> values;  // per point index, each within [-1, 1]
};

struct SeparationResult {
  double optimum = 0.0;  // max f(x) - f(y) under the box normalization
  std::optional<AffineWitness> witness;
};

/// Factors the equality system once (null-space basis) so that many pairs
/// can be separated against the same system. Each pair solve is a small LP
/// over the null-space coordinates with the box constraint -1 <= f <= 1.
class SeparationSolver {
 public:
  explicit SeparationSolver(const AffineConstraintSystem& system,
                            double pivot_tol = 1e-10);

  /// Dimension of the feasible function space (constants included), i.e.
  /// the null-space dimension of the equality system.
  std::size_t value_space_dim() const { return basis_.size(); }

  /// `box_center` shifts the normalization box to [c-1, c+1] (|c| <= 1);
  /// the optimum is invariant under the shift since constants are feasible.
  SeparationResult separate(std::size_t x, std::size_t y,
                            double separation_tol = 1e-6,
                            double box_center = 0.0) const;

 private:
  const AffineConstraintSystem& system_;
  std::vector<std::vector<double>> basis_;  // null-space columns, orthonormal
};

/// One-shot convenience wrapper around SeparationSolver.
SeparationResult separate_pair(const AffineConstraintSystem& system,
                               const std::string& x, const std::string& y,
                               double separation_tol = 1e-6);

struct PairOutcome {
  std::string x, y;
  double optimum = 0.0;
  bool separated = false;
  std::optional<AffineWitness> witness;
};

struct SeparationReport {
  std::vector<PairOutcome> separated;
  std::vector<PairOutcome> non_separated;
  std::size_t pairs_tested() const {
    return separated.size() + non_separated.size();
  }
};

SeparationReport separate_all(
    const AffineConstraintSystem& system,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    double separation_tol = 1e-6);

struct Embedding {
  std::vector<std::string> ids;   // all system points, system order
  std::vector<Vec> coords;        // image of each point in R^k
  std::size_t k = 0;
  std::vector<std::size_t> witness_pairs;  // indices of the kept witnesses

  const Vec& at(const std::string& id) const;
};

/// Evaluation-map embedding: one separating witness per pair, pruned to an
/// affinely independent subset (independence modulo constants, column-pivoted
/// elimination). Throws NotSeparated when a pair admits no witness.
Embedding evaluation_embedding(
    const AffineConstraintSystem& system,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    double separation_tol = 1e-6, double pivot_tol = 1e-8);

struct MidpointInconsistency {
  std::string x, y;    // shared endpoints
  std::string m1, m2;  // distinct midpoints of the two records
  double optimum;      // separation optimum between the midpoints
};

/// Detector for the incompatibility between point separation and multiple
/// geodesics: record pairs joining the same endpoints through distinct
/// midpoints must not have separable midpoints.
std::vector<MidpointInconsistency> midpoint_uniqueness_audit(
    const MetricSample& space, const std::vector<GeodesicRecord>& records,
    const AffineConstraintSystem& system, double separation_tol = 1e-6,
    double midpoint_tol = 1e-9);

}  // namespace normgeo
