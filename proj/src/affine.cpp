#include "normgeo/affine.hpp"

#include <algorithm>
#include <cmath>

#include "normgeo/lp.hpp"

namespace normgeo {

AffineConstraintSystem AffineConstraintSystem::build(
    const MetricSample& space, const std::vector<GeodesicRecord>& records,
    double geodesic_tol) {
  AffineConstraintSystem sys;
  for (const auto& p : space.points()) sys.ids_.push_back(p.id);

  for (const auto& record : records) {
    const GeodesicCheck check = validate_geodesic(space, record, geodesic_tol);
    if (!check.ok)
      throw InvalidGeodesic("record fails the geodesic check (violation " +
                            std::to_string(check.worst_violation) + " between " +
                            check.worst_pair.first + " and " +
                            check.worst_pair.second + ")");
    // Collinearity of consecutive station triples:
    //   (tc - tb) f(a) - (tc - ta) f(b) + (tb - ta) f(c) = 0.
    for (std::size_t k = 0; k + 2 < record.stations.size(); ++k) {
      const Station& sa = record.stations[k];
      const Station& sb = record.stations[k + 1];
      const Station& sc = record.stations[k + 2];
      ConstraintRow row;
      row.coeffs.emplace_back(space.index_of(sa.point), sc.t - sb.t);
      row.coeffs.emplace_back(space.index_of(sb.point), -(sc.t - sa.t));
      row.coeffs.emplace_back(space.index_of(sc.point), sb.t - sa.t);
      sys.rows_.push_back(std::move(row));
    }
  }
  return sys;
}

std::size_t AffineConstraintSystem::index_of(const std::string& id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw UnknownPointId("unknown point id: " + id);
  return static_cast<std::size_t>(it - ids_.begin());
}

double AffineConstraintSystem::residual(
    const std::vector<double>& values) const {
  double worst = 0.0;
  for (const auto& row : rows_) {
    double s = 0.0;
    for (const auto& [idx, c] : row.coeffs) s += c * values[idx];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

namespace {

// Orthonormal basis of the null space of the (row-normalized) constraint
// matrix, by Gaussian elimination followed by modified Gram-Schmidt.
std::vector<std::vector<double>> null_space(const AffineConstraintSystem& sys,
                                            double pivot_tol) {
  const std::size_t n = sys.num_points();
  std::vector<std::vector<double>> m;
  for (const auto& row : sys.rows()) {
    std::vector<double> dense(n, 0.0);
    double scale = 0.0;
    for (const auto& [idx, c] : row.coeffs) {
      dense[idx] += c;
      scale = std::max(scale, std::abs(c));
    }
    if (scale == 0.0) continue;
    for (double& x : dense) x /= scale;
    m.push_back(std::move(dense));
  }

  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m.size(); ++col) {
    std::size_t best = rank;
    for (std::size_t r = rank + 1; r < m.size(); ++r)
      if (std::abs(m[r][col]) > std::abs(m[best][col])) best = r;
    if (m.empty() || std::abs(m[best][col]) <= pivot_tol) continue;
    std::swap(m[rank], m[best]);
    const double inv = 1.0 / m[rank][col];
    for (std::size_t c = 0; c < n; ++c) m[rank][c] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) m[r][c] -= f * m[rank][c];
    }
    pivot_cols.push_back(col);
    ++rank;
  }

  std::vector<char> is_pivot(n, 0);
  for (std::size_t c : pivot_cols) is_pivot[c] = 1;

  std::vector<std::vector<double>> basis;
  for (std::size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<double> v(n, 0.0);
    v[free_col] = 1.0;
    for (std::size_t r = 0; r < rank; ++r) v[pivot_cols[r]] = -m[r][free_col];
    basis.push_back(std::move(v));
  }

  // Modified Gram-Schmidt for conditioning of the box rows downstream.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double p = 0.0;
      for (std::size_t c = 0; c < n; ++c) p += basis[i][c] * basis[j][c];
      for (std::size_t c = 0; c < n; ++c) basis[i][c] -= p * basis[j][c];
    }
    double norm2 = 0.0;
    for (double x : basis[i]) norm2 += x * x;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : basis[i]) x *= inv;
  }
  return basis;
}

}  // namespace

SeparationSolver::SeparationSolver(const AffineConstraintSystem& system,
                                   double pivot_tol)
    : system_(system), basis_(null_space(system, pivot_tol)) {}

SeparationResult SeparationSolver::separate(std::size_t x, std::size_t y,
                                            double separation_tol,
                                            double box_center) const {
  const std::size_t n = system_.num_points();
  if (x >= n || y >= n) throw UnknownPointId("point index out of range");
  if (x == y) throw SamePoint("cannot separate a point from itself");
  if (std::abs(box_center) > 1.0)
    throw Error("box center must lie within [-1, 1]");

  const std::size_t k = basis_.size();
  // Feasible functions are f = B z with c-1 <= f <= c+1. In standard form
  // with z = zp - zm and slacks s, s':
  //   B zp - B zm + s = c+1   and   s + s' = 2,
  // maximizing (B_x - B_y) . z. The all-slack basis (f = 0) is feasible, so
  // the solver can skip phase one.
  lp::Problem prob;
  const std::size_t vs = 2 * k;          // zp | zm
  prob.num_vars = vs + 2 * n;            // + s | s'
  prob.objective.assign(prob.num_vars, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const double w = basis_[j][x] - basis_[j][y];
    prob.objective[j] = -w;      // minimize the negated objective
    prob.objective[k + j] = w;
  }
  prob.rows.assign(2 * n, std::vector<double>(prob.num_vars, 0.0));
  prob.rhs.assign(2 * n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    auto& row = prob.rows[p];
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = basis_[j][p];
      row[k + j] = -basis_[j][p];
    }
    row[vs + p] = 1.0;
    prob.rhs[p] = box_center + 1.0;
    auto& bound = prob.rows[n + p];
    bound[vs + p] = 1.0;
    bound[vs + n + p] = 1.0;
    prob.rhs[n + p] = 2.0;
  }
  std::vector<std::size_t> hint;
  for (std::size_t p = 0; p < n; ++p) hint.push_back(vs + p);
  for (std::size_t p = 0; p < n; ++p) hint.push_back(vs + n + p);

  const lp::Solution sol = lp::solve(prob, &hint);
  if (sol.status != lp::Status::optimal)
    throw SolverFailure("separation LP did not reach an optimum");

  SeparationResult result;
  result.optimum = -sol.objective;
  if (result.optimum > separation_tol) {
    AffineWitness w;
    w.values.assign(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      double v = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        v += basis_[j][p] * (sol.x[j] - sol.x[k + j]);
      w.values[p] = std::clamp(v, box_center - 1.0, box_center + 1.0);
    }
    result.witness = std::move(w);
  }
  return result;
}

SeparationResult separate_pair(const AffineConstraintSystem& system,
                               const std::string& x, const std::string& y,
                               double separation_tol) {
  if (x == y) throw SamePoint("cannot separate a point from itself");
  const SeparationSolver solver(system);
  return solver.separate(system.index_of(x), system.index_of(y),
                         separation_tol);
}

SeparationReport separate_all(
    const AffineConstraintSystem& system,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    double separation_tol) {
  const SeparationSolver solver(system);
  SeparationReport report;
  for (const auto& [a, b] : pairs) {
    const SeparationResult r = solver.separate(
        system.index_of(a), system.index_of(b), separation_tol);
    PairOutcome outcome{a, b, r.optimum, r.witness.has_value(), r.witness};
    if (outcome.separated)
      report.separated.push_back(std::move(outcome));
    else
      report.non_separated.push_back(std::move(outcome));
  }
  return report;
}

const Vec& Embedding::at(const std::string& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return coords[i];
  throw UnknownPointId("unknown point id: " + id);
}

Embedding evaluation_embedding(
    const AffineConstraintSystem& system,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    double separation_tol, double pivot_tol) {
  const SeparationSolver solver(system);
  const std::size_t n = system.num_points();

  std::vector<std::vector<double>> witnesses;
  for (const auto& [a, b] : pairs) {
    const SeparationResult r = solver.separate(
        system.index_of(a), system.index_of(b), separation_tol);
    if (!r.witness)
      throw NotSeparated("pair (" + a + ", " + b + ") admits no witness");
    witnesses.push_back(r.witness->values);
  }

  // Prune to a subset independent modulo constants: center each witness and
  // run greedy column-pivoted orthogonalization over the centered columns.
  std::vector<std::vector<double>> centered = witnesses;
  for (auto& w : centered) {
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : w) v -= mean;
  }
  std::vector<std::size_t> chosen;
  std::vector<char> used(centered.size(), 0);
  for (;;) {
    std::size_t best = centered.size();
    double best_norm = 0.0;
    for (std::size_t i = 0; i < centered.size(); ++i) {
      if (used[i]) continue;
      double norm2 = 0.0;
      for (double v : centered[i]) norm2 += v * v;
      if (norm2 > best_norm) {
        best_norm = norm2;
        best = i;
      }
    }
    if (best == centered.size() || std::sqrt(best_norm) <= pivot_tol) break;
    used[best] = 1;
    chosen.push_back(best);
    const double inv = 1.0 / std::sqrt(best_norm);
    std::vector<double> q = centered[best];
    for (double& v : q) v *= inv;
    for (std::size_t i = 0; i < centered.size(); ++i) {
      if (used[i]) continue;
      double p = 0.0;
      for (std::size_t c = 0; c < n; ++c) p += centered[i][c] * q[c];
      for (std::size_t c = 0; c < n; ++c) centered[i][c] -= p * q[c];
    }
  }
  std::sort(chosen.begin(), chosen.end());

  Embedding emb;
  emb.ids = system.point_ids();
  emb.k = chosen.size();
  emb.witness_pairs = chosen;
  emb.coords.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    Vec v(emb.k);
    for (std::size_t j = 0; j < emb.k; ++j) v[j] = witnesses[chosen[j]][p];
    emb.coords.push_back(std::move(v));
  }
  return emb;
}

std::vector<MidpointInconsistency> midpoint_uniqueness_audit(
    const MetricSample& space, const std::vector<GeodesicRecord>& records,
    const AffineConstraintSystem& system, double separation_tol,
    double midpoint_tol) {
  const SeparationSolver solver(system);

  auto midpoint_of = [&](const GeodesicRecord& r) -> const std::string* {
    const double half = (r.stations.front().t + r.stations.back().t) / 2.0;
    for (const auto& s : r.stations)
      if (std::abs(s.t - half) <= midpoint_tol) return &s.point;
    return nullptr;
  };

  std::vector<MidpointInconsistency> found;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t j = i + 1; j < records.size(); ++j) {
      const auto& a = records[i];
      const auto& b = records[j];
      const std::string& ax = a.stations.front().point;
      const std::string& ay = a.stations.back().point;
      const std::string& bx = b.stations.front().point;
      const std::string& by = b.stations.back().point;
      const bool same = (ax == bx && ay == by) || (ax == by && ay == bx);
      if (!same) continue;
      const std::string* m1 = midpoint_of(a);
      const std::string* m2 = midpoint_of(b);
      if (m1 == nullptr || m2 == nullptr || *m1 == *m2) continue;
      if (space.distance(*m1, *m2) <= midpoint_tol) continue;
      const SeparationResult r = solver.separate(
          system.index_of(*m1), system.index_of(*m2), separation_tol);
      if (r.witness)
        found.push_back({ax, ay, *m1, *m2, r.optimum});
    }
  }
  return found;
}

}  // namespace normgeo
