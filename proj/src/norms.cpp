#include "normgeo/norms.hpp"

#include <algorithm>
#include <cmath>

#include "normgeo/lp.hpp"
#include "normgeo/rng.hpp"

namespace normgeo {

namespace {

// Rank of the vertex set via Gaussian elimination with partial pivoting.
std::size_t matrix_rank(std::vector<std::vector<double>> m, double tol) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    for (std::size_t r = rank + 1; r < rows; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) <= tol) continue;
    std::swap(m[rank], m[piv]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const double f = m[r][col] / m[rank][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

double p_norm_value(const Vec& v, double p) {
  if (p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  if (p == 2.0) return euclid(v);
  const double m = sup_abs(v);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

// Low-discrepancy sequence for the pair search in strict_convexity_witness.
double halton(std::size_t index, std::size_t base) {
  double f = 1.0, r = 0.0;
  std::size_t i = index;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace

Norm Norm::p_norm(double p, std::size_t dim) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error("p-norm requires finite p >= 1, got " + std::to_string(p));
  if (dim == 0) throw Error("norm dimension must be positive");
  Norm n;
  n.kind_ = NormKind::p_norm;
  n.p_ = p;
  n.dim_ = dim;
  return n;
}

Norm Norm::sup_norm(std::size_t dim) {
  if (dim == 0) throw Error("norm dimension must be positive");
  Norm n;
  n.kind_ = NormKind::sup_norm;
  n.dim_ = dim;
  return n;
}

Norm Norm::polytope_gauge(std::vector<Vec> vertices) {
  if (vertices.empty()) throw DegenerateBody("empty vertex set");
  const std::size_t dim = vertices[0].dim();
  if (dim == 0) throw Error("norm dimension must be positive");
  std::vector<std::vector<double>> rows;
  for (const auto& u : vertices) {
    if (u.dim() != dim)
      throw DimensionMismatch("polytope vertices of mixed dimension");
    if (!all_finite(u)) throw Error("polytope vertex with non-finite entry");
    // Symmetry is required verbatim: silent symmetrization would hide
    // input mistakes.
    const Vec neg = -u;
    if (std::find(vertices.begin(), vertices.end(), neg) == vertices.end())
      throw DegenerateBody("vertex set is not centrally symmetric");
    rows.push_back(u.coords());
  }
  if (matrix_rank(rows, 1e-12) < dim)
    throw DegenerateBody("polytope vertices do not span the space");
  Norm n;
  n.kind_ = NormKind::polytope_gauge;
  n.dim_ = dim;
  n.vertices_ = std::move(vertices);
  return n;
}

double polytope_gauge_value(const std::vector<Vec>& vertices, const Vec& v) {
  if (is_zero(v)) return 0.0;
  const std::size_t dim = v.dim();
  // min sum(mu)  s.t.  sum_i mu_i u_i = v,  mu >= 0.  The optimum equals the
  // least lambda with v in lambda * conv(vertices).
  lp::Problem prob;
  prob.num_vars = vertices.size();
  prob.objective.assign(prob.num_vars, 1.0);
  prob.rows.assign(dim, std::vector<double>(prob.num_vars, 0.0));
  prob.rhs.assign(dim, 0.0);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t d = 0; d < dim; ++d) prob.rows[d][i] = vertices[i][d];
  for (std::size_t d = 0; d < dim; ++d) prob.rhs[d] = v[d];
  const lp::Solution sol = lp::solve(prob);
  if (sol.status == lp::Status::infeasible)
    throw DegenerateBody("vector lies outside the span of the vertex set");
  if (sol.status != lp::Status::optimal)
    throw SolverFailure("gauge LP did not reach an optimum");
  return sol.objective;
}

double Norm::operator()(const Vec& v) const {
  if (v.dim() != dim_)
    throw DimensionMismatch("norm of dimension " + std::to_string(dim_) +
                            " applied to vector of dimension " +
                            std::to_string(v.dim()));
  if (!all_finite(v)) throw Error("norm of a non-finite vector");
  switch (kind_) {
    case NormKind::p_norm:
      return p_norm_value(v, p_);
    case NormKind::sup_norm:
      return sup_abs(v);
    case NormKind::polytope_gauge:
      return polytope_gauge_value(vertices_, v);
  }
  return 0.0;
}

// The map t -> ||base + t dir|| is convex, so its forward difference
// quotients decrease monotonically to the right derivative as t -> 0+.
// Two Richardson stages (assumed error orders t and t^2) accelerate the
// smooth case; piecewise-linear norms settle exactly once every step is
// below the first breakpoint.
DerivativeTrace right_derivative_traced(const Norm& norm, const Vec& base,
                                        const Vec& dir,
                                        const DerivativeOptions& opts) {
  if (is_zero(base))
    throw ZeroBasePoint("directional derivative at the zero vector");
  DerivativeTrace trace;
  if (is_zero(dir)) {
    trace.value = 0.0;
    return trace;
  }

  // Work on Euclidean-normalized inputs so the step schedule is scale-free;
  // the derivative is 0-homogeneous in base and 1-homogeneous in dir.
  const double base_scale = euclid(base);
  const double dir_scale = euclid(dir);
  const Vec h = (1.0 / base_scale) * base;
  const Vec u = (1.0 / dir_scale) * dir;
  const double h_norm = norm(h);

  std::vector<double> g;  // quotients, normalized units
  std::vector<double> r1;
  std::vector<double> r2;
  double t = opts.step0;
  for (int k = 0; k <= opts.max_halvings; ++k, t *= 0.5) {
    const double q = (norm(h + t * u) - h_norm) / t;
    // report the trace in the caller's units
    trace.steps.push_back(t * base_scale / dir_scale);
    trace.quotients.push_back(dir_scale * q);
    g.push_back(q);
    const std::size_t n = g.size();
    if (n >= 2) r1.push_back(2.0 * g[n - 1] - g[n - 2]);
    if (r1.size() >= 2)
      r2.push_back((4.0 * r1[r1.size() - 1] - r1[r1.size() - 2]) / 3.0);
    if (r2.size() >= 2) {
      const double a = r2[r2.size() - 1], b = r2[r2.size() - 2];
      if (std::abs(a - b) <= opts.rel_tol * std::max(1.0, std::abs(a))) {
        trace.value = dir_scale * a;
        return trace;
      }
    }
  }
  throw NonConvergent("difference-quotient extrapolation did not settle");
}

double right_derivative(const Norm& norm, const Vec& base, const Vec& dir,
                        const DerivativeOptions& opts) {
  return right_derivative_traced(norm, base, dir, opts).value;
}

SmoothnessVerdict smoothness_at(const Norm& norm, const Vec& base,
                                const std::vector<Vec>& directions,
                                double tol, const DerivativeOptions& opts) {
  if (is_zero(base)) throw ZeroBasePoint("smoothness test at the zero vector");
  if (directions.empty()) throw Error("smoothness test needs probe directions");
  SmoothnessVerdict verdict;
  verdict.worst_defect = -1.0;
  for (const auto& v : directions) {
    if (is_zero(v)) throw Error("zero probe direction");
    const double fwd = right_derivative(norm, base, v, opts);
    const double bwd = right_derivative(norm, base, -v, opts);
    const double defect = std::abs(fwd + bwd);
    if (defect > verdict.worst_defect) {
      verdict.worst_defect = defect;
      verdict.worst_direction = v;
    }
  }
  verdict.smooth = verdict.worst_defect <= tol;
  return verdict;
}

ConvexityVerdict strict_convexity_witness(const Norm& norm,
                                          const ConvexitySearchOptions& opts) {
  if (norm.dim() < 2)
    throw Error("strict convexity is only meaningful in dimension >= 2");

  ConvexityVerdict verdict;
  if (norm.kind() == NormKind::p_norm && norm.p() > 1.0) {
    verdict.status = ConvexityStatus::certified_strictly_convex;
    return verdict;
  }

  const std::size_t dim = norm.dim();
  auto unit = [&](Vec v) {
    const double n = norm(v);
    return (1.0 / n) * v;
  };
  auto try_pair = [&](const Vec& a, const Vec& b) -> bool {
    // Require genuine linear independence before testing for equality.
    std::vector<std::vector<double>> m{a.coords(), b.coords()};
    if (matrix_rank(m, 1e-9) < 2) return false;
    const double defect = norm(a) + norm(b) - norm(a + b);
    if (defect <= opts.tol) {
      verdict.status = ConvexityStatus::witness_not_strictly_convex;
      verdict.witness = {a, b};
      verdict.defect = defect;
      return true;
    }
    return false;
  };

  // Canonical candidates first: coordinate pairs and +-diagonals catch the
  // classical equality cases immediately.
  std::vector<Vec> seeds;
  for (std::size_t i = 0; i < dim; ++i) {
    Vec e(dim);
    e[i] = 1.0;
    seeds.push_back(unit(e));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      Vec a(dim), b(dim);
      a[i] = 1.0;
      a[j] = 1.0;
      b[i] = 1.0;
      b[j] = -1.0;
      seeds.push_back(unit(a));
      seeds.push_back(unit(b));
    }
  }
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (try_pair(seeds[i], seeds[j])) return verdict;

  if (dim == 2) {
    // Halton pairs of angles; deterministic and dense in the angle square.
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (std::size_t k = 1; k <= opts.budget; ++k) {
      const double a = kTwoPi * halton(k, 2);
      const double b = kTwoPi * halton(k, 3);
      const Vec va = unit(Vec{std::cos(a), std::sin(a)});
      const Vec vb = unit(Vec{std::cos(b), std::sin(b)});
      if (try_pair(va, vb)) return verdict;
    }
  } else {
    Rng rng(opts.seed);
    for (std::size_t k = 0; k < opts.budget; ++k) {
      const Vec va = unit(rng.unit_vector(dim));
      const Vec vb = unit(rng.unit_vector(dim));
      if (try_pair(va, vb)) return verdict;
    }
  }
  verdict.status = ConvexityStatus::inconclusive;
  return verdict;
}

std::vector<Vec> direction_grid(std::size_t dim, std::size_t count,
                                std::uint64_t seed) {
  std::vector<Vec> dirs;
  dirs.reserve(count);
  if (dim == 2) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (std::size_t k = 0; k < count; ++k) {
      const double a = kTwoPi * static_cast<double>(k) /
                       static_cast<double>(count);
      dirs.push_back(Vec{std::cos(a), std::sin(a)});
    }
  } else {
    Rng rng(seed);
    for (std::size_t k = 0; k < count; ++k)
      dirs.push_back(rng.unit_vector(dim));
  }
  return dirs;
}

}  // namespace normgeo
