#include "normgeo/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normgeo/errors.hpp"

namespace normgeo::lp {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;
constexpr double kFeasEps = 1e-7;
constexpr std::size_t kMaxIters = 200000;

struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;                 // excludes rhs column
  std::vector<std::vector<double>> t;   // rows x (cols + 1)
  std::vector<double> obj;              // cols + 1; reduced costs + objective
  std::vector<std::size_t> basis;       // one column index per row
};

void pivot(Tableau& tab, std::size_t pr, std::size_t pc) {
  const std::size_t w = tab.cols + 1;
  auto& prow = tab.t[pr];
  const double inv = 1.0 / prow[pc];
  for (std::size_t j = 0; j < w; ++j) prow[j] *= inv;
  prow[pc] = 1.0;
  for (std::size_t i = 0; i < tab.rows; ++i) {
    if (i == pr) continue;
    auto& row = tab.t[i];
    const double f = row[pc];
    if (f == 0.0) continue;
    for (std::size_t j = 0; j < w; ++j) row[j] -= f * prow[j];
    row[pc] = 0.0;
  }
  const double f = tab.obj[pc];
  if (f != 0.0) {
    for (std::size_t j = 0; j < w; ++j) tab.obj[j] -= f * prow[j];
    tab.obj[pc] = 0.0;
  }
  tab.basis[pr] = pc;
}

// Bland's rule on both choices: lowest-index entering column with a
// negative reduced cost, and among minimum-ratio rows the one whose basic
// variable has the lowest index. This rules out cycling on the degenerate
// systems that affine-constraint instances routinely produce.
Status price_loop(Tableau& tab, const std::vector<char>& allowed) {
  for (std::size_t iter = 0; iter < kMaxIters; ++iter) {
    std::size_t enter = tab.cols;
    for (std::size_t j = 0; j < tab.cols; ++j) {
      if (allowed[j] && tab.obj[j] < -kCostEps) {
        enter = j;
        break;
      }
    }
    if (enter == tab.cols) return Status::optimal;

    std::size_t leave = tab.rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tab.rows; ++i) {
      const double a = tab.t[i][enter];
      if (a <= kPivotEps) continue;
      const double ratio = std::max(0.0, tab.t[i][tab.cols]) / a;
      if (ratio < best - 1e-12) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + 1e-12 && leave != tab.rows &&
                 tab.basis[i] < tab.basis[leave]) {
        leave = i;
      }
    }
    if (leave == tab.rows) return Status::unbounded;
    pivot(tab, leave, enter);
  }
  return Status::iteration_limit;
}

// Rebuild the reduced-cost row for the given objective over the current basis.
void load_objective(Tableau& tab, const std::vector<double>& cost) {
  tab.obj.assign(tab.cols + 1, 0.0);
  for (std::size_t j = 0; j < cost.size() && j < tab.cols; ++j)
    tab.obj[j] = cost[j];
  for (std::size_t i = 0; i < tab.rows; ++i) {
    const std::size_t b = tab.basis[i];
    const double cb = b < cost.size() ? cost[b] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= tab.cols; ++j) tab.obj[j] -= cb * tab.t[i][j];
  }
}

Solution finish(const Problem& p, Tableau& tab, Status status) {
  Solution out;
  out.status = status;
  if (status != Status::optimal) return out;
  out.x.assign(p.num_vars, 0.0);
  for (std::size_t i = 0; i < tab.rows; ++i) {
    if (tab.basis[i] < p.num_vars)
      out.x[tab.basis[i]] = std::max(0.0, tab.t[i][tab.cols]);
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < p.num_vars; ++j) obj += p.objective[j] * out.x[j];
  out.objective = obj;
  return out;
}

Solution solve_cold(const Problem& p);

// Warm path: Gauss-Jordan onto the hinted basis, then phase two directly.
// Falls back to the cold path when the hint is rank-deficient or infeasible.
Solution solve_warm(const Problem& p, const std::vector<std::size_t>& hint) {
  const std::size_t m = p.rows.size();
  const std::size_t n = p.num_vars;
  if (hint.size() != m) return solve_cold(p);

  Tableau tab;
  tab.rows = m;
  tab.cols = n;
  tab.t.assign(m, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    std::copy(p.rows[i].begin(), p.rows[i].end(), tab.t[i].begin());
    tab.t[i][n] = p.rhs[i];
  }
  tab.basis = hint;
  tab.obj.assign(n + 1, 0.0);

  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] >= n || std::abs(tab.t[i][tab.basis[i]]) < kPivotEps)
      return solve_cold(p);
    pivot(tab, i, tab.basis[i]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.t[i][n] < -kFeasEps) return solve_cold(p);
    tab.t[i][n] = std::max(0.0, tab.t[i][n]);
  }

  load_objective(tab, p.objective);
  std::vector<char> allowed(n, 1);
  return finish(p, tab, price_loop(tab, allowed));
}

Solution solve_cold(const Problem& p) {
  const std::size_t m = p.rows.size();
  const std::size_t n = p.num_vars;

  Tableau tab;
  tab.rows = m;
  tab.cols = n + m;  // artificial column per row
  tab.t.assign(m, std::vector<double>(tab.cols + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = p.rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = sign * p.rows[i][j];
    tab.t[i][n + i] = 1.0;
    tab.t[i][tab.cols] = sign * p.rhs[i];
    tab.basis.push_back(n + i);
  }

  std::vector<double> phase1_cost(tab.cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1_cost[n + i] = 1.0;
  load_objective(tab, phase1_cost);

  std::vector<char> allowed(tab.cols, 1);
  for (std::size_t i = 0; i < m; ++i) allowed[n + i] = 0;  // never re-enter

  Status st = price_loop(tab, allowed);
  if (st != Status::optimal) return finish(p, tab, st);
  const double infeas = -tab.obj[tab.cols];
  if (infeas > kFeasEps) {
    Solution out;
    out.status = Status::infeasible;
    return out;
  }

  // Remove artificials: pivot basic ones onto an original column, or drop
  // the (redundant) row when none is available.
  for (std::size_t i = 0; i < tab.rows;) {
    if (tab.basis[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(tab.t[i][j]) > kPivotEps) {
        col = j;
        break;
      }
    }
    if (col < n) {
      pivot(tab, i, col);
      ++i;
    } else {
      tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
      --tab.rows;
    }
  }

  // Drop artificial columns entirely before phase two.
  for (std::size_t i = 0; i < tab.rows; ++i) {
    tab.t[i][n] = tab.t[i][tab.cols];
    tab.t[i].resize(n + 1);
  }
  tab.cols = n;

  load_objective(tab, p.objective);
  std::vector<char> allowed2(n, 1);
  return finish(p, tab, price_loop(tab, allowed2));
}

}  // namespace

Solution solve(const Problem& p, const std::vector<std::size_t>* basis_hint) {
  if (p.objective.size() != p.num_vars || p.rows.size() != p.rhs.size())
    throw SolverFailure("malformed linear program");
  for (const auto& r : p.rows) {
    if (r.size() != p.num_vars) throw SolverFailure("malformed constraint row");
  }
  if (basis_hint != nullptr) return solve_warm(p, *basis_hint);
  return solve_cold(p);
}

}  // namespace normgeo::lp
