#pragma once

#include <cstddef>
#include <vector>

namespace normgeo::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

/// Linear program in standard form:
///   minimize objective . x   subject to   rows x = rhs,  x >= 0.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<double> objective;          // size num_vars
  std::vector<std::vector<double>> rows;  // each of size num_vars
  std::vector<double> rhs;                // size rows.size()
};

struct Solution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase primal simplex with Bland's rule. `basis_hint`, when
/// provided, names one column per row; if those columns form a feasible
/// basis, phase one is skipped. Intended scale is <= 10^3 variables.
Solution solve(const Problem& p,
               const std::vector<std::size_t>* basis_hint = nullptr);

}  // namespace normgeo::lp
