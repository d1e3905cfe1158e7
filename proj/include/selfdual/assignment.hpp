#pragma once

#include <cstddef>
#include <vector>

namespace selfdual {

struct AssignmentResult {
  std::vector<std::size_t> row_to_col;
  double value = 0.0;
  // Feasible dual: row_potential[i] + col_potential[j] >= score(i, j), with
  // equality on the assignment (up to rounding).
  std::vector<double> row_potential;
  std::vector<double> col_potential;
};

// Maximum-score perfect assignment on a dense n x n matrix (row-major),
// Hungarian algorithm with potentials, O(n^3).
AssignmentResult max_assignment(std::size_t n, const std::vector<double>& score);

}  // namespace selfdual
