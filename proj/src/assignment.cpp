#include "selfdual/assignment.hpp"

#include <cmath>
#include <limits>

#include "selfdual/error.hpp"

namespace selfdual {

AssignmentResult max_assignment(std::size_t n, const std::vector<double>& score) {
  if (score.size() != n * n) throw InputError("assignment: matrix size mismatch");
  for (double s : score) {
    if (!std::isfinite(s)) throw InputError("assignment: non-finite score");
  }
  AssignmentResult out;
  if (n == 0) return out;

  // Minimize cost = -score; 1-based rows/cols, column 0 is a sentinel.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -score[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  out.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.row_to_col[p[j] - 1] = j - 1;
  out.row_potential.resize(n);
  out.col_potential.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.row_potential[i] = -u[i + 1];
    out.col_potential[i] = -v[i + 1];
  }
  for (std::size_t i = 0; i < n; ++i) out.value += score[i * n + out.row_to_col[i]];
  return out;
}

}  // namespace selfdual
