#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

void involutions_rec(std::vector<std::size_t>& map, std::vector<char>& used, std::size_t i,
                     const std::function<void(const std::vector<std::size_t>&)>& visit) {
  const std::size_t n = map.size();
  while (i < n && used[i]) ++i;
  if (i == n) {
    visit(map);
    return;
  }
  used[i] = 1;
  map[i] = i;
  involutions_rec(map, used, i + 1, visit);
  for (std::size_t j = i + 1; j < n; ++j) {
    if (used[j]) continue;
    used[j] = 1;
    map[i] = j;
    map[j] = i;
    involutions_rec(map, used, i + 1, visit);
    used[j] = 0;
  }
  used[i] = 0;
}

}  // namespace

void for_each_involution(std::size_t n,
                         const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> map(n);
  std::vector<char> used(n, 0);
  involutions_rec(map, used, 0, visit);
}

unsigned long long telephone(std::size_t n) {
  unsigned long long a = 1, b = 1;  // I(0), I(1)
  if (n == 0) return 1;
  for (std::size_t k = 2; k <= n; ++k) {
    const unsigned long long c = b + (k - 1) * a;
    a = b;
    b = c;
  }
  return b;
}

double symmetric_lp(std::size_t n, const std::vector<double>& c) {
  // variables y_ij for i <= j; row constraint i: y_ii + sum_{j != i} y_{ij} = 1
  std::vector<std::pair<std::size_t, std::size_t>> vars;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) vars.emplace_back(i, j);
  }
  const std::size_t nv = vars.size();
  const std::size_t m = n;
  // columns: nv structural + m artificial + rhs
  const std::size_t cols = nv + m + 1;
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols, 0.0));
  for (std::size_t k = 0; k < nv; ++k) {
    const auto [i, j] = vars[k];
    T[i][k] = 1.0;
    if (j != i) T[j][k] = 1.0;
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    T[r][nv + r] = 1.0;
    T[r][cols - 1] = 1.0;
    basis[r] = nv + r;
  }
  const double eps = 1e-12;

  auto pivot = [&](std::size_t r, std::size_t q) {
    const double p = T[r][q];
    for (double& v : T[r]) v /= p;
    for (std::size_t k = 0; k <= m; ++k) {
      if (k == r || T[k][q] == 0.0) continue;
      const double f = T[k][q];
      for (std::size_t col = 0; col < cols; ++col) T[k][col] -= f * T[r][col];
    }
    basis[r] = q;
  };
  // Minimizes the objective row (stored as reduced costs in T[m]) over allowed columns.
  auto run = [&](std::size_t allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      std::size_t q = allowed;
      for (std::size_t k = 0; k < allowed; ++k) {
        if (T[m][k] < -eps) {
          q = k;
          break;
        }
      }
      if (q == allowed) return;
      std::size_t r = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < m; ++k) {
        if (T[k][q] > eps) {
          const double ratio = T[k][cols - 1] / T[k][q];
          if (ratio < best - eps || (std::abs(ratio - best) <= eps && basis[k] < basis[r])) {
            best = ratio;
            r = k;
          }
        }
      }
      if (r == m) throw std::runtime_error("symmetric_lp: unbounded");
      pivot(r, q);
    }
    throw std::runtime_error("symmetric_lp: no convergence");
  };

  // phase 1: minimize the sum of artificials
  for (std::size_t col = 0; col < cols; ++col) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += T[r][col];
    T[m][col] = (col >= nv && col < nv + m) ? 0.0 : -s;
  }
  run(nv);
  if (std::abs(T[m][cols - 1]) > 1e-9) throw std::runtime_error("symmetric_lp: infeasible");
  // drive artificials out of the basis where possible
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < nv) continue;
    for (std::size_t q = 0; q < nv; ++q) {
      if (std::abs(T[r][q]) > eps) {
        pivot(r, q);
        break;
      }
    }
  }
  // phase 2: minimize -objective
  std::vector<double> cost(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    const auto [i, j] = vars[k];
    cost[k] = i == j ? -c[i * n + i] : -(c[i * n + j] + c[j * n + i]);
  }
  std::fill(T[m].begin(), T[m].end(), 0.0);
  for (std::size_t k = 0; k < nv; ++k) T[m][k] = cost[k];
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] >= nv) continue;
    const double f = cost[basis[r]];
    for (std::size_t col = 0; col < cols; ++col) T[m][col] -= f * T[r][col];
  }
  run(nv);
  return T[m][cols - 1];
}

double brute_matching(std::size_t n, const std::vector<double>& w) {
  double best = 0.0;
  for_each_involution(n, [&](const std::vector<std::size_t>& s) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] > i) v += w[i * n + s[i]];
    }
    best = std::max(best, v);
  });
  return best;
}

}  // namespace oracle
