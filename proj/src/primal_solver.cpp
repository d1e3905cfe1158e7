#include "selfdual/primal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "selfdual/error.hpp"
#include "selfdual/matching.hpp"
#include "selfdual/parallel.hpp"

namespace selfdual {

namespace {

void check_sizes(const DiscreteDomain& dom, const SampledField& field,
                 const AntiSymmetricKernel& K) {
  if (field.size() != dom.size() || K.size() != dom.size()) {
    throw InputError("size mismatch between domain, field and kernel");
  }
}

// c[i * n + j] = <u_i, x_j>
std::vector<double> score_matrix(const DiscreteDomain& dom, const SampledField& field) {
  const std::size_t n = dom.size();
  std::vector<double> c(n * n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = dot(field[i], dom.point(j));
  });
  return c;
}

struct Evaluation {
  double value = 0.0;
  std::vector<std::size_t> argmax;
};

// Same arithmetic as l_of_h: <x_j, u_i> - K(j, i), smallest index on ties.
Evaluation evaluate(const std::vector<double>& c, const AntiSymmetricKernel& K, double mu) {
  const std::size_t n = K.size();
  Evaluation ev;
  ev.argmax.resize(n);
  std::vector<double> row_max(n);
  parallel_for(n, [&](std::size_t i) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = c[i * n + j] - K(j, i);
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    row_max[i] = best;
    ev.argmax[i] = arg;
  });
  for (double v : row_max) ev.value += v;
  ev.value *= mu;
  return ev;
}

}  // namespace

double primal_objective(const DiscreteDomain& dom, const SampledField& field,
                        const AntiSymmetricKernel& K) {
  check_sizes(dom, field, K);
  double sum = 0.0;
  for (std::size_t i = 0; i < dom.size(); ++i) sum += l_of_h(K, dom, i, field[i]).value;
  return sum * dom.cell_measure();
}

double cycle_sum(const AntiSymmetricKernel& K, const Permutation& s) {
  if (K.size() != s.size()) throw InputError("size mismatch between kernel and permutation");
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t j = s[i];
    if (s[j] == i) {
      if (j > i) sum += K(j, i) + K(i, j);
    } else {
      sum += K(j, i);
    }
  }
  return sum;
}

WeakDualityCertificate weak_duality(const DiscreteDomain& dom, const SampledField& field,
                                    const AntiSymmetricKernel& K, const Permutation& s) {
  check_sizes(dom, field, K);
  if (s.size() != dom.size()) throw InputError("size mismatch between domain and permutation");
  if (!compose_check(s)) throw InputError("weak duality needs an involution");
  const std::size_t n = dom.size();
  const double mu = dom.cell_measure();
  WeakDualityCertificate cert;
  cert.slack.resize(n);
  double primal = 0.0;
  double dual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lh = l_of_h(K, dom, i, field[i]).value;
    const double pair = dot(field[i], dom.point(s[i]));
    primal += lh;
    dual += pair;
    cert.slack[i] = (lh + K(s[i], i)) - pair;
  }
  cert.primal = primal * mu;
  cert.dual = dual * mu;
  cert.gap = cert.primal - cert.dual;
  cert.cancellation = cycle_sum(K, s);
  return cert;
}

AntiSymmetricKernel kernel_from_potentials(const DiscreteDomain& dom, const SampledField& field,
                                           const std::vector<double>& t) {
  const std::size_t n = dom.size();
  if (t.size() != n || field.size() != n) throw InputError("potentials do not match the domain");
  AntiSymmetricKernel K(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) {
      // K(j, i) for j < i
      const double cij = dot(field[i], dom.point(j));
      const double cji = dot(field[j], dom.point(i));
      K.set(j, i, 0.5 * (cij - cji) - 0.5 * (t[i] - t[j]));
    }
  }
  return K;
}

AntiSymmetricKernel certificate_kernel(const DiscreteDomain& dom, const SampledField& field,
                                       const LpCertificate& cert) {
  const std::size_t n = dom.size();
  if (cert.assignment.row_potential.size() != n) {
    throw InputError("LP certificate does not match the domain");
  }
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = cert.assignment.row_potential[i] + cert.assignment.col_potential[i];
  }
  return kernel_from_potentials(dom, field, t);
}

namespace {

// Unit two-variable inequalities lit_a + lit_b >= b, solved as difference
// constraints on literals {+delta_p, -delta_p}.
struct CentringSystem {
  struct Arc {
    std::size_t to;
    double base;  // weight is -(base + ks * s)
    double ks;
  };
  std::size_t nodes = 0;
  std::vector<std::vector<Arc>> out;
  double const_bound = std::numeric_limits<double>::infinity();
  double tol = 0.0;

  void add(std::size_t from, std::size_t to, double base, double ks = 1.0) {
    out[from].push_back({to, base, ks});
  }

  // Shortest-path potentials for slack s, or nullopt on a negative cycle.
  std::optional<std::vector<double>> solve(double s) const {
    if (s > const_bound + tol) return std::nullopt;
    std::vector<double> d(nodes, 0.0);
    std::vector<std::size_t> count(nodes, 0);
    std::vector<char> queued(nodes, 1);
    std::vector<std::size_t> queue(nodes);
    for (std::size_t v = 0; v < nodes; ++v) queue[v] = v;
    std::size_t head = 0;
    while (head < queue.size()) {
      const std::size_t u = queue[head++];
      queued[u] = 0;
      for (const Arc& a : out[u]) {
        const double cand = d[u] - (a.base + a.ks * s);
        if (cand < d[a.to] - tol) {
          d[a.to] = cand;
          if (!queued[a.to]) {
            if (++count[a.to] > nodes) return std::nullopt;
            queued[a.to] = 1;
            queue.push_back(a.to);
          }
        }
      }
      if (head > 4096 && head * 2 > queue.size()) {
        queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(head));
        head = 0;
      }
    }
    return d;
  }
};

}  // namespace

std::optional<std::vector<double>> centred_potentials(const DiscreteDomain& dom,
                                                      const SampledField& field,
                                                      const Involution& s, std::size_t cap) {
  const std::size_t n = dom.size();
  if (field.size() != n || s.size() != n) throw InputError("size mismatch in centred_potentials");
  if (n > cap || n == 0) return std::nullopt;
  const std::vector<double> c = score_matrix(dom, field);
  auto csym = [&](std::size_t i, std::size_t j) { return 0.5 * (c[i * n + j] + c[j * n + i]); };
  double scale = 1.0;
  for (double v : c) scale = std::max(scale, std::abs(v));

  constexpr std::size_t kFixed = static_cast<std::size_t>(-1);
  std::vector<std::size_t> lit(n, kFixed);  // node of e_i * delta_p(i)
  std::vector<double> m(n);
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = s[i];
    if (j == i) {
      m[i] = csym(i, i);
    } else if (i < j) {
      m[i] = m[j] = csym(i, j);
      lit[i] = 2 * pairs;
      lit[j] = 2 * pairs + 1;
      ++pairs;
    }
  }
  auto neg = [](std::size_t a) { return a ^ 1u; };

  CentringSystem sys;
  sys.nodes = 2 * pairs;
  sys.out.resize(sys.nodes);
  sys.tol = 1e-13 * scale;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (j != i && s[i] == j) continue;
      // lit_i + lit_j >= 2 Csym_ij - m_i - m_j + s
      const double b = 2.0 * csym(i, j) - m[i] - m[j];
      const std::size_t a = lit[i], q = lit[j];
      if (a == kFixed && q == kFixed) {
        sys.const_bound = std::min(sys.const_bound, -b);
      } else if (a == kFixed) {
        sys.add(q, neg(q), 2.0 * b, 2.0);  // lit_j - (-lit_j) >= 2 (b + s)
      } else if (q == kFixed) {
        sys.add(a, neg(a), 2.0 * b, 2.0);
      } else if (i == j) {
        sys.add(a, neg(a), b);  // 2 lit_i >= b + s
      } else {
        sys.add(a, neg(q), b);
        sys.add(q, neg(a), b);
      }
    }
  }
  if (!sys.solve(0.0)) return std::nullopt;  // s is not complementary to any LP optimum
  double lo = 0.0;
  double hi = std::min(sys.const_bound, 4.0 * scale);
  if (hi > 0.0 && sys.solve(hi)) lo = hi;
  for (int it = 0; it < 40 && hi - lo > 1e-3 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sys.solve(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const auto d = sys.solve(0.5 * lo);
  if (!d) return std::nullopt;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = m[i];
    if (lit[i] != kFixed) t[i] += 0.5 * ((*d)[lit[i]] - (*d)[neg(lit[i])]);
  }
  return t;
}

PrimalSolution minimize_primal(const DiscreteDomain& dom, const SampledField& field,
                               const PrimalConfig& cfg) {
  const std::size_t n = dom.size();
  if (field.size() != n) throw InputError("size mismatch between domain and field");
  if (!(cfg.eps > 0.0)) throw InputError("primal tolerance must be positive");
  const double mu = dom.cell_measure();
  const std::size_t cap = cfg.max_iters ? cfg.max_iters : 50 * n * n;

  const bool have_lp = n <= cfg.lp_cap;
  LpCertificate lp;
  double target = 0.0;
  if (have_lp) {
    lp = lp_certificate(dom, field, cfg.lp_cap);
    target = lp.value;
  } else {
    // Any involution value is a lower bound on P by weak duality.
    const PairWeights w = build_weights(dom, field);
    target = dual_objective(dom, field, greedy_involution(w));
  }

  AntiSymmetricKernel K =
      (cfg.warm_start && have_lp) ? certificate_kernel(dom, field, lp) : AntiSymmetricKernel(n);
  const std::vector<double> c = score_matrix(dom, field);
  Evaluation ev = evaluate(c, K, mu);
  if (cfg.warm_start && have_lp && cfg.centre_on && cfg.centre_on->size() == n) {
    if (const auto t = centred_potentials(dom, field, *cfg.centre_on)) {
      AntiSymmetricKernel Kc = kernel_from_potentials(dom, field, *t);
      Evaluation evc = evaluate(c, Kc, mu);
      if (evc.value <= ev.value + 1e-12 * std::max(1.0, std::abs(ev.value))) {
        K = std::move(Kc);
        ev = std::move(evc);
      }
    }
  }

  PrimalSolution best;
  best.K = K;
  best.value = ev.value;
  best.argmax_map = ev.argmax;
  best.lp_bound = target;

  auto done = [&](double value) { return value - target <= cfg.eps * std::abs(value); };

  std::vector<double> upper = K.upper();
  std::vector<double> g(upper.size());
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));

  std::size_t it = 0;
  while (!done(best.value) && it < cap && n > 1) {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = ev.argmax[i];
      if (j < i) {
        g[K.slot(j, i)] -= mu;
      } else if (j > i) {
        g[K.slot(i, j)] += mu;
      }
    }
    double norm2 = 0.0;
    for (double v : g) norm2 += v * v;
    ++it;
    if (norm2 == 0.0) break;  // 0 is a subgradient: current iterate is optimal
    double step;
    if (have_lp) {
      step = (ev.value - target) / norm2;
    } else {
      step = scale / (std::sqrt(static_cast<double>(it)) * std::sqrt(norm2));
    }
    for (std::size_t k = 0; k < upper.size(); ++k) upper[k] -= step * g[k];
    K = AntiSymmetricKernel(n, upper);
    ev = evaluate(c, K, mu);
    if (ev.value < best.value) {
      best.value = ev.value;
      best.K = K;
      best.argmax_map = ev.argmax;
    }
  }
  best.iterations = it;
  best.converged = done(best.value) || n <= 1;
  best.gap_vs_dual = best.value - target;
  return best;
}

RecoveredInvolution recover_involution(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                                       const SampledField& field, double eps) {
  check_sizes(dom, field, K);
  const std::size_t n = dom.size();
  RecoveredInvolution out;
  out.candidate.resize(n);
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const LagrangianValue lh = l_of_h(K, dom, i, field[i]);
    out.candidate[i] = lh.argmax;
    const double thresh = lh.value - eps * std::max(1.0, std::abs(lh.value));
    for (std::size_t j = 0; j < n; ++j) {
      if (dot(dom.point(j), field[i]) - K(j, i) >= thresh) {
        tight[i][j] = 1;
        out.tight_pairs.emplace_back(i, j);
      }
    }
  }
  std::vector<char> hit(n, 0);
  out.is_permutation = true;
  for (std::size_t j : out.candidate) {
    if (hit[j]) out.is_permutation = false;
    hit[j] = 1;
  }
  std::size_t inv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.candidate[out.candidate[i]] == i) ++inv;
  }
  out.involution_fraction = n ? static_cast<double>(inv) / static_cast<double>(n) : 1.0;
  out.is_involution = out.is_permutation && inv == n;

  const PairWeights w = build_weights(dom, field);
  std::vector<RealEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = w.reduced(i, j);
      if ((tight[i][j] || tight[j][i]) && r > 0.0) edges.push_back({i, j, r});
    }
  }
  const auto mate = max_weight_matching(n, edges);
  std::vector<std::size_t> partner(n);
  for (std::size_t i = 0; i < n; ++i) partner[i] = mate[i] == kUnmatched ? i : mate[i];
  out.rounded = Involution(partner);
  return out;
}

}  // namespace selfdual
