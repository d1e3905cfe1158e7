#include "selfdual/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "selfdual/error.hpp"
#include "selfdual/matching.hpp"
#include "selfdual/parallel.hpp"

namespace selfdual {

namespace {

void check_sizes(const DiscreteDomain& dom, const SampledField& field, std::size_t n) {
  if (field.size() != dom.size() || n != dom.size()) {
    throw InputError("size mismatch between domain, field and involution");
  }
}

// Gains below this fraction of the magnitudes involved are rounding noise.
bool improves(double gain, double magnitude) { return gain > 1e-14 * magnitude; }

}  // namespace

PairWeights::PairWeights(std::size_t n, std::vector<double> full, std::vector<double> diag)
    : n_(n), full_(std::move(full)), diag_(std::move(diag)) {
  if (full_.size() != n_ * n_ || diag_.size() != n_) throw InputError("pair weights: bad sizes");
}

PairWeights build_weights(const DiscreteDomain& dom, const SampledField& field) {
  const std::size_t n = dom.size();
  check_sizes(dom, field, n);
  std::vector<double> full(n * n, 0.0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = dot(field[i], dom.point(i));
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      full[i * n + j] = dot(field[i], dom.point(j)) + dot(field[j], dom.point(i));
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    full[i * n + i] = 2.0 * diag[i];
    for (std::size_t j = i + 1; j < n; ++j) full[j * n + i] = full[i * n + j];
  }
  return PairWeights(n, std::move(full), std::move(diag));
}

double dual_objective(const DiscreteDomain& dom, const SampledField& field, const Involution& s) {
  check_sizes(dom, field, s.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < dom.size(); ++i) sum += dot(field[i], dom.point(s[i]));
  return sum * dom.cell_measure();
}

double distance_objective(const DiscreteDomain& dom, const SampledField& field,
                          const Involution& s) {
  check_sizes(dom, field, s.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < dom.size(); ++i) sum += squared_distance(field[i], dom.point(s[i]));
  return sum * dom.cell_measure();
}

double matching_objective(const PairWeights& w, double cell_measure, const Involution& s) {
  if (s.size() != w.size()) throw InputError("size mismatch between weights and involution");
  double sum = std::accumulate(w.diagonal().begin(), w.diagonal().end(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] > i) sum += w.reduced(i, s[i]);
  }
  return sum * cell_measure;
}

std::string to_string(DualMethod m) {
  switch (m) {
    case DualMethod::Brute:
      return "brute";
    case DualMethod::Matching:
      return "matching";
    case DualMethod::Local:
      return "local";
  }
  return "";
}

std::string to_string(Optimality o) { return o == Optimality::Exact ? "exact" : "heuristic"; }

std::uint64_t involution_count(std::size_t n) {
  std::uint64_t prev = 1;  // I(0)
  std::uint64_t cur = 1;   // I(1)
  if (n == 0) return 1;
  for (std::size_t k = 2; k <= n; ++k) {
    const std::uint64_t next = cur + (k - 1) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

struct BruteSearch {
  const PairWeights& w;
  std::vector<std::size_t> partner;
  std::vector<std::size_t> best;
  double best_value = -std::numeric_limits<double>::infinity();
  std::uint64_t visited = 0;

  // Indices are fixed in increasing order; at each step the smallest free
  // index is either left fixed or paired with a larger free index. This
  // visits involutions in lexicographic order of their maps.
  void recurse(std::size_t from, double value) {
    const std::size_t n = partner.size();
    std::size_t i = from;
    while (i < n && partner[i] != kUnmatched) ++i;
    if (i == n) {
      ++visited;
      if (value > best_value) {
        best_value = value;
        best = partner;
      }
      return;
    }
    partner[i] = i;
    recurse(i + 1, value);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (partner[j] != kUnmatched) continue;
      partner[i] = j;
      partner[j] = i;
      recurse(i + 1, value + w.reduced(i, j));
      partner[j] = kUnmatched;
    }
    partner[i] = kUnmatched;
  }
};

}  // namespace

DualSolution solve_brute(const DiscreteDomain& dom, const SampledField& field) {
  const std::size_t n = dom.size();
  if (n > kBruteLimit) {
    throw PreconditionError("brute-force involution search is limited to N <= " +
                            std::to_string(kBruteLimit));
  }
  check_sizes(dom, field, n);
  const PairWeights w = build_weights(dom, field);
  BruteSearch search{w, std::vector<std::size_t>(n, kUnmatched), {}};
  search.recurse(0, 0.0);
  DualSolution sol;
  sol.sigma = Involution(search.best);
  sol.value = dual_objective(dom, field, sol.sigma);
  sol.method = DualMethod::Brute;
  sol.optimality = Optimality::Exact;
  return sol;
}

namespace {

struct LocalState {
  const PairWeights& w;
  std::vector<std::size_t> partner;

  // One pass over all moves, applying each improving one immediately.
  bool pass(std::size_t& budget) {
    const std::size_t n = partner.size();
    bool any = false;
    for (std::size_t i = 0; i < n && budget > 0; ++i) {
      const std::size_t j = partner[i];
      if (j > i) {
        const double wij = w.reduced(i, j);
        if (improves(-wij, std::abs(wij))) {
          partner[i] = i;
          partner[j] = j;
          --budget;
          any = true;
        }
      }
    }
    for (std::size_t i = 0; i < n && budget > 0; ++i) {
      for (std::size_t j = i + 1; j < n && budget > 0 && partner[i] == i; ++j) {
        if (partner[j] != j) continue;
        const double wij = w.reduced(i, j);
        if (improves(wij, std::abs(wij))) {
          partner[i] = j;
          partner[j] = i;
          --budget;
          any = true;
        }
      }
    }
    for (std::size_t a = 0; a < n && budget > 0; ++a) {
      for (std::size_t c = a + 1; c < n && budget > 0; ++c) {
        const std::size_t b = partner[a];
        const std::size_t d = partner[c];
        if (b <= a || d <= c || b == c) continue;
        const double wab = w.reduced(a, b);
        const double wcd = w.reduced(c, d);
        const double wac = w.reduced(a, c);
        const double wbd = w.reduced(b, d);
        const double wad = w.reduced(a, d);
        const double wbc = w.reduced(b, c);
        const double base = wab + wcd;
        const double g1 = (wac + wbd) - base;
        const double g2 = (wad + wbc) - base;
        const double mag1 = std::abs(wac) + std::abs(wbd) + std::abs(wab) + std::abs(wcd);
        const double mag2 = std::abs(wad) + std::abs(wbc) + std::abs(wab) + std::abs(wcd);
        if (g1 >= g2 && improves(g1, mag1)) {
          partner[a] = c;
          partner[c] = a;
          partner[b] = d;
          partner[d] = b;
        } else if (improves(g2, mag2)) {
          partner[a] = d;
          partner[d] = a;
          partner[b] = c;
          partner[c] = b;
        } else {
          continue;
        }
        --budget;
        any = true;
      }
    }
    return any;
  }
};

Involution polish(const PairWeights& w, const Involution& start, std::size_t max_iters) {
  LocalState state{w, start.map()};
  std::size_t budget = max_iters;
  while (budget > 0 && state.pass(budget)) {
  }
  return Involution(state.partner);
}

}  // namespace

DualSolution refine_local(const DiscreteDomain& dom, const SampledField& field,
                          const Involution& start, std::size_t max_iters) {
  check_sizes(dom, field, start.size());
  const PairWeights w = build_weights(dom, field);
  DualSolution sol;
  sol.sigma = polish(w, start, max_iters);
  sol.value = dual_objective(dom, field, sol.sigma);
  const double before = dual_objective(dom, field, start);
  if (sol.value < before) {
    // Accepted moves never lose more than rounding; keep the start if they did.
    sol.sigma = start;
    sol.value = before;
  }
  sol.method = DualMethod::Local;
  sol.optimality = Optimality::Heuristic;
  return sol;
}

Involution greedy_involution(const PairWeights& w) {
  const std::size_t n = w.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = w.reduced(i, j);
      if (r > 0.0) edges.emplace_back(-r, i, j);
    }
  }
  std::sort(edges.begin(), edges.end());
  std::vector<std::size_t> partner(n);
  std::iota(partner.begin(), partner.end(), 0);
  for (const auto& [neg, i, j] : edges) {
    if (partner[i] == i && partner[j] == j) {
      partner[i] = j;
      partner[j] = i;
    }
  }
  return Involution(partner);
}

DualSolution solve_matching(const DiscreteDomain& dom, const SampledField& field) {
  const std::size_t n = dom.size();
  check_sizes(dom, field, n);
  const PairWeights w = build_weights(dom, field);
  std::vector<RealEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = w.reduced(i, j);
      if (r > 0.0) edges.push_back({i, j, r});
    }
  }
  const auto mate = max_weight_matching(n, edges);
  std::vector<std::size_t> partner(n);
  for (std::size_t i = 0; i < n; ++i) partner[i] = mate[i] == kUnmatched ? i : mate[i];
  // The integer matching is exact for the rounded weights; the local pass
  // removes any rounding-level suboptimality.
  DualSolution sol;
  sol.sigma = polish(w, Involution(partner), 10 * n + 10);
  sol.value = dual_objective(dom, field, sol.sigma);
  sol.method = DualMethod::Matching;
  sol.optimality = Optimality::Exact;
  return sol;
}

LpCertificate lp_certificate(const DiscreteDomain& dom, const SampledField& field,
                             std::size_t cap) {
  const std::size_t n = dom.size();
  check_sizes(dom, field, n);
  if (n > cap) {
    throw PreconditionError("LP bound is limited to N <= " + std::to_string(cap));
  }
  std::vector<double> c(n * n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = dot(field[i], dom.point(j));
  });
  std::vector<double> sym(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sym[i * n + j] = 0.5 * (c[i * n + j] + c[j * n + i]);
  }
  LpCertificate cert;
  cert.assignment = max_assignment(n, sym);
  cert.value = cert.assignment.value * dom.cell_measure();
  return cert;
}

double lp_bound(const DiscreteDomain& dom, const SampledField& field, std::size_t cap) {
  return lp_certificate(dom, field, cap).value;
}

DualChoice parse_dual_choice(const std::string& name) {
  if (name == "auto") return DualChoice::Auto;
  if (name == "brute") return DualChoice::Brute;
  if (name == "matching") return DualChoice::Matching;
  if (name == "local") return DualChoice::Local;
  throw InputError("unknown solver '" + name + "' (auto|brute|matching|local)");
}

DualSolution solve_dual(const DiscreteDomain& dom, const SampledField& field,
                        const DualConfig& cfg) {
  const std::size_t n = dom.size();
  DualChoice choice = cfg.choice;
  if (choice == DualChoice::Auto) {
    choice = n > cfg.local_threshold ? DualChoice::Local : DualChoice::Matching;
  }
  DualSolution sol;
  switch (choice) {
    case DualChoice::Brute:
      sol = solve_brute(dom, field);
      break;
    case DualChoice::Local:
      sol = refine_local(dom, field, greedy_involution(build_weights(dom, field)),
                         cfg.local_max_iters);
      break;
    default:
      sol = solve_matching(dom, field);
      break;
  }
  if (n <= 1) {
    sol.sigma = Involution::identity(n);
    sol.value = dual_objective(dom, field, sol.sigma);
  }
  if (cfg.with_bound && n <= cfg.lp_cap) sol.bound = lp_bound(dom, field, cfg.lp_cap);
  return sol;
}

}  // namespace selfdual
