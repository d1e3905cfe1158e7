#include "selfdual/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "selfdual/error.hpp"
#include "selfdual/parallel.hpp"

namespace selfdual {

ResidualStats residual_stats(std::vector<double> values) {
  ResidualStats s;
  s.values = std::move(values);
  if (s.values.empty()) return s;
  std::vector<double> sorted = s.values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.max = sorted.back();
  return s;
}

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::StrictlyMonotone:
      return "strictly-monotone";
    case Monotonicity::Monotone:
      return "monotone";
    case Monotonicity::NonMonotone:
      return "non-monotone";
  }
  return "";
}

MonotoneResult check_monotone(const DiscreteDomain& dom, const SampledField& field, double tol) {
  const std::size_t n = dom.size();
  if (field.size() != n) throw InputError("size mismatch between domain and field");
  MonotoneResult r;
  if (n < 2) {
    r.verdict = Monotonicity::StrictlyMonotone;
    return r;
  }
  r.min_pairing = std::numeric_limits<double>::infinity();
  const std::size_t d = dom.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        s += (dom.point(i)[k] - dom.point(j)[k]) * (field[i][k] - field[j][k]);
      }
      if (s < r.min_pairing) {
        r.min_pairing = s;
        r.i = i;
        r.j = j;
      }
    }
  }
  const double scale = 4.0 * dom.radius() * std::max(field.radius(), 1e-300);
  if (r.min_pairing > tol * scale) {
    r.verdict = Monotonicity::StrictlyMonotone;
  } else if (r.min_pairing >= -tol * scale) {
    r.verdict = Monotonicity::Monotone;
  } else {
    r.verdict = Monotonicity::NonMonotone;
  }
  return r;
}

namespace {

using Jacobian = Eigen::MatrixXd;

std::vector<Jacobian> least_squares_jacobians(const DiscreteDomain& dom,
                                              const SampledField& field, double du) {
  const std::size_t n = dom.size();
  const std::size_t d = dom.dim();
  std::vector<Jacobian> out(n, Jacobian::Zero(d, d));
  const double r2 = du * du * (1.0 + 1e-9);
  parallel_for(n, [&](std::size_t i) {
    Eigen::MatrixXd xx = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd ux = Eigen::MatrixXd::Zero(d, d);
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || squared_distance(dom.point(i), dom.point(j)) > r2) continue;
      Eigen::VectorXd dx(d), dv(d);
      for (std::size_t k = 0; k < d; ++k) {
        dx[k] = dom.point(j)[k] - dom.point(i)[k];
        dv[k] = field[j][k] - field[i][k];
      }
      xx += dx * dx.transpose();
      ux += dv * dx.transpose();
      ++count;
    }
    if (count >= d) {
      // J xx = ux  =>  J = ux xx^{-1}; xx is symmetric.
      out[i] = xx.ldlt().solve(ux.transpose()).transpose();
    }
  });
  return out;
}

std::vector<Jacobian> rule_jacobians(const DiscreteDomain& dom, const FieldRule& rule, double du) {
  const std::size_t n = dom.size();
  const std::size_t d = dom.dim();
  std::vector<Jacobian> out(n, Jacobian::Zero(d, d));
  for (std::size_t i = 0; i < n; ++i) {
    Vec x(dom.point(i).begin(), dom.point(i).end());
    for (std::size_t k = 0; k < d; ++k) {
      const double base = x[k];
      x[k] = base + du;
      const Vec fp = rule(x);
      x[k] = base - du;
      const Vec fm = rule(x);
      x[k] = base;
      for (std::size_t r = 0; r < d; ++r) out[i](r, k) = (fp[r] - fm[r]) / (2.0 * du);
    }
  }
  return out;
}

UniquenessResult uniqueness_from(const DiscreteDomain& dom, const SampledField& field,
                                 const std::vector<Jacobian>& jac, double du, std::uint64_t seed) {
  const std::size_t n = dom.size();
  const std::size_t d = dom.dim();
  UniquenessResult r;
  double jmax = 0.0;
  for (const auto& J : jac) jmax = std::max(jmax, J.norm());
  r.threshold = (dom.mesh() + du) * jmax;
  r.min_ratio = std::numeric_limits<double>::infinity();
  if (n < 2) {
    r.min_ratio = 0.0;
    return r;
  }

  auto probe = [&](std::size_t x, std::size_t a, std::size_t b) {
    double g2 = 0.0;
    double y2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double g = field[a][k] - field[b][k];
      // Du(x)^T (y1 - y2)
      for (std::size_t m = 0; m < d; ++m) {
        g += jac[x](m, k) * (dom.point(a)[m] - dom.point(b)[m]);
      }
      g2 += g * g;
      const double dy = dom.point(a)[k] - dom.point(b)[k];
      y2 += dy * dy;
    }
    const double ratio = std::sqrt(g2 / y2);
    ++r.samples;
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.x = x;
      r.y1 = a;
      r.y2 = b;
    }
  };

  const double triples = double(n) * double(n) * double(n - 1) / 2.0;
  if (triples <= 4e6) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) probe(x, a, b);
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < 1000000; ++s) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      if (a == b) continue;
      probe(pick(rng), a, b);
    }
  }
  r.plausible = r.min_ratio > r.threshold;
  return r;
}

}  // namespace

UniquenessResult check_uniqueness(const DiscreteDomain& dom, const SampledField& field, double du,
                                  std::uint64_t seed) {
  if (!(du > 0.0)) throw InputError("Jacobian step must be positive");
  return uniqueness_from(dom, field, least_squares_jacobians(dom, field, du), du, seed);
}

UniquenessResult check_uniqueness(const DiscreteDomain& dom, const SampledField& field,
                                  const FieldRule& rule, double du, std::uint64_t seed) {
  if (!(du > 0.0)) throw InputError("Jacobian step must be positive");
  return uniqueness_from(dom, field, rule_jacobians(dom, rule, du), du, seed);
}

SelfDualVerdict selfdual_test(const AntiSymmetricKernel& K, const Permutation& s, double mu,
                              double scale_tol) {
  if (K.size() != s.size()) throw InputError("size mismatch between kernel and permutation");
  // sum_i K(i, s(i)) = -sum_i K(s(i), i)
  SelfDualVerdict v;
  v.value = -cycle_sum(K, s) * mu;
  double scale = 0.0;
  for (double x : K.upper()) scale = std::max(scale, std::abs(x));
  scale *= mu * static_cast<double>(s.size());
  v.consistent = std::abs(v.value) <= scale_tol * scale;
  return v;
}

namespace {

void check_perm(const DiscreteDomain& dom, const SampledField& field, const Permutation& s) {
  if (field.size() != dom.size() || s.size() != dom.size()) {
    throw InputError("size mismatch between domain, field and permutation");
  }
}

}  // namespace

ResidualStats krauss_check(const DiscreteDomain& dom, const SampledField& field, const PairRule& H,
                           double h) {
  if (check_monotone(dom, field).verdict == Monotonicity::NonMonotone) {
    throw PreconditionError("the diagonal representation needs a monotone field");
  }
  return first_identity_check(dom, field, H, Permutation::identity(dom.size()), h);
}

ResidualStats first_identity_check(const DiscreteDomain& dom, const SampledField& field,
                                   const PairRule& H, const Permutation& s, double h) {
  check_perm(dom, field, s);
  std::vector<double> res(dom.size());
  parallel_for(dom.size(), [&](std::size_t i) {
    const Vec g = grad1(H, dom.point(s[i]), dom.point(i), h);
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) e += (field[i][k] - g[k]) * (field[i][k] - g[k]);
    res[i] = std::sqrt(e);
  });
  return residual_stats(std::move(res));
}

ResidualStats second_identity_check(const DiscreteDomain& dom, const SampledField& field,
                                    const PairRule& H, const Permutation& s, double h) {
  check_perm(dom, field, s);
  std::vector<double> res(dom.size());
  parallel_for(dom.size(), [&](std::size_t i) {
    const Vec g = grad2(H, dom.point(s[i]), dom.point(i), h);
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double v = field[s[i]][k] + g[k];
      e += v * v;
    }
    res[i] = std::sqrt(e);
  });
  return residual_stats(std::move(res));
}

Decomposition decompose(const DiscreteDomain& dom, const SampledField& field,
                        const DecomposeConfig& cfg) {
  const std::size_t n = dom.size();
  if (field.size() != n) throw InputError("size mismatch between domain and field");
  Decomposition out;
  DecompositionReport& rep = out.report;

  out.dual = solve_dual(dom, field, cfg.dual);
  PrimalConfig pcfg = cfg.primal;
  if (!pcfg.centre_on) pcfg.centre_on = out.dual.sigma;
  out.primal = minimize_primal(dom, field, pcfg);
  const AntiSymmetricKernel& K = out.primal.K;

  rep.D = out.dual.value;
  rep.P = out.primal.value;
  rep.gap = rep.P - rep.D;
  rep.sigma = out.dual.sigma.map();
  rep.dual_method = to_string(out.dual.method);
  rep.dual_optimality = to_string(out.dual.optimality);
  rep.lp_bound = out.dual.bound;
  rep.primal_iterations = out.primal.iterations;
  rep.primal_converged = out.primal.converged;
  rep.eps_p = cfg.primal.eps;

  const double R = ball_radius(dom, field, cfg.radius_margin);
  DualPointSet pset = make_dual_point_set(dom, field, R, cfg.sphere_samples, cfg.seed);
  rep.radius = R;
  rep.covering_radius = pset.covering_radius();
  rep.tol_reg = cfg.tol_reg > 0.0 ? cfg.tol_reg : regularization_tolerance(pset);
  rep.fd_step = cfg.fd_step > 0.0 ? cfg.fd_step : 1e-4 * R;
  rep.mesh = dom.mesh();
  out.hreg.emplace(regularize(K, dom, pset));
  const RegularHamiltonian& hreg = *out.hreg;
  const PairRule H = hreg.rule();

  const Permutation& sigma = out.dual.sigma.permutation();
  rep.residual1 = first_identity_check(dom, field, H, sigma, rep.fd_step);
  rep.residual2 = second_identity_check(dom, field, H, sigma, rep.fd_step);
  rep.constant_c = rep.residual1.median / (rep.fd_step + rep.mesh);

  const WeakDualityCertificate cert = weak_duality(dom, field, K, sigma);
  rep.complementarity = cert.slack;
  if (n > 0) {
    rep.complementarity_min = *std::min_element(cert.slack.begin(), cert.slack.end());
    rep.complementarity_max = *std::max_element(cert.slack.begin(), cert.slack.end());
  }
  double csum = 0.0;
  for (double c : cert.slack) csum += c;
  rep.complementarity_sum = csum * dom.cell_measure();

  const AntiSymmetricKernel Kreg = hreg.grid_kernel();
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    excess = std::max(excess, l_of_h(Kreg, dom, i, field[i]).value -
                                  l_of_h(K, dom, i, field[i]).value);
  }
  rep.regularization_excess = n ? excess : 0.0;

  rep.monotone = to_string(check_monotone(dom, field).verdict);
  const double du = cfg.uniqueness_step > 0.0 ? cfg.uniqueness_step : 1.5 * dom.mesh();
  const UniquenessResult uq = check_uniqueness(dom, field, du, cfg.seed);
  rep.uniqueness = uq.plausible ? "uniqueness-plausible" : "not-unique";
  rep.uniqueness_ratio = uq.min_ratio;

  const RecoveredInvolution rec = recover_involution(K, dom, field);
  rep.recovered_sigma = rec.rounded.map();
  rep.recovered_involution_fraction = rec.involution_fraction;
  rep.recovered_agrees = rec.rounded.map() == rep.sigma;
  if (!rep.recovered_agrees) rep.uniqueness = "not-unique";
  return out;
}

}  // namespace selfdual
