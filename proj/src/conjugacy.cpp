#include "selfdual/conjugacy.hpp"

#include <algorithm>
#include <cmath>

#include "selfdual/error.hpp"
#include "selfdual/parallel.hpp"

namespace selfdual {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// dots[i * P + a] = <x_i, p_a>
std::vector<double> grid_dual_dots(const DiscreteDomain& dom, const DualPointSet& pset) {
  const std::size_t n = dom.size();
  const std::size_t np = pset.size();
  std::vector<double> dots(n * np);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < np; ++a) dots[i * np + a] = dot(dom.point(i), pset[a]);
  }
  return dots;
}

}  // namespace

LagrangianValue l_of_h(const AntiSymmetricKernel& K, const DiscreteDomain& dom, std::size_t i,
                       VecView p) {
  LagrangianValue best{kNegInf, 0};
  for (std::size_t j = 0; j < dom.size(); ++j) {
    const double v = dot(dom.point(j), p) - K(j, i);
    if (v > best.value) best = {v, j};
  }
  return best;
}

std::vector<LagrangianValue> l_of_h(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                                    VecView p) {
  std::vector<LagrangianValue> out(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) out[i] = l_of_h(K, dom, i, p);
  return out;
}

RestrictedDual::RestrictedDual(std::size_t dual_points, std::size_t grid_points,
                               std::vector<double> table)
    : dual_points_(dual_points), grid_points_(grid_points), table_(std::move(table)) {
  if (table_.size() != dual_points_ * grid_points_) {
    throw InputError("restricted dual table has the wrong size");
  }
}

RestrictedDual restricted_dual(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                               const DualPointSet& pset) {
  const std::size_t n = dom.size();
  const std::size_t np = pset.size();
  if (K.size() != n) throw InputError("kernel size does not match the domain");
  if (pset.dim() != dom.dim()) throw InputError("dual point dimension does not match the domain");
  const std::vector<double> dots = grid_dual_dots(dom, pset);

  // lh[a * n + i] = L_H(x_i, p_a)
  std::vector<double> lh(np * n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t a = 0; a < np; ++a) {
      double best = kNegInf;
      for (std::size_t j = 0; j < n; ++j) best = std::max(best, dots[j * np + a] - K(j, i));
      lh[a * n + i] = best;
    }
  });

  // The objective separates in (x, p):
  //   L*(q, y) = max_a <y, p_a> + g(q, a),  g(q, a) = max_i <q, x_i> - L_H(x_i, p_a).
  std::vector<double> g(np * np);
  parallel_for(np, [&](std::size_t q) {
    for (std::size_t a = 0; a < np; ++a) {
      double best = kNegInf;
      for (std::size_t i = 0; i < n; ++i) best = std::max(best, dots[i * np + q] - lh[a * n + i]);
      g[q * np + a] = best;
    }
  });

  std::vector<double> table(np * n);
  parallel_for(np, [&](std::size_t q) {
    for (std::size_t y = 0; y < n; ++y) {
      double best = kNegInf;
      for (std::size_t a = 0; a < np; ++a) best = std::max(best, dots[y * np + a] + g[q * np + a]);
      table[q * n + y] = best;
    }
  });
  return RestrictedDual(np, n, std::move(table));
}

double restricted_bidual(const RestrictedDual& lstar, const DiscreteDomain& dom,
                         const DualPointSet& pset, VecView x, VecView p) {
  double best = kNegInf;
  for (std::size_t b = 0; b < pset.size(); ++b) {
    const double xp = dot(x, pset[b]);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      best = std::max(best, xp + dot(p, dom.point(i)) - lstar(b, i));
    }
  }
  return best;
}

RegularHamiltonian::RegularHamiltonian(const DiscreteDomain& dom, DualPointSet pset,
                                       RestrictedDual lstar)
    : dom_(dom), pset_(std::move(pset)), lstar_(std::move(lstar)) {
  const std::size_t n = dom_.size();
  const std::size_t np = pset_.size();
  if (lstar_.dual_points() != np || lstar_.grid_points() != n) {
    throw InputError("restricted dual table does not match the domain / dual point set");
  }
  const std::vector<double> dots = grid_dual_dots(dom_, pset_);
  inner_.assign(np * np, 0.0);
  parallel_for(np, [&](std::size_t a) {
    for (std::size_t b = 0; b < np; ++b) {
      double best = kNegInf;
      for (std::size_t i = 0; i < n; ++i) best = std::max(best, dots[i * np + a] - lstar_(b, i));
      inner_[a * np + b] = best;
    }
  });
}

double RegularHamiltonian::bidual(VecView x, VecView p) const {
  return restricted_bidual(lstar_, dom_, pset_, x, p);
}

double RegularHamiltonian::bidual_at(VecView x, std::size_t a) const {
  const std::size_t np = pset_.size();
  double best = kNegInf;
  for (std::size_t b = 0; b < np; ++b) best = std::max(best, dot(x, pset_[b]) + inner_[a * np + b]);
  return best;
}

std::vector<double> RegularHamiltonian::bidual_row(VecView y) const {
  const std::size_t np = pset_.size();
  std::vector<double> yp(np);
  for (std::size_t b = 0; b < np; ++b) yp[b] = dot(y, pset_[b]);
  std::vector<double> row(np);
  for (std::size_t a = 0; a < np; ++a) {
    const double* f = inner_.data() + a * np;
    double best = kNegInf;
    for (std::size_t b = 0; b < np; ++b) best = std::max(best, yp[b] + f[b]);
    row[a] = best;
  }
  return row;
}

double RegularHamiltonian::ball_from_row(VecView x, const std::vector<double>& row) const {
  double best = kNegInf;
  for (std::size_t a = 0; a < pset_.size(); ++a) best = std::max(best, dot(x, pset_[a]) - row[a]);
  return best;
}

double RegularHamiltonian::ball(VecView x, VecView y) const {
  return ball_from_row(x, bidual_row(y));
}

double RegularHamiltonian::operator()(VecView x, VecView y) const {
  // fl(a - b) == -fl(b - a), so H_reg(x, y) == -H_reg(y, x) bit-for-bit.
  return 0.5 * (ball(x, y) - ball(y, x));
}

AntiSymmetricKernel RegularHamiltonian::grid_kernel() const {
  const std::size_t n = dom_.size();
  // balls[i * n + j] = H_L(x_i, x_j)
  std::vector<double> balls(n * n);
  parallel_for(n, [&](std::size_t j) {
    const auto row = bidual_row(dom_.point(j));
    for (std::size_t i = 0; i < n; ++i) balls[i * n + j] = ball_from_row(dom_.point(i), row);
  });
  AntiSymmetricKernel K(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) K.set(i, j, 0.5 * (balls[i * n + j] - balls[j * n + i]));
  }
  return K;
}

PairRule RegularHamiltonian::rule() const {
  return [this](VecView x, VecView y) { return (*this)(x, y); };
}

RegularHamiltonian regularize(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                              const DualPointSet& pset) {
  return RegularHamiltonian(dom, pset, restricted_dual(K, dom, pset));
}

double regularization_tolerance(const DualPointSet& pset) {
  return 2.0 * pset.radius() * pset.covering_radius();
}

namespace {

Vec central_difference(const PairRule& H, VecView x, VecView y, double h, bool first) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const std::size_t d = first ? x.size() : y.size();
  Vec xp(x.begin(), x.end());
  Vec yp(y.begin(), y.end());
  Vec g(d);
  for (std::size_t k = 0; k < d; ++k) {
    Vec& v = first ? xp : yp;
    const double base = v[k];
    v[k] = base + h;
    const double fp = H(xp, yp);
    v[k] = base - h;
    const double fm = H(xp, yp);
    v[k] = base;
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

Vec grad1(const PairRule& H, VecView x, VecView y, double h) {
  return central_difference(H, x, y, h, true);
}

Vec grad2(const PairRule& H, VecView x, VecView y, double h) {
  return central_difference(H, x, y, h, false);
}

double one_sided_derivative(const PairRule& H, VecView x, VecView y, VecView dir, double t) {
  if (!(t > 0.0)) throw InputError("derivative step must be positive");
  Vec xt(x.begin(), x.end());
  for (std::size_t k = 0; k < xt.size(); ++k) xt[k] += t * dir[k];
  return (H(xt, y) - H(x, y)) / t;
}

}  // namespace selfdual
