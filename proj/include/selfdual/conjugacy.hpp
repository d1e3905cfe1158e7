#pragma once

// Restricted Legendre-Fenchel transforms of a grid kernel and the regularized
// convex-concave Hamiltonian built from them.
//
// Every supremum over the closed domain is a maximum over the grid points and
// every supremum over the ball B_R is a maximum over a DualPointSet, so each
// evaluator below is an exact finite program:
//
//   L_H(x_i, p)    = max_j  <x_j, p> - K(j, i)
//   L*(q, y)       = max_{i, a} <y, p_a> + <q, x_i> - L_H(x_i, p_a)
//   L**(x, p)      = max_{i, b} <x, p_b> + <p, x_i> - L*(p_b, x_i)
//   H_L(x, y)      = max_a  <x, p_a> - L**(y, p_a)
//   H_reg(x, y)    = (H_L(x, y) - H_L(y, x)) / 2

#include <cstddef>
#include <limits>
#include <vector>

#include "selfdual/domain.hpp"

namespace selfdual {

struct LagrangianValue {
  double value;
  std::size_t argmax;  // grid index attaining the maximum (smallest on ties)
};

LagrangianValue l_of_h(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                       std::size_t i, VecView p);
// L_H(x_i, p) for every grid index i.
std::vector<LagrangianValue> l_of_h(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                                    VecView p);

// Table of L*(p_a, x_i) for a in the dual point set and i in the grid.
class RestrictedDual {
 public:
  RestrictedDual() = default;
  RestrictedDual(std::size_t dual_points, std::size_t grid_points, std::vector<double> table);

  double operator()(std::size_t a, std::size_t i) const { return table_[a * grid_points_ + i]; }
  std::size_t dual_points() const { return dual_points_; }
  std::size_t grid_points() const { return grid_points_; }

 private:
  std::size_t dual_points_ = 0;
  std::size_t grid_points_ = 0;
  std::vector<double> table_;
};

RestrictedDual restricted_dual(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                               const DualPointSet& pset);

// L**(x, p) at an arbitrary point of R^d x R^d.
double restricted_bidual(const RestrictedDual& lstar, const DiscreteDomain& dom,
                         const DualPointSet& pset, VecView x, VecView p);

// B_R-Hamiltonian of a Lagrangian known on R^d x pset:
//   max_a <x, p_a> - bidual_at(y, a).
template <class BidualAt>
double ball_hamiltonian(BidualAt&& bidual_at, const DualPointSet& pset, VecView x, VecView y) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pset.size(); ++a) {
    const double v = dot(x, pset[a]) - bidual_at(y, a);
    if (v > best) best = v;
  }
  return best;
}

// Convex-concave anti-symmetric Hamiltonian evaluable anywhere in R^d x R^d.
// Thread-safe after construction.
class RegularHamiltonian {
 public:
  RegularHamiltonian(const DiscreteDomain& dom, DualPointSet pset, RestrictedDual lstar);

  const DiscreteDomain& domain() const { return dom_; }
  const DualPointSet& dual_points() const { return pset_; }
  const RestrictedDual& lstar() const { return lstar_; }

  double bidual(VecView x, VecView p) const;
  double bidual_at(VecView x, std::size_t a) const;
  double ball(VecView x, VecView y) const;
  double operator()(VecView x, VecView y) const;

  // H_reg restricted to grid pairs.
  AntiSymmetricKernel grid_kernel() const;

  PairRule rule() const;

 private:
  // L**(y, p_a) for every a.
  std::vector<double> bidual_row(VecView y) const;
  double ball_from_row(VecView x, const std::vector<double>& row) const;

  DiscreteDomain dom_;
  DualPointSet pset_;
  RestrictedDual lstar_;
  // inner_[a * P + b] = max_i <p_a, x_i> - L*(p_b, x_i), so that
  // L**(y, p_a) = max_b <y, p_b> + inner_[a * P + b].
  std::vector<double> inner_;
};

RegularHamiltonian regularize(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                              const DualPointSet& pset);

// tol_reg = 2 R * covering radius of the dual point set.
double regularization_tolerance(const DualPointSet& pset);

// Central differences in the first / second argument.
Vec grad1(const PairRule& H, VecView x, VecView y, double h);
Vec grad2(const PairRule& H, VecView x, VecView y, double h);

// (H(x + t dir, y) - H(x, y)) / t
double one_sided_derivative(const PairRule& H, VecView x, VecView y, VecView dir, double t);

}  // namespace selfdual
