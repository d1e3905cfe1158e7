#pragma once

// Kernel problem: minimize P(K) = mu * sum_i max_j {<x_j, u_i> - K(j, i)}
// over anti-symmetric kernels K.

#include <cstddef>
#include <optional>
#include <vector>

#include "selfdual/conjugacy.hpp"
#include "selfdual/domain.hpp"
#include "selfdual/dual_solver.hpp"

namespace selfdual {

double primal_objective(const DiscreteDomain& dom, const SampledField& field,
                        const AntiSymmetricKernel& K);

// sum_i K(s(i), i), grouped so that every 2-cycle contributes
// K(j,i) + K(i,j) == 0 exactly; longer cycles are summed in index order.
double cycle_sum(const AntiSymmetricKernel& K, const Permutation& s);

struct WeakDualityCertificate {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;  // primal - dual
  // slack[i] = L_H(x_i, u_i) + K(s(i), i) - <u_i, x_s(i)>, each >= 0 up to rounding.
  std::vector<double> slack;
  double cancellation = 0.0;  // sum_i K(s(i), i); exactly 0 for involutions
};

WeakDualityCertificate weak_duality(const DiscreteDomain& dom, const SampledField& field,
                                    const AntiSymmetricKernel& K, const Permutation& s);

struct PrimalConfig {
  std::size_t max_iters = 0;  // 0 selects 50 * N^2
  double eps = 1e-6;
  // Start from the kernel built from the LP certificate instead of K = 0.
  bool warm_start = true;
  std::size_t lp_cap = kDefaultLpCap;
  // Optimal involution used to centre the warm start (see centred_potentials).
  std::optional<Involution> centre_on;
};

struct PrimalSolution {
  AntiSymmetricKernel K;
  double value = 0.0;
  std::size_t iterations = 0;
  double lp_bound = 0.0;
  // value - lp_bound: the distance to the best value any kernel can reach.
  double gap_vs_dual = 0.0;
  std::vector<std::size_t> argmax_map;
  bool converged = false;
};

// Kernel attaining the LP bound: with feasible potentials a_i + b_j >= Csym_ij
// and t_i = a_i + b_i, K(j, i) = (c_ij - c_ji) / 2 - (t_i - t_j) / 2.
AntiSymmetricKernel certificate_kernel(const DiscreteDomain& dom, const SampledField& field,
                                       const LpCertificate& cert);
// Same construction from t directly.
AntiSymmetricKernel kernel_from_potentials(const DiscreteDomain& dom, const SampledField& field,
                                           const std::vector<double>& t);

// Among potentials t with t_i + t_j >= 2 Csym_ij that are complementary to the
// involution s (t_i + t_s(i) = 2 Csym_i,s(i)), find one maximizing the smallest
// slack on all other pairs, so that argmax_j of the kernel rows is unique and
// equals s(i) whenever that is possible. nullopt when s is not LP-optimal or
// N exceeds cap.
std::optional<std::vector<double>> centred_potentials(const DiscreteDomain& dom,
                                                      const SampledField& field,
                                                      const Involution& s,
                                                      std::size_t cap = 1024);

// Polyak subgradient descent on the free upper-triangle entries, targeting
// lp_bound; returns the best iterate.
PrimalSolution minimize_primal(const DiscreteDomain& dom, const SampledField& field,
                               const PrimalConfig& cfg = {});

struct RecoveredInvolution {
  std::vector<std::size_t> candidate;  // argmax j*(i) of L_H(x_i, u_i)
  bool is_permutation = false;
  bool is_involution = false;
  double involution_fraction = 0.0;  // share of i with candidate(candidate(i)) == i
  // Complementary-slackness pairs (i, j): <x_j, u_i> - K(j, i) >= L_H(x_i, u_i) - eps.
  std::vector<std::pair<std::size_t, std::size_t>> tight_pairs;
  // Best involution supported on the tight pairs (maximum-weight matching).
  Involution rounded;
};

RecoveredInvolution recover_involution(const AntiSymmetricKernel& K, const DiscreteDomain& dom,
                                       const SampledField& field, double eps = 1e-9);

}  // namespace selfdual
