#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfdual/conjugacy.hpp"
#include "selfdual/domain.hpp"
#include "selfdual/dual_solver.hpp"
#include "selfdual/primal_solver.hpp"

namespace selfdual {

struct ResidualStats {
  std::vector<double> values;
  double median = 0.0;
  double max = 0.0;
  friend bool operator==(const ResidualStats&, const ResidualStats&) = default;
};

ResidualStats residual_stats(std::vector<double> values);

enum class Monotonicity { StrictlyMonotone, Monotone, NonMonotone };
std::string to_string(Monotonicity m);

struct MonotoneResult {
  Monotonicity verdict = Monotonicity::Monotone;
  double min_pairing = 0.0;  // min over i != j of <x_i - x_j, u_i - u_j>
  std::size_t i = 0;
  std::size_t j = 0;
};

// Pairings within tol * scale of zero count as zero.
MonotoneResult check_monotone(const DiscreteDomain& dom, const SampledField& field,
                              double tol = 1e-12);

struct UniquenessResult {
  bool plausible = true;  // heuristic; never a proof
  double min_ratio = 0.0; // min |Du(x)^T (y1 - y2) + u(y1) - u(y2)| / |y1 - y2|
  double threshold = 0.0;
  std::size_t x = 0, y1 = 0, y2 = 0;
  std::size_t samples = 0;
};

// Jacobians by least squares over grid neighbours within du of each point.
UniquenessResult check_uniqueness(const DiscreteDomain& dom, const SampledField& field, double du,
                                  std::uint64_t seed = 0);
// Jacobians by central differences of the rule with step du.
UniquenessResult check_uniqueness(const DiscreteDomain& dom, const SampledField& field,
                                  const FieldRule& rule, double du, std::uint64_t seed = 0);

struct SelfDualVerdict {
  double value = 0.0;  // sum_i K(i, s(i)) * mu
  bool consistent = false;
};

SelfDualVerdict selfdual_test(const AntiSymmetricKernel& K, const Permutation& s, double mu,
                              double scale_tol = 1e-12);

// |u_i - grad_1 H(x_i, x_i)|; throws PreconditionError unless u is monotone.
ResidualStats krauss_check(const DiscreteDomain& dom, const SampledField& field, const PairRule& H,
                           double h);
// |u_i - grad_1 H(x_s(i), x_i)|
ResidualStats first_identity_check(const DiscreteDomain& dom, const SampledField& field,
                                   const PairRule& H, const Permutation& s, double h);
// |u_s(i) + grad_2 H(x_s(i), x_i)|
ResidualStats second_identity_check(const DiscreteDomain& dom, const SampledField& field,
                                    const PairRule& H, const Permutation& s, double h);

struct DecomposeConfig {
  DualConfig dual;
  PrimalConfig primal;
  double radius_margin = 0.05;
  std::size_t sphere_samples = 0;  // 0 selects 64 * d
  double fd_step = 0.0;            // 0 selects 1e-4 * R
  double uniqueness_step = 0.0;    // 0 selects 1.5 * mesh
  double tol_reg = 0.0;            // 0 selects 2 R * covering radius
  std::uint64_t seed = 0;
};

struct DecompositionReport {
  double P = 0.0;
  double D = 0.0;
  double gap = 0.0;
  std::vector<std::size_t> sigma;
  std::string dual_method;
  std::string dual_optimality;
  std::optional<double> lp_bound;
  ResidualStats residual1;
  ResidualStats residual2;
  std::vector<double> complementarity;
  double complementarity_min = 0.0;
  double complementarity_max = 0.0;
  double complementarity_sum = 0.0;  // already multiplied by mu
  std::string monotone;
  std::string uniqueness;  // "uniqueness-plausible" | "not-unique" (heuristic)
  double uniqueness_ratio = 0.0;
  std::vector<std::size_t> recovered_sigma;
  bool recovered_agrees = false;
  double recovered_involution_fraction = 0.0;
  std::size_t primal_iterations = 0;
  bool primal_converged = false;
  double radius = 0.0;
  double covering_radius = 0.0;
  double tol_reg = 0.0;
  double fd_step = 0.0;
  double mesh = 0.0;
  double eps_p = 0.0;
  double constant_c = 0.0;  // residual1 median / (h + mesh)
  // max_i L_{H_reg}(x_i, u_i) - L_H(x_i, u_i); <= tol_reg expected
  double regularization_excess = 0.0;

  friend bool operator==(const DecompositionReport&, const DecompositionReport&) = default;
};

struct Decomposition {
  DecompositionReport report;
  DualSolution dual;
  PrimalSolution primal;
  std::optional<RegularHamiltonian> hreg;
};

Decomposition decompose(const DiscreteDomain& dom, const SampledField& field,
                        const DecomposeConfig& cfg = {});

}  // namespace selfdual
