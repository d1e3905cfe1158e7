#pragma once

// Involution problem: maximize sum_i <u_i, x_s(i)> * mu over involutions s.
//
// Expanding over the cycle structure of s gives
//   D(s) = mu * (sum_i diag[i] + sum over 2-cycles {i,j} of w'[i][j])
// with diag[i] = <u_i, x_i>, W[i][j] = <u_i, x_j> + <u_j, x_i> and
// w'[i][j] = W[i][j] - diag[i] - diag[j], so the optimum is a maximum-weight
// (not necessarily perfect) matching on w'.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfdual/assignment.hpp"
#include "selfdual/domain.hpp"

namespace selfdual {

class PairWeights {
 public:
  PairWeights(std::size_t n, std::vector<double> full, std::vector<double> diag);

  std::size_t size() const { return n_; }
  double W(std::size_t i, std::size_t j) const { return full_[i * n_ + j]; }
  double diag(std::size_t i) const { return diag_[i]; }
  double reduced(std::size_t i, std::size_t j) const { return W(i, j) - diag_[i] - diag_[j]; }
  const std::vector<double>& diagonal() const { return diag_; }

 private:
  std::size_t n_;
  std::vector<double> full_;
  std::vector<double> diag_;
};

PairWeights build_weights(const DiscreteDomain& dom, const SampledField& field);

double dual_objective(const DiscreteDomain& dom, const SampledField& field, const Involution& s);
double distance_objective(const DiscreteDomain& dom, const SampledField& field,
                          const Involution& s);
// mu * (sum diag + sum of w' over the 2-cycles of s).
double matching_objective(const PairWeights& w, double cell_measure, const Involution& s);

enum class DualMethod { Brute, Matching, Local };
enum class Optimality { Exact, Heuristic };

std::string to_string(DualMethod m);
std::string to_string(Optimality o);

struct DualSolution {
  Involution sigma;
  double value = 0.0;
  DualMethod method = DualMethod::Matching;
  Optimality optimality = Optimality::Exact;
  std::optional<double> bound;
};

constexpr std::size_t kBruteLimit = 12;

// Telephone number I(n): the number of involutions of n elements.
std::uint64_t involution_count(std::size_t n);

// Exhaustive search; N <= kBruteLimit. Returns the lexicographically smallest
// optimal involution.
DualSolution solve_brute(const DiscreteDomain& dom, const SampledField& field);
DualSolution solve_matching(const DiscreteDomain& dom, const SampledField& field);

// First-improvement hill climbing over {break a pair, join two fixed points,
// swap partners between two pairs}. max_iters counts accepted moves.
DualSolution refine_local(const DiscreteDomain& dom, const SampledField& field,
                          const Involution& start, std::size_t max_iters);

// Greedy matching on positive w' in decreasing order.
Involution greedy_involution(const PairWeights& w);

constexpr std::size_t kDefaultLpCap = 4096;

// max sum_ij pi_ij <u_i, x_j> mu over symmetric doubly stochastic pi.
// Throws PreconditionError when N exceeds cap.
double lp_bound(const DiscreteDomain& dom, const SampledField& field,
                std::size_t cap = kDefaultLpCap);

// The relaxation reduces to an assignment on the symmetrized score
// (c + c^T) / 2 with c_ij = <u_i, x_j>; the potentials certify the bound.
struct LpCertificate {
  double value = 0.0;  // already multiplied by mu
  AssignmentResult assignment;
};
LpCertificate lp_certificate(const DiscreteDomain& dom, const SampledField& field,
                             std::size_t cap = kDefaultLpCap);

enum class DualChoice { Auto, Brute, Matching, Local };

struct DualConfig {
  DualChoice choice = DualChoice::Auto;
  // Auto switches from matching to the local heuristic above this size.
  std::size_t local_threshold = 2000;
  std::size_t local_max_iters = 1000000;
  std::size_t lp_cap = kDefaultLpCap;
  bool with_bound = true;
};

DualChoice parse_dual_choice(const std::string& name);

DualSolution solve_dual(const DiscreteDomain& dom, const SampledField& field,
                        const DualConfig& cfg = {});

}  // namespace selfdual
