#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "selfdual/domain.hpp"

namespace selfdual {

struct Atom {
  Vec point;  // in R^{2d}
  double mass;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct PairMeasure {
  std::vector<Atom> atoms;
  double total_mass() const;
  friend bool operator==(const PairMeasure&, const PairMeasure&) = default;
};

// mu_hat: atoms (x_i, u_i); nu_hat: atoms (u_i, x_i). Both carry cell_measure.
struct PairMeasures {
  PairMeasure mu;
  PairMeasure nu;
};

PairMeasures build_pair_measures(const DiscreteDomain& dom, const SampledField& field);

// (a, b) -> (b, a) on every atom.
PairMeasure transpose(const PairMeasure& m);

// 1/2 sum_i [|u_s(i) - x_i|^2 + |u_i - x_s(i)|^2] * mu
double transport_cost(const DiscreteDomain& dom, const SampledField& field, const Permutation& s);

// T: (x_i, u_i) -> (u_s(i), x_s(i)); image[i] is the index of the nu_hat atom hit
// by mu_hat atom i (which is s(i)).
struct TransportMap {
  std::vector<std::size_t> image;
  std::vector<Atom> images;  // T applied to each mu_hat atom
  bool pushes_forward = false;  // image multiset equals nu_hat with matching masses
};

TransportMap parametrize_map(const DiscreteDomain& dom, const SampledField& field,
                             const Permutation& s);

// CSV: mass,p0,...,p{2d-1}
void write_atoms_csv(std::ostream& out, const PairMeasure& m);

}  // namespace selfdual
