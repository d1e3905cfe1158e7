#pragma once

// Shared vocabulary for the solvers: a bounded domain cut into equal-measure
// cells, a vector field sampled at the cell representatives, anti-symmetric
// kernels on grid pairs, and permutations / involutions of cell indices.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace selfdual {

using Vec = std::vector<double>;
using VecView = std::span<const double>;

double dot(VecView a, VecView b);
double norm(VecView a);
double squared_distance(VecView a, VecView b);

// N points of R^d, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return size() == 0; }

  VecView operator[](std::size_t i) const {
    return VecView(coords_.data() + i * dim_, dim_);
  }
  const std::vector<double>& coords() const { return coords_; }

  // Largest Euclidean norm over the points (0 for an empty set).
  double max_norm() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

enum class GridKind { Interval, Box, SymmetricSquare, SymmetricBall };

// Description of an equal-measure cell decomposition.
//   Interval         [lower[0], upper[0]] with cells[0] cells
//   Box              product of [lower[k], upper[k]] with cells[k] cells
//   SymmetricSquare  [-h, h]^2 with cells[0] cells per axis (h = upper[0])
//   SymmetricBall    cells of the symmetric square whose midpoint lies in
//                    the closed disk of radius h
struct GridSpec {
  GridKind kind = GridKind::Interval;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> cells;

  static GridSpec interval(double a, double b, std::size_t n);
  static GridSpec box(std::vector<double> lower, std::vector<double> upper,
                      std::vector<std::size_t> cells);
  static GridSpec symmetric_square(double half_width, std::size_t per_axis);
  static GridSpec symmetric_ball(double radius, std::size_t per_axis);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// N equal-measure cells with midpoint representatives. Points are pairwise
// distinct, cell_measure > 0, and every point lies in the ball of radius().
class DiscreteDomain {
 public:
  DiscreteDomain(PointSet points, double cell_measure, double mesh);

  const PointSet& points() const { return points_; }
  VecView point(std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.dim(); }
  double cell_measure() const { return cell_measure_; }
  double total_measure() const { return cell_measure_ * static_cast<double>(size()); }
  double radius() const { return radius_; }
  // Largest cell side length; used for mesh-aware tolerances.
  double mesh() const { return mesh_; }

 private:
  PointSet points_;
  double cell_measure_;
  double mesh_;
  double radius_;
};

DiscreteDomain build_grid(const GridSpec& spec);

using FieldRule = std::function<Vec(VecView)>;
// A scalar rule on pairs of points, e.g. a Hamiltonian H(x, y).
using PairRule = std::function<double(VecView, VecView)>;

// u sampled at the domain points.
class SampledField {
 public:
  SampledField(const DiscreteDomain& dom, PointSet values);

  const PointSet& values() const { return values_; }
  VecView operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  double radius() const { return radius_; }

 private:
  PointSet values_;
  double radius_;
};

SampledField sample_field(const DiscreteDomain& dom, const FieldRule& rule);

// R = (1 + margin) * max(R_Omega, R_u), floored at a tiny positive value so
// that the zero field on a domain at the origin still gets a valid ball.
double ball_radius(const DiscreteDomain& dom, const SampledField& field,
                   double margin = 0.05);

// Finite stand-in for the closed ball B_R in suprema over dual variables:
// the origin, every field value, and sphere samples of radius R.
class DualPointSet {
 public:
  DualPointSet(PointSet points, double radius, double covering_radius);

  const PointSet& points() const { return points_; }
  VecView operator[](std::size_t a) const { return points_[a]; }
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.dim(); }
  double radius() const { return radius_; }
  // Largest distance from a point of B_R to the set (estimated by probes in
  // d >= 2, exact in d = 1).
  double covering_radius() const { return covering_radius_; }

  // Index of a point equal to p, or size() if absent.
  std::size_t find(VecView p) const;

 private:
  PointSet points_;
  double radius_;
  double covering_radius_;
};

// sphere_samples = 0 selects the default 64 * d.
DualPointSet make_dual_point_set(const DiscreteDomain& dom, const SampledField& field,
                                 double radius, std::size_t sphere_samples = 0,
                                 std::uint64_t seed = 0);

// H restricted to grid pairs. Only the strict upper triangle is stored, so
// K(i,j) + K(j,i) == 0 holds bit-for-bit and the diagonal is zero.
class AntiSymmetricKernel {
 public:
  AntiSymmetricKernel() = default;
  explicit AntiSymmetricKernel(std::size_t n);
  // upper holds K(i,j) for i < j in row-major order of the upper triangle.
  AntiSymmetricKernel(std::size_t n, std::vector<double> upper);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    return i < j ? upper_[slot(i, j)] : -upper_[slot(j, i)];
  }
  // Sets K(i,j) (and therefore K(j,i) = -value); i != j.
  void set(std::size_t i, std::size_t j, double value);

  const std::vector<double>& upper() const { return upper_; }
  std::size_t slot(std::size_t i, std::size_t j) const {
    // i < j
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

  friend bool operator==(const AntiSymmetricKernel&, const AntiSymmetricKernel&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> upper_;
};

// K(i,j) = (H(x_i,x_j) - H(x_j,x_i)) / 2.
AntiSymmetricKernel make_kernel(const DiscreteDomain& dom, const PairRule& H);

// A bijection of {0, ..., n-1}.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> map);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return map_.size(); }
  std::size_t operator[](std::size_t i) const { return map_[i]; }
  const std::vector<std::size_t>& map() const { return map_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

// true iff s(s(i)) == i for every i.
bool compose_check(const Permutation& s);

// A permutation that is its own inverse: the grid-level self-dual map.
class Involution {
 public:
  Involution() = default;
  explicit Involution(Permutation p);
  explicit Involution(std::vector<std::size_t> map) : Involution(Permutation(std::move(map))) {}

  static Involution identity(std::size_t n);
  // i -> n-1-i
  static Involution reversal(std::size_t n);
  // Builds the involution with the given 2-cycles; other indices are fixed.
  static Involution from_pairs(std::size_t n,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

  std::size_t size() const { return perm_.size(); }
  std::size_t operator[](std::size_t i) const { return perm_[i]; }
  const Permutation& permutation() const { return perm_; }
  const std::vector<std::size_t>& map() const { return perm_.map(); }
  std::size_t fixed_points() const;

  friend bool operator==(const Involution&, const Involution&) = default;

 private:
  Permutation perm_;
};

// Permutation induced by x -> (x_2, -x_1) on a grid that is closed under it.
// Throws InputError otherwise.
Permutation rotation_permutation(const DiscreteDomain& dom);

// Permutation induced by a point map on the grid; throws InputError when an
// image is not a grid point (matched to within tol).
Permutation permutation_from_map(const DiscreteDomain& dom, const FieldRule& map,
                                 double tol = 1e-9);

}  // namespace selfdual
