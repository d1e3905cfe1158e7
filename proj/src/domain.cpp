#include "selfdual/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "selfdual/error.hpp"

namespace selfdual {

double dot(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(VecView a) { return std::sqrt(dot(a, a)); }

double squared_distance(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InputError("point dimension must be at least 1");
  if (coords_.size() % dim_ != 0) {
    throw InputError("coordinate count is not a multiple of the dimension");
  }
}

double PointSet::max_norm() const {
  double r = 0.0;
  for (std::size_t i = 0; i < size(); ++i) r = std::max(r, norm((*this)[i]));
  return r;
}

GridSpec GridSpec::interval(double a, double b, std::size_t n) {
  return GridSpec{GridKind::Interval, {a}, {b}, {n}};
}

GridSpec GridSpec::box(std::vector<double> lower, std::vector<double> upper,
                       std::vector<std::size_t> cells) {
  return GridSpec{GridKind::Box, std::move(lower), std::move(upper), std::move(cells)};
}

GridSpec GridSpec::symmetric_square(double half_width, std::size_t per_axis) {
  return GridSpec{GridKind::SymmetricSquare, {-half_width, -half_width},
                  {half_width, half_width}, {per_axis, per_axis}};
}

GridSpec GridSpec::symmetric_ball(double radius, std::size_t per_axis) {
  return GridSpec{GridKind::SymmetricBall, {-radius, -radius}, {radius, radius},
                  {per_axis, per_axis}};
}

namespace {

void check_distinct(const PointSet& pts) {
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    auto pa = pts[a];
    auto pb = pts[b];
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t k = 1; k < order.size(); ++k) {
    auto pa = pts[order[k - 1]];
    auto pb = pts[order[k]];
    if (std::equal(pa.begin(), pa.end(), pb.begin())) {
      throw InputError("duplicate grid point at index " + std::to_string(order[k]));
    }
  }
}

// Midpoints of n cells on [-h, h], mirrored so that c[n-1-k] == -c[k] exactly.
std::vector<double> symmetric_axis(double h, std::size_t n) {
  const double width = 2.0 * h / static_cast<double>(n);
  std::vector<double> c(n);
  for (std::size_t k = n / 2; k < n; ++k) {
    c[k] = (static_cast<double>(k) + 0.5 - static_cast<double>(n) / 2.0) * width;
  }
  for (std::size_t k = 0; k < n / 2; ++k) c[k] = -c[n - 1 - k];
  return c;
}

}  // namespace

DiscreteDomain::DiscreteDomain(PointSet points, double cell_measure, double mesh)
    : points_(std::move(points)), cell_measure_(cell_measure), mesh_(mesh) {
  if (points_.empty()) throw InputError("domain must contain at least one cell");
  if (!(cell_measure_ > 0.0) || !std::isfinite(cell_measure_)) {
    throw InputError("cell measure must be positive and finite");
  }
  for (double v : points_.coords()) {
    if (!std::isfinite(v)) throw InputError("non-finite grid coordinate");
  }
  check_distinct(points_);
  radius_ = points_.max_norm();
}

DiscreteDomain build_grid(const GridSpec& spec) {
  const std::size_t d = spec.cells.size();
  if (d == 0 || spec.lower.size() != d || spec.upper.size() != d) {
    throw InputError("grid spec: bounds and cell counts must have matching dimension");
  }
  if (spec.kind == GridKind::Interval && d != 1) {
    throw InputError("grid spec: an interval is one-dimensional");
  }
  if ((spec.kind == GridKind::SymmetricSquare || spec.kind == GridKind::SymmetricBall) &&
      d != 2) {
    throw InputError("grid spec: symmetric grids are two-dimensional");
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (spec.cells[k] == 0) throw InputError("grid spec: zero cells");
    if (!(spec.upper[k] > spec.lower[k]) || !std::isfinite(spec.upper[k] - spec.lower[k])) {
      throw InputError("grid spec: non-positive extent");
    }
  }

  std::vector<std::vector<double>> axes(d);
  double measure = 1.0;
  double mesh = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t n = spec.cells[k];
    const double width = (spec.upper[k] - spec.lower[k]) / static_cast<double>(n);
    measure *= width;
    mesh = std::max(mesh, width);
    if (spec.kind == GridKind::SymmetricSquare || spec.kind == GridKind::SymmetricBall) {
      if (spec.lower[k] != -spec.upper[k]) {
        throw InputError("grid spec: symmetric grids must be centred at the origin");
      }
      axes[k] = symmetric_axis(spec.upper[k], n);
    } else {
      axes[k].resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        axes[k][i] = spec.lower[k] + (static_cast<double>(i) + 0.5) * width;
      }
    }
  }
  if (spec.kind == GridKind::SymmetricSquare || spec.kind == GridKind::SymmetricBall) {
    if (spec.cells[0] != spec.cells[1] || spec.upper[0] != spec.upper[1]) {
      throw InputError("grid spec: symmetric grids need equal axes");
    }
  }

  std::vector<double> coords;
  std::vector<std::size_t> idx(d, 0);
  const double r2 = spec.upper[0] * spec.upper[0];
  while (true) {
    std::vector<double> p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = axes[k][idx[k]];
    if (spec.kind != GridKind::SymmetricBall || dot(p, p) <= r2) {
      coords.insert(coords.end(), p.begin(), p.end());
    }
    // Row-major increment (last axis fastest).
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++idx[k] < spec.cells[k]) break;
      idx[k] = 0;
      if (k == 0) {
        k = d + 1;
        break;
      }
    }
    if (k == d + 1) break;
  }
  if (coords.empty()) throw InputError("grid spec: no cell midpoint inside the ball");
  return DiscreteDomain(PointSet(d, std::move(coords)), measure, mesh);
}

SampledField::SampledField(const DiscreteDomain& dom, PointSet values)
    : values_(std::move(values)) {
  if (values_.size() != dom.size()) {
    throw InputError("field length " + std::to_string(values_.size()) +
                     " does not match domain size " + std::to_string(dom.size()));
  }
  if (values_.dim() != dom.dim()) throw InputError("field dimension does not match domain");
  for (double v : values_.coords()) {
    if (!std::isfinite(v)) throw InputError("non-finite field value");
  }
  radius_ = values_.max_norm();
}

SampledField sample_field(const DiscreteDomain& dom, const FieldRule& rule) {
  std::vector<double> coords;
  coords.reserve(dom.size() * dom.dim());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    Vec v = rule(dom.point(i));
    if (v.size() != dom.dim()) throw InputError("field rule returned a vector of wrong length");
    for (double c : v) {
      if (!std::isfinite(c)) {
        throw InputError("field rule is not finite at point " + std::to_string(i));
      }
    }
    coords.insert(coords.end(), v.begin(), v.end());
  }
  return SampledField(dom, PointSet(dom.dim(), std::move(coords)));
}

double ball_radius(const DiscreteDomain& dom, const SampledField& field, double margin) {
  if (!(margin >= 0.0)) throw InputError("radius margin must be non-negative");
  const double base = std::max(dom.radius(), field.radius());
  return std::max((1.0 + margin) * base, 1e-12);
}

DualPointSet::DualPointSet(PointSet points, double radius, double covering_radius)
    : points_(std::move(points)), radius_(radius), covering_radius_(covering_radius) {
  if (points_.empty()) throw InputError("dual point set is empty");
  for (std::size_t a = 0; a < points_.size(); ++a) {
    if (norm(points_[a]) > radius_ * (1.0 + 1e-12)) {
      throw InputError("dual point outside the ball B_R");
    }
  }
}

std::size_t DualPointSet::find(VecView p) const {
  for (std::size_t a = 0; a < points_.size(); ++a) {
    auto q = points_[a];
    if (std::equal(q.begin(), q.end(), p.begin(), p.end())) return a;
  }
  return points_.size();
}

namespace {

std::vector<Vec> sphere_points(std::size_t d, std::size_t m, double radius,
                               std::uint64_t seed) {
  std::vector<Vec> out;
  if (d == 1) {
    out.push_back({-radius});
    out.push_back({radius});
    return out;
  }
  if (d == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
      out.push_back({radius * std::cos(t), radius * std::sin(t)});
    }
    return out;
  }
  if (d == 3) {
    // Fibonacci lattice.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < m; ++k) {
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(m);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * static_cast<double>(k);
      out.push_back({radius * r * std::cos(t), radius * r * std::sin(t), radius * z});
    }
    return out;
  }
  std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
  std::normal_distribution<double> gauss;
  for (std::size_t k = 0; k < m; ++k) {
    Vec v(d);
    double n2 = 0.0;
    while (n2 == 0.0) {
      for (auto& c : v) c = gauss(rng);
      n2 = dot(v, v);
    }
    const double s = radius / std::sqrt(n2);
    for (auto& c : v) c *= s;
    out.push_back(std::move(v));
  }
  return out;
}

double covering_radius(const PointSet& pts, double radius, std::uint64_t seed) {
  const std::size_t d = pts.dim();
  if (d == 1) {
    std::vector<double> s(pts.coords());
    std::sort(s.begin(), s.end());
    double cov = std::max(s.front() + radius, radius - s.back());
    for (std::size_t k = 1; k < s.size(); ++k) cov = std::max(cov, 0.5 * (s[k] - s[k - 1]));
    return std::max(cov, 0.0);
  }
  std::mt19937_64 rng(seed ^ 0xc07e5ULL);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double cov = 0.0;
  const std::size_t probes = 4096;
  Vec x(d);
  for (std::size_t t = 0; t < probes; ++t) {
    double n2 = 0.0;
    while (n2 == 0.0) {
      for (auto& c : x) c = gauss(rng);
      n2 = dot(x, x);
    }
    // Half the probes on the sphere (where gaps are widest), half uniform in the ball.
    const double r = (t % 2 == 0) ? radius : radius * std::pow(unif(rng), 1.0 / static_cast<double>(d));
    const double s = r / std::sqrt(n2);
    for (auto& c : x) c *= s;
    double best = INFINITY;
    for (std::size_t a = 0; a < pts.size(); ++a) best = std::min(best, squared_distance(x, pts[a]));
    cov = std::max(cov, std::sqrt(best));
  }
  return cov;
}

}  // namespace

DualPointSet make_dual_point_set(const DiscreteDomain& dom, const SampledField& field,
                                 double radius, std::size_t sphere_samples,
                                 std::uint64_t seed) {
  const std::size_t d = dom.dim();
  if (field.radius() > radius || dom.radius() > radius) {
    throw InputError("ball radius must cover the domain and the field values");
  }
  const std::size_t m = sphere_samples == 0 ? 64 * d : sphere_samples;
  std::set<Vec> seen;
  std::vector<double> coords;
  auto add = [&](Vec v) {
    if (seen.insert(v).second) coords.insert(coords.end(), v.begin(), v.end());
  };
  add(Vec(d, 0.0));
  for (std::size_t i = 0; i < field.size(); ++i) {
    auto u = field[i];
    add(Vec(u.begin(), u.end()));
  }
  for (auto& v : sphere_points(d, m, radius, seed)) add(std::move(v));
  PointSet pts(d, std::move(coords));
  const double cov = covering_radius(pts, radius, seed);
  return DualPointSet(std::move(pts), radius, cov);
}

AntiSymmetricKernel::AntiSymmetricKernel(std::size_t n)
    : n_(n), upper_(n < 2 ? 0 : n * (n - 1) / 2, 0.0) {}

AntiSymmetricKernel::AntiSymmetricKernel(std::size_t n, std::vector<double> upper)
    : n_(n), upper_(std::move(upper)) {
  if (upper_.size() != (n < 2 ? 0 : n * (n - 1) / 2)) {
    throw InputError("kernel storage does not match its size");
  }
  for (double v : upper_) {
    if (!std::isfinite(v)) throw InputError("non-finite kernel entry");
  }
}

void AntiSymmetricKernel::set(std::size_t i, std::size_t j, double value) {
  if (i == j) throw InputError("the kernel diagonal is identically zero");
  if (i < j) {
    upper_[slot(i, j)] = value;
  } else {
    upper_[slot(j, i)] = -value;
  }
}

AntiSymmetricKernel make_kernel(const DiscreteDomain& dom, const PairRule& H) {
  const std::size_t n = dom.size();
  AntiSymmetricKernel K(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = H(dom.point(i), dom.point(j));
      const double b = H(dom.point(j), dom.point(i));
      const double v = 0.5 * (a - b);
      if (!std::isfinite(v)) {
        throw InputError("kernel rule is not finite at pair (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
      }
      K.set(i, j, v);
    }
  }
  return K;
}

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
  std::vector<bool> hit(map_.size(), false);
  for (std::size_t v : map_) {
    if (v >= map_.size() || hit[v]) throw InputError("not a permutation");
    hit[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = i;
  return Permutation(std::move(m));
}

bool compose_check(const Permutation& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[s[i]] != i) return false;
  }
  return true;
}

Involution::Involution(Permutation p) : perm_(std::move(p)) {
  if (!compose_check(perm_)) throw InputError("permutation is not an involution");
}

Involution Involution::identity(std::size_t n) { return Involution(Permutation::identity(n)); }

Involution Involution::reversal(std::size_t n) {
  std::vector<std::size_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = n - 1 - i;
  return Involution(std::move(m));
}

Involution Involution::from_pairs(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<std::size_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = i;
  std::vector<bool> used(n, false);
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n || a == b || used[a] || used[b]) {
      throw InputError("pairs do not form a matching");
    }
    used[a] = used[b] = true;
    m[a] = b;
    m[b] = a;
  }
  return Involution(std::move(m));
}

std::size_t Involution::fixed_points() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < size(); ++i) c += (perm_[i] == i);
  return c;
}

Permutation rotation_permutation(const DiscreteDomain& dom) {
  if (dom.dim() != 2) throw InputError("rotation map needs a two-dimensional grid");
  std::map<std::pair<double, double>, std::size_t> index;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    index[{dom.point(i)[0], dom.point(i)[1]}] = i;
  }
  std::vector<std::size_t> m(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    auto p = dom.point(i);
    auto it = index.find({p[1], -p[0]});
    if (it == index.end()) throw InputError("grid is not closed under the rotation map");
    m[i] = it->second;
  }
  return Permutation(std::move(m));
}

Permutation permutation_from_map(const DiscreteDomain& dom, const FieldRule& map, double tol) {
  std::vector<std::size_t> m(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    Vec img = map(dom.point(i));
    std::size_t best = dom.size();
    double best_d = INFINITY;
    for (std::size_t j = 0; j < dom.size(); ++j) {
      const double dd = squared_distance(img, dom.point(j));
      if (dd < best_d) {
        best_d = dd;
        best = j;
      }
    }
    if (std::sqrt(best_d) > tol) {
      throw InputError("map sends grid point " + std::to_string(i) + " off the grid");
    }
    m[i] = best;
  }
  return Permutation(std::move(m));
}

}  // namespace selfdual
