#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "selfdual/domain.hpp"

namespace testing_support {

using namespace selfdual;

constexpr double kPi = 3.14159265358979323846;

// Random field in [-1, 1]^d on a random box grid with n cells.
struct Instance {
  DiscreteDomain dom;
  SampledField field;
};

inline Instance random_instance(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> coords(n * d);
  for (double& v : coords) v = U(rng);
  DiscreteDomain dom(PointSet(d, coords), 1.0 / static_cast<double>(n), 0.1);
  std::vector<double> vals(n * d);
  for (double& v : vals) v = U(rng);
  SampledField field(dom, PointSet(d, vals));
  return {std::move(dom), std::move(field)};
}

inline Involution random_involution(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution pair(0.6);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    if (pair(rng)) pairs.emplace_back(order[k], order[k + 1]);
  }
  return Involution::from_pairs(n, pairs);
}

inline AntiSymmetricKernel random_kernel(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> U(-scale, scale);
  std::vector<double> upper(n * (n - 1) / 2);
  for (double& v : upper) v = U(rng);
  return AntiSymmetricKernel(n, upper);
}

}  // namespace testing_support
