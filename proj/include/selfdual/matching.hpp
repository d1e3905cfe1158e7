#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace selfdual {

struct WeightedEdge {
  std::size_t u;
  std::size_t v;
  std::int64_t weight;
};

constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

// Maximum-weight matching on a general graph (Edmonds' blossom algorithm with
// dual variables, O(n^3)). Cardinality is not maximized: vertices may stay
// unmatched when that does not lose weight. Weights must be even so that all
// dual updates stay integral. Returns mate[v] or kUnmatched.
std::vector<std::size_t> max_weight_matching(std::size_t n, const std::vector<WeightedEdge>& edges);

struct RealEdge {
  std::size_t u;
  std::size_t v;
  double weight;
};

// Real weights are scaled so that the largest magnitude maps to about 2^50,
// then rounded to even integers. Exact up to that rounding.
std::vector<std::size_t> max_weight_matching(std::size_t n, const std::vector<RealEdge>& edges);

}  // namespace selfdual
