#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selfdual/domain.hpp"

namespace selfdual {

struct BuiltinParams {
  std::vector<double> matrix{0.0, 1.0, 0.0, 0.0};  // 2x2 row-major, for "matrix"
  double skew = 0.5;                               // a in u = grad phi + a J x
  double half_width = 1.0;                         // square [-h, h]^2 for 2-D builtins
};

struct Builtin {
  std::string name;
  GridSpec grid;
  FieldRule field;
  // Closed-form Hamiltonian with u(x) = grad_1 H(S x, x), when known.
  std::optional<PairRule> hamiltonian;
  // The matching involution as a point map, when known.
  std::optional<FieldRule> involution;
};

const std::vector<std::string>& builtin_names();

// n is the total cell count; 2-D builtins use round(sqrt(n)) cells per axis.
Builtin builtin_field(const std::string& name, std::size_t n, const BuiltinParams& params = {});

// x -> (-x_2, x_1)
Vec rotate_j(VecView x);

// i -> i + n/2 on the first half, i - n/2 on the second; n even.
Involution half_shift(std::size_t n);

}  // namespace selfdual
