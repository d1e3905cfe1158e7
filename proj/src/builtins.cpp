#include "selfdual/builtins.hpp"

#include <cmath>
#include <numbers>

#include "selfdual/error.hpp"

namespace selfdual {

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"sincos",   "tent",      "matrix",
                                              "gradskew", "rotationJ", "monotone1d"};
  return names;
}

Vec rotate_j(VecView x) { return {-x[1], x[0]}; }

Involution half_shift(std::size_t n) {
  if (n % 2 != 0) throw InputError("half shift needs an even cell count");
  std::vector<std::size_t> map(n);
  for (std::size_t i = 0; i < n; ++i) map[i] = i < n / 2 ? i + n / 2 : i - n / 2;
  return Involution(map);
}

namespace {

std::size_t per_axis(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(double(n)))));
}

double tent_h(double x, double y) {
  const bool xl = x <= 0.5;
  const bool yl = y <= 0.5;
  if (xl && !yl) return -2.0 * x * y + 2.0 * x - y - 0.5;
  if (!xl && yl) return 2.0 * x * y - 2.0 * y + x + 0.5;
  return x - y;
}

}  // namespace

Builtin builtin_field(const std::string& name, std::size_t n, const BuiltinParams& params) {
  if (n == 0) throw InputError("cell count must be positive");
  Builtin b;
  b.name = name;
  const double h = params.half_width;
  if (name == "sincos") {
    b.grid = GridSpec::interval(0.0, std::numbers::pi, n);
    b.field = [](VecView x) { return Vec{std::sin(x[0]) + x[0] * std::cos(x[0])}; };
    b.hamiltonian = [](VecView x, VecView y) {
      return x[0] * std::sin(y[0]) - y[0] * std::sin(x[0]);
    };
    b.involution = [](VecView x) { return Vec{std::numbers::pi - x[0]}; };
  } else if (name == "tent") {
    b.grid = GridSpec::interval(0.0, 1.0, n);
    b.field = [](VecView x) { return Vec{x[0] <= 0.5 ? 2.0 * x[0] : 3.0 - 2.0 * x[0]}; };
    b.hamiltonian = [](VecView x, VecView y) { return tent_h(x[0], y[0]); };
    b.involution = [](VecView x) { return Vec{1.0 - x[0]}; };
  } else if (name == "matrix") {
    if (params.matrix.size() != 4) throw InputError("matrix builtin needs a 2x2 matrix");
    const auto A = params.matrix;
    b.grid = GridSpec::symmetric_square(h, per_axis(n));
    b.field = [A](VecView x) {
      return Vec{A[0] * x[0] + A[1] * x[1], A[2] * x[0] + A[3] * x[1]};
    };
    // Only A = [[0,1],[0,0]] has the closed form R = I/2, S = swap used below.
    if (A == std::vector<double>{0.0, 1.0, 0.0, 0.0}) {
      b.hamiltonian = [](VecView x, VecView y) {
        // 1/2 <Rx,x> - 1/2 <Ry,y> - <A_a x, y>, R = I/2, A_a = [[0,1/2],[-1/2,0]]
        const double q = 0.25 * (x[0] * x[0] + x[1] * x[1]) - 0.25 * (y[0] * y[0] + y[1] * y[1]);
        const double ax0 = 0.5 * x[1];
        const double ax1 = -0.5 * x[0];
        return q - (ax0 * y[0] + ax1 * y[1]);
      };
      b.involution = [](VecView x) { return Vec{x[1], x[0]}; };
    }
  } else if (name == "gradskew") {
    const double a = params.skew;
    b.grid = GridSpec::symmetric_square(h, per_axis(n));
    b.field = [a](VecView x) { return Vec{2.0 * x[0] - a * x[1], 2.0 * x[1] + a * x[0]}; };
    b.hamiltonian = [a](VecView x, VecView y) {
      // phi(x) - phi(y) - <a J x, y>
      return (x[0] * x[0] + x[1] * x[1]) - (y[0] * y[0] + y[1] * y[1]) -
             a * (-x[1] * y[0] + x[0] * y[1]);
    };
    b.involution = [](VecView x) { return Vec(x.begin(), x.end()); };
  } else if (name == "rotationJ") {
    b.grid = GridSpec::symmetric_square(h, per_axis(n));
    b.field = [](VecView x) { return rotate_j(x); };
  } else if (name == "monotone1d") {
    b.grid = GridSpec::interval(0.0, 1.0, n);
    b.field = [](VecView x) { return Vec{x[0]}; };
    b.hamiltonian = [](VecView x, VecView y) { return 0.5 * x[0] * x[0] - 0.5 * y[0] * y[0]; };
    b.involution = [](VecView x) { return Vec(x.begin(), x.end()); };
  } else {
    throw InputError("unknown builtin '" + name + "'");
  }
  return b;
}

}  // namespace selfdual
