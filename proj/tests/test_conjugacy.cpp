#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "selfdual/builtins.hpp"
#include "selfdual/conjugacy.hpp"

using namespace selfdual;
using testing_support::kPi;

namespace {

struct SinCos {
  DiscreteDomain dom;
  SampledField field;
  AntiSymmetricKernel K;
  DualPointSet pset;
};

SinCos sincos_setup(std::size_t n) {
  const Builtin b = builtin_field("sincos", n);
  DiscreteDomain dom = build_grid(b.grid);
  SampledField field = sample_field(dom, b.field);
  AntiSymmetricKernel K = make_kernel(dom, *b.hamiltonian);
  DualPointSet pset = make_dual_point_set(dom, field, ball_radius(dom, field));
  return {std::move(dom), std::move(field), std::move(K), std::move(pset)};
}

}  // namespace

TEST_SUITE("conjugacy") {

TEST_CASE("l_of_h basics") {
  const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, 1.0, 5));
  const AntiSymmetricKernel zero(5);
  const LagrangianValue v = l_of_h(zero, dom, 2, Vec{-2.0});
  CHECK(v.value == doctest::Approx(-0.2));
  CHECK(v.argmax == 0);
  const LagrangianValue w = l_of_h(zero, dom, 2, Vec{0.0});
  CHECK(w.argmax == 0);  // all tie, smallest index

  const DiscreteDomain one(PointSet(1, {0.5}), 1.0, 1.0);
  const AntiSymmetricKernel k1(1);
  CHECK(l_of_h(k1, one, 0, Vec{3.0}).value == 1.5);
}

TEST_CASE("l_of_h on the sincos kernel picks the reflection") {
  const SinCos s = sincos_setup(64);
  for (std::size_t i : {10u, 31u, 32u, 50u}) {
    const LagrangianValue v = l_of_h(s.K, s.dom, i, s.field[i]);
    CHECK(v.argmax == 63 - i);
  }
}

TEST_CASE("restricted dual and bidual inequalities") {
  const SinCos s = sincos_setup(32);
  const RestrictedDual lstar = restricted_dual(s.K, s.dom, s.pset);
  const double tol = regularization_tolerance(s.pset);
  for (std::size_t a = 0; a < s.pset.size(); ++a) {
    for (std::size_t i = 0; i < s.dom.size(); ++i) {
      CHECK(lstar(a, i) <= l_of_h(s.K, s.dom, i, s.pset[a]).value + 1e-9);
    }
  }
  for (std::size_t i = 0; i < s.dom.size(); ++i) {
    const double b = restricted_bidual(lstar, s.dom, s.pset, s.dom.point(i), s.field[i]);
    CHECK(b <= l_of_h(s.K, s.dom, i, s.field[i]).value + 1e-6);
  }
  CHECK(tol > 0.0);

  // definition of the max: L* dominates every sampled affine piece
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> A(0, s.pset.size() - 1), I(0, s.dom.size() - 1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t a = A(rng), b = A(rng), i = I(rng), j = I(rng);
    const double piece = dot(s.dom.point(j), s.pset[b]) + dot(s.pset[a], s.dom.point(i)) -
                         l_of_h(s.K, s.dom, i, s.pset[b]).value;
    CHECK(lstar(a, j) >= piece - 1e-12);
  }
}

TEST_CASE("trivial single-point conjugates") {
  const DiscreteDomain one(PointSet(1, {0.5}), 1.0, 1.0);
  const AntiSymmetricKernel K(1);
  const DualPointSet pset(PointSet(1, {0.0}), 1.0, 1.0);
  const RestrictedDual lstar = restricted_dual(K, one, pset);
  CHECK(lstar(0, 0) == 0.0);
  CHECK(restricted_bidual(lstar, one, pset, Vec{0.5}, Vec{0.0}) == 0.0);
  const RegularHamiltonian h(one, pset, lstar);
  CHECK(h.ball(Vec{0.3}, Vec{-2.0}) == 0.0);
  CHECK(h(Vec{0.3}, Vec{-2.0}) == 0.0);
}

TEST_CASE("bounds and lemma inequalities on random probes") {
  const SinCos s = sincos_setup(32);
  const RegularHamiltonian h = regularize(s.K, s.dom, s.pset);
  const double R = s.pset.radius();
  const double tol = regularization_tolerance(s.pset);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-R, R);
  for (int t = 0; t < 200; ++t) {
    const Vec x{U(rng)}, y{U(rng)};
    CHECK(std::abs(h.bidual(x, y)) <= R * std::abs(x[0]) + R * std::abs(y[0]) + 3 * R * R);
    CHECK(std::abs(h.ball(x, y)) <= R * std::abs(x[0]) + R * std::abs(y[0]) + 4 * R * R);
    CHECK(std::abs(h(x, y)) <= R * std::abs(x[0]) + R * std::abs(y[0]) + 4 * R * R);
  }
  for (std::size_t i = 0; i < s.dom.size(); ++i) {
    for (std::size_t j = 0; j < s.dom.size(); ++j) {
      CHECK(h.ball(s.dom.point(i), s.dom.point(j)) + h.ball(s.dom.point(j), s.dom.point(i)) <=
            tol);
    }
  }
}

TEST_CASE("regularized Hamiltonian") {
  const SinCos s = sincos_setup(64);
  const RegularHamiltonian h = regularize(s.K, s.dom, s.pset);
  const double R = s.pset.radius();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-R, R);
  double worst_lip = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Vec a{U(rng)}, b{U(rng)};
    CHECK(h(a, b) == -h(b, a));
  }
  for (int t = 0; t < 300; ++t) {
    const Vec a{U(rng)}, a2{U(rng)}, b{U(rng)};
    if (a[0] == a2[0]) continue;
    worst_lip = std::max(worst_lip, std::abs(h(a, b) - h(a2, b)) / std::abs(a[0] - a2[0]));
  }
  CHECK(worst_lip <= 4.0 * 1.0 * R + 1e-9);

  double lreg = 0.0, lh = 0.0;
  const AntiSymmetricKernel Kr = h.grid_kernel();
  for (std::size_t i = 0; i < s.dom.size(); ++i) {
    lreg += l_of_h(Kr, s.dom, i, s.field[i]).value;
    lh += l_of_h(s.K, s.dom, i, s.field[i]).value;
  }
  const double mu = s.dom.cell_measure();
  CHECK(lreg * mu <= lh * mu + 1e-6);
}

TEST_CASE("finite differences") {
  const SinCos s = sincos_setup(64);
  const RegularHamiltonian h = regularize(s.K, s.dom, s.pset);
  const double hstep = 1e-4 * s.pset.radius();
  const double x0 = kPi / 4;
  const Vec g1 = grad1(h.rule(), Vec{kPi - x0}, Vec{x0}, hstep);
  CHECK(std::abs(g1[0] - (std::sin(x0) + x0 * std::cos(x0))) <= 10 * (hstep + s.dom.mesh()));

  // closed-form H: grad2 against the symbolic derivative x cos y - sin x
  const PairRule H = [](VecView x, VecView y) {
    return x[0] * std::sin(y[0]) - y[0] * std::sin(x[0]);
  };
  const Vec g2 = grad2(H, Vec{kPi - x0}, Vec{x0}, 1e-5);
  CHECK(g2[0] == doctest::Approx((kPi - x0) * std::cos(x0) - std::sin(kPi - x0)).epsilon(1e-8));

  // anti-symmetry link on H_reg
  const Vec p{0.7}, q{2.1};
  const Vec a = grad2(h.rule(), p, q, hstep);
  const Vec b = grad1(h.rule(), q, p, hstep);
  CHECK(a[0] == -b[0]);

  // quadratic kernel: grad1 ~ x, grad2 ~ -y
  const DiscreteDomain fine = build_grid(GridSpec::interval(-1.0, 1.0, 64));
  const SampledField id = sample_field(fine, [](VecView x) { return Vec{x[0]}; });
  const AntiSymmetricKernel Kq =
      make_kernel(fine, [](VecView x, VecView y) { return 0.5 * x[0] * x[0] - 0.5 * y[0] * y[0]; });
  const DualPointSet pset = make_dual_point_set(fine, id, ball_radius(fine, id));
  const RegularHamiltonian hq = regularize(Kq, fine, pset);
  const double hs = 1e-4 * pset.radius();
  for (double x : {-0.5, 0.1, 0.6}) {
    CHECK(std::abs(grad1(hq.rule(), Vec{x}, Vec{0.2}, hs)[0] - x) <= 10 * (hs + fine.mesh()));
    CHECK(std::abs(grad2(hq.rule(), Vec{0.2}, Vec{x}, hs)[0] + x) <= 10 * (hs + fine.mesh()));
  }
}

TEST_CASE("convexity in x is measured") {
  // H_reg = (H_L(x,y) - H_L(y,x))/2: the first term is convex in x, the
  // second is a min over affine pieces, so exact convexity is not guaranteed
  // with a finite point set. Record the worst defect relative to tol_reg.
  const SinCos s = sincos_setup(32);
  const RegularHamiltonian h = regularize(s.K, s.dom, s.pset);
  const double R = s.pset.radius();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, kPi), T(0.0, 1.0);
  double worst_ball = 0.0, worst_reg = 0.0;
  for (int k = 0; k < 500; ++k) {
    const Vec x1{U(rng)}, x2{U(rng)}, y{U(rng)};
    const double t = T(rng);
    const Vec xm{t * x1[0] + (1 - t) * x2[0]};
    worst_ball = std::max(worst_ball, h.ball(xm, y) - (t * h.ball(x1, y) + (1 - t) * h.ball(x2, y)));
    worst_reg = std::max(worst_reg, h(xm, y) - (t * h(x1, y) + (1 - t) * h(x2, y)));
  }
  CHECK(worst_ball <= 1e-12 * R * R);
  MESSAGE("H_reg convexity defect in x: " << worst_reg
                                            << " (tol_reg = " << regularization_tolerance(s.pset) << ")");
  CHECK(worst_reg <= regularization_tolerance(s.pset));
}

TEST_CASE("one-sided derivative symmetry on a smooth rule") {
  const PairRule H = [](VecView x, VecView y) { return x[0] * x[0] * y[0]; };
  const Vec x{0.4}, y{1.5};
  const double dp = one_sided_derivative(H, x, y, Vec{1.0}, 1e-6);
  const double dm = one_sided_derivative(H, x, y, Vec{-1.0}, 1e-6);
  CHECK(std::abs(dp + dm) <= 1e-5);
  CHECK(dp == doctest::Approx(2 * 0.4 * 1.5).epsilon(1e-5));
}

}  // TEST_SUITE
