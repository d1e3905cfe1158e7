#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "selfdual/error.hpp"
#include "selfdual/io.hpp"

using namespace selfdual;
using testing_support::kPi;

TEST_SUITE("domain") {

TEST_CASE("interval midpoints") {
  const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, kPi, 4));
  REQUIRE(dom.size() == 4);
  const double expect[] = {kPi / 8, 3 * kPi / 8, 5 * kPi / 8, 7 * kPi / 8};
  for (std::size_t i = 0; i < 4; ++i) CHECK(dom.point(i)[0] == doctest::Approx(expect[i]).epsilon(1e-15));
  CHECK(dom.cell_measure() == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(dom.radius() == doctest::Approx(7 * kPi / 8));

  const DiscreteDomain one = build_grid(GridSpec::interval(0.0, 1.0, 1));
  CHECK(one.size() == 1);
  CHECK(one.point(0)[0] == 0.5);
  CHECK(one.cell_measure() == 1.0);
}

TEST_CASE("symmetric square is closed under the rotation") {
  const DiscreteDomain dom = build_grid(GridSpec::symmetric_square(1.0, 4));
  REQUIRE(dom.size() == 16);
  const Permutation rot = rotation_permutation(dom);
  for (std::size_t i = 0; i < 16; ++i) {
    const VecView x = dom.point(i);
    const VecView y = dom.point(rot[i]);
    CHECK(y[0] == doctest::Approx(x[1]));
    CHECK(y[1] == doctest::Approx(-x[0]));
  }
  // x -> -x as well
  const Permutation neg = permutation_from_map(dom, [](VecView x) { return Vec{-x[0], -x[1]}; });
  CHECK(compose_check(neg));
  CHECK(dom.cell_measure() == doctest::Approx(0.25));
}

TEST_CASE("symmetric ball keeps only cells inside the disk") {
  const DiscreteDomain dom = build_grid(GridSpec::symmetric_ball(1.0, 8));
  CHECK(dom.size() < 64);
  for (std::size_t i = 0; i < dom.size(); ++i) CHECK(norm(dom.point(i)) <= 1.0);
  CHECK_NOTHROW(rotation_permutation(dom));
}

TEST_CASE("grid spec errors") {
  CHECK_THROWS_AS(build_grid(GridSpec::interval(0.0, 1.0, 0)), InputError);
  CHECK_THROWS_AS(build_grid(GridSpec::interval(1.0, 1.0, 4)), InputError);
  CHECK_THROWS_AS(build_grid(GridSpec::box({0.0, 0.0}, {1.0, -1.0}, {2, 2})), InputError);
  CHECK_THROWS_AS(DiscreteDomain(PointSet(1, {0.5, 0.5}), 0.5, 0.5), InputError);
}

TEST_CASE("sample_field") {
  const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, 1.0, 2));
  const SampledField f = sample_field(dom, [](VecView x) { return Vec{x[0]}; });
  CHECK(f[0][0] == 0.25);
  CHECK(f[1][0] == 0.75);
  CHECK(f.radius() == 0.75);

  const DiscreteDomain single = DiscreteDomain(PointSet(1, {kPi / 2}), 1.0, 1.0);
  const SampledField s =
      sample_field(single, [](VecView x) { return Vec{std::sin(x[0]) + x[0] * std::cos(x[0])}; });
  CHECK(s[0][0] == doctest::Approx(1.0).epsilon(1e-15));

  const DiscreteDomain q = DiscreteDomain(PointSet(1, {0.75}), 1.0, 1.0);
  const SampledField t =
      sample_field(q, [](VecView x) { return Vec{x[0] <= 0.5 ? 2 * x[0] : 3 - 2 * x[0]}; });
  CHECK(t[0][0] == 1.5);

  CHECK_THROWS_AS(sample_field(dom, [](VecView) { return Vec{std::nan("")}; }), InputError);
}

TEST_CASE("make_kernel") {
  const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, kPi, 16));
  const AntiSymmetricKernel K = make_kernel(
      dom, [](VecView x, VecView y) { return x[0] * std::sin(y[0]) - y[0] * std::sin(x[0]); });
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(K(i, i) == 0.0);
    for (std::size_t j = 0; j < 16; ++j) CHECK(K(i, j) + K(j, i) == 0.0);
  }
  const AntiSymmetricKernel C = make_kernel(dom, [](VecView, VecView) { return 3.5; });
  for (double v : C.upper()) CHECK(v == 0.0);
  const AntiSymmetricKernel F =
      make_kernel(dom, [](VecView x, VecView y) { return x[0] * x[0] - y[0] * y[0]; });
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      const double xi = dom.point(i)[0], xj = dom.point(j)[0];
      CHECK(F(i, j) == doctest::Approx(xi * xi - xj * xj).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(make_kernel(dom, [](VecView x, VecView) { return 1.0 / (x[0] - x[0]); }),
                  InputError);
}

TEST_CASE("compose_check and involution constructors") {
  CHECK(compose_check(Permutation::identity(5)));
  CHECK(compose_check(Involution::reversal(6).permutation()));
  CHECK_FALSE(compose_check(Permutation({1, 2, 0})));
  CHECK_THROWS_AS(Involution(Permutation({1, 2, 0})), InputError);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), InputError);
  const Involution s = Involution::from_pairs(5, {{0, 3}, {1, 4}});
  CHECK(s.map() == std::vector<std::size_t>{3, 4, 2, 0, 1});
  CHECK(s.fixed_points() == 1);
}

TEST_CASE("permutations preserve measure exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 64;
    std::vector<double> f(n);
    for (double& v : f) v = U(rng);
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    // sums of the same multiset in sorted order are bit-identical
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = f[p[i]];
      b[i] = f[i];
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("ball radius and dual point set") {
  const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, 1.0, 8));
  const SampledField f = sample_field(dom, [](VecView x) { return Vec{2.0 * x[0]}; });
  const double R = ball_radius(dom, f);
  CHECK(R == doctest::Approx(1.05 * f.radius()));
  CHECK(R >= dom.radius());
  const DualPointSet pset = make_dual_point_set(dom, f, R);
  CHECK(pset.find(Vec{0.0}) < pset.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(pset.find(f[i]) < pset.size());
  double far = 0.0;
  for (std::size_t a = 0; a < pset.size(); ++a) {
    CHECK(norm(pset[a]) <= R * (1 + 1e-15));
    far = std::max(far, norm(pset[a]));
  }
  CHECK(far >= 0.99 * R);

  const DiscreteDomain sq = build_grid(GridSpec::symmetric_square(1.0, 4));
  const SampledField g = sample_field(sq, [](VecView x) { return Vec{x[1], x[0]}; });
  const DualPointSet p2 = make_dual_point_set(sq, g, ball_radius(sq, g), 0, 3);
  CHECK(p2.size() >= 1 + 64 * 2);
  CHECK(p2.covering_radius() > 0.0);
}

TEST_CASE("grid spec json and field csv round trip") {
  const GridSpec spec = GridSpec::box({0.0, -1.0}, {1.0, 1.0}, {3, 2});
  const GridSpec back = grid_spec_from_json(grid_spec_to_json(spec));
  CHECK(back == spec);
  CHECK_THROWS_AS(grid_spec_from_json(nlohmann::json::parse(
                      R"({"kind":"interval","bounds":[0,1],"cells":4,"extra":1})")),
                  InputError);
  const GridSpec iv =
      grid_spec_from_json(nlohmann::json::parse(R"({"kind":"interval","bounds":[0,1],"cells":4})"));
  CHECK(iv == GridSpec::interval(0.0, 1.0, 4));

  const DiscreteDomain dom = build_grid(spec);
  const SampledField f = sample_field(dom, [](VecView x) { return Vec{x[0] + 1, x[1] * 2}; });
  std::stringstream ss;
  write_field_csv(ss, dom, f);
  const SampledField g = read_field_csv(ss, dom);
  CHECK(g.values() == f.values());

  std::stringstream bad("x0,x1,u0,u1\n0,0,1,1\n");
  CHECK_THROWS_AS(read_field_csv(bad, dom), InputError);
}

}  // TEST_SUITE
