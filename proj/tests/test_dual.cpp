#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "selfdual/assignment.hpp"
#include "selfdual/builtins.hpp"
#include "selfdual/dual_solver.hpp"
#include "selfdual/error.hpp"
#include "selfdual/matching.hpp"

using namespace selfdual;
using testing_support::random_instance;
using testing_support::random_involution;

namespace {

DiscreteDomain line(std::vector<double> xs) {
  const double n = static_cast<double>(xs.size());
  return DiscreteDomain(PointSet(1, std::move(xs)), 1.0 / n, 1.0 / n);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("dual_solver") {

TEST_CASE("blossom matching against exhaustive search") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> W(-6, 10);
  std::bernoulli_distribution present(0.6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 9;
    std::vector<double> w(n * n, 0.0);
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!present(rng)) continue;
        const int v = 2 * W(rng);
        edges.push_back({i, j, static_cast<std::int64_t>(v)});
        w[i * n + j] = w[j * n + i] = v;
      }
    }
    // absent edges carry weight 0, which never beats leaving both unmatched
    const auto mate = max_weight_matching(n, edges);
    double got = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mate[i] != kUnmatched) {
        REQUIRE(mate[mate[i]] == i);
        if (mate[i] > i) got += w[i * n + mate[i]];
      }
    }
    CHECK(got == oracle::brute_matching(n, w));
  }
}

TEST_CASE("assignment potentials certify the optimum") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 7;
    std::vector<double> s(n * n);
    for (double& v : s) v = U(rng);
    const AssignmentResult a = max_assignment(n, s);
    double dual = 0.0;
    for (std::size_t i = 0; i < n; ++i) dual += a.row_potential[i] + a.col_potential[i];
    CHECK(a.value == doctest::Approx(dual).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(a.row_potential[i] + a.col_potential[j] >= s[i * n + j] - 1e-12);
      }
    }
  }
}

TEST_CASE("objectives") {
  const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, 1.0, 100));
  const SampledField id = sample_field(dom, [](VecView x) { return Vec{x[0]}; });
  const double n = 100;
  CHECK(dual_objective(dom, id, Involution::identity(100)) ==
        doctest::Approx((1 - 1 / (4 * n * n)) / 3).epsilon(1e-14));
  CHECK(dual_objective(dom, id, Involution::identity(100)) == doctest::Approx(0.333325));
  CHECK(distance_objective(dom, id, Involution::identity(100)) == 0.0);

  for (std::size_t m : {32u, 64u}) {
    const Builtin t = builtin_field("tent", m);
    const DiscreteDomain td = build_grid(t.grid);
    const SampledField tf = sample_field(td, t.field);
    const double refl = dual_objective(td, tf, Involution::reversal(m));
    const double shift = dual_objective(td, tf, half_shift(m));
    const double h2 = 1.0 / static_cast<double>(m * m);
    CHECK(std::abs(refl - 0.375) <= h2);
    CHECK(std::abs(shift - 0.375) <= h2);
  }
}

TEST_CASE("distance and dual objectives are linked") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(2 + trial % 12, 1 + trial % 3, rng);
    const Involution s = random_involution(inst.dom.size(), rng);
    double sq = 0.0;
    for (std::size_t i = 0; i < inst.dom.size(); ++i) {
      sq += dot(inst.field[i], inst.field[i]) + dot(inst.dom.point(i), inst.dom.point(i));
    }
    sq *= inst.dom.cell_measure();
    CHECK(distance_objective(inst.dom, inst.field, s) ==
          doctest::Approx(sq - 2 * dual_objective(inst.dom, inst.field, s)).epsilon(1e-12));
    const PairWeights w = build_weights(inst.dom, inst.field);
    CHECK(rel(matching_objective(w, inst.dom.cell_measure(), s),
              dual_objective(inst.dom, inst.field, s)) <= 1e-12);
  }

  // sincos reflection at N = 64
  const Builtin b = builtin_field("sincos", 64);
  const DiscreteDomain dom = build_grid(b.grid);
  const SampledField f = sample_field(dom, b.field);
  double sq = 0.0;
  for (std::size_t i = 0; i < 64; ++i) sq += f[i][0] * f[i][0] + dom.point(i)[0] * dom.point(i)[0];
  sq *= dom.cell_measure();
  const double dist = distance_objective(dom, f, Involution::reversal(64));
  CHECK(std::abs(dist - (sq - 2 * 3.14159265358979)) <= 0.02 * 2 * 3.14159265358979);
}

TEST_CASE("weights") {
  const DiscreteDomain d = line({0.0, 1.0});
  const SampledField a(d, PointSet(1, {1.0, 0.0}));
  const PairWeights wa = build_weights(d, a);
  CHECK(wa.diagonal()[0] == 0.0);
  CHECK(wa.diagonal()[1] == 0.0);
  CHECK(wa.W(0, 1) == 1.0);
  CHECK(wa.reduced(0, 1) == 1.0);
  CHECK(solve_matching(d, a).sigma.map() == std::vector<std::size_t>{1, 0});

  const SampledField b(d, PointSet(1, {0.0, 1.0}));
  const PairWeights wb = build_weights(d, b);
  CHECK(wb.diagonal()[1] == 1.0);
  CHECK(wb.W(0, 1) == 0.0);
  CHECK(wb.reduced(0, 1) == -1.0);
  CHECK(solve_matching(d, b).sigma == Involution::identity(2));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = random_instance(6, 2, rng);
    const PairWeights w = build_weights(inst.dom, inst.field);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) CHECK(w.W(i, j) == w.W(j, i));
    }
  }
}

TEST_CASE("brute force") {
  const DiscreteDomain one = line({0.3});
  const SampledField f1(one, PointSet(1, {2.0}));
  const DualSolution s1 = solve_brute(one, f1);
  CHECK(s1.sigma == Involution::identity(1));
  CHECK(s1.value == doctest::Approx(0.6));
  CHECK(involution_count(1) == 1);
  CHECK(involution_count(4) == 10);
  CHECK(involution_count(12) == 140152);
  for (std::size_t n = 0; n <= 12; ++n) CHECK(involution_count(n) == oracle::telephone(n));

  const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, 1.0, 8));
  const SampledField mono = sample_field(dom, [](VecView x) { return Vec{x[0] * x[0] + x[0]}; });
  CHECK(solve_brute(dom, mono).sigma == Involution::identity(8));

  const DiscreteDomain big = build_grid(GridSpec::interval(0.0, 1.0, 13));
  const SampledField fb = sample_field(big, [](VecView x) { return Vec{x[0]}; });
  CHECK_THROWS_AS(solve_brute(big, fb), PreconditionError);
}

TEST_CASE("brute force agrees with the enumeration oracle") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto inst = random_instance(n, 2, rng);
    double best = -1e300;
    std::vector<std::size_t> arg;
    oracle::for_each_involution(n, [&](const std::vector<std::size_t>& m) {
      const double v = dual_objective(inst.dom, inst.field, Involution(m));
      if (v > best) {
        best = v;
        arg = m;
      }
    });
    const DualSolution s = solve_brute(inst.dom, inst.field);
    CHECK(s.value == best);
    CHECK(s.optimality == Optimality::Exact);
  }
}

TEST_CASE("matching agrees with brute force") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto inst = random_instance(n, 1 + trial % 3, rng);
      const DualSolution a = solve_matching(inst.dom, inst.field);
      const DualSolution b = solve_brute(inst.dom, inst.field);
      CHECK(compose_check(a.sigma.permutation()));
      worst = std::max(worst, rel(a.value, b.value));
      CHECK(rel(dual_objective(inst.dom, inst.field, a.sigma), b.value) <= 1e-12);
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("matching on the builtins") {
  const Builtin b = builtin_field("sincos", 64);
  const DiscreteDomain dom = build_grid(b.grid);
  const SampledField f = sample_field(dom, b.field);
  const DualSolution s = solve_matching(dom, f);
  std::size_t refl = 0;
  for (std::size_t i = 0; i < 64; ++i) refl += s.sigma[i] == 63 - i;
  CHECK(refl >= 61);
  CHECK(std::abs(s.value - M_PI) <= 0.02 * M_PI);

  const Builtin g = builtin_field("gradskew", 64);
  const DiscreteDomain gd = build_grid(g.grid);
  const SampledField gf = sample_field(gd, g.field);
  CHECK(solve_matching(gd, gf).sigma == Involution::identity(gd.size()));
}

TEST_CASE("local refinement") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const auto inst = random_instance(n, 2, rng);
    const DualSolution opt = solve_brute(inst.dom, inst.field);
    const DualSolution same = refine_local(inst.dom, inst.field, opt.sigma, 1000);
    CHECK(same.value == opt.value);
    CHECK(same.optimality == Optimality::Heuristic);
    const Involution start = random_involution(n, rng);
    const double before = dual_objective(inst.dom, inst.field, start);
    CHECK(refine_local(inst.dom, inst.field, start, 1000).value >= before);
  }
  for (std::size_t n = 2; n <= 10; ++n) {
    const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, 1.0, n));
    const SampledField f = sample_field(dom, [](VecView x) { return Vec{x[0]}; });
    const DualSolution r = refine_local(dom, f, Involution::reversal(n), 1000);
    CHECK(r.sigma == solve_brute(dom, f).sigma);
    CHECK(r.sigma == Involution::identity(n));
  }
}

TEST_CASE("LP bound") {
  const DiscreteDomain one = line({0.5});
  const SampledField f1(one, PointSet(1, {3.0}));
  CHECK(lp_bound(one, f1) == 1.5);

  const DiscreteDomain dom = build_grid(GridSpec::interval(0.0, 1.0, 8));
  const SampledField id = sample_field(dom, [](VecView x) { return Vec{x[0]}; });
  double sq = 0.0;
  for (std::size_t i = 0; i < 8; ++i) sq += dom.point(i)[0] * dom.point(i)[0];
  CHECK(lp_bound(dom, id) == doctest::Approx(sq / 8).epsilon(1e-14));

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto inst = random_instance(n, 1 + trial % 2, rng);
    std::vector<double> c(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] = dot(inst.field[i], inst.dom.point(j));
    }
    const double simplex = oracle::symmetric_lp(n, c) * inst.dom.cell_measure();
    const double lp = lp_bound(inst.dom, inst.field);
    CHECK(rel(lp, simplex) <= 1e-9);
    CHECK(lp >= solve_brute(inst.dom, inst.field).value - 1e-12);
  }
  CHECK_THROWS_AS(lp_bound(dom, id, 4), PreconditionError);
}

TEST_CASE("solve_dual dispatch") {
  const DiscreteDomain one = line({0.5});
  const SampledField f1(one, PointSet(1, {3.0}));
  CHECK(solve_dual(one, f1).sigma == Involution::identity(1));

  std::mt19937_64 rng(5);
  const auto inst = random_instance(9, 2, rng);
  DualConfig cfg;
  const DualSolution a = solve_dual(inst.dom, inst.field, cfg);
  CHECK(a.method == DualMethod::Matching);
  REQUIRE(a.bound);
  CHECK(*a.bound >= a.value - 1e-12);
  cfg.choice = DualChoice::Brute;
  CHECK(solve_dual(inst.dom, inst.field, cfg).method == DualMethod::Brute);
  cfg.choice = DualChoice::Local;
  CHECK(solve_dual(inst.dom, inst.field, cfg).optimality == Optimality::Heuristic);
  cfg.choice = DualChoice::Auto;
  cfg.local_threshold = 4;
  CHECK(solve_dual(inst.dom, inst.field, cfg).method == DualMethod::Local);
  CHECK(parse_dual_choice("matching") == DualChoice::Matching);
  CHECK_THROWS_AS(parse_dual_choice("simplex"), InputError);
}

TEST_CASE("strict monotonicity forces the identity") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteDomain dom = build_grid(GridSpec::symmetric_square(1.0, 6));
    const double a = U(rng) * 3, c = 0.5 + std::abs(U(rng));
    const SampledField f = sample_field(dom, [&](VecView x) {
      return Vec{c * x[0] - a * x[1] + 0.1 * x[0] * x[0] * x[0], c * x[1] + a * x[0]};
    });
    const PairWeights w = build_weights(dom, f);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      for (std::size_t j = i + 1; j < dom.size(); ++j) CHECK(w.reduced(i, j) < 0.0);
    }
    CHECK(solve_matching(dom, f).sigma == Involution::identity(dom.size()));
  }
}

}  // TEST_SUITE
