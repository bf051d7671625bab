#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tancone/expr.hpp"
#include "tancone/setmodels.hpp"

using namespace tancone;

namespace {

Expr e2(std::string_view text) { return parse(text, 2); }

Expr e1(std::string_view text) { return parse(text, std::vector<std::string>{"s"}); }

// Distance to {(s, s^2) : s in [-2, 2]} by a fine sweep of the parameter.
double parabola_sweep(const Vec& x) {
  double best = INFINITY;
  const int N = 400000;
  for (int i = 0; i <= N; ++i) {
    const double s = -2.0 + 4.0 * i / N;
    best = std::min(best, std::hypot(x[0] - s, x[1] - s * s));
  }
  return best;
}

}  // namespace

TEST_CASE("half-plane and plane distances are exact") {
  const SetDesc half = benchmark_set("half-plane");
  const SetDesc plane = benchmark_set("plane");
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec x = oracle::random_vec(rng, 2, 3.0);
    const DistanceResult d = distance(half, x);
    CHECK(d.value == doctest::Approx(std::max(0.0, -x[0])).epsilon(1e-9));
    CHECK(vec::distance(d.nearest, x) == doctest::Approx(d.value).epsilon(1e-9));
    CHECK(distance(plane, x).value == 0.0);
  }
}

TEST_CASE("circle distance matches the radial formula") {
  const SetDesc circle = make_implicit(2, {e2("x1^2 + x2^2 - 1")}, {});
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x = oracle::random_vec(rng, 2, 2.0);
    const double r = vec::norm(x);
    if (r < 0.1) continue;
    const DistanceResult d = distance(circle, x);
    CHECK(std::abs(d.value - std::abs(r - 1.0)) <= 1e-8);
    CHECK(max_violation(std::get<ImplicitSet>(circle.model), d.nearest) <= 1e-10);
  }
}

TEST_CASE("parametric distance agrees with a parameter sweep") {
  const SetDesc parabola = benchmark_set("parabola");
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = oracle::random_vec(rng, 2, 1.5);
    const double ref = parabola_sweep(x);
    const double d = distance(parabola, x).value;
    // The sweep is an upper bound within 1e-5 of the truth.
    CHECK(d <= ref + 1e-12);
    CHECK(d >= ref - 1e-5);
  }
}

TEST_CASE("implicit and parametric cusp models agree") {
  const SetDesc param = benchmark_set("cusp");
  const SetDesc impl = benchmark_set("cusp-implicit");
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const Vec x{-1.0 + 0.1 * i, -1.0 + 0.1 * j};
      const double a = distance(param, x).value;
      const double b = distance(impl, x).value;
      CAPTURE(x[0]);
      CAPTURE(x[1]);
      CHECK(std::abs(a - b) <= 1e-4 * (1.0 + vec::norm(x)));
      // Both are upper bounds and the curve value is accurate, so the
      // implicit value may not fall below it.
      CHECK(b >= a - 1e-10 * (1.0 + vec::norm(x)));
    }
  }
  // Straight below the cusp point the nearest point is the origin.
  for (double t : {1e-2, 1e-4, 1e-6}) {
    const Vec x{0.0, -t};
    CHECK(distance(impl, x).value == doctest::Approx(t).epsilon(1e-6));
    CHECK(distance(param, x).value == doctest::Approx(t).epsilon(1e-6));
  }
}

TEST_CASE("distance is 1-Lipschitz") {
  const SetDesc sets[] = {benchmark_set("parabola"), benchmark_set("cusp"), benchmark_set("half-plane")};
  std::mt19937_64 rng(53);
  for (const SetDesc& q : sets) {
    for (int trial = 0; trial < 25; ++trial) {
      const Vec x = oracle::random_vec(rng, 2, 1.5);
      Vec y = x;
      const Vec step = oracle::random_vec(rng, 2, 0.2);
      for (std::size_t i = 0; i < 2; ++i) y[i] += step[i];
      const double gap = std::abs(distance(q, x).value - distance(q, y).value);
      CHECK(gap <= vec::distance(x, y) + 1e-9);
    }
  }
}

TEST_CASE("point clouds and unions") {
  const SetDesc cloud = make_point_cloud({{1.0, 1.0}, {-2.0, 0.0}});
  CHECK(distance(cloud, Vec{1.0, 2.0}).value == doctest::Approx(1.0));
  CHECK(distance(cloud, Vec{-2.0, 0.5}).value == doctest::Approx(0.5));
  CHECK(contains(cloud, Vec{1.0, 1.0}, 1e-12));
  CHECK_FALSE(contains(cloud, Vec{1.0, 1.1}, 1e-3));

  const SetDesc axes = make_union({make_implicit(2, {e2("x2")}, {}), make_implicit(2, {e2("x1")}, {})});
  CHECK(distance(axes, Vec{0.3, 0.5}).value == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(distance(axes, Vec{2.0, -0.1}).value == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(distance(axes, Vec{1e-6, 1e-6}).value == doctest::Approx(1e-6).epsilon(1e-6));

  const SetDesc empty = make_implicit(2, {e2("x1^2 + 1")}, {});
  CHECK_THROWS_AS(distance(empty, Vec{0.0, 0.0}), OracleFailure);
  const SetDesc mixed = make_union({empty, cloud});
  CHECK(distance(mixed, Vec{1.0, 2.0}).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(distance(make_union({empty}), Vec{0.0, 0.0}), OracleFailure);
}

TEST_CASE("constraint violation") {
  const SetDesc q = benchmark_set("cusp-implicit");
  const ImplicitSet& set = std::get<ImplicitSet>(q.model);
  CHECK(max_violation(set, Vec{1.0, 1.0}) == 0.0);
  CHECK(max_violation(set, Vec{-1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(max_violation(set, Vec{0.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("factories validate their input") {
  CHECK_THROWS_AS(make_implicit(0, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_implicit(2, {parse("x1", 1)}, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_parametric({e1("s")}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_parametric({}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_point_cloud({}), std::invalid_argument);
  CHECK_THROWS_AS(make_point_cloud({{1.0}, {1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_union({}), std::invalid_argument);
  CHECK_THROWS_AS(make_union({make_point_cloud({{1.0}}), make_point_cloud({{1.0, 2.0}})}), std::invalid_argument);
  CHECK_THROWS_AS(distance(benchmark_set("plane"), Vec{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(benchmark_set("torus"), std::invalid_argument);
  CHECK_THROWS_AS(contains(benchmark_set("plane"), Vec{0.0, 0.0}, 0.0), std::invalid_argument);
}
