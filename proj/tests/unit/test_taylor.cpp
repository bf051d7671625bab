#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tancone/expr.hpp"
#include "tancone/jet.hpp"
#include "tancone/taylor.hpp"

using namespace tancone;

namespace {

double tol(double v) { return 1e-9 * (1.0 + std::abs(v)); }

std::vector<Vec> expand(const std::vector<TensorArgument>& args) {
  std::vector<Vec> out;
  for (const TensorArgument& a : args) {
    for (int i = 0; i < a.multiplicity; ++i) out.push_back(a.vector);
  }
  return out;
}

}  // namespace

TEST_CASE("weighted multi-indices match brute force") {
  for (int len = 1; len <= 5; ++len) {
    for (int target = 0; target <= 8; ++target) {
      std::vector<MultiIndex> lib = enumerate_weighted_multiindices(len, target);
      std::vector<std::vector<int>> ref = oracle::brute_weighted(len, target);
      std::sort(ref.begin(), ref.end());
      CAPTURE(len);
      CAPTURE(target);
      CHECK(std::is_sorted(lib.begin(), lib.end()));
      CHECK(lib == ref);
    }
  }
}

TEST_CASE("partition counts") {
  const std::size_t expected[] = {1, 2, 3, 5, 7, 11, 15, 22};
  for (int s = 1; s <= 8; ++s) {
    CHECK(enumerate_multiindices(s).size() == expected[s - 1]);
    CHECK(oracle::brute_weighted(s, s).size() == expected[s - 1]);
  }
}

TEST_CASE("factorial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(12) == 479001600ULL);
  CHECK_THROWS_AS(factorial(13), std::out_of_range);
  CHECK_THROWS_AS(factorial(-1), std::out_of_range);
}

TEST_CASE("derivative tensors match exact polynomial derivatives") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const oracle::Poly p = oracle::random_poly(rng, n, 5, 6);
    DerivTensorQuery q{parse(p.text(), n), oracle::random_vec(rng, n), {}};
    const int groups = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int g = 0; g < groups; ++g) {
      q.arguments.push_back({oracle::random_vec(rng, n), std::uniform_int_distribution<int>(0, 2)(rng)});
    }
    const double ref = p.tensor(q.base, expand(q.arguments));
    CAPTURE(p.text());
    CHECK(std::abs(derivative_tensor(q) - ref) <= tol(ref));
  }
}

TEST_CASE("derivative tensors are symmetric in their arguments") {
  std::mt19937_64 rng(19);
  const Expr f = parse("sin(x1 * x2) * exp(x3) + x1^3 * x3", 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec base = oracle::random_vec(rng, 3);
    std::vector<Vec> v{oracle::random_vec(rng, 3), oracle::random_vec(rng, 3), oracle::random_vec(rng, 3)};
    std::vector<int> perm{0, 1, 2};
    double first = 0.0;
    bool have = false;
    do {
      DerivTensorQuery q{f, base, {}};
      for (int i : perm) q.arguments.push_back({v[static_cast<std::size_t>(i)], 1});
      const double val = derivative_tensor(q);
      if (!have) {
        first = val;
        have = true;
      }
      CHECK(std::abs(val - first) <= 1e-12 * (1.0 + std::abs(first)));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("order-s sums equal arc coefficients") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const oracle::Poly p = oracle::random_poly(rng, n, 4, 5);
    const Expr f = parse(p.text(), n);
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    const Vec base = oracle::random_vec(rng, n);
    std::vector<Vec> H;
    for (int s = 0; s < k; ++s) H.push_back(oracle::random_vec(rng, n));
    const std::vector<double> ref = oracle::arc_coefficients(p, base, H, static_cast<std::size_t>(k));
    const Jet j = eval_on_arc(f, Arc{base, H, {}}, static_cast<std::size_t>(k));
    for (int s = 1; s <= k; ++s) {
      const double sum = sum_order_s(f, base, H, s);
      CHECK(std::abs(sum - ref[static_cast<std::size_t>(s)]) <= tol(ref[static_cast<std::size_t>(s)]));
      CHECK(std::abs(sum - j[static_cast<std::size_t>(s)]) <= tol(sum));
    }
  }
  CHECK_THROWS_AS(sum_order_s(parse("x1", 1), {0.0}, {{1.0}}, 2), std::invalid_argument);
}

TEST_CASE("order-k sums equal the t^k coefficient with w in slot k") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const oracle::Poly p = oracle::random_poly(rng, n, 4, 5);
    const Expr f = parse(p.text(), n);
    const int k = std::uniform_int_distribution<int>(2, 4)(rng);
    const Vec base = oracle::random_vec(rng, n);
    std::vector<Vec> H;
    for (int s = 1; s < k; ++s) H.push_back(oracle::random_vec(rng, n));
    const Vec w = oracle::random_vec(rng, n);
    std::vector<Vec> withW = H;
    withW.push_back(w);
    const double ref = oracle::arc_coefficients(p, base, withW, static_cast<std::size_t>(k))[static_cast<std::size_t>(k)];
    CHECK(std::abs(sum_order_k(f, base, H, w) - ref) <= tol(ref));
  }
}

TEST_CASE("second and third order forms") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const oracle::Poly p = oracle::random_poly(rng, 2, 4, 6);
    const Expr f = parse(p.text(), 2);
    const Vec x = oracle::random_vec(rng, 2);
    const Vec h1 = oracle::random_vec(rng, 2);
    const Vec h2 = oracle::random_vec(rng, 2);
    const Vec w = oracle::random_vec(rng, 2);
    const double k2 = p.tensor(x, {w}) + 0.5 * p.tensor(x, {h1, h1});
    const double k3 = p.tensor(x, {w}) + p.tensor(x, {h1, h2}) + p.tensor(x, {h1, h1, h1}) / 6.0;
    CHECK(std::abs(sum_order_k(f, x, {h1}, w) - k2) <= tol(k2));
    CHECK(std::abs(sum_order_k(f, x, {h1, h2}, w) - k3) <= tol(k3));
    CHECK(std::abs(directional_derivative(f, x, w) - p.tensor(x, {w})) <= tol(p.tensor(x, {w})));
  }
}
