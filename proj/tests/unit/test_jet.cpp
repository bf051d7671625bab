#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tancone/expr.hpp"
#include "tancone/jet.hpp"

using namespace tancone;

namespace {

double tol(double v) { return 1e-10 * (1.0 + std::abs(v)); }

}  // namespace

TEST_CASE("elementary series") {
  const std::size_t K = 8;
  const Jet t = Jet::variable(0.0, 1.0, K);
  const Jet e = jet_exp(t);
  const Jet s = jet_sin(t);
  const Jet c = jet_cos(t);
  const Jet g = Jet::constant(1.0, K) / (Jet::constant(1.0, K) - t);
  double fact = 1.0;
  for (std::size_t k = 0; k <= K; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    CHECK(e[k] == doctest::Approx(1.0 / fact).epsilon(1e-14));
    const double sinRef = k % 2 == 1 ? ((k / 2) % 2 == 0 ? 1.0 : -1.0) / fact : 0.0;
    const double cosRef = k % 2 == 0 ? ((k / 2) % 2 == 0 ? 1.0 : -1.0) / fact : 0.0;
    CHECK(std::abs(s[k] - sinRef) < 1e-15);
    CHECK(std::abs(c[k] - cosRef) < 1e-15);
    CHECK(g[k] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("jet identities") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Jet a(oracle::random_vec(rng, 6));
    Jet b(oracle::random_vec(rng, 6));
    b[0] = 1.5;
    const Jet q = a / b;
    const Jet back = q * b;
    for (std::size_t k = 0; k <= 5; ++k) CHECK(std::abs(back[k] - a[k]) < 1e-12);
    const Jet sc = jet_sin(a) * jet_sin(a) + jet_cos(a) * jet_cos(a);
    CHECK(std::abs(sc[0] - 1.0) < 1e-14);
    for (std::size_t k = 1; k <= 5; ++k) CHECK(std::abs(sc[k]) < 1e-12);
    const Jet p3 = jet_pow_int(a, 3);
    const Jet m3 = a * a * a;
    for (std::size_t k = 0; k <= 5; ++k) CHECK(std::abs(p3[k] - m3[k]) < 1e-12);
    const Jet p0 = jet_pow_int(a, 0);
    CHECK(p0[0] == 1.0);
  }
  Jet zero(std::vector<double>{0.0, 1.0, 2.0});
  CHECK_THROWS_AS(Jet::constant(1.0, 2) / zero, DomainError);
}

TEST_CASE("polynomial arcs match exact series composition") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const oracle::Poly p = oracle::random_poly(rng, n, 4, 5);
    const Expr f = parse(p.text(), n);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    Arc arc{oracle::random_vec(rng, n), {}, std::nullopt};
    for (std::size_t s = 0; s < k; ++s) arc.directions.push_back(oracle::random_vec(rng, n));
    const std::size_t K = 6;
    const Jet j = eval_on_arc(f, arc, K);
    const std::vector<double> ref = oracle::arc_coefficients(p, arc.base, arc.directions, K);
    CAPTURE(p.text());
    for (std::size_t s = 0; s <= K; ++s) CHECK(std::abs(j[s] - ref[s]) <= tol(ref[s]));
  }
}

TEST_CASE("arc tails and truncation") {
  const Expr f = parse("x1 * x2", 2);
  Arc arc{{0.0, 0.0}, {{1.0, 0.0}}, ArcTail{{0.0, 1.0}, 2, 3.0}};
  CHECK(arc.degree() == 2);
  const Vec at = arc.at(0.5);
  CHECK(at[0] == 0.5);
  CHECK(at[1] == doctest::Approx(0.75));
  // (t) * (3 t^2) = 3 t^3
  const Jet j = eval_on_arc(f, arc, 4);
  CHECK(j[3] == doctest::Approx(3.0));
  CHECK(j[2] == 0.0);
  const Jet j2 = eval_on_arc(f, arc, 2);
  CHECK(j2.order() == 2);
  CHECK(j2[2] == 0.0);
}

TEST_CASE("coefficients match central differences") {
  std::mt19937_64 rng(3);
  const char* texts[] = {"sin(x1) * exp(x2)", "x1^3 - x1 * x2 + cos(x2)", "exp(x1 + x2) / (2 + x1^2)",
                         "sin(x1 * x2) + x2^4"};
  for (const char* text : texts) {
    const Expr f = parse(text, 2);
    for (int trial = 0; trial < 5; ++trial) {
      Arc arc{oracle::random_vec(rng, 2, 0.5), {oracle::random_vec(rng, 2), oracle::random_vec(rng, 2)}, {}};
      const Jet j = eval_on_arc(f, arc, 4);
      auto g = [&](double t) { return f(arc.at(t)); };
      for (int s = 1; s <= 3; ++s) {
        const double fd = oracle::fd_coefficient(g, s, s == 1 ? 1e-5 : 1e-3);
        CHECK(std::abs(j[static_cast<std::size_t>(s)] - fd) <= 1e-4 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("evaluation along arcs is linear in the expression") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Poly pa = oracle::random_poly(rng, 2, 4, 4);
    const oracle::Poly pb = oracle::random_poly(rng, 2, 4, 4);
    const Expr a = parse(pa.text(), 2);
    const Expr b = parse(pb.text(), 2);
    const Expr combo = Expr::constant(2.0, 2) * a - Expr::constant(0.5, 2) * b;
    Arc arc{oracle::random_vec(rng, 2), {oracle::random_vec(rng, 2), oracle::random_vec(rng, 2)}, {}};
    const Jet ja = eval_on_arc(a, arc, 5);
    const Jet jb = eval_on_arc(b, arc, 5);
    const Jet jc = eval_on_arc(combo, arc, 5);
    for (std::size_t s = 0; s <= 5; ++s) {
      const double ref = 2.0 * ja[s] - 0.5 * jb[s];
      CHECK(std::abs(jc[s] - ref) <= tol(ref));
    }
  }
}
