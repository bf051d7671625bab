#include "tancone/jet.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace tancone {

namespace {

void require_same_order(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) {
    throw std::invalid_argument(fmt::format("jet order mismatch: {} vs {}", a.order(), b.order()));
  }
}

}  // namespace

Jet::Jet(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("Jet needs at least one coefficient");
}

Jet Jet::constant(double c, std::size_t order) {
  std::vector<double> coeffs(order + 1, 0.0);
  coeffs[0] = c;
  return Jet(std::move(coeffs));
}

Jet Jet::variable(double c0, double c1, std::size_t order) {
  Jet j = constant(c0, order);
  if (order >= 1) j[1] = c1;
  return j;
}

Jet jet_add(const Jet& a, const Jet& b) {
  require_same_order(a, b);
  Jet r = a;
  for (std::size_t i = 0; i <= r.order(); ++i) r[i] += b[i];
  return r;
}

Jet jet_sub(const Jet& a, const Jet& b) {
  require_same_order(a, b);
  Jet r = a;
  for (std::size_t i = 0; i <= r.order(); ++i) r[i] -= b[i];
  return r;
}

Jet jet_neg(const Jet& a) {
  Jet r = a;
  for (std::size_t i = 0; i <= r.order(); ++i) r[i] = -r[i];
  return r;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  require_same_order(a, b);
  const std::size_t K = a.order();
  Jet r = Jet::constant(0.0, K);
  for (std::size_t n = 0; n <= K; ++n) {
    double s = 0.0;
    for (std::size_t i = 0; i <= n; ++i) s += a[i] * b[n - i];
    r[n] = s;
  }
  return r;
}

Jet jet_div(const Jet& a, const Jet& b) {
  require_same_order(a, b);
  if (b[0] == 0.0) throw DomainError("jet division by a series with zero constant term");
  const std::size_t K = a.order();
  Jet q = Jet::constant(0.0, K);
  for (std::size_t n = 0; n <= K; ++n) {
    double s = a[n];
    for (std::size_t i = 1; i <= n; ++i) s -= b[i] * q[n - i];
    q[n] = s / b[0];
  }
  return q;
}

Jet jet_pow_int(const Jet& a, int n) {
  if (n < 0) throw std::invalid_argument("jet_pow_int: negative exponent");
  Jet result = Jet::constant(1.0, a.order());
  Jet base = a;
  auto e = static_cast<unsigned>(n);
  while (e != 0U) {
    if ((e & 1U) != 0U) result = jet_mul(result, base);
    e >>= 1U;
    if (e != 0U) base = jet_mul(base, base);
  }
  return result;
}

Jet jet_exp(const Jet& a) {
  const std::size_t K = a.order();
  Jet e = Jet::constant(std::exp(a[0]), K);
  for (std::size_t n = 1; n <= K; ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += static_cast<double>(k) * a[k] * e[n - k];
    e[n] = s / static_cast<double>(n);
  }
  return e;
}

namespace {

// sin and cos of a series share one coupled recurrence.
std::pair<Jet, Jet> sin_cos(const Jet& a) {
  const std::size_t K = a.order();
  Jet s = Jet::constant(std::sin(a[0]), K);
  Jet c = Jet::constant(std::cos(a[0]), K);
  for (std::size_t n = 1; n <= K; ++n) {
    double ss = 0.0;
    double cc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double ka = static_cast<double>(k) * a[k];
      ss += ka * c[n - k];
      cc -= ka * s[n - k];
    }
    s[n] = ss / static_cast<double>(n);
    c[n] = cc / static_cast<double>(n);
  }
  return {s, c};
}

}  // namespace

Jet jet_sin(const Jet& a) { return sin_cos(a).first; }
Jet jet_cos(const Jet& a) { return sin_cos(a).second; }

std::size_t Arc::degree() const noexcept {
  std::size_t d = directions.size();
  if (tail) d = std::max(d, static_cast<std::size_t>(std::max(tail->degree, 0)));
  return d;
}

Vec Arc::at(double t) const {
  Vec p = base;
  double tp = 1.0;
  for (const Vec& h : directions) {
    tp *= t;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += tp * h[i];
  }
  if (tail) {
    const double c = tail->scale * std::pow(t, tail->degree);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += c * tail->w[i];
  }
  return p;
}

Jet eval_on_arc(const Expr& f, const Arc& arc, std::size_t K) {
  const std::size_t n = arc.dimension();
  if (f.arity() != n) {
    throw std::invalid_argument(fmt::format("eval_on_arc: arc dimension {} != arity {}", n, f.arity()));
  }
  for (const Vec& h : arc.directions) {
    if (h.size() != n) throw std::invalid_argument("eval_on_arc: direction dimension mismatch");
  }
  if (arc.tail) {
    if (arc.tail->w.size() != n) throw std::invalid_argument("eval_on_arc: tail dimension mismatch");
    if (arc.tail->degree < 1) throw std::invalid_argument("eval_on_arc: tail degree must be >= 1");
  }

  std::vector<Jet> vars;
  vars.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Jet x = Jet::constant(arc.base[i], K);
    for (std::size_t s = 1; s <= std::min(K, arc.directions.size()); ++s) x[s] = arc.directions[s - 1][i];
    if (arc.tail && static_cast<std::size_t>(arc.tail->degree) <= K) {
      x[static_cast<std::size_t>(arc.tail->degree)] += arc.tail->scale * arc.tail->w[i];
    }
    vars.push_back(std::move(x));
  }
  return f.evaluate<Jet>(vars, Jet::constant(0.0, K));
}

}  // namespace tancone
