#pragma once

// Truncated univariate Taylor series and evaluation of expressions along
// polynomial arcs.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tancone/expr.hpp"
#include "tancone/vec.hpp"

namespace tancone {

/// c0 + c1 t + ... + cK t^K + o(t^K).
class Jet {
 public:
  Jet() : coeffs_(1, 0.0) {}
  explicit Jet(std::vector<double> coeffs);

  static Jet constant(double c, std::size_t order);
  /// c0 + c1 t.
  static Jet variable(double c0, double c1, std::size_t order);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  std::vector<double> coeffs_;
};

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_neg(const Jet& a);
Jet jet_mul(const Jet& a, const Jet& b);
/// Throws DomainError when b has a zero constant term.
Jet jet_div(const Jet& a, const Jet& b);
Jet jet_pow_int(const Jet& a, int n);
Jet jet_sin(const Jet& a);
Jet jet_cos(const Jet& a);
Jet jet_exp(const Jet& a);

inline Jet operator+(const Jet& a, const Jet& b) { return jet_add(a, b); }
inline Jet operator-(const Jet& a, const Jet& b) { return jet_sub(a, b); }
inline Jet operator*(const Jet& a, const Jet& b) { return jet_mul(a, b); }
inline Jet operator/(const Jet& a, const Jet& b) { return jet_div(a, b); }
inline Jet operator-(const Jet& a) { return jet_neg(a); }

template <>
struct ScalarOps<Jet> {
  static Jet constant(const Jet& like, double c) { return Jet::constant(c, like.order()); }
  static Jet divide(const Jet& a, const Jet& b) { return jet_div(a, b); }
  static Jet pow_int(const Jet& a, int n) { return jet_pow_int(a, n); }
  static Jet sin(const Jet& a) { return jet_sin(a); }
  static Jet cos(const Jet& a) { return jet_cos(a); }
  static Jet exp(const Jet& a) { return jet_exp(a); }
};

/// Term scale * t^degree * w appended to an arc.
struct ArcTail {
  Vec w;
  int degree = 1;
  double scale = 1.0;
};

/// t -> base + t h1 + t^2 h2 + ... + t^(k-1) h_(k-1) [+ scale t^degree w].
struct Arc {
  Vec base;
  std::vector<Vec> directions;
  std::optional<ArcTail> tail;

  std::size_t dimension() const noexcept { return base.size(); }
  /// Highest power of t carrying a term.
  std::size_t degree() const noexcept;
  /// Point on the arc at parameter t.
  Vec at(double t) const;
};

/// Order-K jet of t -> f(arc(t)). Terms of the arc above degree K are
/// truncated away.
Jet eval_on_arc(const Expr& f, const Arc& arc, std::size_t K);

}  // namespace tancone
