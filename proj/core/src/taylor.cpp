#include "tancone/taylor.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <fmt/format.h>

namespace tancone {

std::vector<MultiIndex> enumerate_weighted_multiindices(int length, int target) {
  if (length < 1 || target < 0) throw std::invalid_argument("enumerate_weighted_multiindices: bad arguments");
  std::vector<MultiIndex> out;
  MultiIndex alpha(static_cast<std::size_t>(length), 0);
  std::function<void(int, int)> fill = [&](int pos, int remaining) {
    const int weight = pos + 1;
    if (pos == length - 1) {
      if (remaining % weight == 0) {
        alpha[static_cast<std::size_t>(pos)] = remaining / weight;
        out.push_back(alpha);
      }
      return;
    }
    for (int a = 0; a * weight <= remaining; ++a) {
      alpha[static_cast<std::size_t>(pos)] = a;
      fill(pos + 1, remaining - a * weight);
    }
  };
  fill(0, target);
  return out;
}

std::vector<MultiIndex> enumerate_multiindices(int s) {
  if (s < 1) throw std::invalid_argument("enumerate_multiindices: s must be >= 1");
  return enumerate_weighted_multiindices(s, s);
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 12) throw std::out_of_range(fmt::format("factorial: {} outside 0..12", n));
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

namespace {

// Power series in mu variables u_1..u_mu, truncated independently in each
// variable at degree caps[i]. Equivalent to nesting univariate jets, one
// level per tensor argument.
class NestedJet {
 public:
  struct Shape {
    std::vector<int> caps;
    std::vector<std::size_t> strides;
    std::vector<std::vector<int>> exponents;  // per flat index
    std::size_t size = 1;
    int total_degree = 0;
  };

  NestedJet() = default;
  NestedJet(const Shape* shape, double c) : shape_(shape), data_(shape->size, 0.0) { data_[0] = c; }

  static Shape make_shape(std::vector<int> caps) {
    Shape s;
    s.caps = std::move(caps);
    s.strides.resize(s.caps.size());
    for (std::size_t i = 0; i < s.caps.size(); ++i) {
      s.strides[i] = s.size;
      s.size *= static_cast<std::size_t>(s.caps[i] + 1);
      s.total_degree += s.caps[i];
    }
    s.exponents.assign(s.size, std::vector<int>(s.caps.size(), 0));
    for (std::size_t flat = 0; flat < s.size; ++flat) {
      std::size_t rest = flat;
      for (std::size_t i = 0; i < s.caps.size(); ++i) {
        s.exponents[flat][i] = static_cast<int>(rest % static_cast<std::size_t>(s.caps[i] + 1));
        rest /= static_cast<std::size_t>(s.caps[i] + 1);
      }
    }
    return s;
  }

  const Shape* shape() const { return shape_; }
  double& at(std::size_t flat) { return data_[flat]; }
  double at(std::size_t flat) const { return data_[flat]; }

  friend NestedJet operator+(const NestedJet& a, const NestedJet& b) {
    NestedJet r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }
  friend NestedJet operator-(const NestedJet& a, const NestedJet& b) {
    NestedJet r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }
  friend NestedJet operator-(const NestedJet& a) {
    NestedJet r = a;
    for (double& x : r.data_) x = -x;
    return r;
  }
  friend NestedJet operator*(const NestedJet& a, const NestedJet& b) {
    const Shape& s = *a.shape_;
    NestedJet r(a.shape_, 0.0);
    for (std::size_t i = 0; i < s.size; ++i) {
      if (a.data_[i] == 0.0) continue;
      for (std::size_t j = 0; j < s.size; ++j) {
        if (b.data_[j] == 0.0) continue;
        bool fits = true;
        for (std::size_t d = 0; d < s.caps.size() && fits; ++d) {
          fits = s.exponents[i][d] + s.exponents[j][d] <= s.caps[d];
        }
        if (fits) r.data_[i + j] += a.data_[i] * b.data_[j];
      }
    }
    return r;
  }

  NestedJet scaled(double c) const {
    NestedJet r = *this;
    for (double& x : r.data_) x *= c;
    return r;
  }

  /// The series minus its constant term; nilpotent of index total_degree + 1.
  NestedJet tail() const {
    NestedJet r = *this;
    r.data_[0] = 0.0;
    return r;
  }

  /// sum_j coeff(j) * tail^j / j! for j = 0..total_degree.
  template <class Coeff>
  NestedJet tail_series(Coeff coeff) const {
    const NestedJet x = tail();
    NestedJet power(shape_, 1.0);
    NestedJet result(shape_, 0.0);
    for (int j = 0; j <= shape_->total_degree; ++j) {
      if (j > 0) power = (power * x).scaled(1.0 / static_cast<double>(j));
      const double c = coeff(j);
      if (c != 0.0) result = result + power.scaled(c);
    }
    return result;
  }

 private:
  const Shape* shape_ = nullptr;
  std::vector<double> data_;
};

}  // namespace

template <>
struct ScalarOps<NestedJet> {
  static NestedJet constant(const NestedJet& like, double c) { return NestedJet(like.shape(), c); }
  static NestedJet divide(const NestedJet& a, const NestedJet& b) {
    const double b0 = b.at(0);
    if (b0 == 0.0) throw DomainError("division by a series with zero constant term");
    // 1/(b0 + x) = (1/b0) sum_j (-x/b0)^j; the j! of tail_series is undone here.
    double fact = 1.0;
    const NestedJet inv = b.tail_series([&](int j) {
      if (j > 0) fact *= static_cast<double>(j);
      return fact * std::pow(-1.0 / b0, j) / b0;
    });
    return a * inv;
  }
  static NestedJet pow_int(const NestedJet& a, int n) {
    NestedJet result(a.shape(), 1.0);
    NestedJet base = a;
    auto e = static_cast<unsigned>(n);
    while (e != 0U) {
      if ((e & 1U) != 0U) result = result * base;
      e >>= 1U;
      if (e != 0U) base = base * base;
    }
    return result;
  }
  static NestedJet exp(const NestedJet& a) {
    const double e0 = std::exp(a.at(0));
    return a.tail_series([&](int) { return e0; });
  }
  static NestedJet sin(const NestedJet& a) {
    // sin(a0 + x) = sin a0 cos x + cos a0 sin x
    const double s0 = std::sin(a.at(0));
    const double c0 = std::cos(a.at(0));
    return a.tail_series([&](int j) {
      const double sign = (j / 2) % 2 == 0 ? 1.0 : -1.0;
      return j % 2 == 0 ? sign * s0 : sign * c0;
    });
  }
  static NestedJet cos(const NestedJet& a) {
    // cos(a0 + x) = cos a0 cos x - sin a0 sin x
    const double s0 = std::sin(a.at(0));
    const double c0 = std::cos(a.at(0));
    return a.tail_series([&](int j) {
      const double sign = (j / 2) % 2 == 0 ? 1.0 : -1.0;
      return j % 2 == 0 ? sign * c0 : -sign * s0;
    });
  }
};

double derivative_tensor(const DerivTensorQuery& q) {
  const std::size_t n = q.base.size();
  if (q.f.arity() != n) throw std::invalid_argument("derivative_tensor: base dimension != arity");
  std::vector<int> caps;
  std::vector<const Vec*> vectors;
  int m = 0;
  for (const TensorArgument& arg : q.arguments) {
    if (arg.multiplicity < 0) throw std::invalid_argument("derivative_tensor: negative multiplicity");
    if (arg.vector.size() != n) throw std::invalid_argument("derivative_tensor: argument dimension mismatch");
    if (arg.multiplicity == 0) continue;
    caps.push_back(arg.multiplicity);
    vectors.push_back(&arg.vector);
    m += arg.multiplicity;
  }
  if (m > 12) throw std::out_of_range("derivative_tensor: order above 12");

  const NestedJet::Shape shape = NestedJet::make_shape(caps);
  std::vector<NestedJet> vars;
  vars.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    NestedJet x(&shape, q.base[d]);
    for (std::size_t i = 0; i < vectors.size(); ++i) x.at(shape.strides[i]) = (*vectors[i])[d];
    vars.push_back(std::move(x));
  }
  const NestedJet value = q.f.evaluate<NestedJet>(vars, NestedJet(&shape, 0.0));

  // Coefficient of u1^a1...umu^amu times a1!...amu!.
  double weight = 1.0;
  for (int c : caps) weight *= static_cast<double>(factorial(c));
  return value.at(shape.size - 1) * weight;
}

namespace {

double weighted_tensor_sum(const Expr& f, const Vec& base, const std::vector<Vec>& H,
                           const std::vector<MultiIndex>& indices) {
  double total = 0.0;
  for (const MultiIndex& alpha : indices) {
    DerivTensorQuery q{f, base, {}};
    double denom = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      q.arguments.push_back({H[i], alpha[i]});
      denom *= static_cast<double>(factorial(alpha[i]));
    }
    total += derivative_tensor(q) / denom;
  }
  return total;
}

}  // namespace

double sum_order_s(const Expr& f, const Vec& base, const std::vector<Vec>& H, int s) {
  if (s < 1 || static_cast<std::size_t>(s) > H.size()) {
    throw std::invalid_argument(fmt::format("sum_order_s: s={} outside 1..{}", s, H.size()));
  }
  if (s > 12) throw std::out_of_range("sum_order_s: order above 12");
  return weighted_tensor_sum(f, base, H, enumerate_multiindices(s));
}

double sum_order_k(const Expr& f, const Vec& base, const std::vector<Vec>& H, const Vec& w) {
  if (H.empty()) throw std::invalid_argument("sum_order_k: need at least one direction");
  const int k = static_cast<int>(H.size()) + 1;
  if (k > 12) throw std::out_of_range("sum_order_k: order above 12");
  return directional_derivative(f, base, w) +
         weighted_tensor_sum(f, base, H, enumerate_weighted_multiindices(k - 1, k));
}

double directional_derivative(const Expr& f, const Vec& base, const Vec& v) {
  return derivative_tensor(DerivTensorQuery{f, base, {{v, 1}}});
}

}  // namespace tancone
