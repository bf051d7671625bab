#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tancone {

/// Dense point/direction in R^n.
using Vec = std::vector<double>;

/// Raised when an evaluation leaves the domain of an elementary operation
/// (division by zero, division by a jet with vanishing constant term).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by a distance oracle that could not certify any candidate point.
/// Distinct from "far away": the oracle simply has no answer.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace vec {

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Euclidean norm, rescaled so that tiny (1e-200) and huge entries neither
/// underflow nor overflow when squared.
inline double norm(std::span<const double> v) {
  const double scale = max_abs(v);
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (double x : v) {
    const double r = x / scale;
    acc += r * r;
  }
  return scale * std::sqrt(acc);
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec::distance: size mismatch");
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a[i] - b[i]));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = (a[i] - b[i]) / scale;
    acc += r * r;
  }
  return scale * std::sqrt(acc);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec::dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec scaled(std::span<const double> v, double s) {
  Vec out(v.begin(), v.end());
  for (double& x : out) x *= s;
  return out;
}

inline Vec normalized(std::span<const double> v) {
  const double n = norm(v);
  if (n == 0.0) return Vec(v.begin(), v.end());
  return scaled(v, 1.0 / n);
}

inline bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace vec
}  // namespace tancone
