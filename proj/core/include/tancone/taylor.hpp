#pragma once

// Multi-index sums over symmetric derivative tensors. This is the explicit
// route to the Taylor coefficients of f along a polynomial arc, kept
// independent of jet propagation so the two can check each other.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tancone/expr.hpp"
#include "tancone/vec.hpp"

namespace tancone {

/// (alpha_1, ..., alpha_s), all entries >= 0.
using MultiIndex = std::vector<int>;

/// All tuples of length `length` with sum_i i * alpha_i == target, in
/// lexicographic order.
std::vector<MultiIndex> enumerate_weighted_multiindices(int length, int target);

/// enumerate_weighted_multiindices(s, s); the count is the partition number p(s).
std::vector<MultiIndex> enumerate_multiindices(int s);

/// n! for 0 <= n <= 12, exactly. Throws std::out_of_range above that.
std::uint64_t factorial(int n);

struct TensorArgument {
  Vec vector;
  int multiplicity = 1;
};

/// f^(m)(base)[v1]^a1 ... [vmu]^amu with m = sum of multiplicities.
struct DerivTensorQuery {
  Expr f;
  Vec base;
  std::vector<TensorArgument> arguments;
};

double derivative_tensor(const DerivTensorQuery& q);

/// Sum over |alpha|_w = s of f^(|alpha|)(base)[h1]^a1...[hs]^as / (a1!...as!).
/// Requires 1 <= s <= H.size().
double sum_order_s(const Expr& f, const Vec& base, const std::vector<Vec>& H, int s);

/// f'(base) w + sum over length-(k-1) multi-indices with weight k, k = H.size()+1.
double sum_order_k(const Expr& f, const Vec& base, const std::vector<Vec>& H, const Vec& w);

/// f'(base) v.
double directional_derivative(const Expr& f, const Vec& base, const Vec& v);

}  // namespace tancone
