#pragma once

// Closed sets in R^n and their distance oracles.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tancone/expr.hpp"
#include "tancone/vec.hpp"

namespace tancone {

struct BoundingBox {
  Vec lo;
  Vec hi;

  static BoundingBox cube(std::size_t n, double half_width = 10.0);
};

/// {y : e(y) = 0 for all equalities, g(y) <= 0 for all inequalities}.
struct ImplicitSet {
  std::vector<Expr> equalities;
  std::vector<Expr> inequalities;
  BoundingBox box;
  /// Set by make_implicit: every constraint is affine, so the set is a
  /// polyhedron and a single projection start suffices.
  bool affine = false;
};

/// s -> (c_1(s), ..., c_n(s)) for s in [lo, hi]. Holds a precomputed sample
/// grid shared between copies.
struct ParametricCurve {
  struct Samples;

  std::vector<Expr> components;
  double lo = 0.0;
  double hi = 1.0;
  std::shared_ptr<const Samples> samples;

  Vec point(double s) const;
};

struct PointCloud {
  std::vector<Vec> points;
};

struct SetDesc;

struct UnionSet {
  std::vector<SetDesc> members;
};

struct SetDesc {
  std::size_t dimension = 0;
  std::variant<ImplicitSet, ParametricCurve, PointCloud, UnionSet> model;
  std::string name;
};

struct DistanceConfig {
  std::size_t gridPoints = 4096;
  double refineTol = 1e-12;
  std::size_t starts = 16;
  double feasibilityTol = 1e-10;
};

enum class DistanceMethod { Exact, CurveGrid, CurveRefined, Penalty, Feasible };

std::string_view to_string(DistanceMethod m);

struct DistanceResult {
  double value = 0.0;
  Vec nearest;
  DistanceMethod method = DistanceMethod::Exact;
};

// Factories validate the SetDesc invariants and throw std::invalid_argument.
SetDesc make_implicit(std::size_t n, std::vector<Expr> equalities, std::vector<Expr> inequalities,
                      BoundingBox box);
SetDesc make_implicit(std::size_t n, std::vector<Expr> equalities, std::vector<Expr> inequalities);
SetDesc make_parametric(std::vector<Expr> components, double lo, double hi,
                        std::size_t gridPoints = DistanceConfig{}.gridPoints);
SetDesc make_point_cloud(std::vector<Vec> points);
SetDesc make_union(std::vector<SetDesc> members);

/// Upper bound on d(x, Q). Throws OracleFailure when an implicit set yields no
/// feasible candidate.
DistanceResult distance(const SetDesc& Q, std::span<const double> x, const DistanceConfig& cfg = {});

bool contains(const SetDesc& Q, std::span<const double> x, double tol, const DistanceConfig& cfg = {});

/// Largest constraint violation at y (0 when feasible).
double max_violation(const ImplicitSet& set, std::span<const double> y);

DistanceResult implicit_distance(const ImplicitSet& set, std::span<const double> x, const DistanceConfig& cfg);

/// Built-in sets: cusp, cusp-implicit, half-plane, parabola, plane.
SetDesc benchmark_set(std::string_view name);
std::vector<std::string> benchmark_set_names();

}  // namespace tancone
