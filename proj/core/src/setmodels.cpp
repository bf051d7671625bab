#include "tancone/setmodels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include <fmt/format.h>

namespace tancone {

struct ParametricCurve::Samples {
  static constexpr std::size_t kBlock = 64;

  std::size_t dim = 0;
  std::vector<double> s;
  std::vector<double> xyz;  // row-major, dim entries per sample
  std::vector<double> block_lo;
  std::vector<double> block_hi;
  double max_chord = 0.0;

  std::size_t count() const { return s.size(); }
  std::size_t blocks() const { return (count() + kBlock - 1) / kBlock; }
  const double* point(std::size_t i) const { return xyz.data() + i * dim; }
};

namespace {

using Samples = ParametricCurve::Samples;

std::shared_ptr<const Samples> build_samples(const std::vector<Expr>& components, double lo, double hi,
                                             std::size_t grid) {
  if (grid < 2) throw std::invalid_argument("parametric curve needs at least 2 grid points");
  auto out = std::make_shared<Samples>();
  out->dim = components.size();
  out->s.resize(grid);
  out->xyz.resize(grid * out->dim);
  for (std::size_t i = 0; i < grid; ++i) {
    const double s = i + 1 == grid ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
    out->s[i] = s;
    for (std::size_t d = 0; d < out->dim; ++d) out->xyz[i * out->dim + d] = components[d](std::span<const double>(&s, 1));
  }
  const std::size_t nb = out->blocks();
  out->block_lo.assign(nb * out->dim, std::numeric_limits<double>::infinity());
  out->block_hi.assign(nb * out->dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < grid; ++i) {
    // Blocks overlap by one sample so every cell is covered by some box.
    const std::size_t b = i / Samples::kBlock;
    for (std::size_t bb : {b, i % Samples::kBlock == 0 && b > 0 ? b - 1 : b}) {
      for (std::size_t d = 0; d < out->dim; ++d) {
        const double v = out->xyz[i * out->dim + d];
        out->block_lo[bb * out->dim + d] = std::min(out->block_lo[bb * out->dim + d], v);
        out->block_hi[bb * out->dim + d] = std::max(out->block_hi[bb * out->dim + d], v);
      }
    }
    if (i > 0) {
      out->max_chord = std::max(out->max_chord, vec::distance(std::span(out->point(i), out->dim),
                                                              std::span(out->point(i - 1), out->dim)));
    }
  }
  return out;
}

// Degree bookkeeping for the affine test: -1 marks "not polynomial of
// bounded degree in a way we track".
bool is_affine(const Expr& e) {
  std::vector<int> stack;
  constexpr int kNonlinear = 1000;
  for (const Node& node : e.program()) {
    switch (node.op) {
      case OpCode::Constant:
        stack.push_back(0);
        break;
      case OpCode::Variable:
        stack.push_back(1);
        break;
      case OpCode::Negate:
        break;
      case OpCode::PowInt:
        stack.back() = stack.back() == 0 ? 0 : (node.index == 0 ? 0 : std::min(kNonlinear, stack.back() * node.index));
        break;
      case OpCode::Sin:
      case OpCode::Cos:
      case OpCode::Exp:
        stack.back() = stack.back() == 0 ? 0 : kNonlinear;
        break;
      default: {
        const int b = stack.back();
        stack.pop_back();
        int& a = stack.back();
        if (node.op == OpCode::Multiply) {
          a = std::min(kNonlinear, a + b);
        } else if (node.op == OpCode::Divide) {
          a = b == 0 ? a : kNonlinear;
        } else {
          a = std::max(a, b);
        }
      }
    }
  }
  return stack.back() <= 1;
}

double squared_gap(std::span<const double> x, const double* p, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double r = x[d] - p[d];
    acc += r * r;
  }
  return acc;
}

double box_gap(std::span<const double> x, const double* lo, const double* hi, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double r = std::max({0.0, lo[d] - x[d], x[d] - hi[d]});
    acc += r * r;
  }
  return std::sqrt(acc);
}

DistanceResult curve_distance(const ParametricCurve& curve, std::span<const double> x, const DistanceConfig& cfg) {
  std::shared_ptr<const Samples> local;
  const Samples* samples = curve.samples.get();
  if (samples == nullptr || samples->count() != cfg.gridPoints) {
    local = build_samples(curve.components, curve.lo, curve.hi, cfg.gridPoints);
    samples = local.get();
  }
  const std::size_t dim = samples->dim;
  const std::size_t count = samples->count();

  // Visit blocks nearest-first and stop once no remaining block can hold a
  // sample within one chord of the best so far.
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(samples->blocks());
  for (std::size_t b = 0; b < samples->blocks(); ++b) {
    order.emplace_back(box_gap(x, &samples->block_lo[b * dim], &samples->block_hi[b * dim], dim), b);
  }
  std::sort(order.begin(), order.end());

  std::vector<double> d(count, std::numeric_limits<double>::quiet_NaN());
  auto grid_dist = [&](std::size_t i) {
    if (std::isnan(d[i])) d[i] = std::sqrt(squared_gap(x, samples->point(i), dim));
    return d[i];
  };
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  std::vector<std::size_t> scanned;
  for (const auto& [gap, b] : order) {
    if (gap > best + samples->max_chord) break;
    const std::size_t first = b * Samples::kBlock;
    const std::size_t last = std::min(count, first + Samples::kBlock);
    for (std::size_t i = first; i < last; ++i) {
      const double v = grid_dist(i);
      scanned.push_back(i);
      if (v < best || (v == best && i < best_index)) {
        best = v;
        best_index = i;
      }
    }
  }

  std::vector<std::pair<double, std::size_t>> candidates;
  for (std::size_t i : scanned) {
    const double v = d[i];
    if (v > best + samples->max_chord) continue;
    const bool left_ok = i == 0 || v <= grid_dist(i - 1);
    const bool right_ok = i + 1 == count || v <= grid_dist(i + 1);
    if (left_ok && right_ok) candidates.emplace_back(v, i);
  }
  std::sort(candidates.begin(), candidates.end());
  if (candidates.size() > 3) candidates.resize(3);

  DistanceResult result;
  result.value = best;
  result.nearest.assign(samples->point(best_index), samples->point(best_index) + dim);
  result.method = DistanceMethod::CurveGrid;

  auto eval_at = [&](double s) { return vec::distance(x, curve.point(s)); };
  constexpr double kInvPhi = 0.6180339887498949;
  for (const auto& [value, i] : candidates) {
    double a = samples->s[i == 0 ? 0 : i - 1];
    double b = samples->s[i + 1 == count ? i : i + 1];
    double fa = eval_at(a);
    double fb = eval_at(b);
    double c = b - kInvPhi * (b - a);
    double e = a + kInvPhi * (b - a);
    double fc = eval_at(c);
    double fe = eval_at(e);
    for (int iter = 0; iter < 300; ++iter) {
      const double lowest = std::min(fc, fe);
      const double spread = std::max({fa, fb, fc, fe}) - lowest;
      if (spread <= cfg.refineTol * lowest || lowest == 0.0) break;
      if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) break;
      if (fc <= fe) {
        b = e;
        fb = fe;
        e = c;
        fe = fc;
        c = b - kInvPhi * (b - a);
        fc = eval_at(c);
      } else {
        a = c;
        fa = fc;
        c = e;
        fc = fe;
        e = a + kInvPhi * (b - a);
        fe = eval_at(e);
      }
    }
    const std::pair<double, double> probes[] = {{fc, c}, {fe, e}, {fa, a}, {fb, b}};
    for (const auto& [fv, sv] : probes) {
      if (fv < result.value) {
        result.value = fv;
        result.nearest = curve.point(sv);
        result.method = DistanceMethod::CurveRefined;
      }
    }
  }
  return result;
}

DistanceResult cloud_distance(const PointCloud& cloud, std::span<const double> x) {
  DistanceResult result;
  result.value = std::numeric_limits<double>::infinity();
  result.method = DistanceMethod::Exact;
  for (const Vec& p : cloud.points) {
    const double v = vec::distance(x, p);
    if (v < result.value) {
      result.value = v;
      result.nearest = p;
    }
  }
  return result;
}

void check_arity(const std::vector<Expr>& exprs, std::size_t n, std::string_view what) {
  for (const Expr& e : exprs) {
    if (e.arity() != n) {
      throw std::invalid_argument(fmt::format("{} has arity {}, expected {}", what, e.arity(), n));
    }
  }
}

}  // namespace

BoundingBox BoundingBox::cube(std::size_t n, double half_width) {
  return BoundingBox{Vec(n, -half_width), Vec(n, half_width)};
}

Vec ParametricCurve::point(double s) const {
  Vec p(components.size());
  for (std::size_t d = 0; d < components.size(); ++d) p[d] = components[d](std::span<const double>(&s, 1));
  return p;
}

std::string_view to_string(DistanceMethod m) {
  switch (m) {
    case DistanceMethod::Exact:
      return "exact";
    case DistanceMethod::CurveGrid:
      return "curve-grid";
    case DistanceMethod::CurveRefined:
      return "curve-refined";
    case DistanceMethod::Penalty:
      return "penalty";
    case DistanceMethod::Feasible:
      return "feasible";
  }
  return "unknown";
}

SetDesc make_implicit(std::size_t n, std::vector<Expr> equalities, std::vector<Expr> inequalities, BoundingBox box) {
  if (n == 0) throw std::invalid_argument("implicit set: dimension must be positive");
  check_arity(equalities, n, "equality");
  check_arity(inequalities, n, "inequality");
  if (box.lo.size() != n || box.hi.size() != n) throw std::invalid_argument("implicit set: bounding box dimension");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(box.lo[i] < box.hi[i])) throw std::invalid_argument("implicit set: empty bounding box");
  }
  ImplicitSet set{std::move(equalities), std::move(inequalities), std::move(box), false};
  set.affine = std::all_of(set.equalities.begin(), set.equalities.end(), is_affine) &&
               std::all_of(set.inequalities.begin(), set.inequalities.end(), is_affine);
  return SetDesc{n, std::move(set), "implicit"};
}

SetDesc make_implicit(std::size_t n, std::vector<Expr> equalities, std::vector<Expr> inequalities) {
  return make_implicit(n, std::move(equalities), std::move(inequalities), BoundingBox::cube(n));
}

SetDesc make_parametric(std::vector<Expr> components, double lo, double hi, std::size_t gridPoints) {
  if (components.empty()) throw std::invalid_argument("parametric curve: no components");
  check_arity(components, 1, "curve component");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument("parametric curve: domain must be a finite interval lo < hi");
  }
  ParametricCurve curve{std::move(components), lo, hi, nullptr};
  curve.samples = build_samples(curve.components, lo, hi, gridPoints);
  const std::size_t n = curve.components.size();
  return SetDesc{n, std::move(curve), "parametric"};
}

SetDesc make_point_cloud(std::vector<Vec> points) {
  if (points.empty()) throw std::invalid_argument("point cloud: no points");
  const std::size_t n = points.front().size();
  if (n == 0) throw std::invalid_argument("point cloud: zero-dimensional point");
  for (const Vec& p : points) {
    if (p.size() != n) throw std::invalid_argument("point cloud: points differ in dimension");
  }
  return SetDesc{n, PointCloud{std::move(points)}, "pointcloud"};
}

SetDesc make_union(std::vector<SetDesc> members) {
  if (members.empty()) throw std::invalid_argument("union: no members");
  const std::size_t n = members.front().dimension;
  for (const SetDesc& m : members) {
    if (m.dimension != n) throw std::invalid_argument("union: members differ in dimension");
  }
  return SetDesc{n, UnionSet{std::move(members)}, "union"};
}

DistanceResult distance(const SetDesc& Q, std::span<const double> x, const DistanceConfig& cfg) {
  if (x.size() != Q.dimension) {
    throw std::invalid_argument(fmt::format("distance: point has dimension {}, set has {}", x.size(), Q.dimension));
  }
  return std::visit(
      [&](const auto& model) -> DistanceResult {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, ImplicitSet>) {
          return implicit_distance(model, x, cfg);
        } else if constexpr (std::is_same_v<T, ParametricCurve>) {
          return curve_distance(model, x, cfg);
        } else if constexpr (std::is_same_v<T, PointCloud>) {
          return cloud_distance(model, x);
        } else {
          std::optional<DistanceResult> best;
          std::string failures;
          for (const SetDesc& member : model.members) {
            try {
              DistanceResult r = distance(member, x, cfg);
              if (!best || r.value < best->value) best = std::move(r);
            } catch (const OracleFailure& e) {
              failures += e.what();
              failures += "; ";
            }
          }
          if (!best) throw OracleFailure("union: every member failed: " + failures);
          return *best;
        }
      },
      Q.model);
}

bool contains(const SetDesc& Q, std::span<const double> x, double tol, const DistanceConfig& cfg) {
  if (!(tol > 0.0)) throw std::invalid_argument("contains: tol must be positive");
  return distance(Q, x, cfg).value <= tol;
}

double max_violation(const ImplicitSet& set, std::span<const double> y) {
  double v = 0.0;
  for (const Expr& e : set.equalities) v = std::max(v, std::abs(e(y)));
  for (const Expr& g : set.inequalities) v = std::max(v, g(y));
  return v;
}

}  // namespace tancone
