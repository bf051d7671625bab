// Distance to {e = 0, g <= 0}: multistart penalty descent (Gauss-Newton with
// Levenberg damping, penalty continuation), then a projection polish that
// solves the linearised nearest-point problem on the active constraints.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "tancone/jet.hpp"
#include "tancone/setmodels.hpp"

namespace tancone {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::array<int, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::size_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % static_cast<std::size_t>(base));
    index /= static_cast<std::size_t>(base);
    f *= inv;
  }
  return r;
}

// Value paired with the magnitude of the terms that produced it, a running
// bound on the rounding error of the evaluation (in units of eps).
struct Magnitude {
  double v = 0.0;
  double m = 0.0;
};

Magnitude operator+(Magnitude a, Magnitude b) { return {a.v + b.v, a.m + b.m}; }
Magnitude operator-(Magnitude a, Magnitude b) { return {a.v - b.v, a.m + b.m}; }
Magnitude operator*(Magnitude a, Magnitude b) { return {a.v * b.v, a.m * b.m}; }
Magnitude operator-(Magnitude a) { return {-a.v, a.m}; }

// Forward-mode value and gradient for up to kDualDim variables.
constexpr std::size_t kDualDim = 8;

struct Dual {
  double v = 0.0;
  std::array<double, kDualDim> d{};
};

Dual operator+(Dual a, const Dual& b) {
  a.v += b.v;
  for (std::size_t i = 0; i < kDualDim; ++i) a.d[i] += b.d[i];
  return a;
}
Dual operator-(Dual a, const Dual& b) {
  a.v -= b.v;
  for (std::size_t i = 0; i < kDualDim; ++i) a.d[i] -= b.d[i];
  return a;
}
Dual operator*(const Dual& a, const Dual& b) {
  Dual r;
  r.v = a.v * b.v;
  for (std::size_t i = 0; i < kDualDim; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
Dual operator-(Dual a) {
  a.v = -a.v;
  for (double& x : a.d) x = -x;
  return a;
}
Dual chain(const Dual& a, double value, double slope) {
  Dual r;
  r.v = value;
  for (std::size_t i = 0; i < kDualDim; ++i) r.d[i] = slope * a.d[i];
  return r;
}

}  // namespace

template <>
struct ScalarOps<Dual> {
  static Dual constant(const Dual& /*like*/, double c) { return Dual{c, {}}; }
  static Dual divide(const Dual& a, const Dual& b) {
    const double q = ScalarOps<double>::divide(a.v, b.v);
    Dual r;
    r.v = q;
    for (std::size_t i = 0; i < kDualDim; ++i) r.d[i] = (a.d[i] - q * b.d[i]) / b.v;
    return r;
  }
  static Dual pow_int(const Dual& a, int n) {
    if (n == 0) return Dual{1.0, {}};
    return chain(a, ScalarOps<double>::pow_int(a.v, n), n * ScalarOps<double>::pow_int(a.v, n - 1));
  }
  static Dual sin(const Dual& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
  static Dual cos(const Dual& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
  static Dual exp(const Dual& a) {
    const double e = std::exp(a.v);
    return chain(a, e, e);
  }
};

template <>
struct ScalarOps<Magnitude> {
  static Magnitude constant(const Magnitude& /*like*/, double c) { return {c, std::abs(c)}; }
  static Magnitude divide(Magnitude a, Magnitude b) {
    return {ScalarOps<double>::divide(a.v, b.v), a.m / std::abs(b.v) + std::abs(a.v) * b.m / (b.v * b.v)};
  }
  static Magnitude pow_int(Magnitude a, int n) {
    return {ScalarOps<double>::pow_int(a.v, n), ScalarOps<double>::pow_int(a.m, n)};
  }
  static Magnitude sin(Magnitude a) { return {std::sin(a.v), 1.0 + a.m}; }
  static Magnitude cos(Magnitude a) { return {std::cos(a.v), 1.0 + a.m}; }
  static Magnitude exp(Magnitude a) {
    const double e = std::exp(a.v);
    return {e, e * (1.0 + a.m)};
  }
};

namespace {

// A residual within this many eps of its term magnitude is rounding noise.
constexpr double kRoundingUnits = 16.0;
// Otherwise its first-order distance to the constraint surface, |r| / |grad|,
// must be this small relative to the distance being reported.
constexpr double kRelativeResidual = 1e-9;
// Smallest step fraction tried by slide().
constexpr double kSlideMinStep = 1e-9;
constexpr int kSlideIters = 200;
// Tangent part of x - y below this fraction of |x - y| ends the slide.
constexpr double kSlideStationary = 1e-9;
// Longest restoration accepted by slide(), relative to the step it corrects.
constexpr double kSlideRestoreRatio = 0.1;
// Constraint gradients at most this long mark a singular point.
constexpr double kSingularGradient = 1e-4;
constexpr int kCertifyIters = 400;
// Residual ratios above this between restoration steps indicate a multiple root.
constexpr double kMultipleRootRatio = 0.4;
constexpr double kMaxMultiplicity = 8.0;
// First penalty weight for starts other than x.
constexpr double kStiffPenalty = 1e4;

// Least-squares solution of (A A^T) z = b; a single row needs no factorisation.
VectorXd gram_solve(const MatrixXd& A, const VectorXd& b) {
  if (A.rows() == 1) {
    const double g = A.row(0).squaredNorm();
    VectorXd z(1);
    z[0] = g > 0.0 ? b[0] / g : 0.0;
    return z;
  }
  return (A * A.transpose()).completeOrthogonalDecomposition().solve(b);
}

struct Constraint {
  const Expr* expr;
  bool equality;
};

class Projector {
 public:
  Projector(const ImplicitSet& set, std::span<const double> x, const DistanceConfig& cfg)
      : set_(set), x_(x.begin(), x.end()), cfg_(cfg), n_(x.size()) {
    for (const Expr& e : set.equalities) constraints_.push_back({&e, true});
    for (const Expr& g : set.inequalities) constraints_.push_back({&g, false});
  }

  /// Best feasible point reached from `start` by penalty descent and polish,
  /// or nullopt. Starts whose penalty minimiser is clearly farther than
  /// `bound` are not polished. `rho0` is the first penalty weight; a stiff
  /// one keeps a start from being pulled onto the path that x itself follows.
  std::optional<Vec> run(Vec start, double bound, double rho0) const {
    clamp(start);
    Vec y = set_.affine ? start : penalty_descent(std::move(start), rho0);
    if (vec::distance(x_, y) > 1.01 * bound) return std::nullopt;
    return polish(std::move(y));
  }

  /// Restores `start` onto the set, slides along it toward x and polishes.
  /// Unless the slide ends stationary, the polished point is kept when it is
  /// closer than the slide result.
  std::optional<Vec> run_on_set(Vec start, double bound) const {
    clamp(start);
    std::optional<Vec> on = restore(start);
    if (!on || vec::distance(x_, *on) > 1.01 * bound) return std::nullopt;
    bool stationary = false;
    Vec slid = slide(std::move(*on), &stationary);
    if (stationary) return slid;
    std::optional<Vec> polished = polish(slid);
    if (polished && vec::distance(x_, *polished) < vec::distance(x_, slid)) return polished;
    return slid;
  }

  /// True when an active constraint at y has a (nearly) vanishing gradient:
  /// restoration from nearby points tends to collapse onto such a point.
  bool singular(const Vec& y) const {
    for (const Constraint& k : constraints_) {
      if (!k.equality && value(k, y) < -cfg_.feasibilityTol) continue;
      if (gradient(k, y).norm() <= kSingularGradient) return true;
    }
    return false;
  }

  /// Newton restoration until every residual is rounding noise. The absolute
  /// tolerance can pass points near a singular point whose true distance to
  /// the set is far larger than their residual suggests.
  Vec certify(Vec y) const {
    const auto n = static_cast<Eigen::Index>(n_);
    for (int iter = 0; iter < kCertifyIters; ++iter) {
      std::vector<const Constraint*> open;
      for (const Constraint& k : constraints_) {
        const Magnitude mv = magnitude(k, y);
        const double r = k.equality ? std::abs(mv.v) : std::max(0.0, mv.v);
        if (r > kRoundingUnits * std::numeric_limits<double>::epsilon() * mv.m) open.push_back(&k);
      }
      if (open.empty()) break;
      const auto m = static_cast<Eigen::Index>(open.size());
      MatrixXd A(m, n);
      VectorXd c(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        const VectorXd g = gradient(*open[static_cast<std::size_t>(r)], y);
        const double gn = g.norm();
        if (!(gn > 0.0)) return y;
        A.row(r) = g.transpose() / gn;
        c[r] = value(*open[static_cast<std::size_t>(r)], y) / gn;
      }
      const VectorXd d = -A.transpose() * gram_solve(A, c);
      Vec next = y;
      for (std::size_t i = 0; i < n_; ++i) next[i] += d[static_cast<Eigen::Index>(i)];
      clamp(next);
      if (vec::distance(next, y) <= std::numeric_limits<double>::epsilon() * vec::norm(y)) break;
      y = std::move(next);
    }
    return y;
  }

 private:
  void clamp(Vec& y) const {
    for (std::size_t i = 0; i < n_; ++i) y[i] = std::clamp(y[i], set_.box.lo[i], set_.box.hi[i]);
  }

  double value(const Constraint& c, const Vec& y) const { return (*c.expr)(y); }

  Magnitude magnitude(const Constraint& c, const Vec& y) const {
    std::vector<Magnitude> vars;
    vars.reserve(n_);
    for (double v : y) vars.push_back({v, std::abs(v)});
    return c.expr->evaluate<Magnitude>(vars, Magnitude{});
  }

  // Feasible to the accuracy the reported distance needs: the absolute
  // tolerance alone would accept x itself once x is tiny.
  bool accurate(const Vec& p) const {
    if (max_violation(set_, p) > cfg_.feasibilityTol) return false;
    const double d = vec::distance(x_, p);
    for (const Constraint& k : constraints_) {
      const Magnitude mv = magnitude(k, p);
      const double r = k.equality ? std::abs(mv.v) : std::max(0.0, mv.v);
      if (r <= kRoundingUnits * std::numeric_limits<double>::epsilon() * mv.m) continue;
      const double gn = gradient(k, p).norm();
      if (!(gn > 0.0) || r / gn > kRelativeResidual * d) return false;
    }
    return true;
  }

  VectorXd gradient(const Constraint& c, const Vec& y) const {
    VectorXd g(static_cast<Eigen::Index>(n_));
    if (n_ <= kDualDim) {
      std::vector<Dual> vars(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        vars[i].v = y[i];
        vars[i].d[i] = 1.0;
      }
      const Dual r = c.expr->evaluate<Dual>(vars, Dual{});
      for (std::size_t i = 0; i < n_; ++i) g[static_cast<Eigen::Index>(i)] = r.d[i];
      return g;
    }
    std::vector<Jet> vars;
    vars.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) vars.push_back(Jet::variable(y[i], 0.0, 1));
    for (std::size_t i = 0; i < n_; ++i) {
      vars[i][1] = 1.0;
      g[static_cast<Eigen::Index>(i)] = c.expr->evaluate<Jet>(vars, Jet::constant(0.0, 1))[1];
      vars[i][1] = 0.0;
    }
    return g;
  }

  // Residual vector [y - x; sqrt(rho) e(y); sqrt(rho) max(0, g(y))].
  double cost(const Vec& y, double rho) const {
    double c = 0.0;
    for (std::size_t i = 0; i < n_; ++i) c += (y[i] - x_[i]) * (y[i] - x_[i]);
    for (const Constraint& k : constraints_) {
      const double v = value(k, y);
      const double r = k.equality ? v : std::max(0.0, v);
      c += rho * r * r;
    }
    return c;
  }

  Vec penalty_descent(Vec y, double rho0) const {
    const auto n = static_cast<Eigen::Index>(n_);
    for (double rho = rho0; rho <= 1e10; rho *= 100.0) {
      double lambda = 1e-3;
      double current = cost(y, rho);
      for (int iter = 0; iter < 60; ++iter) {
        MatrixXd JtJ = MatrixXd::Identity(n, n);
        VectorXd Jtr(n);
        for (Eigen::Index i = 0; i < n; ++i) Jtr[i] = y[static_cast<std::size_t>(i)] - x_[static_cast<std::size_t>(i)];
        for (const Constraint& k : constraints_) {
          const double v = value(k, y);
          if (!k.equality && v <= 0.0) continue;
          const VectorXd g = gradient(k, y);
          JtJ += rho * g * g.transpose();
          Jtr += rho * v * g;
        }
        bool accepted = false;
        for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
          MatrixXd M = JtJ;
          M.diagonal().array() += lambda * (1.0 + JtJ.diagonal().array());
          const VectorXd step = M.ldlt().solve(-Jtr);
          Vec trial = y;
          for (std::size_t i = 0; i < n_; ++i) trial[i] += step[static_cast<Eigen::Index>(i)];
          clamp(trial);
          const double c = cost(trial, rho);
          if (c < current) {
            const double moved = vec::distance(trial, y);
            y = std::move(trial);
            const bool tiny = moved <= 1e-15 * (1.0 + vec::norm(y)) || current - c <= 1e-16 * current;
            current = c;
            lambda = std::max(lambda / 3.0, 1e-12);
            accepted = true;
            if (tiny) iter = 1000;
          } else {
            lambda *= 4.0;
          }
        }
        if (!accepted) break;
      }
    }
    return y;
  }

  std::optional<Vec> polish(Vec y) const {
    const auto n = static_cast<Eigen::Index>(n_);
    std::optional<Vec> best;
    double best_dist = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vec& p) {
      if (accurate(p)) {
        const double d = vec::distance(x_, p);
        if (d < best_dist) {
          best_dist = d;
          best = p;
        }
      }
    };
    const Vec start = y;
    bool converged = false;
    int stale = 0;
    for (int iter = 0; iter < 200 && stale < 25; ++iter) {
      std::vector<const Constraint*> active;
      for (const Constraint& k : constraints_) {
        if (k.equality || value(k, y) > -1e-8) active.push_back(&k);
      }
      Vec next = y;
      // Drop inequalities whose multiplier says the nearest point leaves them.
      for (int round = 0; round <= static_cast<int>(active.size()); ++round) {
        const auto m = static_cast<Eigen::Index>(active.size());
        VectorXd toward(n);
        for (Eigen::Index i = 0; i < n; ++i) toward[i] = x_[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
        VectorXd d = toward;
        VectorXd mult;
        if (m > 0) {
          MatrixXd A(m, n);
          VectorXd c(m);
          // Unit-norm rows keep A A^T well conditioned near singular points.
          for (Eigen::Index r = 0; r < m; ++r) {
            const VectorXd g = gradient(*active[static_cast<std::size_t>(r)], y);
            const double gn = g.norm();
            const double scale = gn > 0.0 ? 1.0 / gn : 0.0;
            A.row(r) = scale * g.transpose();
            c[r] = scale * value(*active[static_cast<std::size_t>(r)], y);
          }
          mult = gram_solve(A, A * toward + c);
          d = toward - A.transpose() * mult;
        }
        std::size_t drop = active.size();
        for (std::size_t r = 0; r < active.size(); ++r) {
          if (!active[r]->equality && mult[static_cast<Eigen::Index>(r)] < 0.0 &&
              value(*active[r], y) <= cfg_.feasibilityTol) {
            drop = r;
            break;
          }
        }
        if (drop < active.size()) {
          active.erase(active.begin() + static_cast<std::ptrdiff_t>(drop));
          continue;
        }
        for (std::size_t i = 0; i < n_; ++i) next[i] = y[i] + d[static_cast<Eigen::Index>(i)];
        break;
      }
      clamp(next);
      const double moved = vec::distance(next, y);
      y = std::move(next);
      if (moved <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(vec::norm(y), vec::norm(x_))) {
        converged = true;
        break;
      }
      const double before = best_dist;
      consider(y);
      stale = best && best_dist >= before ? stale + 1 : 0;
    }
    if (converged && accurate(y)) return y;
    if (!best) {
      for (const Vec& from : {start, y}) {
        if (std::optional<Vec> p = restore(from)) consider(*p);
      }
    }
    return best;
  }

  // Descent along the set: steps along the tangent part of x - y are
  // restored to feasibility and kept when they bring the point closer and the
  // restoration stays short. Unlike polish it cannot jump across a singular
  // point.
  Vec slide(Vec y, bool* stationary) const {
    const auto n = static_cast<Eigen::Index>(n_);
    double alpha = 1.0;
    double d = vec::distance(x_, y);
    for (int iter = 0; iter < kSlideIters && alpha > kSlideMinStep; ++iter) {
      VectorXd toward(n);
      for (Eigen::Index i = 0; i < n; ++i) toward[i] = x_[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
      std::vector<VectorXd> rows;
      for (const Constraint& k : constraints_) {
        const double v = value(k, y);
        if (!k.equality && v < -cfg_.feasibilityTol) continue;
        VectorXd g = gradient(k, y);
        const double gn = g.norm();
        if (!(gn > 0.0)) continue;
        // An inequality that x - y leaves through its interior does not bind.
        if (!k.equality && g.dot(toward) < 0.0) continue;
        rows.push_back(g / gn);
      }
      VectorXd tangent = toward;
      if (!rows.empty()) {
        MatrixXd A(static_cast<Eigen::Index>(rows.size()), n);
        for (std::size_t r = 0; r < rows.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
        tangent -= A.transpose() * gram_solve(A, A * toward);
      }
      const double len = tangent.norm();
      if (len <= kSlideStationary * d) {
        *stationary = true;
        break;
      }
      Vec trial = y;
      for (std::size_t i = 0; i < n_; ++i) trial[i] += alpha * tangent[static_cast<Eigen::Index>(i)];
      std::optional<Vec> on = restore(trial);
      const bool local = on && vec::distance(*on, trial) <= kSlideRestoreRatio * alpha * len;
      const double dt = local ? vec::distance(x_, *on) : std::numeric_limits<double>::infinity();
      if (dt < d) {
        y = std::move(*on);
        d = dt;
        alpha = std::min(1.0, 2.0 * alpha);
      } else {
        alpha /= 2.0;
      }
    }
    return y;
  }

  // Sum of first-order distances |r| / |grad r| to the violated constraints.
  double normalized_violation(const Vec& y) const {
    double total = 0.0;
    for (const Constraint& k : constraints_) {
      const double v = value(k, y);
      const double r = k.equality ? std::abs(v) : std::max(0.0, v);
      if (r == 0.0) continue;
      const double gn = gradient(k, y).norm();
      total += gn > 0.0 ? r / gn : std::numeric_limits<double>::infinity();
    }
    return total;
  }

  // Minimum-norm Gauss-Newton corrections onto the violated constraints,
  // ignoring x: reaches singular points (vanishing gradients) that the
  // nearest-point iteration circles around.
  std::optional<Vec> restore(Vec y) const {
    const auto n = static_cast<Eigen::Index>(n_);
    double lastSize = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      if (accurate(y)) return y;
      std::vector<const Constraint*> active;
      for (const Constraint& k : constraints_) {
        if (k.equality || value(k, y) > 0.0) active.push_back(&k);
      }
      if (active.empty()) return std::nullopt;
      const auto m = static_cast<Eigen::Index>(active.size());
      MatrixXd A(m, n);
      VectorXd c(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        const VectorXd g = gradient(*active[static_cast<std::size_t>(r)], y);
        const double gn = g.norm();
        const double scale = gn > 0.0 ? 1.0 / gn : 0.0;
        A.row(r) = scale * g.transpose();
        c[r] = scale * value(*active[static_cast<std::size_t>(r)], y);
      }
      const VectorXd d = -A.transpose() * gram_solve(A, c);
      Vec next = y;
      for (std::size_t i = 0; i < n_; ++i) next[i] += d[static_cast<Eigen::Index>(i)];
      clamp(next);
      // Newton shrinks the residual of an m-fold root by (1 - 1/m) per step;
      // a steady ratio q suggests m = 1 / (1 - q) and a step that much longer.
      const double size = c.norm();
      const double q = lastSize > 0.0 ? size / lastSize : 0.0;
      lastSize = size;
      if (q > kMultipleRootRatio && q < 1.0) {
        const double mult = std::min(1.0 / (1.0 - q), kMaxMultiplicity);
        Vec longer = y;
        for (std::size_t i = 0; i < n_; ++i) longer[i] += mult * d[static_cast<Eigen::Index>(i)];
        clamp(longer);
        if (normalized_violation(longer) < normalized_violation(next)) next = std::move(longer);
      }
      if (vec::distance(next, y) <= 4.0 * std::numeric_limits<double>::epsilon() * vec::norm(y)) break;
      y = std::move(next);
    }
    return accurate(y) ? std::optional<Vec>(y) : std::nullopt;
  }

  const ImplicitSet& set_;
  Vec x_;
  const DistanceConfig& cfg_;
  std::size_t n_;
  std::vector<Constraint> constraints_;
};

}  // namespace

namespace {

// Unit axis directions plus the sign diagonals (all of them for n <= 3).
std::vector<Vec> escape_directions(std::size_t n) {
  std::vector<Vec> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vec d(n, 0.0);
      d[i] = sign;
      dirs.push_back(d);
    }
  }
  const std::size_t patterns = n <= 3 ? (std::size_t{1} << n) : 2;
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    Vec d(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool negative = n <= 3 ? ((mask >> i) & 1U) != 0U : mask == 1;
      d[i] = (negative ? -1.0 : 1.0) / std::sqrt(static_cast<double>(n));
    }
    dirs.push_back(d);
  }
  return dirs;
}

}  // namespace

DistanceResult implicit_distance(const ImplicitSet& set, std::span<const double> x, const DistanceConfig& cfg) {
  const std::size_t n = x.size();
  bool exactly_feasible = true;
  for (const Expr& e : set.equalities) exactly_feasible = exactly_feasible && e(x) == 0.0;
  for (const Expr& g : set.inequalities) exactly_feasible = exactly_feasible && g(x) <= 0.0;
  if (exactly_feasible) return DistanceResult{0.0, Vec(x.begin(), x.end()), DistanceMethod::Feasible};

  const Projector projector(set, x, cfg);
  std::optional<DistanceResult> best;
  auto keep = [&](std::optional<Vec> y) {
    if (!y) return;
    const double d = vec::distance(x, *y);
    if (!best || d < best->value) best = DistanceResult{d, std::move(*y), DistanceMethod::Penalty};
  };
  const std::size_t starts = set.affine ? 0 : cfg.starts;
  for (std::size_t k = 0; k <= starts; ++k) {
    const double bound = best ? best->value : std::numeric_limits<double>::infinity();
    // Odd starts fill the bounding box; even starts lie on the sphere around
    // x whose radius is the best distance so far, and begin on the set.
    const std::size_t index = (k + 1) / 2;
    Vec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = radical_inverse(index, kPrimes[i % kPrimes.size()]);
    if (k > 0 && k % 2 == 0 && best && best->value > 0.0) {
      Vec dir(n);
      if (n == 2) {
        const double angle = 2.0 * std::numbers::pi * radical_inverse(index - 1, 2);
        dir = {std::cos(angle), std::sin(angle)};
      } else {
        for (std::size_t i = 0; i < n; ++i) dir[i] = 2.0 * u[i] - 1.0;
        dir = vec::normalized(dir);
      }
      Vec start(x.begin(), x.end());
      for (std::size_t i = 0; i < n; ++i) start[i] += best->value * dir[i];
      keep(projector.run_on_set(std::move(start), bound));
      continue;
    }
    Vec start(x.begin(), x.end());
    if (k > 0) {
      for (std::size_t i = 0; i < n; ++i) start[i] = set.box.lo[i] + u[i] * (set.box.hi[i] - set.box.lo[i]);
    }
    keep(projector.run(std::move(start), bound, k == 0 ? 1.0 : kStiffPenalty));
  }

  // Escape a singular point: restart on the set from small offsets around it.
  if (best && best->value > 0.0 && !set.affine && projector.singular(best->nearest)) {
    const Vec centre = best->nearest;
    for (double radius : {1e-1 * best->value}) {
      for (const Vec& dir : escape_directions(n)) {
        Vec start = centre;
        for (std::size_t i = 0; i < n; ++i) start[i] += radius * dir[i];
        keep(projector.run_on_set(std::move(start), best->value));
      }
    }
  }

  if (best && best->value > 0.0 && !set.affine) {
    Vec certified = projector.certify(best->nearest);
    if (max_violation(set, certified) <= cfg.feasibilityTol) {
      best->value = vec::distance(x, certified);
      best->nearest = std::move(certified);
    }
  }
  if (!best) {
    throw OracleFailure(fmt::format("implicit oracle: no point with violation <= {:g} found from {} starts",
                                    cfg.feasibilityTol, starts + 1));
  }
  return *best;
}

}  // namespace tancone
