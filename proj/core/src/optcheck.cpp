#include "tancone/optcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "tancone/jet.hpp"
#include "tancone/taylor.hpp"

namespace tancone {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Violated:
      return "Violated";
    case Verdict::Consistent:
      return "Consistent";
    case Verdict::Inconclusive:
      return "Inconclusive";
    case Verdict::NotApplicable:
      return "NotApplicable";
  }
  return "Inconclusive";
}

std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::FirstOrder:
      return "first-order";
    case CheckKind::Proper:
      return "proper";
    case CheckKind::Asymptotic:
      return "asymptotic";
  }
  return "proper";
}

namespace {

void require_dimension(const Expr& f, const SetDesc& Q, const Vec& base) {
  if (f.arity() != Q.dimension || base.size() != Q.dimension) {
    throw std::invalid_argument(fmt::format("objective arity {}, set dimension {}, point dimension {} disagree",
                                            f.arity(), Q.dimension, base.size()));
  }
}

void require_member(const SetDesc& Q, const Vec& base) {
  if (!contains(Q, base, 1e-8)) throw std::invalid_argument("base point does not lie in the set");
}

double problem_scale(const Expr& f, const DirectionCollection& coll) {
  double s = 1.0 + std::abs(f(coll.base));
  for (const Vec& h : coll.directions) s += vec::norm(h);
  return s;
}

// f'(x) v along the jet route, cross-checked against the tensor route.
double first_derivative(const Expr& f, const Vec& base, const Vec& v, double& gap) {
  const double jet_value = eval_on_arc(f, Arc{base, {v}, std::nullopt}, 1)[1];
  const double tensor_value = directional_derivative(f, base, v);
  gap = std::max(gap, std::abs(jet_value - tensor_value));
  return jet_value;
}

}  // namespace

std::vector<double> stationarity_residuals(const Expr& f, const DirectionCollection& coll) {
  if (f.arity() != coll.base.size()) throw std::invalid_argument("stationarity_residuals: arity mismatch");
  const std::size_t km1 = coll.directions.size();
  const Jet jet = eval_on_arc(f, Arc{coll.base, coll.directions, std::nullopt}, km1);
  return {jet.coeffs().begin() + 1, jet.coeffs().end()};
}

OptimalityReport check_collection(const Expr& f, const SetDesc& Q, const DirectionCollection& coll,
                                  const SampleConfig& cfg) {
  require_dimension(f, Q, coll.base);
  if (coll.directions.empty()) throw std::invalid_argument("check_collection: collection order must be >= 2");
  if (coll.order() > 12) throw std::out_of_range("check_collection: order above 12");
  const std::size_t k = coll.order();

  OptimalityReport report;
  report.order = k;
  report.collection = coll;
  report.objectiveValue = f(coll.base);
  report.scale = problem_scale(f, coll);
  report.stationarityTol = cfg.stationarityRelTol * report.scale;
  report.violationTol = cfg.violationRelTol * report.scale;
  report.stationarityResiduals = stationarity_residuals(f, coll);
  for (std::size_t s = 1; s <= coll.directions.size(); ++s) {
    const double explicit_sum = sum_order_s(f, coll.base, coll.directions, static_cast<int>(s));
    report.crossCheckGap = std::max(report.crossCheckGap, std::abs(explicit_sum - report.stationarityResiduals[s - 1]));
  }
  for (std::size_t s = 0; s < report.stationarityResiduals.size(); ++s) {
    if (std::abs(report.stationarityResiduals[s]) > report.stationarityTol) {
      report.verdict = Verdict::NotApplicable;
      report.note = fmt::format("order-{} residual {:.17g} exceeds tolerance {:.3g}", s + 1,
                                report.stationarityResiduals[s], report.stationarityTol);
      return report;
    }
  }

  auto record = [&](CheckKind kind, Vec w, MembershipVerdict membership) {
    ConditionCheck check{kind, std::move(w), std::move(membership), std::nullopt};
    if (check.membership.status == Status::Accepted) {
      double value = 0.0;
      if (kind == CheckKind::Proper) {
        value = eval_on_arc(f, Arc{coll.base, coll.directions, ArcTail{check.w, static_cast<int>(k), 1.0}}, k)[k];
        const double explicit_value = sum_order_k(f, coll.base, coll.directions, check.w);
        report.crossCheckGap = std::max(report.crossCheckGap, std::abs(value - explicit_value));
      } else {
        value = first_derivative(f, coll.base, check.w, report.crossCheckGap);
      }
      check.value = value;
      if (value < -report.violationTol && !report.certificate) {
        report.certificate = Certificate{kind, check.w, value, check.membership};
      }
    }
    report.checks.push_back(std::move(check));
  };

  const std::size_t n = Q.dimension;
  const Vec zero(n, 0.0);
  record(CheckKind::Proper, zero, member_proper(Q, coll, zero, cfg.cone));
  const std::vector<Vec> grid = direction_grid(n, cfg.resolution, cfg.seed);
  for (const Vec& dir : grid) {
    for (double r : cfg.radii) {
      const Vec w = vec::scaled(dir, r);
      record(CheckKind::Proper, w, member_proper(Q, coll, w, cfg.cone));
    }
    record(CheckKind::Asymptotic, dir, member_slice(Q, coll, dir, {SliceKind::Infinity, 1.0}, cfg.cone));
  }

  if (report.certificate) {
    report.verdict = Verdict::Violated;
    return report;
  }
  const bool any_member = std::any_of(report.checks.begin(), report.checks.end(), [](const ConditionCheck& c) {
    return c.membership.status == Status::Accepted;
  });
  if (any_member) {
    report.verdict = Verdict::Consistent;
    return report;
  }
  for (const Vec& dir : grid) {
    if (member_slice(Q, coll, dir, {SliceKind::Extended, 1.0}, cfg.cone).status == Status::Accepted) {
      report.extendedMemberFound = true;
      break;
    }
  }
  report.verdict = report.extendedMemberFound ? Verdict::Consistent : Verdict::Inconclusive;
  if (!report.extendedMemberFound) report.note = "no member of the extended tangent cone found on the grid";
  return report;
}

OptimalityReport check_first_order(const Expr& f, const SetDesc& Q, const Vec& base, const SampleConfig& cfg) {
  require_dimension(f, Q, base);
  require_member(Q, base);
  OptimalityReport report;
  report.order = 1;
  report.collection = DirectionCollection{base, {}};
  report.objectiveValue = f(base);
  report.scale = 1.0 + std::abs(report.objectiveValue);
  report.stationarityTol = cfg.stationarityRelTol * report.scale;
  report.violationTol = cfg.violationRelTol * report.scale;
  for (const Vec& h : direction_grid(Q.dimension, cfg.resolution, cfg.seed)) {
    ConditionCheck check{CheckKind::FirstOrder, h, member_first_order(Q, base, h, cfg.cone), std::nullopt};
    if (check.membership.status == Status::Accepted) {
      check.value = first_derivative(f, base, h, report.crossCheckGap);
      if (*check.value < -report.violationTol && !report.certificate) {
        report.certificate = Certificate{CheckKind::FirstOrder, h, *check.value, check.membership};
      }
    }
    report.checks.push_back(std::move(check));
  }
  // h = 0 always lies in the tangent cone, so the condition has at least one
  // member; still, a grid on which nothing was decided gives no coverage.
  const bool decided = std::any_of(report.checks.begin(), report.checks.end(),
                                   [](const ConditionCheck& c) { return c.membership.status != Status::Inconclusive; });
  if (report.certificate) {
    report.verdict = Verdict::Violated;
  } else {
    report.verdict = decided ? Verdict::Consistent : Verdict::Inconclusive;
  }
  return report;
}

DisqualifyResult disqualify(const Expr& f, const SetDesc& Q, const Vec& base, std::size_t maxOrder,
                            const SampleConfig& cfg) {
  if (maxOrder < 2 || maxOrder > 6) throw std::invalid_argument("disqualify: maxOrder must be in 2..6");
  DisqualifyResult result;
  OptimalityReport first = check_first_order(f, Q, base, cfg);
  if (first.verdict == Verdict::Violated) {
    result.status = Verdict::Violated;
    result.reports.push_back(std::move(first));
    return result;
  }

  std::vector<DirectionCollection> frontier;
  for (const ConditionCheck& c : first.checks) {
    if (c.membership.status != Status::Accepted || !c.value) continue;
    const double tol = cfg.stationarityRelTol * (1.0 + std::abs(first.objectiveValue) + vec::norm(c.w));
    if (std::abs(*c.value) <= tol && frontier.size() < cfg.maxCollectionsPerOrder) {
      frontier.push_back(DirectionCollection{base, {c.w}});
    }
  }
  bool any_consistent = false;
  bool any_inconclusive = first.verdict == Verdict::Inconclusive;
  result.reports.push_back(std::move(first));

  for (std::size_t k = 2; k <= maxOrder && !frontier.empty(); ++k) {
    std::vector<DirectionCollection> next;
    for (const DirectionCollection& coll : frontier) {
      OptimalityReport report = check_collection(f, Q, coll, cfg);
      if (report.verdict == Verdict::Violated) {
        result.status = Verdict::Violated;
        result.reports = {std::move(report)};
        return result;
      }
      any_consistent = any_consistent || report.verdict == Verdict::Consistent;
      any_inconclusive = any_inconclusive || report.verdict == Verdict::Inconclusive;
      if (k < maxOrder && report.verdict != Verdict::NotApplicable) {
        // An empty proper tangent set stays empty at every higher order.
        std::vector<Vec> extensions;
        for (const ConditionCheck& c : report.checks) {
          if (c.kind == CheckKind::Proper && c.membership.status == Status::Accepted) extensions.push_back(c.w);
        }
        if (!extensions.empty()) {
          const Vec zero(Q.dimension, 0.0);
          if (std::none_of(extensions.begin(), extensions.end(), [](const Vec& w) { return vec::is_zero(w); })) {
            extensions.push_back(zero);
          }
          for (const Vec& w : extensions) {
            if (next.size() >= cfg.maxCollectionsPerOrder) break;
            DirectionCollection extended = coll;
            extended.directions.push_back(w);
            next.push_back(std::move(extended));
          }
        }
      }
      result.reports.push_back(std::move(report));
    }
    frontier = std::move(next);
  }
  if (any_consistent) {
    result.status = Verdict::Consistent;
  } else if (any_inconclusive) {
    result.status = Verdict::Inconclusive;
  } else {
    result.status = Verdict::Consistent;
  }
  return result;
}

}  // namespace tancone
