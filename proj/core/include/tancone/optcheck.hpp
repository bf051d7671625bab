#pragma once

// High-order necessary conditions for a local minimizer of f over Q, checked
// on sampled direction collections and sampled tangent vectors. A Consistent
// verdict only means no violation was found at the sampled resolution.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tancone/cones.hpp"
#include "tancone/expr.hpp"
#include "tancone/setmodels.hpp"

namespace tancone {

enum class Verdict { Violated, Consistent, Inconclusive, NotApplicable };

std::string_view to_string(Verdict v);

enum class CheckKind { FirstOrder, Proper, Asymptotic };

std::string_view to_string(CheckKind k);

struct ConditionCheck {
  CheckKind kind = CheckKind::Proper;
  Vec w;
  MembershipVerdict membership;
  /// Left-hand side of the condition; set only when membership is Accepted.
  std::optional<double> value;
};

struct Certificate {
  CheckKind kind = CheckKind::Asymptotic;
  Vec w;
  double value = 0.0;
  MembershipVerdict membership;
};

struct OptimalityReport {
  /// 1 for the first-order check, otherwise the collection order k.
  std::size_t order = 1;
  DirectionCollection collection;
  double objectiveValue = 0.0;
  double scale = 1.0;
  double stationarityTol = 0.0;
  double violationTol = 0.0;
  std::vector<double> stationarityResiduals;
  /// Largest |jet coefficient - explicit tensor sum| seen in this report.
  double crossCheckGap = 0.0;
  std::vector<ConditionCheck> checks;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Certificate> certificate;
  bool extendedMemberFound = false;
  std::string note;
};

struct SampleConfig {
  std::size_t resolution = 16;
  /// Proper tangent sets need not be cones; unit grid directions are tried at
  /// each of these lengths (w = 0 is always tried).
  std::vector<double> radii{1.0};
  ConeConfig cone;
  double stationarityRelTol = 1e-8;
  double violationRelTol = 1e-8;
  std::optional<std::uint64_t> seed;
  std::size_t maxCollectionsPerOrder = 8;
};

/// Entry s-1 is the order-s coefficient of f along x + t h1 + ... + t^(k-1) h_(k-1).
std::vector<double> stationarity_residuals(const Expr& f, const DirectionCollection& coll);

OptimalityReport check_collection(const Expr& f, const SetDesc& Q, const DirectionCollection& coll,
                                  const SampleConfig& cfg = {});

OptimalityReport check_first_order(const Expr& f, const SetDesc& Q, const Vec& base, const SampleConfig& cfg = {});

struct DisqualifyResult {
  Verdict status = Verdict::Inconclusive;
  /// The violating report when status is Violated, else every report produced.
  std::vector<OptimalityReport> reports;
};

DisqualifyResult disqualify(const Expr& f, const SetDesc& Q, const Vec& base, std::size_t maxOrder,
                            const SampleConfig& cfg = {});

}  // namespace tancone
