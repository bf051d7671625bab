#pragma once

// Membership tests for first-order tangent cones, k-th order proper tangent
// sets, extended tangent cones and their slices. Every test scans the scaled
// distance
//
//     d(x + t h1 + ... + t^(k-1) h_(k-1) + t^(k-1) tau w, Q) / (t^(k-1) tau)
//
// along a geometric schedule t_j -> 0 with tau tied to t by a power law, and
// turns the resulting table into a three-valued verdict.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tancone/setmodels.hpp"
#include "tancone/vec.hpp"

namespace tancone {

enum class Status { Accepted, Rejected, Inconclusive };

std::string_view to_string(Status s);

struct EvidenceRow {
  int level = 0;
  double t = 0.0;
  double tau = 0.0;
  double ratio = 0.0;  // tau / t
  double distance = 0.0;
  double scaled = 0.0;
};

struct MembershipVerdict {
  Status status = Status::Inconclusive;
  std::vector<EvidenceRow> evidence;
  std::optional<int> decisiveLevel;
  /// Scan row that produced the evidence, e.g. "tau=c*t^1.5".
  std::string row;
  std::string note;
};

/// Base point plus (h1, ..., h_(k-1)); order k = directions.size() + 1.
struct DirectionCollection {
  Vec base;
  std::vector<Vec> directions;

  std::size_t order() const noexcept { return directions.size() + 1; }
};

enum class SliceKind { FirstOrder, Proper, Alpha, Zero, Infinity, Extended };

struct SliceSpec {
  SliceKind kind = SliceKind::Extended;
  double alpha = 1.0;  // Alpha only
};

std::string to_string(const SliceSpec& s);
/// "first-order", "proper", "alpha:<a>", "zero", "infinity", "extended".
/// Throws std::invalid_argument on anything else.
SliceSpec parse_slice(std::string_view text);

struct RefinementSchedule {
  double t0 = 0.1;
  double ratio = 0.5;
  int levels = 48;

  std::vector<double> values() const;
};

struct VerdictRule {
  double acceptTol = 1e-6;
  double rejectFloor = 1e-2;
  int warmup = 4;
  int terminal = 3;
  /// Slack allowed in the nonincreasing-trend test for accepted tails; matches
  /// the rounding guard, below which scaled distances are floating-point noise.
  double trendSlack = 1e-7;
};

/// Rows with tau = c t^e and free c search c over 2^m, m in [minLog2, maxLog2],
/// refining in log2 c around the best grid value when it lies below refineBelow.
struct CoefficientScan {
  int minLog2 = -7;
  int maxLog2 = 7;
  int refineIters = 45;
  double refineBelow = 0.5;
};

struct ConeConfig {
  RefinementSchedule schedule;
  VerdictRule rule;
  CoefficientScan coefficients;
  DistanceConfig distance;
  std::vector<double> zeroBetas{0.25, 0.5, 1.0};
  std::vector<double> infinityThetas{0.25, 0.5, 0.75};
  std::vector<double> extendedExponents{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
  /// Levels where 4 eps |point|_inf / denominator exceeds this are dropped:
  /// the tail term no longer survives rounding.
  double roundingGuard = 1e-7;
  /// Free-coefficient rows accept only where tau <= 1/regimeSeparation; zero
  /// rows also need tau/t <= 1/regimeSeparation, infinity rows tau/t >= it.
  double regimeSeparation = 10.0;
  /// Absolute arc-distance tolerance for polynomial admissibility, times (1 + |x|).
  double polyAbsTol = 1e-9;
};

/// Applies the verdict rule to a scaled-distance table. Sets *decisive to
/// the first level of the deciding window when one exists.
Status apply_verdict_rule(std::span<const double> scaled, const VerdictRule& rule, std::optional<int>* decisive);

MembershipVerdict member_first_order(const SetDesc& Q, const Vec& base, const Vec& h, const ConeConfig& cfg = {});
MembershipVerdict member_proper(const SetDesc& Q, const DirectionCollection& coll, const Vec& w,
                                const ConeConfig& cfg = {});
/// Any kind but FirstOrder.
MembershipVerdict member_slice(const SetDesc& Q, const DirectionCollection& coll, const Vec& w,
                               const SliceSpec& slice, const ConeConfig& cfg = {});

/// [h1 in TQ(x), h2 in T^2_pr(x, h1), ..., h_(k-1) in T^(k-1)_pr(x, h1..h_(k-2))].
std::vector<MembershipVerdict> is_admissible(const SetDesc& Q, const DirectionCollection& coll,
                                             const ConeConfig& cfg = {});

MembershipVerdict is_polynomially_admissible(const SetDesc& Q, const DirectionCollection& coll,
                                             const ConeConfig& cfg = {});

/// Deterministic unit directions: n=1 {1,-1}; n=2 equally spaced angles from 0;
/// n=3 Fibonacci sphere; n>=4 seeded low-discrepancy points (seed required).
std::vector<Vec> direction_grid(std::size_t n, std::size_t resolution, std::optional<std::uint64_t> seed = {});

struct ConeSample {
  Vec direction;
  MembershipVerdict verdict;
};

std::vector<ConeSample> sample_cone(const SetDesc& Q, const DirectionCollection& coll, const SliceSpec& slice,
                                    std::size_t resolution, const ConeConfig& cfg = {},
                                    std::optional<std::uint64_t> seed = {});

/// Columns level,t,tau,ratio,distance,scaledDistance.
void write_evidence_csv(std::ostream& out, const MembershipVerdict& v);

}  // namespace tancone
