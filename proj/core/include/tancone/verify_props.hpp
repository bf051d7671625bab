#pragma once

// Executable consistency suites: numerical surrogates of set identities and
// inclusions between tangent cones, slices and proper tangent sets. A suite
// reports a contradiction only when one side is Accepted and the other
// Rejected; Inconclusive outcomes are counted separately.

#include <cstddef>
#include <string>
#include <vector>

#include "tancone/cones.hpp"
#include "tancone/setmodels.hpp"

namespace tancone {

struct SuiteTally {
  std::string suite;
  std::string set;
  std::size_t checks = 0;
  std::size_t passed = 0;
  std::size_t contradictions = 0;
  std::size_t inconclusive = 0;
  /// Implications whose premise was not Accepted.
  std::size_t vacuous = 0;
  std::vector<std::string> details;
};

struct PropsConfig {
  std::size_t resolution = 16;
  /// Values used for alpha, beta and lambda.
  std::vector<double> factors{0.5, 2.0};
  std::size_t maxCollections = 3;
  ConeConfig cone;
};

struct PropsReport {
  std::vector<SuiteTally> tallies;

  std::size_t contradictions() const;
};

/// pr2, pr3, pr5a, pr6, pr8, pr9, pr10, cor1.
std::vector<std::string> prop_suite_names();

/// One-line statement of what a suite checks; empty for unknown names.
std::string prop_suite_description(const std::string& name);

/// Runs `suites` (names from prop_suite_names, or "all") on each set at the
/// origin. Throws std::invalid_argument for unknown suite names.
PropsReport verify_props(const std::vector<std::string>& suites, const std::vector<SetDesc>& sets,
                         const PropsConfig& cfg = {});

}  // namespace tancone
