#pragma once

// Text and CSV rendering. Every number is printed with 17 significant digits.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tancone/cones.hpp"
#include "tancone/optcheck.hpp"

namespace tancone {

std::string format_number(double x);
/// "(a, b, c)".
std::string format_vector(std::span<const double> v);

void write_membership_report(std::ostream& out, const MembershipVerdict& v);

/// Columns index,w1..wn,status.
void write_sample_csv(std::ostream& out, const std::vector<ConeSample>& samples);

void write_optimality_report(std::ostream& out, const OptimalityReport& r);

/// One row per checked vector: order,kind,w1..wn,membership,value.
void write_optimality_csv(std::ostream& out, std::span<const OptimalityReport> reports);

}  // namespace tancone
