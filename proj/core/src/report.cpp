#include "tancone/report.hpp"

#include <ostream>

#include <fmt/format.h>

namespace tancone {

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

std::string format_vector(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += format_number(v[i]);
  }
  return s + ")";
}

void write_membership_report(std::ostream& out, const MembershipVerdict& v) {
  out << "verdict: " << to_string(v.status) << '\n';
  if (!v.row.empty()) out << "row: " << v.row << '\n';
  if (v.decisiveLevel) out << "decisive level: " << *v.decisiveLevel << '\n';
  if (!v.note.empty()) out << "note: " << v.note << '\n';
  if (!v.evidence.empty()) {
    out << fmt::format("{:>5}  {:>24}  {:>24}  {:>24}  {:>24}\n", "level", "t", "tau", "distance", "scaled");
    for (const EvidenceRow& r : v.evidence) {
      out << fmt::format("{:>5}  {:>24.17g}  {:>24.17g}  {:>24.17g}  {:>24.17g}\n", r.level, r.t, r.tau, r.distance,
                         r.scaled);
    }
  }
}

void write_sample_csv(std::ostream& out, const std::vector<ConeSample>& samples) {
  const std::size_t n = samples.empty() ? 0 : samples.front().direction.size();
  out << "index";
  for (std::size_t i = 0; i < n; ++i) out << ",w" << i + 1;
  out << ",status\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    out << k;
    for (double x : samples[k].direction) out << ',' << format_number(x);
    out << ',' << to_string(samples[k].verdict.status) << '\n';
  }
}

void write_optimality_report(std::ostream& out, const OptimalityReport& r) {
  out << "order: " << r.order << '\n';
  out << "point: " << format_vector(r.collection.base) << '\n';
  for (std::size_t i = 0; i < r.collection.directions.size(); ++i) {
    out << "h" << i + 1 << ": " << format_vector(r.collection.directions[i]) << '\n';
  }
  out << "objective: " << format_number(r.objectiveValue) << '\n';
  if (!r.stationarityResiduals.empty()) {
    out << "stationarity residuals: " << format_vector(r.stationarityResiduals) << " (tol "
        << format_number(r.stationarityTol) << ")\n";
  }
  out << "verdict: " << to_string(r.verdict) << '\n';
  if (r.certificate) {
    out << "certificate: kind=" << to_string(r.certificate->kind) << " w=" << format_vector(r.certificate->w)
        << " value=" << format_number(r.certificate->value) << " membership=" << to_string(r.certificate->membership.status)
        << " row=" << r.certificate->membership.row << '\n';
  }
  std::size_t accepted = 0;
  std::size_t inconclusive = 0;
  for (const ConditionCheck& c : r.checks) {
    accepted += c.membership.status == Status::Accepted ? 1 : 0;
    inconclusive += c.membership.status == Status::Inconclusive ? 1 : 0;
  }
  out << "checks: " << r.checks.size() << " (accepted " << accepted << ", inconclusive " << inconclusive << ")\n";
  out << "jet/tensor cross-check gap: " << format_number(r.crossCheckGap) << '\n';
  if (!r.note.empty()) out << "note: " << r.note << '\n';
  if (r.verdict == Verdict::Consistent) {
    out << "no violation found at this sampling resolution; this is not a proof of local minimality\n";
  }
}

void write_optimality_csv(std::ostream& out, std::span<const OptimalityReport> reports) {
  std::size_t n = 0;
  for (const OptimalityReport& r : reports) n = std::max(n, r.collection.base.size());
  out << "order,kind";
  for (std::size_t i = 0; i < n; ++i) out << ",w" << i + 1;
  out << ",membership,value\n";
  for (const OptimalityReport& r : reports) {
    for (const ConditionCheck& c : r.checks) {
      out << r.order << ',' << to_string(c.kind);
      for (double x : c.w) out << ',' << format_number(x);
      out << ',' << to_string(c.membership.status) << ',';
      if (c.value) out << format_number(*c.value);
      out << '\n';
    }
  }
}

}  // namespace tancone
