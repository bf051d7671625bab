#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tancone/cones.hpp"
#include "tancone/optcheck.hpp"
#include "tancone/problem.hpp"
#include "tancone/report.hpp"
#include "tancone/verify_props.hpp"

namespace tancone::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(Status s) {
  switch (s) {
    case Status::Accepted: return kAccepted;
    case Status::Rejected: return kRejected;
    case Status::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

Problem load(const std::string& path) {
  try {
    return load_problem(path);
  } catch (const ProblemError& e) {
    throw FileError(fmt::format("{}: {}", path, e.what()));
  }
}

SliceSpec slice_option(const std::string& text) {
  try {
    return parse_slice(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

DirectionCollection collection_option(const Problem& p, const std::string& name) {
  DirectionCollection coll{p.point, {}};
  if (name.empty()) return coll;
  const std::vector<Vec>* dirs = p.collection(name);
  if (dirs == nullptr) throw UsageError(fmt::format("no collection named '{}' in the problem file", name));
  coll.directions = *dirs;
  return coll;
}

template <class Write>
void write_file(const std::string& path, Write&& write) {
  std::ofstream f(path);
  if (!f) throw FileError(fmt::format("cannot write '{}'", path));
  write(f);
}

struct MemberArgs {
  std::string file;
  std::string slice;
  std::string coll;
  std::string w;
  std::string csv;
};

int cmd_member(const MemberArgs& a, std::ostream& out) {
  const Problem p = load(a.file);
  const SliceSpec slice = slice_option(a.slice);
  Vec w;
  try {
    w = parse_vector(a.w);
  } catch (const std::invalid_argument& e) {
    throw UsageError(fmt::format("--w: {}", e.what()));
  }
  if (w.size() != p.dimension) throw UsageError(fmt::format("--w has {} components, expected {}", w.size(), p.dimension));

  MembershipVerdict v;
  if (slice.kind == SliceKind::FirstOrder) {
    v = member_first_order(p.set, p.point, w, p.config.cone);
  } else {
    if (a.coll.empty()) throw UsageError("--coll is required for this slice");
    const DirectionCollection coll = collection_option(p, a.coll);
    v = slice.kind == SliceKind::Proper ? member_proper(p.set, coll, w, p.config.cone)
                                        : member_slice(p.set, coll, w, slice, p.config.cone);
    out << "collection: " << a.coll << '\n';
  }
  out << "slice: " << to_string(slice) << '\n';
  out << "point: " << format_vector(p.point) << '\n';
  out << "w: " << format_vector(w) << '\n';
  write_membership_report(out, v);
  if (!a.csv.empty()) write_file(a.csv, [&](std::ostream& f) { write_evidence_csv(f, v); });
  return exit_code(v.status);
}

struct SampleArgs {
  std::string file;
  std::string slice;
  std::string coll;
  std::optional<std::size_t> resolution;
  std::optional<std::uint64_t> seed;
  std::string outPath;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const Problem p = load(a.file);
  const SliceSpec slice = slice_option(a.slice);
  if (slice.kind != SliceKind::FirstOrder && a.coll.empty()) throw UsageError("--coll is required for this slice");
  const DirectionCollection coll = collection_option(p, a.coll);
  const std::size_t resolution = a.resolution.value_or(p.config.resolution);
  if (resolution == 0) throw UsageError("--resolution must be positive");
  const std::optional<std::uint64_t> seed = a.seed ? a.seed : p.config.seed;
  if (p.dimension >= 4 && !seed) throw UsageError("dimension >= 4 needs --seed or 'seed' in [config]");

  const std::vector<ConeSample> samples = sample_cone(p.set, coll, slice, resolution, p.config.cone, seed);
  if (a.outPath.empty()) {
    write_sample_csv(out, samples);
    return kAccepted;
  }
  write_file(a.outPath, [&](std::ostream& f) { write_sample_csv(f, samples); });
  std::size_t counts[3] = {0, 0, 0};
  for (const ConeSample& s : samples) ++counts[static_cast<int>(s.verdict.status)];
  out << fmt::format("{} directions: {} Accepted, {} Rejected, {} Inconclusive\n", samples.size(), counts[0], counts[1],
                     counts[2]);
  return kAccepted;
}

struct CheckminArgs {
  std::string file;
  std::size_t maxOrder = 3;
  std::string csv;
};

int cmd_checkmin(const CheckminArgs& a, std::ostream& out) {
  const Problem p = load(a.file);
  if (!p.objective) throw UsageError(fmt::format("{}: no objective in [problem]", a.file));
  if (a.maxOrder < 1 || a.maxOrder > 6) throw UsageError("--max-order must lie in 1..6");
  DisqualifyResult r;
  if (a.maxOrder == 1) {
    r.reports.push_back(check_first_order(*p.objective, p.set, p.point, p.config));
    r.status = r.reports.back().verdict;
  } else {
    r = disqualify(*p.objective, p.set, p.point, a.maxOrder, p.config);
  }

  out << "objective: " << *p.objectiveText << '\n';
  out << "status: " << to_string(r.status) << '\n';
  if (r.status == Verdict::Violated) {
    write_optimality_report(out, r.reports.back());
  } else {
    for (const OptimalityReport& rep : r.reports) {
      out << fmt::format("order {} collection {}: {}\n", rep.order,
                         rep.collection.directions.empty() ? std::string("()")
                                                           : format_vector(rep.collection.directions.back()),
                         to_string(rep.verdict));
    }
    if (r.status == Verdict::Consistent) {
      out << "no violation found at this sampling resolution; this is not a proof of local minimality\n";
    }
  }
  if (!a.csv.empty()) write_file(a.csv, [&](std::ostream& f) { write_optimality_csv(f, r.reports); });
  switch (r.status) {
    case Verdict::Violated: return kViolated;
    case Verdict::Inconclusive: return kInconclusive;
    default: return kAccepted;
  }
}

struct PropsArgs {
  std::string suites = "all";
  std::string sets = "cusp,half-plane,parabola";
  std::size_t resolution = 16;
};

int cmd_verify_props(const PropsArgs& a, std::ostream& out) {
  std::vector<SetDesc> sets;
  for (const std::string& name : split_list(a.sets)) {
    try {
      sets.push_back(benchmark_set(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  PropsConfig cfg;
  cfg.resolution = a.resolution;
  PropsReport report;
  try {
    report = verify_props(split_list(a.suites), sets, cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  out << fmt::format("{:<12} {:<6} {:>7} {:>7} {:>14} {:>13} {:>8}\n", "set", "suite", "checks", "passed",
                     "contradictions", "inconclusive", "vacuous");
  for (const SuiteTally& t : report.tallies) {
    out << fmt::format("{:<12} {:<6} {:>7} {:>7} {:>14} {:>13} {:>8}\n", t.set, t.suite, t.checks, t.passed,
                       t.contradictions, t.inconclusive, t.vacuous);
  }
  for (const SuiteTally& t : report.tallies) {
    for (const std::string& d : t.details) out << "contradiction [" << t.set << ' ' << t.suite << "] " << d << '\n';
  }
  out << "total contradictions: " << report.contradictions() << '\n';
  return report.contradictions() == 0 ? kAccepted : kRejected;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical tangent cones and high-order optimality checks", "tancone"};
  app.require_subcommand(1);

  MemberArgs member;
  CLI::App* m = app.add_subcommand("member", "Test one vector for membership in a cone or slice");
  m->add_option("file", member.file, "Problem file")->required();
  m->add_option("--slice", member.slice, "first-order, proper, alpha:<a>, zero, infinity or extended")->required();
  m->add_option("--coll", member.coll, "Collection name from [collections]");
  m->add_option("--w", member.w, "Vector, comma separated (use --w=-1,0 for a leading minus)")->required();
  m->add_option("--csv", member.csv, "Write the evidence table as CSV");

  SampleArgs sample;
  CLI::App* s = app.add_subcommand("sample", "Classify a grid of unit directions");
  s->add_option("file", sample.file, "Problem file")->required();
  s->add_option("--slice", sample.slice, "Slice kind")->required();
  s->add_option("--coll", sample.coll, "Collection name from [collections]");
  s->add_option("--resolution", sample.resolution, "Number of grid directions");
  s->add_option("--seed", sample.seed, "Seed for dimension >= 4");
  s->add_option("--out", sample.outPath, "CSV output path (stdout when omitted)");

  CheckminArgs checkmin;
  CLI::App* c = app.add_subcommand("checkmin", "Search for a violated high-order necessary condition");
  c->add_option("file", checkmin.file, "Problem file")->required();
  c->add_option("--max-order", checkmin.maxOrder, "Highest collection order, 1..6")->capture_default_str();
  c->add_option("--csv", checkmin.csv, "Write every checked vector as CSV");

  PropsArgs props;
  CLI::App* v = app.add_subcommand("verify-props", "Run the cone identity and inclusion suites");
  v->add_option("--suite", props.suites, "all or a comma list of pr2, pr3, pr5a, pr6, pr8, pr9, pr10, cor1")
      ->capture_default_str();
  v->add_option("--sets", props.sets, "Comma list of built-in sets")->capture_default_str();
  v->add_option("--resolution", props.resolution, "Directions per grid")->capture_default_str()->check(
      CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (m->parsed()) return cmd_member(member, out);
    if (s->parsed()) return cmd_sample(sample, out);
    if (c->parsed()) return cmd_checkmin(checkmin, out);
    return cmd_verify_props(props, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
    return kFileError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFileError;
  }
}

}  // namespace tancone::cli
