#include "tancone/problem.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace tancone {

ProblemError::ProblemError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message : fmt::format("line {}: {}", line, message)), line_(line) {}

const std::vector<Vec>* Problem::collection(std::string_view name) const {
  for (const auto& [key, dirs] : collections) {
    if (key == name) return &dirs;
  }
  return nullptr;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument(fmt::format("'{}' is not a finite real number", s));
  }
  return v;
}

long long parse_integer(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(fmt::format("'{}' is not an integer", s));
  }
  return v;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || (std::isalpha(static_cast<unsigned char>(s.front())) == 0 && s.front() != '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-'; });
}

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

class SectionReader {
 public:
  SectionReader(const Section& s, std::set<std::string> single, std::set<std::string> repeated)
      : section_(s), single_(std::move(single)), repeated_(std::move(repeated)) {
    std::set<std::string> seen;
    for (const Entry& e : s.entries) {
      if (single_.count(e.key) == 0 && repeated_.count(e.key) == 0) {
        throw ProblemError(e.line, fmt::format("unknown key '{}' in [{}]", e.key, s.name));
      }
      if (single_.count(e.key) != 0 && !seen.insert(e.key).second) {
        throw ProblemError(e.line, fmt::format("duplicate key '{}' in [{}]", e.key, s.name));
      }
    }
  }

  const Entry* find(std::string_view key) const {
    for (const Entry& e : section_.entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  const Entry& require(std::string_view key) const {
    const Entry* e = find(key);
    if (e == nullptr) throw ProblemError(section_.line, fmt::format("[{}] is missing '{}'", section_.name, key));
    return *e;
  }

  std::vector<const Entry*> all(std::string_view key) const {
    std::vector<const Entry*> out;
    for (const Entry& e : section_.entries) {
      if (e.key == key) out.push_back(&e);
    }
    return out;
  }

 private:
  const Section& section_;
  std::set<std::string> single_;
  std::set<std::string> repeated_;
};

template <class F>
auto at_line(std::size_t line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ProblemError&) {
    throw;
  } catch (const ParseError& e) {
    throw ProblemError(line, fmt::format("expression: {}", e.what()));
  } catch (const std::exception& e) {
    throw ProblemError(line, e.what());
  }
}

Vec vector_of_length(const Entry& e, std::size_t n) {
  return at_line(e.line, [&] {
    Vec v = parse_vector(e.value);
    if (v.size() != n) throw std::invalid_argument(fmt::format("expected {} components, got {}", n, v.size()));
    return v;
  });
}

SetDesc build_set(const Section& s, const std::vector<Section>& members, const Problem& p) {
  const SectionReader type_probe(s, {"type", "name", "parameter", "domain", "grid", "box"},
                                 {"equality", "inequality", "component", "point"});
  const Entry& type = type_probe.require("type");
  const std::string kind = type.value;
  const std::size_t n = p.dimension;

  if (kind == "implicit") {
    const SectionReader r(s, {"type", "box"}, {"equality", "inequality"});
    std::vector<Expr> eqs;
    std::vector<Expr> ineqs;
    for (const Entry* e : r.all("equality")) eqs.push_back(at_line(e->line, [&] { return parse(e->value, p.variables); }));
    for (const Entry* e : r.all("inequality")) {
      ineqs.push_back(at_line(e->line, [&] { return parse(e->value, p.variables); }));
    }
    BoundingBox box = BoundingBox::cube(n);
    if (const Entry* b = r.find("box")) {
      box = at_line(b->line, [&] {
        const auto rows = split(b->value, ';');
        BoundingBox out;
        if (rows.size() == 1) {
          const Vec lh = parse_vector(rows[0]);
          if (lh.size() != 2) throw std::invalid_argument("box expects 'lo, hi' or one 'lo, hi' pair per coordinate");
          out = BoundingBox{Vec(n, lh[0]), Vec(n, lh[1])};
        } else {
          if (rows.size() != n) throw std::invalid_argument(fmt::format("box needs {} 'lo, hi' pairs", n));
          for (std::string_view row : rows) {
            const Vec lh = parse_vector(row);
            if (lh.size() != 2) throw std::invalid_argument("box pair must be 'lo, hi'");
            out.lo.push_back(lh[0]);
            out.hi.push_back(lh[1]);
          }
        }
        return out;
      });
    }
    return at_line(type.line, [&] { return make_implicit(n, std::move(eqs), std::move(ineqs), std::move(box)); });
  }
  if (kind == "parametric") {
    const SectionReader r(s, {"type", "parameter", "domain", "grid"}, {"component"});
    const std::string param = r.find("parameter") != nullptr ? r.find("parameter")->value : "s";
    const std::vector<std::string> names{param};
    std::vector<Expr> comps;
    for (const Entry* e : r.all("component")) comps.push_back(at_line(e->line, [&] { return parse(e->value, names); }));
    if (comps.size() != n) {
      throw ProblemError(type.line, fmt::format("parametric curve needs {} components, found {}", n, comps.size()));
    }
    const Entry& dom = r.require("domain");
    const Vec lh = vector_of_length(dom, 2);
    std::size_t grid = DistanceConfig{}.gridPoints;
    if (const Entry* g = r.find("grid")) grid = at_line(g->line, [&] { return static_cast<std::size_t>(parse_integer(g->value)); });
    return at_line(dom.line, [&] { return make_parametric(std::move(comps), lh[0], lh[1], grid); });
  }
  if (kind == "pointcloud") {
    const SectionReader r(s, {"type"}, {"point"});
    std::vector<Vec> pts;
    for (const Entry* e : r.all("point")) pts.push_back(vector_of_length(*e, n));
    if (pts.empty()) throw ProblemError(type.line, "point cloud needs at least one 'point'");
    return make_point_cloud(std::move(pts));
  }
  if (kind == "builtin") {
    const SectionReader r(s, {"type", "name"}, {});
    const Entry& name = r.require("name");
    SetDesc q = at_line(name.line, [&] { return benchmark_set(name.value); });
    if (q.dimension != n) {
      throw ProblemError(name.line, fmt::format("built-in set '{}' has dimension {}", name.value, q.dimension));
    }
    return q;
  }
  if (kind == "union") {
    const SectionReader r(s, {"type"}, {});
    if (members.empty()) throw ProblemError(type.line, "union needs at least one [set.member] section");
    std::vector<SetDesc> parts;
    for (const Section& m : members) {
      const SetDesc part = build_set(m, {}, p);
      if (std::holds_alternative<UnionSet>(part.model)) throw ProblemError(m.line, "nested unions are not supported");
      parts.push_back(part);
    }
    return make_union(std::move(parts));
  }
  throw ProblemError(type.line, fmt::format("unknown set type '{}' (implicit, parametric, pointcloud, union, builtin)", kind));
}

void apply_config(const Section& s, SampleConfig& cfg) {
  const SectionReader r(s,
                        {"resolution", "seed", "t0", "ratio", "levels", "accept_tol", "reject_floor", "warmup",
                         "grid_points", "refine_tol", "starts", "feasibility_tol", "stationarity_tol",
                         "violation_tol", "max_collections", "radii", "rounding_guard"},
                        {});
  for (const Entry& e : s.entries) {
    at_line(e.line, [&] {
      auto positive_int = [&] {
        const long long v = parse_integer(e.value);
        if (v <= 0) throw std::invalid_argument(fmt::format("'{}' must be a positive integer", e.key));
        return static_cast<std::size_t>(v);
      };
      auto positive_real = [&] {
        const double v = parse_real(e.value);
        if (!(v > 0.0)) throw std::invalid_argument(fmt::format("'{}' must be positive", e.key));
        return v;
      };
      ConeConfig& cone = cfg.cone;
      if (e.key == "resolution") cfg.resolution = positive_int();
      else if (e.key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(e.value));
      else if (e.key == "t0") cone.schedule.t0 = positive_real();
      else if (e.key == "ratio") {
        cone.schedule.ratio = positive_real();
        if (cone.schedule.ratio >= 1.0) throw std::invalid_argument("'ratio' must lie in (0, 1)");
      } else if (e.key == "levels") cone.schedule.levels = static_cast<int>(positive_int());
      else if (e.key == "accept_tol") cone.rule.acceptTol = positive_real();
      else if (e.key == "reject_floor") cone.rule.rejectFloor = positive_real();
      else if (e.key == "warmup") {
        const long long v = parse_integer(e.value);
        if (v < 0) throw std::invalid_argument("'warmup' must be non-negative");
        cone.rule.warmup = static_cast<int>(v);
      }
      else if (e.key == "grid_points") cone.distance.gridPoints = positive_int();
      else if (e.key == "refine_tol") cone.distance.refineTol = positive_real();
      else if (e.key == "starts") cone.distance.starts = positive_int();
      else if (e.key == "feasibility_tol") cone.distance.feasibilityTol = positive_real();
      else if (e.key == "stationarity_tol") cfg.stationarityRelTol = positive_real();
      else if (e.key == "violation_tol") cfg.violationRelTol = positive_real();
      else if (e.key == "max_collections") cfg.maxCollectionsPerOrder = positive_int();
      else if (e.key == "rounding_guard") cone.roundingGuard = positive_real();
      else if (e.key == "radii") {
        cfg.radii = parse_vector(e.value);
        if (cfg.radii.empty() || std::any_of(cfg.radii.begin(), cfg.radii.end(), [](double x) { return !(x > 0.0); })) {
          throw std::invalid_argument("'radii' must be positive reals");
        }
      }
      return 0;
    });
  }
}

}  // namespace

Vec parse_vector(std::string_view text) {
  Vec v;
  for (std::string_view part : split(text, ',')) v.push_back(parse_real(part));
  return v;
}

Problem parse_problem(std::string_view text) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ProblemError(line_no, "section header must end with ']'");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> known{"problem", "set", "set.member", "collections", "config"};
      if (known.count(name) == 0) throw ProblemError(line_no, fmt::format("unknown section [{}]", name));
      if (name != "set.member") {
        for (const Section& s : sections) {
          if (s.name == name) throw ProblemError(line_no, fmt::format("duplicate section [{}]", name));
        }
      }
      sections.push_back(Section{name, line_no, {}});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ProblemError(line_no, "expected 'key = value'");
    if (sections.empty()) throw ProblemError(line_no, "entry before the first section header");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ProblemError(line_no, "empty key");
    if (value.empty()) throw ProblemError(line_no, fmt::format("empty value for '{}'", key));
    sections.back().entries.push_back(Entry{key, value, line_no});
  }

  auto find_section = [&](std::string_view name) -> const Section* {
    for (const Section& s : sections) {
      if (s.name == name) return &s;
    }
    return nullptr;
  };

  Problem p;
  const Section* prob = find_section("problem");
  if (prob == nullptr) throw ProblemError(0, "missing [problem] section");
  const SectionReader pr(*prob, {"dimension", "variables", "objective", "point"}, {});
  const Entry& dim = pr.require("dimension");
  p.dimension = at_line(dim.line, [&] {
    const long long d = parse_integer(dim.value);
    if (d <= 0) throw std::invalid_argument("dimension must be positive");
    return static_cast<std::size_t>(d);
  });
  if (const Entry* vars = pr.find("variables")) {
    for (std::string_view name : split(vars->value, ',')) {
      if (!is_identifier(name) || name.find('-') != std::string_view::npos) {
        throw ProblemError(vars->line, fmt::format("'{}' is not a valid variable name", name));
      }
      if (std::find(p.variables.begin(), p.variables.end(), name) != p.variables.end()) {
        throw ProblemError(vars->line, fmt::format("duplicate variable name '{}'", name));
      }
      p.variables.emplace_back(name);
    }
    if (p.variables.size() != p.dimension) {
      throw ProblemError(vars->line, fmt::format("{} variable names for dimension {}", p.variables.size(), p.dimension));
    }
  } else {
    p.variables = default_variable_names(p.dimension);
  }
  p.point = vector_of_length(pr.require("point"), p.dimension);
  if (const Entry* obj = pr.find("objective")) {
    p.objectiveText = obj->value;
    p.objective = at_line(obj->line, [&] { return parse(obj->value, p.variables); });
  }

  const Section* set = find_section("set");
  if (set == nullptr) throw ProblemError(0, "missing [set] section");
  std::vector<Section> members;
  for (const Section& s : sections) {
    if (s.name == "set.member") members.push_back(s);
  }
  p.set = build_set(*set, members, p);
  if (!members.empty() && !std::holds_alternative<UnionSet>(p.set.model)) {
    throw ProblemError(members.front().line, "[set.member] is only allowed with type = union");
  }

  if (const Section* colls = find_section("collections")) {
    for (const Entry& e : colls->entries) {
      if (!is_identifier(e.key)) throw ProblemError(e.line, fmt::format("'{}' is not a valid collection name", e.key));
      if (p.collection(e.key) != nullptr) throw ProblemError(e.line, fmt::format("duplicate collection '{}'", e.key));
      std::vector<Vec> dirs;
      for (std::string_view part : split(e.value, ';')) {
        dirs.push_back(vector_of_length(Entry{e.key, std::string(part), e.line}, p.dimension));
      }
      p.collections.emplace_back(e.key, std::move(dirs));
    }
  }
  if (const Section* cfg = find_section("config")) apply_config(*cfg, p.config);
  return p;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError(0, fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

}  // namespace tancone
