#include "tancone/verify_props.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace tancone {

std::size_t PropsReport::contradictions() const {
  std::size_t n = 0;
  for (const SuiteTally& t : tallies) n += t.contradictions;
  return n;
}

std::vector<std::string> prop_suite_names() { return {"pr2", "pr3", "pr5a", "pr6", "pr8", "pr9", "pr10", "cor1"}; }

std::string prop_suite_description(const std::string& name) {
  static const std::map<std::string, std::string> text{
      {"pr2", "extended cone with all-zero directions equals the first-order cone"},
      {"pr3", "a leading zero direction does not change the extended cone"},
      {"pr5a", "w in the alpha slice iff alpha w is a proper tangent vector"},
      {"pr6", "slices are invariant under (h1, h2, ...) -> (b h1, b^2 h2, ...) up to alpha -> alpha b^-k"},
      {"pr8", "extended at (h, 0) lies in the zero slice at (h)"},
      {"pr9", "a nonempty zero slice puts 0 in every proper and alpha slice"},
      {"pr10", "order-k slices embed into order 2k-1 with interleaved zeros"},
      {"cor1", "proper, alpha, zero and infinity slices lie in the extended cone"},
  };
  const auto it = text.find(name);
  return it == text.end() ? std::string{} : it->second;
}

namespace {

std::string key_of(const Vec& v) {
  std::string s;
  for (double x : v) s += fmt::format("{:.17g},", x);
  return s;
}

class Runner {
 public:
  Runner(const SetDesc& Q, const PropsConfig& cfg) : Q_(Q), cfg_(cfg), base_(Q.dimension, 0.0) {
    grid_ = direction_grid(Q.dimension, cfg.resolution, std::uint64_t{1});
    for (const Vec& w : grid_) {
      if (first_order(w) == Status::Accepted && hs_.size() < cfg.maxCollections) hs_.push_back(w);
    }
  }

  const std::vector<Vec>& grid() const { return grid_; }
  const std::vector<Vec>& collections() const { return hs_; }

  Status first_order(const Vec& w) {
    const std::string key = "fo|" + key_of(w);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Status s = member_first_order(Q_, base_, w, cfg_.cone).status;
    memo_.emplace(key, s);
    return s;
  }

  Status slice(const SliceSpec& spec, const std::vector<Vec>& dirs, const Vec& w) {
    std::string key = to_string(spec) + "|" + key_of(w);
    for (const Vec& h : dirs) key += "|" + key_of(h);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const DirectionCollection coll{base_, dirs};
    const Status s = spec.kind == SliceKind::Proper ? member_proper(Q_, coll, w, cfg_.cone).status
                                                   : member_slice(Q_, coll, w, spec, cfg_.cone).status;
    memo_.emplace(key, s);
    return s;
  }

 private:
  const SetDesc& Q_;
  const PropsConfig& cfg_;
  Vec base_;
  std::vector<Vec> grid_;
  std::vector<Vec> hs_;
  std::map<std::string, Status> memo_;
};

constexpr std::size_t kMaxDetails = 20;

void add_detail(SuiteTally& t, std::string text) {
  if (t.details.size() < kMaxDetails) t.details.push_back(std::move(text));
}

/// Both sides are numerical surrogates of the same set membership.
void record_equal(SuiteTally& t, Status a, Status b, const std::string& what) {
  ++t.checks;
  if (a == b) {
    ++t.passed;
  } else if (a == Status::Inconclusive || b == Status::Inconclusive) {
    ++t.inconclusive;
  } else {
    ++t.contradictions;
    add_detail(t, fmt::format("{}: {} vs {}", what, to_string(a), to_string(b)));
  }
}

/// Membership on the left implies membership on the right.
void record_implies(SuiteTally& t, Status premise, Status conclusion, const std::string& what) {
  ++t.checks;
  if (premise != Status::Accepted) {
    ++t.vacuous;
  } else if (conclusion == Status::Accepted) {
    ++t.passed;
  } else if (conclusion == Status::Inconclusive) {
    ++t.inconclusive;
  } else {
    ++t.contradictions;
    add_detail(t, fmt::format("{}: premise Accepted, conclusion Rejected", what));
  }
}

Vec zeros(std::size_t n) { return Vec(n, 0.0); }

std::string label(const Vec& h, const Vec& w) { return fmt::format("h=({}) w=({})", key_of(h), key_of(w)); }

SliceSpec alpha(double a) { return {SliceKind::Alpha, a}; }
constexpr SliceSpec kProper{SliceKind::Proper, 1.0};
constexpr SliceSpec kZero{SliceKind::Zero, 1.0};
constexpr SliceSpec kInfinity{SliceKind::Infinity, 1.0};
constexpr SliceSpec kExtended{SliceKind::Extended, 1.0};

// The extended cone with all h = 0 equals the first-order tangent cone.
void suite_zero_collection(Runner& r, std::size_t n, SuiteTally& t) {
  for (const Vec& w : r.grid()) {
    const Status fo = r.first_order(w);
    for (std::size_t k : {2U, 3U}) {
      const std::vector<Vec> hs(k - 1, zeros(n));
      record_equal(t, r.slice(kExtended, hs, w), fo, fmt::format("k={} {}", k, label(zeros(n), w)));
    }
  }
}

// Prepending a zero direction does not change the extended cone.
void suite_leading_zero(Runner& r, std::size_t n, SuiteTally& t) {
  for (const Vec& h : r.collections()) {
    for (const Vec& w : r.grid()) {
      record_equal(t, r.slice(kExtended, {zeros(n), h}, w), r.slice(kExtended, {h}, w), label(h, w));
    }
  }
}

// w in the alpha slice iff alpha w in the proper tangent set.
void suite_alpha_scaling(Runner& r, const PropsConfig& cfg, SuiteTally& t) {
  for (const Vec& h : r.collections()) {
    for (const Vec& w : r.grid()) {
      for (double a : cfg.factors) {
        record_equal(t, r.slice(alpha(a), {h}, w), r.slice(kProper, {h}, vec::scaled(w, a)),
                     fmt::format("alpha={} {}", a, label(h, w)));
      }
    }
  }
}

// Rescaling H to (beta h1, beta^2 h2, ...) leaves the zero, infinity and
// extended slices unchanged and maps the alpha slice to alpha beta^-k.
void suite_rescaling(Runner& r, const PropsConfig& cfg, SuiteTally& t) {
  constexpr std::size_t k = 2;
  for (const Vec& h : r.collections()) {
    for (const Vec& w : r.grid()) {
      for (double b : cfg.factors) {
        const std::vector<Vec> scaledH{vec::scaled(h, b)};
        for (const SliceSpec& s : {kZero, kInfinity, kExtended}) {
          record_equal(t, r.slice(s, scaledH, w), r.slice(s, {h}, w),
                       fmt::format("{} beta={} {}", to_string(s), b, label(h, w)));
        }
        for (double a : cfg.factors) {
          const double mapped = a * std::pow(b, -static_cast<double>(k));
          record_equal(t, r.slice(alpha(a), scaledH, w), r.slice(alpha(mapped), {h}, w),
                       fmt::format("alpha={} beta={} {}", a, b, label(h, w)));
        }
      }
    }
  }
}

// Extended order 3 at (h, 0) inside the zero slice at (h).
void suite_trailing_zero(Runner& r, std::size_t n, SuiteTally& t) {
  for (const Vec& h : r.collections()) {
    for (const Vec& w : r.grid()) {
      record_implies(t, r.slice(kExtended, {h, zeros(n)}, w), r.slice(kZero, {h}, w), label(h, w));
    }
  }
}

// A nonempty zero slice forces 0 into every proper and alpha slice.
void suite_origin(Runner& r, std::size_t n, const PropsConfig& cfg, SuiteTally& t) {
  for (const Vec& h : r.collections()) {
    Status anyZero = Status::Rejected;
    for (const Vec& w : r.grid()) {
      const Status s = r.slice(kZero, {h}, w);
      if (s == Status::Accepted) {
        anyZero = Status::Accepted;
        break;
      }
      if (s == Status::Inconclusive) anyZero = Status::Inconclusive;
    }
    record_implies(t, anyZero, r.slice(kProper, {h}, zeros(n)), label(h, zeros(n)));
    for (double a : cfg.factors) {
      record_implies(t, anyZero, r.slice(alpha(a), {h}, zeros(n)), fmt::format("alpha={} {}", a, label(h, zeros(n))));
    }
  }
}

// Order-k slices embed into order-(2k-1) slices with a zero inserted.
void suite_order_doubling(Runner& r, std::size_t n, const PropsConfig& cfg, SuiteTally& t) {
  std::vector<double> alphas{1.0};
  alphas.insert(alphas.end(), cfg.factors.begin(), cfg.factors.end());
  for (const Vec& h : r.collections()) {
    for (const Vec& w : r.grid()) {
      const Status zeroDoubled = r.slice(kZero, {zeros(n), h}, w);
      const Status inf = r.slice(kInfinity, {h}, w);
      for (double a : alphas) {
        const SliceSpec s = a == 1.0 ? kProper : alpha(a);
        record_implies(t, r.slice(s, {h}, w), zeroDoubled, fmt::format("alpha={} into zero {}", a, label(h, w)));
        record_implies(t, r.slice(alpha(a), {zeros(n), h}, w), inf,
                       fmt::format("alpha={} into infinity {}", a, label(h, w)));
      }
    }
  }
}

// Every slice is contained in the extended cone.
void suite_slices_in_extended(Runner& r, const PropsConfig& cfg, SuiteTally& t) {
  for (const Vec& h : r.collections()) {
    for (const Vec& w : r.grid()) {
      const Status ext = r.slice(kExtended, {h}, w);
      std::vector<SliceSpec> specs{kProper, kZero, kInfinity};
      for (double a : cfg.factors) specs.push_back(alpha(a));
      for (const SliceSpec& s : specs) {
        record_implies(t, r.slice(s, {h}, w), ext, fmt::format("{} {}", to_string(s), label(h, w)));
      }
    }
  }
}

}  // namespace

PropsReport verify_props(const std::vector<std::string>& suites, const std::vector<SetDesc>& sets,
                         const PropsConfig& cfg) {
  const std::vector<std::string> known = prop_suite_names();
  std::vector<std::string> selected;
  for (const std::string& s : suites) {
    if (s == "all") {
      selected = known;
      break;
    }
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw std::invalid_argument(fmt::format("unknown suite '{}'", s));
    }
    if (std::find(selected.begin(), selected.end(), s) == selected.end()) selected.push_back(s);
  }

  PropsReport report;
  for (const SetDesc& Q : sets) {
    Runner runner(Q, cfg);
    const std::size_t n = Q.dimension;
    for (const std::string& name : selected) {
      SuiteTally t;
      t.suite = name;
      t.set = Q.name;
      if (name == "pr2") suite_zero_collection(runner, n, t);
      else if (name == "pr3") suite_leading_zero(runner, n, t);
      else if (name == "pr5a") suite_alpha_scaling(runner, cfg, t);
      else if (name == "pr6") suite_rescaling(runner, cfg, t);
      else if (name == "pr8") suite_trailing_zero(runner, n, t);
      else if (name == "pr9") suite_origin(runner, n, cfg, t);
      else if (name == "pr10") suite_order_doubling(runner, n, cfg, t);
      else suite_slices_in_extended(runner, cfg, t);
      report.tallies.push_back(std::move(t));
    }
  }
  return report;
}

}  // namespace tancone
