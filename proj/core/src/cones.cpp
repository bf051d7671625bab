#include "tancone/cones.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace tancone {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Accepted:
      return "Accepted";
    case Status::Rejected:
      return "Rejected";
    case Status::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(const SliceSpec& s) {
  switch (s.kind) {
    case SliceKind::FirstOrder:
      return "first-order";
    case SliceKind::Proper:
      return "proper";
    case SliceKind::Alpha:
      return fmt::format("alpha:{:.17g}", s.alpha);
    case SliceKind::Zero:
      return "zero";
    case SliceKind::Infinity:
      return "infinity";
    case SliceKind::Extended:
      return "extended";
  }
  return "extended";
}

SliceSpec parse_slice(std::string_view text) {
  if (text == "first-order") return {SliceKind::FirstOrder, 1.0};
  if (text == "proper") return {SliceKind::Proper, 1.0};
  if (text == "zero") return {SliceKind::Zero, 1.0};
  if (text == "infinity") return {SliceKind::Infinity, 1.0};
  if (text == "extended") return {SliceKind::Extended, 1.0};
  if (text.starts_with("alpha:")) {
    const std::string_view num = text.substr(6);
    double a = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), a);
    if (ec == std::errc() && ptr == num.data() + num.size() && a > 0.0 && std::isfinite(a)) {
      return {SliceKind::Alpha, a};
    }
    throw std::invalid_argument(fmt::format("slice '{}': alpha must be a positive finite number", text));
  }
  throw std::invalid_argument(
      fmt::format("unknown slice '{}' (expected first-order, proper, alpha:<a>, zero, infinity, extended)", text));
}

std::vector<double> RefinementSchedule::values() const {
  if (!(t0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || levels < 1) {
    throw std::invalid_argument("schedule: need t0 > 0, 0 < ratio < 1, levels >= 1");
  }
  std::vector<double> t(static_cast<std::size_t>(levels));
  t[0] = t0;
  for (std::size_t j = 1; j < t.size(); ++j) t[j] = t[j - 1] * ratio;
  return t;
}

Status apply_verdict_rule(std::span<const double> scaled, const VerdictRule& rule, std::optional<int>* decisive) {
  const auto L = static_cast<int>(scaled.size());
  if (decisive != nullptr) decisive->reset();
  if (L >= rule.warmup + rule.terminal) {
    bool accept = true;
    for (int j = L - rule.terminal; j < L && accept; ++j) {
      accept = scaled[static_cast<std::size_t>(j)] <= rule.acceptTol;
      if (accept && j > L - rule.terminal) {
        accept = scaled[static_cast<std::size_t>(j)] <= scaled[static_cast<std::size_t>(j - 1)] + rule.trendSlack;
      }
    }
    if (accept) {
      if (decisive != nullptr) *decisive = L - rule.terminal;
      return Status::Accepted;
    }
  }
  if (L - rule.warmup >= rule.terminal) {
    const bool reject = std::all_of(scaled.begin() + rule.warmup, scaled.end(),
                                    [&](double v) { return v >= rule.rejectFloor; });
    if (reject) {
      if (decisive != nullptr) *decisive = rule.warmup;
      return Status::Rejected;
    }
  }
  return Status::Inconclusive;
}

namespace {

// What the accepting window must show for the slice's limit to be plausible:
// tau -> 0 always, plus tau / t -> 0 (zero slice) or tau / t -> inf (infinity).
enum class Regime { Free, SmallTau, SmallRatio, LargeRatio };

// tau = c t^exponent, with c fixed or searched per level. Banded rows keep the
// per-level c within a factor 2 of one common value, so tau / t follows the
// power law instead of drifting into another regime over a finite schedule.
struct ScanRow {
  double exponent = 1.0;
  std::optional<double> fixedCoefficient;
  std::string label;
  bool banded = false;
  Regime regime = Regime::Free;
};

struct RowOutcome {
  MembershipVerdict verdict;
  bool failed = false;
};

constexpr int kRefinedBands = 3;

class Scanner {
 public:
  Scanner(const SetDesc& Q, const DirectionCollection& coll, const Vec& w, std::size_t k, const ConeConfig& cfg)
      : Q_(Q), coll_(coll), w_(w), k_(k), cfg_(cfg) {
    if (coll.base.size() != Q.dimension || w.size() != Q.dimension) {
      throw std::invalid_argument("membership: vector dimension does not match the set");
    }
    for (const Vec& h : coll.directions) {
      if (h.size() != Q.dimension) throw std::invalid_argument("membership: direction dimension mismatch");
    }
  }

  RowOutcome run(const ScanRow& row) const {
    RowOutcome out;
    out.verdict.row = row.label;
    try {
      if (row.fixedCoefficient) {
        std::vector<EvidenceRow> table;
        for (const Level& L : levels()) {
          const std::optional<EvidenceRow> e = evaluate(L, row.exponent, *row.fixedCoefficient);
          if (!e) break;  // rounding guard: this level and all finer ones are unusable
          table.push_back(*e);
        }
        finish(out.verdict, std::move(table));
        return out;
      }
      scan_free(row, out.verdict);
    } catch (const OracleFailure& e) {
      out.failed = true;
      out.verdict = MembershipVerdict{};
      out.verdict.row = row.label;
      out.verdict.note = fmt::format("oracle failure: {}", e.what());
    }
    return out;
  }

 private:
  struct Level {
    int index = 0;
    double t = 0.0;
    Vec arc;
  };

  using Cells = std::vector<std::optional<EvidenceRow>>;

  std::vector<Level> levels() const {
    std::vector<Level> out;
    const std::vector<double> ts = cfg_.schedule.values();
    for (std::size_t j = 0; j < ts.size(); ++j) out.push_back({static_cast<int>(j), ts[j], arc_point(ts[j])});
    return out;
  }

  Vec arc_point(double t) const {
    Vec p = coll_.base;
    double tp = 1.0;
    for (const Vec& h : coll_.directions) {
      tp *= t;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += tp * h[i];
    }
    return p;
  }

  std::optional<EvidenceRow> evaluate(const Level& L, double exponent, double c) const {
    const double tau = c * std::pow(L.t, exponent);
    const double denom = std::pow(L.t, static_cast<double>(k_ - 1)) * tau;
    Vec p = L.arc;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += denom * w_[i];
    if (!(denom > 0.0) || 4.0 * std::numeric_limits<double>::epsilon() * vec::max_abs(p) / denom > cfg_.roundingGuard) {
      return std::nullopt;
    }
    const double d = distance(Q_, p, cfg_.distance).value;
    return EvidenceRow{L.index, L.t, tau, tau / L.t, d, d / denom};
  }

  static void keep_better(std::optional<EvidenceRow>& best, const std::optional<EvidenceRow>& e) {
    if (e && (!best || e->scaled < best->scaled)) best = e;
  }

  bool worth_refining(const EvidenceRow& e) const {
    return e.scaled < cfg_.coefficients.refineBelow && e.scaled > cfg_.rule.trendSlack;
  }

  // Golden-section search in log2 c over [a, b]; returns the best value seen.
  EvidenceRow refine(const Level& L, double exponent, double a, double b, EvidenceRow best) const {
    constexpr double kInvPhi = 0.6180339887498949;
    std::optional<EvidenceRow> keep = best;
    auto f = [&](double x) {
      const std::optional<EvidenceRow> e = evaluate(L, exponent, std::exp2(x));
      keep_better(keep, e);
      return e ? e->scaled : std::numeric_limits<double>::infinity();
    };
    double c = b - kInvPhi * (b - a);
    double e = a + kInvPhi * (b - a);
    double fc = f(c);
    double fe = f(e);
    for (int iter = 0; iter < cfg_.coefficients.refineIters; ++iter) {
      if (fc <= fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + kInvPhi * (b - a);
        fe = f(e);
      }
    }
    return *keep;
  }

  void finish(MembershipVerdict& v, std::vector<EvidenceRow> table) const {
    std::vector<double> scaled;
    for (const EvidenceRow& e : table) scaled.push_back(e.scaled);
    v.evidence = std::move(table);
    v.status = apply_verdict_rule(scaled, cfg_.rule, &v.decisiveLevel);
  }

  bool in_regime(const MembershipVerdict& v, Regime regime) const {
    if (regime == Regime::Free || !v.decisiveLevel) return true;
    const double sep = cfg_.regimeSeparation;
    for (std::size_t j = static_cast<std::size_t>(*v.decisiveLevel); j < v.evidence.size(); ++j) {
      const EvidenceRow& e = v.evidence[j];
      if (e.tau * sep > 1.0) return false;
      if (regime == Regime::SmallRatio && e.ratio * sep > 1.0) return false;
      if (regime == Regime::LargeRatio && e.ratio < sep) return false;
    }
    return true;
  }

  void scan_free(const ScanRow& row, MembershipVerdict& v) const {
    const CoefficientScan& cs = cfg_.coefficients;
    const int lo = cs.minLog2;
    const int hi = cs.maxLog2;
    std::vector<Level> used;
    std::vector<Cells> grid;
    std::vector<EvidenceRow> free_table;
    for (Level& L : levels()) {
      Cells cells;
      std::optional<EvidenceRow> best;
      int best_m = lo;
      for (int m = lo; m <= hi; ++m) {
        cells.push_back(evaluate(L, row.exponent, std::ldexp(1.0, m)));
        if (cells.back() && (!best || cells.back()->scaled < best->scaled)) {
          best = cells.back();
          best_m = m;
        }
      }
      if (!best) break;
      EvidenceRow e = *best;
      if (worth_refining(e)) e = refine(L, row.exponent, std::max(lo, best_m - 1), std::min(hi, best_m + 1), e);
      free_table.push_back(e);
      grid.push_back(std::move(cells));
      used.push_back(std::move(L));
    }
    finish(v, std::move(free_table));
    if (v.status == Status::Rejected) return;
    if (!row.banded && (v.status != Status::Accepted || in_regime(v, row.regime))) return;

    // Coarse band tables from the grid, ranked by their worst terminal value.
    const int bands = hi - lo + 1;
    std::vector<std::vector<EvidenceRow>> coarse(static_cast<std::size_t>(bands));
    std::vector<std::pair<double, int>> ranking;
    for (int b = 0; b < bands; ++b) {
      auto& table = coarse[static_cast<std::size_t>(b)];
      for (const Cells& cells : grid) {
        std::optional<EvidenceRow> best;
        for (int m = std::max(0, b - 1); m <= std::min(bands - 1, b + 1); ++m) keep_better(best, cells[static_cast<std::size_t>(m)]);
        if (!best) break;
        table.push_back(*best);
      }
      double score = std::numeric_limits<double>::infinity();
      if (table.size() >= static_cast<std::size_t>(cfg_.rule.terminal)) {
        score = 0.0;
        for (std::size_t j = table.size() - static_cast<std::size_t>(cfg_.rule.terminal); j < table.size(); ++j) {
          score = std::max(score, table[j].scaled);
        }
      }
      ranking.emplace_back(score, b);
    }
    std::stable_sort(ranking.begin(), ranking.end());

    bool all_rejected = true;
    std::optional<MembershipVerdict> shown;
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      const int b = ranking[r].second;
      std::vector<EvidenceRow> table = coarse[static_cast<std::size_t>(b)];
      if (r < static_cast<std::size_t>(kRefinedBands)) {
        for (std::size_t j = 0; j < table.size(); ++j) {
          if (worth_refining(table[j])) {
            table[j] = refine(used[j], row.exponent, std::max(lo, lo + b - 1), std::min(hi, lo + b + 1), table[j]);
          }
        }
      }
      MembershipVerdict band;
      band.row = fmt::format("{}, c in [2^{}, 2^{}]", row.label, std::max(lo, lo + b - 1), std::min(hi, lo + b + 1));
      finish(band, std::move(table));
      if (band.status == Status::Accepted && !in_regime(band, row.regime)) {
        band.status = Status::Inconclusive;
        band.note = "tau/t in the accepting window is outside the slice regime";
      }
      if (band.status == Status::Accepted) {
        v = std::move(band);
        return;
      }
      all_rejected = all_rejected && band.status == Status::Rejected;
      if (!shown) shown = std::move(band);
    }
    const Status free_status = v.status;
    v = std::move(*shown);
    if (all_rejected) {
      v.status = Status::Rejected;
      v.note = "every coefficient band rejected";
    } else {
      v.status = Status::Inconclusive;
      v.decisiveLevel.reset();
      if (free_status == Status::Accepted) v.note = "accepted only with a drifting coefficient; no single band accepts";
    }
  }

  const SetDesc& Q_;
  const DirectionCollection& coll_;
  const Vec& w_;
  std::size_t k_;
  const ConeConfig& cfg_;
};

std::string power_label(double e) { return fmt::format("tau=c*t^{}", e); }

std::vector<ScanRow> rows_for(const SliceSpec& slice, const ConeConfig& cfg) {
  std::vector<ScanRow> rows;
  switch (slice.kind) {
    case SliceKind::FirstOrder:
    case SliceKind::Proper:
      rows.push_back({1.0, 1.0, "tau=t"});
      break;
    case SliceKind::Alpha:
      rows.push_back({1.0, slice.alpha, fmt::format("tau={}*t", slice.alpha)});
      break;
    case SliceKind::Zero:
      for (double beta : cfg.zeroBetas) rows.push_back({1.0 + beta, std::nullopt, power_label(1.0 + beta), true, Regime::SmallRatio});
      break;
    case SliceKind::Infinity:
      for (double theta : cfg.infinityThetas) rows.push_back({theta, std::nullopt, power_label(theta), true, Regime::LargeRatio});
      break;
    case SliceKind::Extended:
      for (double e : cfg.extendedExponents) rows.push_back({e, std::nullopt, power_label(e), false, Regime::SmallTau});
      break;
  }
  return rows;
}

MembershipVerdict combine_rows(const Scanner& scanner, const std::vector<ScanRow>& rows) {
  std::optional<MembershipVerdict> first_rejected;
  std::optional<MembershipVerdict> first_open;
  std::size_t rejected = 0;
  for (const ScanRow& row : rows) {
    RowOutcome r = scanner.run(row);
    if (r.verdict.status == Status::Accepted) return std::move(r.verdict);
    if (r.verdict.status == Status::Rejected) {
      ++rejected;
      if (!first_rejected) first_rejected = std::move(r.verdict);
    } else if (!first_open) {
      first_open = std::move(r.verdict);
    }
  }
  if (rejected == rows.size()) {
    MembershipVerdict v = std::move(*first_rejected);
    if (rows.size() > 1) v.note = fmt::format("all {} scan rows rejected", rows.size());
    return v;
  }
  return std::move(*first_open);
}

}  // namespace

MembershipVerdict member_first_order(const SetDesc& Q, const Vec& base, const Vec& h, const ConeConfig& cfg) {
  if (h.size() != Q.dimension) throw std::invalid_argument("member_first_order: h dimension mismatch");
  if (vec::is_zero(h)) {
    MembershipVerdict v;
    v.status = Status::Accepted;
    v.row = "h=0";
    v.note = "zero direction belongs to every tangent cone of a point of the closure";
    return v;
  }
  const DirectionCollection point_only{base, {}};
  const Scanner scanner(Q, point_only, h, 1, cfg);
  return combine_rows(scanner, rows_for({SliceKind::FirstOrder, 1.0}, cfg));
}

MembershipVerdict member_proper(const SetDesc& Q, const DirectionCollection& coll, const Vec& w,
                                const ConeConfig& cfg) {
  return member_slice(Q, coll, w, {SliceKind::Proper, 1.0}, cfg);
}

MembershipVerdict member_slice(const SetDesc& Q, const DirectionCollection& coll, const Vec& w,
                               const SliceSpec& slice, const ConeConfig& cfg) {
  if (slice.kind == SliceKind::FirstOrder) throw std::invalid_argument("member_slice: use member_first_order");
  if (coll.directions.empty()) throw std::invalid_argument("member_slice: collection order must be >= 2");
  if (slice.kind == SliceKind::Alpha && !(slice.alpha > 0.0 && std::isfinite(slice.alpha))) {
    throw std::invalid_argument("member_slice: alpha must be positive and finite");
  }
  const Vec direction = slice.kind == SliceKind::Infinity ? vec::normalized(w) : w;
  const Scanner scanner(Q, coll, direction, coll.order(), cfg);
  return combine_rows(scanner, rows_for(slice, cfg));
}

std::vector<MembershipVerdict> is_admissible(const SetDesc& Q, const DirectionCollection& coll,
                                             const ConeConfig& cfg) {
  if (coll.directions.empty()) throw std::invalid_argument("is_admissible: collection order must be >= 2");
  std::vector<MembershipVerdict> chain;
  chain.push_back(member_first_order(Q, coll.base, coll.directions[0], cfg));
  for (std::size_t s = 1; s < coll.directions.size(); ++s) {
    const DirectionCollection prefix{coll.base, {coll.directions.begin(), coll.directions.begin() + static_cast<std::ptrdiff_t>(s)}};
    chain.push_back(member_proper(Q, prefix, coll.directions[s], cfg));
  }
  return chain;
}

MembershipVerdict is_polynomially_admissible(const SetDesc& Q, const DirectionCollection& coll,
                                             const ConeConfig& cfg) {
  if (coll.directions.empty()) throw std::invalid_argument("is_polynomially_admissible: order must be >= 2");
  const double k = static_cast<double>(coll.order());
  const double abs_tol = cfg.polyAbsTol * (1.0 + vec::norm(coll.base));
  MembershipVerdict v;
  v.row = fmt::format("d(arc)/t^{}", coll.order());
  std::vector<double> scaled;
  std::vector<double> dist;
  try {
    for (const double t : cfg.schedule.values()) {
      Vec p = coll.base;
      double tp = 1.0;
      for (const Vec& h : coll.directions) {
        tp *= t;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += tp * h[i];
      }
      const double denom = std::pow(t, k);
      if (4.0 * std::numeric_limits<double>::epsilon() * vec::max_abs(p) / denom > cfg.roundingGuard) break;
      const double d = distance(Q, p, cfg.distance).value;
      scaled.push_back(d / denom);
      dist.push_back(d);
      v.evidence.push_back(EvidenceRow{static_cast<int>(scaled.size()) - 1, t, 0.0, 0.0, d, d / denom});
    }
  } catch (const OracleFailure& e) {
    v.note = fmt::format("oracle failure: {}", e.what());
    return v;
  }
  const VerdictRule& rule = cfg.rule;
  const auto L = static_cast<int>(scaled.size());
  if (L >= rule.terminal) {
    bool accept = true;
    for (int j = L - rule.terminal; j < L; ++j) {
      accept = accept && dist[static_cast<std::size_t>(j)] <= abs_tol && scaled[static_cast<std::size_t>(j)] <= rule.acceptTol;
    }
    if (accept) {
      v.status = Status::Accepted;
      v.decisiveLevel = L - rule.terminal;
      return v;
    }
  }
  if (L - rule.warmup >= rule.terminal &&
      std::all_of(scaled.begin() + rule.warmup, scaled.end(), [&](double s) { return s >= rule.rejectFloor; })) {
    v.status = Status::Rejected;
    v.decisiveLevel = rule.warmup;
    return v;
  }
  v.status = Status::Inconclusive;
  return v;
}

std::vector<Vec> direction_grid(std::size_t n, std::size_t resolution, std::optional<std::uint64_t> seed) {
  if (n == 0) throw std::invalid_argument("direction_grid: dimension must be positive");
  std::vector<Vec> out;
  if (n == 1) return {Vec{1.0}, Vec{-1.0}};
  if (resolution == 0) throw std::invalid_argument("direction_grid: resolution must be positive");
  if (n == 2) {
    for (std::size_t i = 0; i < resolution; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(resolution);
      out.push_back(Vec{std::cos(a), std::sin(a)});
    }
    return out;
  }
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < resolution; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(resolution);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      out.push_back(Vec{r * std::cos(phi), r * std::sin(phi), z});
    }
    return out;
  }
  if (!seed) throw std::invalid_argument("direction_grid: dimension >= 4 requires a seed");
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  std::mt19937_64 rng(*seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec shift(n);
  for (double& s : shift) s = unit(rng);
  for (std::size_t index = 1; out.size() < resolution; ++index) {
    Vec v(n);
    for (std::size_t d = 0; d < n; ++d) {
      const int base = kPrimes[d % std::size(kPrimes)];
      double r = 0.0;
      double f = 1.0 / base;
      for (std::size_t i = index; i > 0; i /= static_cast<std::size_t>(base)) {
        r += f * static_cast<double>(i % static_cast<std::size_t>(base));
        f /= base;
      }
      v[d] = 2.0 * std::fmod(r + shift[d], 1.0) - 1.0;
    }
    const double len = vec::norm(v);
    if (len < 0.1 || len > 1.0) continue;
    out.push_back(vec::scaled(v, 1.0 / len));
  }
  return out;
}

std::vector<ConeSample> sample_cone(const SetDesc& Q, const DirectionCollection& coll, const SliceSpec& slice,
                                    std::size_t resolution, const ConeConfig& cfg,
                                    std::optional<std::uint64_t> seed) {
  std::vector<ConeSample> out;
  for (Vec& d : direction_grid(Q.dimension, resolution, seed)) {
    MembershipVerdict v = slice.kind == SliceKind::FirstOrder ? member_first_order(Q, coll.base, d, cfg)
                                                              : member_slice(Q, coll, d, slice, cfg);
    out.push_back({std::move(d), std::move(v)});
  }
  return out;
}

void write_evidence_csv(std::ostream& out, const MembershipVerdict& v) {
  out << "level,t,tau,ratio,distance,scaledDistance\n";
  for (const EvidenceRow& r : v.evidence) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.level, r.t, r.tau, r.ratio, r.distance,
                       r.scaled);
  }
}

}  // namespace tancone
