#pragma once

// Eventual-linear fits of invariant sequences along a chain, comparison with
// predicted slopes and bounds, Betti support decompositions into line
// segments, and the Cohen-Macaulay criterion for partition chains.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "equichain/equivariance.hpp"
#include "equichain/errors.hpp"
#include "equichain/groebner.hpp"
#include "equichain/hilbert.hpp"
#include "equichain/monomial_ideal.hpp"
#include "equichain/resolutions.hpp"

namespace equichain {

struct LinearFit {
  long slope = 0;
  long intercept = 0;
  std::uint32_t onset = 0;  // first width of the verified range
  std::uint32_t last = 0;   // horizon
  std::size_t points = 0;

  [[nodiscard]] long at(std::uint32_t n) const { return slope * static_cast<long>(n) + intercept; }
  friend bool operator==(const LinearFit&, const LinearFit&) = default;
};

/// Smallest onset n0 such that values(n) = A n + B exactly for every recorded
/// n >= n0, with at least three points; nullopt if the last three points are
/// not collinear with an integer slope and intercept.
inline std::optional<LinearFit> fit_eventual_linear(const std::map<std::uint32_t, long>& values) {
  if (values.size() < 4) throw HorizonError("fit_eventual_linear needs at least 4 data points");
  auto last = std::prev(values.end());
  auto prev = std::prev(last);
  long dn = static_cast<long>(last->first) - static_cast<long>(prev->first);
  long dv = last->second - prev->second;
  if (dv % dn != 0) return std::nullopt;
  LinearFit fit;
  fit.slope = dv / dn;
  fit.intercept = last->second - fit.slope * static_cast<long>(last->first);
  fit.last = last->first;
  auto it = last;
  std::size_t count = 0;
  while (true) {
    if (it->second != fit.at(it->first)) break;
    fit.onset = it->first;
    ++count;
    if (it == values.begin()) break;
    --it;
  }
  if (count < 3) return std::nullopt;
  fit.points = count;
  return fit;
}

enum class Verdict { match, bound_holds, mismatch, inconclusive_horizon };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::match: return "match";
    case Verdict::bound_holds: return "bound-holds";
    case Verdict::mismatch: return "mismatch";
    case Verdict::inconclusive_horizon: return "inconclusive-horizon";
  }
  return "?";
}

struct PredictionReport {
  std::string quantity;
  std::string predicted;  // human readable line or bound
  std::optional<long> predicted_slope;
  std::optional<long> predicted_intercept;
  std::map<std::uint32_t, long> values;
  std::optional<LinearFit> observed;
  Verdict verdict = Verdict::inconclusive_horizon;
  std::vector<std::string> notes;
};

namespace detail {
inline std::optional<LinearFit> try_fit(const std::map<std::uint32_t, long>& values, std::vector<std::string>& notes) {
  if (values.size() < 4) {
    notes.push_back("fewer than 4 widths available");
    return std::nullopt;
  }
  auto fit = fit_eventual_linear(values);
  if (!fit) notes.push_back("no exact linear law on the last three widths");
  return fit;
}

inline std::string line_text(long a, long b) {
  std::string s = std::to_string(a) + "n";
  if (b > 0) s += "+" + std::to_string(b);
  if (b < 0) s += std::to_string(b);
  return s;
}
}  // namespace detail

/// Betti tables of every width; zero ideals give an empty table and the unit
/// ideal the table of R.
inline std::map<std::uint32_t, BettiTable> chain_betti_tables(const std::vector<ChainSnapshot>& snaps, std::size_t jobs = 1) {
  auto tables = parallel_map(snaps.size(), jobs, [&](std::size_t i) {
    const auto& I = snaps[i].monomial();
    BettiTable t;
    t.characteristic = I.ambient().characteristic;
    if (I.is_unit()) {
      t.add(0, 0, 1);
    } else if (!I.is_zero()) {
      t = betti_table(I);
    }
    return t;
  });
  std::map<std::uint32_t, BettiTable> out;
  for (std::size_t i = 0; i < snaps.size(); ++i) out.emplace(snaps[i].width, std::move(tables[i]));
  return out;
}

/// Slope gamma of the chain against the observed codimension sequence.
inline PredictionReport predict_codim(const std::vector<ChainSnapshot>& snaps) {
  PredictionReport rep;
  rep.quantity = "codim";
  auto inv = chain_invariants(snaps);
  rep.predicted_slope = inv.gamma;
  rep.predicted = "slope " + std::to_string(inv.gamma) + " (gamma)";
  for (const auto& s : snaps) {
    const auto& I = s.monomial();
    if (I.is_unit()) continue;
    rep.values[s.width] = I.is_zero() ? 0 : codim(I);
  }
  rep.observed = detail::try_fit(rep.values, rep.notes);
  if (rep.observed) rep.verdict = rep.observed->slope == static_cast<long>(inv.gamma) ? Verdict::match : Verdict::mismatch;
  return rep;
}

/// Polynomial chains: gamma is read from initial chains, and must agree for
/// the lex and graded reverse lex orders.
inline PredictionReport predict_codim(const std::vector<ChainSnapshot>& snaps, TermOrder ord, std::size_t jobs = 1) {
  bool monomial = std::all_of(snaps.begin(), snaps.end(), [](const auto& s) { return s.is_monomial(); });
  if (monomial) return predict_codim(snaps);
  auto lex = initial_chain(snaps, TermOrder{OrderKind::lex}, jobs);
  auto grevlex = initial_chain(snaps, TermOrder{OrderKind::grevlex}, jobs);
  auto g_lex = chain_invariants(lex.snapshots).gamma;
  auto g_grevlex = chain_invariants(grevlex.snapshots).gamma;
  if (g_lex != g_grevlex) {
    throw AssertionFailure("gamma differs between lex (" + std::to_string(g_lex) + ") and grevlex (" +
                           std::to_string(g_grevlex) + ") initial chains");
  }
  const auto& chosen = ord.kind == OrderKind::lex       ? lex.snapshots
                       : ord.kind == OrderKind::grevlex ? grevlex.snapshots
                                                        : initial_chain(snaps, ord, jobs).snapshots;
  auto rep = predict_codim(chosen);
  rep.notes.push_back("gamma(ini_lex) = gamma(ini_grevlex) = " + std::to_string(g_lex));
  return rep;
}

struct RegPrediction {
  PredictionReport report;
  std::uint32_t omega = 0;
  std::uint32_t r = 0;
  Monomial alpha;
  MonomialIdeal colon_ideal;
  std::uint32_t colon_reg = 0;
};

namespace detail {
inline void require_partition_chain(const ChainSpec& spec, const char* what) {
  if (spec.rows != 1 || spec.symmetry != Symmetry::sym || !spec.all_partitions()) {
    throw DomainError(std::string(what) + " needs a single-row Sym chain given by partitions");
  }
}

inline std::map<std::uint32_t, long> reg_values(const std::map<std::uint32_t, BettiTable>& tables, std::uint32_t from) {
  std::map<std::uint32_t, long> v;
  for (const auto& [n, t] : tables)
    if (n >= from && !t.empty() && !(t.entries.size() == 1 && t.at(0, 0) == 1)) v[n] = t.reg();
  return v;
}
}  // namespace detail

/// reg(I_n) = (omega - 1) n + reg(I_r : alpha) with alpha = (x_1...x_r)^(omega-1).
inline RegPrediction predict_reg_c1(const ChainSpec& spec, const std::vector<ChainSnapshot>& snaps,
                                    const std::map<std::uint32_t, BettiTable>& tables) {
  detail::require_partition_chain(spec, "predict_reg_c1");
  RegPrediction out;
  out.r = spec.max_width();
  if (snaps.size() < out.r) throw HorizonError("predict_reg_c1: horizon below the longest partition");
  auto inv = chain_invariants(snaps);
  out.omega = inv.omega;
  std::vector<std::uint32_t> exps(out.r, out.omega - 1);
  out.alpha = Monomial::row_power_product(exps);
  out.colon_ideal = colon(snaps[out.r - 1].monomial(), out.alpha);
  out.colon_reg = out.colon_ideal.is_unit() ? 0 : betti_table(out.colon_ideal).reg();
  auto& rep = out.report;
  rep.quantity = "reg";
  rep.predicted_slope = static_cast<long>(out.omega) - 1;
  rep.predicted_intercept = out.colon_reg;
  rep.predicted = detail::line_text(*rep.predicted_slope, *rep.predicted_intercept);
  rep.values = detail::reg_values(tables, out.r);
  rep.observed = detail::try_fit(rep.values, rep.notes);
  if (rep.observed) {
    bool same = rep.observed->slope == *rep.predicted_slope && rep.observed->intercept == *rep.predicted_intercept;
    rep.verdict = same ? Verdict::match : Verdict::mismatch;
  }
  return out;
}

struct RegBound {
  PredictionReport report;
  long C = 0;
  long D = 0;
  std::map<std::uint32_t, long> slack;  // C n + D - reg(I_n)
};

/// C = max(omega-1, 0) + max_l sum_{k != l} w_k; D is fixed by equality at the
/// first width with a table, and reg(I_n) <= C n + D is checked on the rest.
inline RegBound reg_upper_bound(const std::vector<ChainSnapshot>& snaps, const std::map<std::uint32_t, BettiTable>& tables) {
  auto inv = chain_invariants(snaps);
  RegBound out;
  long rest = 0;
  long total = 0;
  for (auto w : inv.w) total += w;
  for (auto w : inv.w) rest = std::max(rest, total - static_cast<long>(w));
  out.C = std::max<long>(static_cast<long>(inv.omega) - 1, 0) + rest;
  auto& rep = out.report;
  rep.quantity = "reg-bound";
  rep.predicted_slope = out.C;
  rep.values = detail::reg_values(tables, 1);
  if (rep.values.empty()) throw HorizonError("reg_upper_bound: no Betti tables of proper nonzero ideals");
  out.D = rep.values.begin()->second - out.C * static_cast<long>(rep.values.begin()->first);
  rep.predicted_intercept = out.D;
  rep.predicted = "reg <= " + detail::line_text(out.C, out.D);
  bool holds = true;
  for (const auto& [n, v] : rep.values) {
    long s = out.C * static_cast<long>(n) + out.D - v;
    out.slack[n] = s;
    if (s < 0) holds = false;
  }
  rep.observed = detail::try_fit(rep.values, rep.notes);
  rep.verdict = holds ? Verdict::bound_holds : Verdict::mismatch;
  return out;
}

/// codim(I_n) - 1 <= pd(I_n) <= c n - 1 for every width, and for c = 1 the
/// shape pd(I_n) = n - B' on the tail.
inline PredictionReport pd_bounds_check(const std::vector<ChainSnapshot>& snaps,
                                        const std::map<std::uint32_t, BettiTable>& tables) {
  PredictionReport rep;
  rep.quantity = "pd";
  bool holds = true;
  std::uint32_t rows = 0;
  for (const auto& s : snaps) {
    const auto& I = s.monomial();
    rows = I.ambient().rows;
    if (I.is_zero() || I.is_unit()) continue;
    auto it = tables.find(s.width);
    if (it == tables.end()) continue;
    long pd = it->second.pd();
    rep.values[s.width] = pd;
    long lower = static_cast<long>(codim(I)) - 1;
    long upper = static_cast<long>(rows) * s.width - 1;
    if (pd < lower || pd > upper) {
      holds = false;
      rep.notes.push_back("width " + std::to_string(s.width) + ": pd " + std::to_string(pd) + " outside [" +
                          std::to_string(lower) + ", " + std::to_string(upper) + "]");
    }
  }
  rep.predicted = "codim-1 <= pd <= " + std::to_string(rows) + "n-1";
  rep.predicted_slope = rows == 1 ? std::optional<long>(1) : std::nullopt;
  rep.observed = detail::try_fit(rep.values, rep.notes);
  if (rows == 1 && rep.observed) {
    if (rep.observed->slope != 1) {
      holds = false;
      rep.notes.push_back("c = 1 but pd does not grow like n - B'");
    } else {
      rep.notes.push_back("B' = " + std::to_string(-rep.observed->intercept));
    }
  }
  rep.verdict = holds ? Verdict::bound_holds : Verdict::mismatch;
  return rep;
}

struct ColumnStability {
  std::uint32_t column = 0;
  std::map<std::uint32_t, std::set<std::uint32_t>> degrees;  // n -> {j : beta_{p,j} != 0}
  bool stabilized = false;
  std::optional<std::uint32_t> onset;
};

inline std::vector<ColumnStability> betti_column_stability(const std::map<std::uint32_t, BettiTable>& tables,
                                                           std::uint32_t p_max) {
  if (tables.size() < 3) throw HorizonError("betti_column_stability needs at least 3 tables");
  for (auto it = std::next(tables.begin()); it != tables.end(); ++it)
    if (it->first != std::prev(it)->first + 1) throw HorizonError("betti_column_stability needs consecutive widths");
  std::vector<ColumnStability> out;
  for (std::uint32_t p = 0; p <= p_max; ++p) {
    ColumnStability col;
    col.column = p;
    for (const auto& [n, t] : tables) col.degrees[n] = t.column_degrees(p);
    auto last = std::prev(col.degrees.end());
    auto it = last;
    while (it != col.degrees.begin() && std::prev(it)->second == last->second) --it;
    col.stabilized = it != last;
    if (col.stabilized) col.onset = it->first;
    out.push_back(std::move(col));
  }
  return out;
}

using BettiPoint = std::pair<std::uint32_t, std::uint32_t>;  // (column i, row j)

struct LineSegment {
  BettiPoint start;
  std::uint32_t slope = 0;

  /// The points (i + k, j + s k), 0 <= k <= length.
  [[nodiscard]] std::set<BettiPoint> points(std::uint32_t length) const {
    std::set<BettiPoint> s;
    for (std::uint32_t k = 0; k <= length; ++k) s.emplace(start.first + k, start.second + slope * k);
    return s;
  }
  friend auto operator<=>(const LineSegment&, const LineSegment&) = default;
};

struct SegmentDecomposition {
  std::uint32_t r = 0;
  std::set<BettiPoint> base;  // support at width r - 1
  std::vector<LineSegment> segments;
  std::uint32_t verified_through = 0;
};

struct SegmentResult {
  std::optional<SegmentDecomposition> decomposition;
  std::string failure;
  std::optional<std::uint32_t> failure_width;
  std::optional<BettiPoint> failure_point;
};

/// Minimal set of segments L(start, s, n - r) which, together with the support
/// at width r - 1, reproduces the support of every table for n in [r, N].
/// Starts range over support(r); slopes over every value for which the
/// segment stays inside the supports. Ties between minimal sets are broken
/// lexicographically by (start, slope).
inline SegmentResult segment_decomposition(const std::map<std::uint32_t, BettiTable>& tables, std::uint32_t r) {
  if (r == 0) throw DomainError("segment_decomposition needs r >= 1");
  if (tables.empty() || tables.rbegin()->first < r + 2) throw HorizonError("segment_decomposition needs tables through r+2");
  const std::uint32_t N = tables.rbegin()->first;
  for (std::uint32_t n = std::max<std::uint32_t>(r - 1, 1); n <= N; ++n)
    if (!tables.count(n)) throw HorizonError("segment_decomposition: missing table for width " + std::to_string(n));
  SegmentResult res;
  std::set<BettiPoint> base;
  if (r >= 2) base = tables.at(r - 1).support();
  std::map<std::uint32_t, std::set<BettiPoint>> supp;
  for (std::uint32_t n = r; n <= N; ++n) supp[n] = tables.at(n).support();
  for (std::uint32_t n = r; n <= N; ++n) {
    for (const auto& b : base) {
      if (!supp[n].count(b)) {
        res.failure = "base point missing from a later support";
        res.failure_width = n;
        res.failure_point = b;
        return res;
      }
    }
  }
  // candidate segments that stay inside every support
  std::uint32_t max_row = 0;
  for (const auto& [n, s] : supp)
    for (const auto& p : s) max_row = std::max(max_row, p.second);
  std::vector<LineSegment> cands;
  for (const auto& start : supp[r]) {
    for (std::uint32_t s = 0; s <= max_row; ++s) {
      LineSegment seg{start, s};
      bool inside = true;
      for (std::uint32_t n = r; n <= N && inside; ++n) {
        auto pts = seg.points(n - r);
        inside = std::includes(supp[n].begin(), supp[n].end(), pts.begin(), pts.end());
      }
      if (inside) cands.push_back(seg);
    }
  }
  std::sort(cands.begin(), cands.end());
  // elements to cover: (n, point) outside the base
  std::vector<std::pair<std::uint32_t, BettiPoint>> elements;
  for (const auto& [n, s] : supp)
    for (const auto& p : s)
      if (!base.count(p)) elements.emplace_back(n, p);
  std::vector<std::vector<std::size_t>> covered_by(elements.size());
  for (std::size_t c = 0; c < cands.size(); ++c) {
    for (std::size_t e = 0; e < elements.size(); ++e) {
      const auto& [n, p] = elements[e];
      if (p.first < cands[c].start.first) continue;
      std::uint32_t k = p.first - cands[c].start.first;
      if (k <= n - r && p.second == cands[c].start.second + cands[c].slope * k) covered_by[e].push_back(c);
    }
  }
  for (std::size_t e = 0; e < elements.size(); ++e) {
    if (covered_by[e].empty()) {
      res.failure = "point not reachable by any segment inside the supports";
      res.failure_width = elements[e].first;
      res.failure_point = elements[e].second;
      return res;
    }
  }
  // iterative deepening exact cover, collecting every cover of the minimal size
  std::vector<std::vector<std::size_t>> best;
  std::vector<std::size_t> chosen;
  std::vector<int> hits(elements.size(), 0);
  std::vector<std::vector<std::size_t>> covers_of(cands.size());
  for (std::size_t e = 0; e < elements.size(); ++e)
    for (auto c : covered_by[e]) covers_of[c].push_back(e);
  auto search = [&](auto&& self, std::size_t budget) -> void {
    auto first = std::find(hits.begin(), hits.end(), 0);
    if (first == hits.end()) {
      auto sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      best.push_back(sorted);
      return;
    }
    if (budget == 0) return;
    auto e = static_cast<std::size_t>(first - hits.begin());
    for (auto c : covered_by[e]) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      chosen.push_back(c);
      for (auto x : covers_of[c]) ++hits[x];
      self(self, budget - 1);
      for (auto x : covers_of[c]) --hits[x];
      chosen.pop_back();
    }
  };
  for (std::size_t size = 0; size <= cands.size() && best.empty(); ++size) search(search, size);
  std::sort(best.begin(), best.end());
  SegmentDecomposition dec;
  dec.r = r;
  dec.base = base;
  for (auto c : best.front()) dec.segments.push_back(cands[c]);
  dec.verified_through = N;
  res.decomposition = std::move(dec);
  return res;
}

struct CMWidthReport {
  std::uint32_t width = 0;
  bool cohen_macaulay = false;
  bool unmixed = false;
  bool partition_condition = false;
  std::uint32_t p = 0;  // dim(R_n/I_n) + 1
  [[nodiscard]] bool agree() const { return cohen_macaulay == unmixed && unmixed == partition_condition; }
};

struct CMReport {
  std::vector<CMWidthReport> widths;
  std::uint32_t min_partition_length = 0;
  [[nodiscard]] bool all_agree() const {
    return std::all_of(widths.begin(), widths.end(), [](const auto& w) { return w.agree(); });
  }
};

/// For n >= r: Cohen-Macaulayness (pd = codim - 1), unmixedness, and equality
/// of the first p parts of every partition with p = dim(R_n/I_n) + 1.
/// Throws AssertionFailure if dim(R_n/I_n) differs from the minimal partition length minus one.
inline CMReport cm_criterion(const ChainSpec& spec, const std::vector<ChainSnapshot>& snaps,
                             const std::map<std::uint32_t, BettiTable>& tables) {
  detail::require_partition_chain(spec, "cm_criterion");
  const std::uint32_t r = spec.max_width();
  CMReport rep;
  rep.min_partition_length = UINT32_MAX;
  for (const auto& g : spec.generators) rep.min_partition_length = std::min(rep.min_partition_length, g.partition->length());
  for (const auto& s : snaps) {
    if (s.width < r) continue;
    const auto& I = s.monomial();
    if (I.is_zero() || I.is_unit()) continue;
    CMWidthReport w;
    w.width = s.width;
    auto it = tables.find(s.width);
    w.cohen_macaulay = is_cohen_macaulay(I, it != tables.end() ? it->second : betti_table(I));
    w.unmixed = is_unmixed(I);
    auto h = hilbert_series(I);
    w.p = h.dim + 1;
    if (h.dim + 1 != rep.min_partition_length) {
      throw AssertionFailure("dim(R_n/I_n) = " + std::to_string(h.dim) + " at width " + std::to_string(s.width) +
                             " but the shortest partition has length " + std::to_string(rep.min_partition_length));
    }
    w.partition_condition = std::all_of(spec.generators.begin(), spec.generators.end(), [&](const ChainGenerator& g) {
      const auto& parts = g.partition->parts();
      if (parts.size() < w.p) return false;
      return std::all_of(parts.begin(), parts.begin() + w.p, [&](std::uint32_t a) { return a == parts.front(); });
    });
    rep.widths.push_back(w);
  }
  return rep;
}

}  // namespace equichain
