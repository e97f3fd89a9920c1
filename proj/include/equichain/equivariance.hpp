#pragma once

// Orbits under Sym(n) and Inc_{m,n}, materialization of invariant chains from
// generator descriptions, and stabilization of chain-level invariants.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "equichain/errors.hpp"
#include "equichain/monomial_ideal.hpp"
#include "equichain/parallel.hpp"
#include "equichain/polynomial.hpp"
#include "equichain/ring.hpp"

namespace equichain {

/// Weakly decreasing list of positive integers.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::uint32_t> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw SpecError("partition must have at least one part");
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] == 0) throw SpecError("partition parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1]) throw SpecError("partition parts must be weakly decreasing");
    }
  }
  [[nodiscard]] const std::vector<std::uint32_t>& parts() const { return parts_; }
  [[nodiscard]] std::uint32_t length() const { return static_cast<std::uint32_t>(parts_.size()); }
  /// x_1^{a_1} ... x_k^{a_k}
  [[nodiscard]] Monomial monomial() const { return Monomial::row_power_product(parts_); }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::uint32_t> parts_;
};

enum class Symmetry { sym, inc };

struct ChainGenerator {
  std::variant<Monomial, Polynomial> element;
  std::uint32_t width = 1;  // home width m: the generator lives in R_m
  std::optional<Partition> partition;

  [[nodiscard]] bool is_monomial() const { return std::holds_alternative<Monomial>(element); }
  [[nodiscard]] std::uint32_t max_column() const {
    return std::visit([](const auto& e) { return e.max_column(); }, element);
  }

  static ChainGenerator from_partition(Partition p) {
    ChainGenerator g;
    g.element = p.monomial();
    g.width = p.length();
    g.partition = std::move(p);
    return g;
  }
};

struct ChainSpec {
  std::string name = "chain";
  std::uint32_t rows = 1;
  std::uint32_t characteristic = 0;
  Symmetry symmetry = Symmetry::sym;
  std::vector<ChainGenerator> generators;
  std::uint32_t horizon = 1;

  [[nodiscard]] bool is_monomial() const {
    return std::all_of(generators.begin(), generators.end(), [](const auto& g) { return g.is_monomial(); });
  }
  [[nodiscard]] bool all_partitions() const {
    return std::all_of(generators.begin(), generators.end(), [](const auto& g) { return g.partition.has_value(); });
  }
  [[nodiscard]] std::uint32_t max_width() const {
    std::uint32_t m = 0;
    for (const auto& g : generators) m = std::max(m, g.width);
    return m;
  }

  void validate() const {
    if (rows == 0) throw SpecError("rows must be positive");
    validate_characteristic(characteristic);
    if (generators.empty()) throw SpecError("chain '" + name + "' has no generators");
    for (const auto& g : generators) {
      if (g.width == 0) throw SpecError("generator width must be positive");
      if (g.max_column() > g.width) throw SpecError("generator uses a column beyond its declared width");
      bool rows_ok = std::visit(
          [&](const auto& e) {
            if constexpr (std::is_same_v<std::decay_t<decltype(e)>, Monomial>) {
              return e.max_row() <= rows;
            } else {
              if (e.characteristic() != characteristic) throw SpecError("generator field differs from chain field");
              return std::all_of(e.terms().begin(), e.terms().end(),
                                 [&](const auto& t) { return t.first.max_row() <= rows; });
            }
          },
          g.element);
      if (!rows_ok) throw SpecError("generator uses a row beyond the chain's row count");
      if (g.partition && rows != 1) throw SpecError("partition generators require a single row");
      if (const auto* f = std::get_if<Polynomial>(&g.element); f && f->is_zero()) {
        throw SpecError("zero polynomial generator");
      }
    }
    if (horizon < max_width()) throw SpecError("horizon is smaller than the widest generator");
  }
};

// ---------------------------------------------------------------------------
// Orbits

/// {sigma(u) : sigma in Sym(n)}. Enumerated as placements of the distinct
/// column exponent vectors of u into distinct columns of [1..n].
inline std::vector<Monomial> sym_orbit(const Monomial& u, std::uint32_t n) {
  if (u.max_column() > n) throw DomainError("sym_orbit: monomial has a column beyond n");
  // column -> its (row, exp) pattern
  std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> by_col;
  for (const auto& f : u.factors()) by_col[f.var.col].emplace_back(f.var.row, f.exp);
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> patterns;
  for (auto& [_, p] : by_col) patterns.push_back(std::move(p));
  std::sort(patterns.begin(), patterns.end());

  std::vector<Monomial> orbit;
  std::vector<std::uint32_t> target(patterns.size());
  std::vector<bool> used(n + 1, false);
  auto place = [&](auto&& self, std::size_t i) -> void {
    if (i == patterns.size()) {
      std::vector<Factor> fs;
      for (std::size_t p = 0; p < patterns.size(); ++p)
        for (auto [row, e] : patterns[p]) fs.push_back({{row, target[p]}, e});
      orbit.push_back(Monomial::from_factors(std::move(fs)));
      return;
    }
    // equal patterns take increasing columns so each placement is produced once
    std::uint32_t start = (i > 0 && patterns[i] == patterns[i - 1]) ? target[i - 1] + 1 : 1;
    for (std::uint32_t col = start; col <= n; ++col) {
      if (used[col]) continue;
      used[col] = true;
      target[i] = col;
      self(self, i + 1);
      used[col] = false;
    }
  };
  place(place, 0);
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

/// {sigma(f) : sigma in Sym(n)} for a polynomial, up to nonzero scalars.
inline std::vector<Polynomial> sym_orbit(const Polynomial& f, std::uint32_t n) {
  std::set<std::uint32_t> colset;
  for (const auto& [u, _] : f.terms())
    for (auto c : u.columns()) colset.insert(c);
  std::vector<std::uint32_t> cols(colset.begin(), colset.end());
  if (!cols.empty() && cols.back() > n) throw DomainError("sym_orbit: polynomial has a column beyond n");
  std::set<Polynomial> orbit;
  std::vector<std::uint32_t> image(cols.empty() ? 1 : cols.back() + 1, 0);
  std::vector<bool> used(n + 1, false);
  auto place = [&](auto&& self, std::size_t i) -> void {
    if (i == cols.size()) {
      orbit.insert(normalized(map_columns(f, [&](std::uint32_t j) { return image[j]; })));
      return;
    }
    for (std::uint32_t col = 1; col <= n; ++col) {
      if (used[col]) continue;
      used[col] = true;
      image[cols[i]] = col;
      self(self, i + 1);
      used[col] = false;
    }
  };
  place(place, 0);
  return {orbit.begin(), orbit.end()};
}

/// Calls visit(pi) for every strictly increasing map [1..m] -> [1..n].
template <class Visit>
void for_each_inc_map(std::uint32_t m, std::uint32_t n, Visit visit) {
  if (m > n) throw DomainError("Inc_{m,n} needs m <= n");
  std::vector<std::uint32_t> v(m);
  for (std::uint32_t i = 0; i < m; ++i) v[i] = i + 1;
  while (true) {
    visit(IncMap(v));
    std::int64_t i = static_cast<std::int64_t>(m) - 1;
    while (i >= 0 && v[i] == n - m + i + 1) --i;
    if (i < 0) return;
    ++v[i];
    for (std::uint32_t k = static_cast<std::uint32_t>(i) + 1; k < m; ++k) v[k] = v[k - 1] + 1;
  }
}

/// {pi(u) : pi in Inc_{m,n}}, with pi restricted to [1..m].
inline std::vector<Monomial> inc_images(const Monomial& u, std::uint32_t m, std::uint32_t n) {
  if (u.max_column() > m) throw DomainError("inc_images: monomial has a column beyond m");
  std::set<Monomial> out;
  for_each_inc_map(m, n, [&](const IncMap& pi) { out.insert(apply_inc(pi, u)); });
  return {out.begin(), out.end()};
}

inline std::vector<Polynomial> inc_images(const Polynomial& f, std::uint32_t m, std::uint32_t n) {
  if (f.max_column() > m) throw DomainError("inc_images: polynomial has a column beyond m");
  std::set<Polynomial> out;
  for_each_inc_map(m, n, [&](const IncMap& pi) { out.insert(normalized(apply_inc(pi, f))); });
  return {out.begin(), out.end()};
}

/// Images of every generator of I under Inc_{m,n}, minimalized in R_n.
inline MonomialIdeal inc_closure(const MonomialIdeal& I, std::uint32_t m, std::uint32_t n) {
  std::vector<Monomial> gens;
  for (const auto& u : I.gens()) {
    auto imgs = inc_images(u, m, n);
    gens.insert(gens.end(), imgs.begin(), imgs.end());
  }
  return MonomialIdeal::minimalize(std::move(gens), RingContext(I.ambient().rows, n, I.ambient().characteristic));
}

// ---------------------------------------------------------------------------
// Chains

/// The ideal I_n of a chain: minimal monomial generators, or polynomial
/// generators (orbit images) for a polynomial chain.
struct ChainSnapshot {
  std::uint32_t width = 1;
  RingContext ambient;
  std::variant<MonomialIdeal, std::vector<Polynomial>> ideal;

  [[nodiscard]] bool is_monomial() const { return std::holds_alternative<MonomialIdeal>(ideal); }
  [[nodiscard]] const MonomialIdeal& monomial() const { return std::get<MonomialIdeal>(ideal); }
  [[nodiscard]] const std::vector<Polynomial>& polynomials() const { return std::get<std::vector<Polynomial>>(ideal); }
};

inline ChainSnapshot materialize_width(const ChainSpec& spec, std::uint32_t n) {
  RingContext ambient(spec.rows, n, spec.characteristic);
  ChainSnapshot snap{n, ambient, MonomialIdeal(ambient)};
  if (spec.is_monomial()) {
    std::vector<Monomial> gens;
    for (const auto& g : spec.generators) {
      if (g.width > n) continue;
      const auto& u = std::get<Monomial>(g.element);
      auto imgs = spec.symmetry == Symmetry::sym ? sym_orbit(u, n) : inc_images(u, g.width, n);
      gens.insert(gens.end(), imgs.begin(), imgs.end());
    }
    snap.ideal = MonomialIdeal::minimalize(std::move(gens), ambient);
  } else {
    std::set<Polynomial> gens;
    for (const auto& g : spec.generators) {
      if (g.width > n) continue;
      Polynomial f = std::holds_alternative<Polynomial>(g.element)
                         ? std::get<Polynomial>(g.element)
                         : Polynomial::from_monomial(std::get<Monomial>(g.element), spec.characteristic);
      auto imgs = spec.symmetry == Symmetry::sym ? sym_orbit(f, n) : inc_images(f, g.width, n);
      gens.insert(imgs.begin(), imgs.end());
    }
    snap.ideal = std::vector<Polynomial>(gens.begin(), gens.end());
  }
  return snap;
}

/// Snapshots I_1, ..., I_upto. Widths are independent and run on `jobs` threads.
inline std::vector<ChainSnapshot> materialize(const ChainSpec& spec, std::uint32_t upto, std::size_t jobs = 1) {
  spec.validate();
  if (upto < spec.max_width()) throw HorizonError("materialize: upto is below the widest generator");
  return parallel_map(upto, jobs, [&](std::size_t i) { return materialize_width(spec, static_cast<std::uint32_t>(i + 1)); });
}

namespace detail {
inline void require_contiguous(const std::vector<ChainSnapshot>& snaps) {
  for (std::size_t i = 1; i < snaps.size(); ++i)
    if (snaps[i].width != snaps[i - 1].width + 1) throw SpecError("snapshots must have consecutive widths");
}
}  // namespace detail

/// Least r such that I_n = <Inc_{m,n}(I_m)> for all r <= m <= n within the
/// horizon; nullopt when no r <= N-1 works. A horizon-bounded verdict.
inline std::optional<std::uint32_t> stability_index(const std::vector<ChainSnapshot>& snaps) {
  if (snaps.size() < 2) throw HorizonError("stability_index needs at least two snapshots");
  detail::require_contiguous(snaps);
  for (const auto& s : snaps)
    if (!s.is_monomial()) throw DomainError("stability_index needs a monomial chain");
  const std::size_t N = snaps.size();
  // scan down from the top; r is the smallest index of the trailing run where
  // every pair (i, k), k > i, satisfies generation
  std::optional<std::uint32_t> r;
  for (std::size_t i = N - 1; i-- > 0;) {
    bool holds = true;
    for (std::size_t k = i + 1; k < N && holds; ++k) {
      auto gen = inc_closure(snaps[i].monomial(), snaps[i].width, snaps[k].width);
      holds = gen == snaps[k].monomial();
    }
    if (!holds) break;
    r = snaps[i].width;
  }
  return r;
}

struct WidthInvariants {
  std::uint32_t width = 0;
  std::size_t num_gens = 0;
  bool proper_nonzero = false;
  std::uint32_t gamma = 0;
  std::vector<std::uint32_t> w;
  std::uint32_t omega = 0;
};

struct ChainInvariants {
  std::vector<WidthInvariants> rows;
  std::uint32_t gamma = 0;
  std::vector<std::uint32_t> w;
  std::uint32_t omega = 0;
  std::uint32_t gamma_onset = 0;    // first width from which gamma is constant through the horizon
  std::uint32_t weights_onset = 0;  // same for (w, omega)
  std::optional<std::uint32_t> stability_index;
};

/// Per-width gamma, w_k, omega and the chain-level values, read off once they
/// are constant on at least two trailing widths.
inline ChainInvariants chain_invariants(const std::vector<ChainSnapshot>& snaps) {
  ChainInvariants out;
  for (const auto& s : snaps) {
    if (!s.is_monomial()) throw DomainError("chain_invariants needs monomial snapshots");
    WidthInvariants row;
    row.width = s.width;
    const auto& I = s.monomial();
    row.num_gens = I.gens().size();
    row.proper_nonzero = !I.is_zero() && !I.is_unit();
    if (row.proper_nonzero) {
      row.gamma = covers(I).gamma;
      auto wr = weights(I);
      row.w = wr.w;
      row.omega = wr.omega;
    }
    out.rows.push_back(std::move(row));
  }
  const auto& rs = out.rows;
  if (rs.size() < 2 || !rs.back().proper_nonzero || !rs[rs.size() - 2].proper_nonzero) {
    throw HorizonError("chain invariants need two trailing proper nonzero ideals");
  }
  auto last = rs.size() - 1;
  std::size_t g = last;
  while (g > 0 && rs[g - 1].proper_nonzero && rs[g - 1].gamma == rs[last].gamma) --g;
  std::size_t w = last;
  while (w > 0 && rs[w - 1].proper_nonzero && rs[w - 1].w == rs[last].w && rs[w - 1].omega == rs[last].omega) --w;
  if (g == last || w == last) throw HorizonError("chain invariants not constant on the horizon tail");
  out.gamma = rs[last].gamma;
  out.w = rs[last].w;
  out.omega = rs[last].omega;
  out.gamma_onset = rs[g].width;
  out.weights_onset = rs[w].width;
  if (snaps.size() >= 2) out.stability_index = stability_index(snaps);
  return out;
}

}  // namespace equichain
