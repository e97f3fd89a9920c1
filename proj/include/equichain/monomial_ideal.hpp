#pragma once

// Monomial ideals given by their minimal generators, and the combinatorial
// invariants read off from them: minimal primes, codimension, row covers,
// weights and unmixedness.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "equichain/errors.hpp"
#include "equichain/ring.hpp"

namespace equichain {

/// Deterministic generator order: by degree, then structurally.
inline bool generator_less(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a < b;
}

class MonomialIdeal {
 public:
  MonomialIdeal() = default;
  explicit MonomialIdeal(RingContext ambient) : ambient_(std::move(ambient)) {}

  /// Keeps the inclusion-minimal generators; 1 among the inputs yields the unit ideal.
  static MonomialIdeal minimalize(std::vector<Monomial> gens, RingContext ambient) {
    std::sort(gens.begin(), gens.end(), generator_less);
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    MonomialIdeal I(std::move(ambient));
    for (auto& u : gens) {
      for (const auto& f : u.factors()) {
        if (!I.ambient_.contains(f.var)) {
          throw SpecError("generator " + render(u, I.ambient_.rows) + " lies outside the ambient ring");
        }
      }
      bool redundant = std::any_of(I.gens_.begin(), I.gens_.end(), [&](const Monomial& g) { return g.divides(u); });
      if (!redundant) I.gens_.push_back(std::move(u));
    }
    return I;
  }

  static MonomialIdeal unit(RingContext ambient) { return minimalize({Monomial{}}, std::move(ambient)); }

  [[nodiscard]] const std::vector<Monomial>& gens() const { return gens_; }
  [[nodiscard]] const RingContext& ambient() const { return ambient_; }
  [[nodiscard]] bool is_zero() const { return gens_.empty(); }
  [[nodiscard]] bool is_unit() const { return gens_.size() == 1 && gens_.front().is_one(); }
  [[nodiscard]] bool is_squarefree() const {
    return std::all_of(gens_.begin(), gens_.end(), [](const Monomial& u) {
      return std::all_of(u.factors().begin(), u.factors().end(), [](const Factor& f) { return f.exp == 1; });
    });
  }

  [[nodiscard]] bool contains(const Monomial& u) const {
    return std::any_of(gens_.begin(), gens_.end(), [&](const Monomial& g) { return g.divides(u); });
  }
  [[nodiscard]] bool contains(const MonomialIdeal& J) const {
    return std::all_of(J.gens_.begin(), J.gens_.end(), [&](const Monomial& u) { return contains(u); });
  }

  /// Variables occurring in some generator, ascending.
  [[nodiscard]] std::vector<VarIndex> support() const {
    std::set<VarIndex> s;
    for (const auto& u : gens_)
      for (const auto& f : u.factors()) s.insert(f.var);
    return {s.begin(), s.end()};
  }

  friend bool operator==(const MonomialIdeal& a, const MonomialIdeal& b) { return a.gens_ == b.gens_; }

 private:
  RingContext ambient_;
  std::vector<Monomial> gens_;
};

inline std::string render(const MonomialIdeal& I) {
  std::string s = "<";
  for (std::size_t i = 0; i < I.gens().size(); ++i) {
    if (i) s += ", ";
    s += render(I.gens()[i], I.ambient().rows);
  }
  return s + ">";
}

/// I : alpha = {v : v * alpha in I}.
inline MonomialIdeal colon(const MonomialIdeal& I, const Monomial& alpha) {
  std::vector<Monomial> gens;
  gens.reserve(I.gens().size());
  for (const auto& u : I.gens()) gens.push_back(strip(u, alpha));
  return MonomialIdeal::minimalize(std::move(gens), I.ambient());
}

inline MonomialIdeal sum(const MonomialIdeal& I, const MonomialIdeal& J) {
  std::vector<Monomial> gens = I.gens();
  gens.insert(gens.end(), J.gens().begin(), J.gens().end());
  return MonomialIdeal::minimalize(std::move(gens), I.ambient());
}

inline MonomialIdeal intersection(const MonomialIdeal& I, const MonomialIdeal& J) {
  std::vector<Monomial> gens;
  for (const auto& u : I.gens())
    for (const auto& v : J.gens()) gens.push_back(lcm(u, v));
  return MonomialIdeal::minimalize(std::move(gens), I.ambient());
}

namespace detail {

inline void require_proper_nonzero(const MonomialIdeal& I, const char* what) {
  if (I.is_zero()) throw DomainError(std::string(what) + " is undefined for the zero ideal");
  if (I.is_unit()) throw DomainError(std::string(what) + " is undefined for the unit ideal");
}

// Inclusion-minimal transversals of a family of sets, given as bitmasks over
// at most 64 elements.
inline std::vector<std::uint64_t> minimal_transversals(std::vector<std::uint64_t> family) {
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  // supersets of other members impose no extra condition
  std::vector<std::uint64_t> edges;
  for (auto e : family) {
    bool dominated = std::any_of(family.begin(), family.end(), [&](std::uint64_t f) { return f != e && (f & e) == f; });
    if (!dominated) edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end(), [](auto a, auto b) { return __builtin_popcountll(a) < __builtin_popcountll(b); });

  std::vector<std::uint64_t> found;
  auto is_minimal = [&](std::uint64_t t) {
    for (std::uint64_t bits = t; bits; bits &= bits - 1) {
      std::uint64_t without = t & ~(bits & -bits);
      bool still = std::all_of(edges.begin(), edges.end(), [&](std::uint64_t e) { return (e & without) != 0; });
      if (still) return false;
    }
    return true;
  };
  // branch on the first unhit edge; `excluded` holds elements already branched on
  auto recurse = [&](auto&& self, std::uint64_t chosen, std::uint64_t excluded) -> void {
    for (auto f : found)
      if ((f & chosen) == f) return;
    auto unhit = std::find_if(edges.begin(), edges.end(), [&](std::uint64_t e) { return (e & chosen) == 0; });
    if (unhit == edges.end()) {
      if (is_minimal(chosen)) found.push_back(chosen);
      return;
    }
    std::uint64_t options = *unhit & ~excluded;
    std::uint64_t excl = excluded;
    for (std::uint64_t bits = options; bits; bits &= bits - 1) {
      std::uint64_t x = bits & -bits;
      self(self, chosen | x, excl);
      excl |= x;
    }
  };
  recurse(recurse, 0, 0);
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace detail

/// Minimal primes, each given by its generating variables (ascending).
struct PrimeDecomposition {
  std::vector<std::vector<VarIndex>> primes;

  friend bool operator==(const PrimeDecomposition&, const PrimeDecomposition&) = default;
};

/// Minimal primes of a proper nonzero monomial ideal: the minimal variable sets
/// meeting the support of every generator.
inline PrimeDecomposition minimal_primes(const MonomialIdeal& I) {
  detail::require_proper_nonzero(I, "minimal_primes");
  auto vars = I.support();
  if (vars.size() > 64) throw DomainError("minimal_primes supports at most 64 variables");
  auto bit = [&](VarIndex v) {
    return std::uint64_t{1} << (std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };
  std::vector<std::uint64_t> family;
  for (const auto& u : I.gens()) {
    std::uint64_t mask = 0;
    for (const auto& f : u.factors()) mask |= bit(f.var);
    family.push_back(mask);
  }
  PrimeDecomposition pd;
  for (auto t : detail::minimal_transversals(std::move(family))) {
    std::vector<VarIndex> p;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (t >> i & 1) p.push_back(vars[i]);
    pd.primes.push_back(std::move(p));
  }
  std::sort(pd.primes.begin(), pd.primes.end());
  return pd;
}

inline std::uint32_t codim(const MonomialIdeal& I) {
  auto pd = minimal_primes(I);
  std::size_t best = SIZE_MAX;
  for (const auto& p : pd.primes) best = std::min(best, p.size());
  return static_cast<std::uint32_t>(best);
}

/// Rows of a prime's variables.
inline std::vector<std::uint32_t> row_image(std::span<const VarIndex> prime) {
  std::set<std::uint32_t> rows;
  for (auto v : prime) rows.insert(v.row);
  return {rows.begin(), rows.end()};
}

struct CoverReport {
  std::vector<std::vector<std::uint32_t>> minimal_covers;  // subsets of [1..c], ascending by size
  std::uint32_t gamma = 0;
};

/// Inclusion-minimal row sets C such that every generator involves a row of C.
inline CoverReport covers(const MonomialIdeal& I) {
  detail::require_proper_nonzero(I, "covers");
  const std::uint32_t c = I.ambient().rows;
  if (c > 20) throw DomainError("covers enumerates row subsets and supports at most 20 rows");
  std::vector<std::uint32_t> row_masks;
  for (const auto& u : I.gens()) {
    std::uint32_t m = 0;
    for (const auto& f : u.factors()) m |= 1u << (f.var.row - 1);
    row_masks.push_back(m);
  }
  std::vector<std::uint32_t> subsets(1u << c);
  for (std::uint32_t s = 0; s < subsets.size(); ++s) subsets[s] = s;
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](auto a, auto b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  std::vector<std::uint32_t> found;
  for (auto s : subsets) {
    bool is_cover = std::all_of(row_masks.begin(), row_masks.end(), [&](std::uint32_t m) { return (m & s) != 0; });
    if (!is_cover) continue;
    bool contains_smaller = std::any_of(found.begin(), found.end(), [&](std::uint32_t f) { return (f & s) == f; });
    if (!contains_smaller) found.push_back(s);
  }
  CoverReport rep;
  rep.gamma = c + 1;
  for (auto s : found) {
    std::vector<std::uint32_t> rows;
    for (std::uint32_t k = 0; k < c; ++k)
      if (s >> k & 1) rows.push_back(k + 1);
    rep.gamma = std::min<std::uint32_t>(rep.gamma, static_cast<std::uint32_t>(rows.size()));
    rep.minimal_covers.push_back(std::move(rows));
  }
  return rep;
}

struct WeightReport {
  std::vector<std::uint32_t> w;  // w[k-1] = w_k(I)
  std::uint32_t omega = 0;

  friend bool operator==(const WeightReport&, const WeightReport&) = default;
};

/// Largest exponent of a single row-k variable in u.
inline std::uint32_t row_weight(const Monomial& u, std::uint32_t k) {
  std::uint32_t w = 0;
  for (const auto& f : u.factors())
    if (f.var.row == k) w = std::max(w, f.exp);
  return w;
}

inline WeightReport weights(const MonomialIdeal& I) {
  detail::require_proper_nonzero(I, "weights");
  const std::uint32_t c = I.ambient().rows;
  WeightReport rep;
  rep.w.assign(c, 0);
  rep.omega = UINT32_MAX;
  for (const auto& u : I.gens()) {
    std::uint32_t wu = 0;
    for (std::uint32_t k = 1; k <= c; ++k) {
      auto wk = row_weight(u, k);
      rep.w[k - 1] = std::max(rep.w[k - 1], wk);
      wu = std::max(wu, wk);
    }
    rep.omega = std::min(rep.omega, wu);
  }
  return rep;
}

/// True iff all minimal primes have the same height.
inline bool is_equidimensional(const MonomialIdeal& I) {
  auto pd = minimal_primes(I);
  return std::all_of(pd.primes.begin(), pd.primes.end(),
                     [&](const auto& p) { return p.size() == pd.primes.front().size(); });
}

/// Associated primes of R/I. The prime on variables S is associated iff, after
/// setting the variables outside S to 1, the ideal has a socle monomial modulo
/// the maximal ideal on S.
inline PrimeDecomposition associated_primes(const MonomialIdeal& I) {
  detail::require_proper_nonzero(I, "associated_primes");
  if (I.is_squarefree()) return minimal_primes(I);
  auto vars = I.support();
  if (vars.size() > 24) throw DomainError("associated_primes enumerates variable subsets; at most 24 variables");
  PrimeDecomposition out;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << vars.size()); ++s) {
    std::vector<VarIndex> subset;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (s >> i & 1) subset.push_back(vars[i]);
    auto in_subset = [&](VarIndex v) { return std::binary_search(subset.begin(), subset.end(), v); };
    std::vector<Monomial> local;
    for (const auto& u : I.gens()) {
      std::vector<Factor> fs;
      for (const auto& f : u.factors())
        if (in_subset(f.var)) fs.push_back(f);
      local.push_back(Monomial::from_factors(std::move(fs)));
    }
    auto J = MonomialIdeal::minimalize(std::move(local), I.ambient());
    if (J.is_unit()) continue;
    auto jsupp = J.support();
    if (jsupp.size() != subset.size()) continue;  // a variable of S is a nonzerodivisor
    MonomialIdeal socle = colon(J, Monomial::variable(subset.front()));
    for (std::size_t i = 1; i < subset.size(); ++i) socle = intersection(socle, colon(J, Monomial::variable(subset[i])));
    if (!J.contains(socle)) out.primes.push_back(std::move(subset));
  }
  std::sort(out.primes.begin(), out.primes.end());
  return out;
}

/// True iff all associated primes of R/I have the same height (no embedded
/// components and equidimensional).
inline bool is_unmixed(const MonomialIdeal& I) {
  auto ass = associated_primes(I);
  return std::all_of(ass.primes.begin(), ass.primes.end(),
                     [&](const auto& p) { return p.size() == ass.primes.front().size(); });
}

}  // namespace equichain
