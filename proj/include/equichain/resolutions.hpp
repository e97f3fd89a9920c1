#pragma once

// Betti numbers of monomial ideals from the reduced homology of upper Koszul
// simplicial complexes over the lcm lattice, plus a Taylor complex oracle.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "equichain/coefficient.hpp"
#include "equichain/errors.hpp"
#include "equichain/hilbert.hpp"
#include "equichain/linalg.hpp"
#include "equichain/monomial_ideal.hpp"
#include "equichain/parallel.hpp"

namespace equichain {

/// Downward closed family of subsets of `vertices`, stored by its facets as
/// bitmasks over vertex positions. No facets: the void complex. The single
/// facet 0: the irrelevant complex {∅}.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  SimplicialComplex(std::vector<std::uint32_t> vertices, std::vector<std::uint64_t> faces)
      : vertices_(std::move(vertices)) {
    if (vertices_.size() > 63) throw DomainError("simplicial complexes support at most 63 vertices");
    std::sort(faces.begin(), faces.end(), [](auto a, auto b) {
      return __builtin_popcountll(a) > __builtin_popcountll(b) || (__builtin_popcountll(a) == __builtin_popcountll(b) && a < b);
    });
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    for (auto f : faces) {
      bool covered = std::any_of(facets_.begin(), facets_.end(), [&](std::uint64_t g) { return (f & g) == f; });
      if (!covered) facets_.push_back(f);
    }
    std::sort(facets_.begin(), facets_.end());
  }

  static SimplicialComplex void_complex(std::vector<std::uint32_t> vertices = {}) { return {std::move(vertices), {}}; }
  static SimplicialComplex irrelevant(std::vector<std::uint32_t> vertices = {}) { return {std::move(vertices), {0}}; }

  [[nodiscard]] const std::vector<std::uint32_t>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<std::uint64_t>& facets() const { return facets_; }
  [[nodiscard]] bool is_void() const { return facets_.empty(); }
  [[nodiscard]] bool contains(std::uint64_t face) const {
    return std::any_of(facets_.begin(), facets_.end(), [&](std::uint64_t g) { return (face & g) == face; });
  }
  [[nodiscard]] int dimension() const {
    int d = -2;
    for (auto f : facets_) d = std::max(d, __builtin_popcountll(f) - 1);
    return d;
  }

  /// All faces, ordered by size then bitmask.
  [[nodiscard]] std::vector<std::uint64_t> faces() const {
    std::set<std::uint64_t> all;
    for (auto f : facets_) {
      for (std::uint64_t s = f;; s = (s - 1) & f) {
        all.insert(s);
        if (s == 0) break;
      }
    }
    std::vector<std::uint64_t> out(all.begin(), all.end());
    std::sort(out.begin(), out.end(), [](auto a, auto b) {
      return __builtin_popcountll(a) < __builtin_popcountll(b) || (__builtin_popcountll(a) == __builtin_popcountll(b) && a < b);
    });
    return out;
  }

  friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;

 private:
  std::vector<std::uint32_t> vertices_;
  std::vector<std::uint64_t> facets_;
};

/// Ranks of reduced homology H~_{-1}, H~_0, ..., H~_{dim} over the field of the
/// given characteristic, from the full reduced chain complex. Empty for the
/// void complex.
inline std::vector<std::size_t> reduced_homology_ranks(const SimplicialComplex& delta, std::uint32_t characteristic = 0) {
  if (delta.is_void()) return {};
  auto faces = delta.faces();
  const int top = delta.dimension();
  // by_dim[k+1] = faces of dimension k
  std::vector<std::vector<std::uint64_t>> by_dim(static_cast<std::size_t>(top) + 2);
  for (auto f : faces) by_dim[static_cast<std::size_t>(__builtin_popcountll(f))].push_back(f);
  std::vector<std::size_t> boundary_rank(by_dim.size() + 1, 0);  // rank of d: C_k -> C_{k-1}, at index k+1
  for (std::size_t idx = 1; idx < by_dim.size(); ++idx) {
    const auto& lower = by_dim[idx - 1];
    std::map<std::uint64_t, std::uint32_t> position;
    for (std::uint32_t p = 0; p < lower.size(); ++p) position[lower[p]] = p;
    std::vector<SparseRow> rows;
    rows.reserve(by_dim[idx].size());
    for (auto f : by_dim[idx]) {
      SparseRow row;
      int pos = 0;
      for (std::uint64_t bits = f; bits; bits &= bits - 1, ++pos) {
        std::uint64_t v = bits & -bits;
        row.emplace_back(position.at(f & ~v), Coefficient(pos % 2 == 0 ? 1 : -1, characteristic));
      }
      rows.push_back(std::move(row));
    }
    boundary_rank[idx] = exact_rank(rows);
  }
  std::vector<std::size_t> h(by_dim.size());
  for (std::size_t idx = 0; idx < by_dim.size(); ++idx) {
    h[idx] = by_dim[idx].size() - boundary_rank[idx] - boundary_rank[idx + 1];
  }
  return h;
}

namespace detail {

// Reduced homology of the complex with these facets (masks over up to 64
// vertices), using cone detection and passing to the nerve of the facet cover
// when that is smaller. Result indexed like reduced_homology_ranks.
inline std::vector<std::size_t> homology_from_facets(std::vector<std::uint64_t> facets, std::uint32_t characteristic) {
  while (true) {
    if (facets.empty()) return {};
    if (facets.size() == 1) {
      if (facets.front() == 0) return {1};
      return {0};
    }
    std::uint64_t common = ~std::uint64_t{0};
    std::uint64_t verts = 0;
    for (auto f : facets) {
      common &= f;
      verts |= f;
    }
    if (common != 0) return {0};
    auto nv = static_cast<std::size_t>(__builtin_popcountll(verts));
    if (facets.size() >= nv || facets.size() > 63) {
      return reduced_homology_ranks(SimplicialComplex({}, std::move(facets)), characteristic);
    }
    // nerve: vertex v spans the set of facets containing it
    std::vector<std::uint64_t> nerve;
    for (std::uint64_t bits = verts; bits; bits &= bits - 1) {
      std::uint64_t v = bits & -bits;
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < facets.size(); ++k)
        if (facets[k] & v) s |= std::uint64_t{1} << k;
      nerve.push_back(s);
    }
    facets = SimplicialComplex({}, std::move(nerve)).facets();
  }
}

inline DenseMono dense_lcm(const DenseMono& a, const DenseMono& b) {
  DenseMono m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::max(a[i], b[i]);
  return m;
}

inline Monomial from_dense(const DenseMono& d, const RingContext& ctx) {
  std::vector<Factor> fs;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i]) fs.push_back({ctx.var_at(static_cast<std::uint32_t>(i)), d[i]});
  return Monomial::from_factors(std::move(fs));
}

// Facets of the upper Koszul complex of sigma: the maximal sets
// {x in supp(sigma) : g_x < sigma_x} over generators g dividing sigma.
inline std::vector<std::uint64_t> koszul_facets(const std::vector<DenseMono>& gens, const DenseMono& sigma,
                                                const std::vector<std::size_t>& support) {
  std::vector<std::uint64_t> faces;
  for (const auto& g : gens) {
    if (!dense_divides(g, sigma)) continue;
    std::uint64_t t = 0;
    for (std::size_t p = 0; p < support.size(); ++p)
      if (g[support[p]] < sigma[support[p]]) t |= std::uint64_t{1} << p;
    faces.push_back(t);
  }
  return SimplicialComplex({}, std::move(faces)).facets();
}

}  // namespace detail

/// Complex on supp(sigma) with faces S such that sigma / prod_{x in S} x lies in I.
inline SimplicialComplex upper_koszul(const MonomialIdeal& I, const Monomial& sigma) {
  const auto& ctx = I.ambient();
  auto gens = detail::to_dense(I);
  detail::DenseMono s(ctx.num_vars(), 0);
  for (const auto& f : sigma.factors()) s[ctx.flat_index(f.var)] = static_cast<std::uint16_t>(f.exp);
  std::vector<std::size_t> support;
  std::vector<std::uint32_t> labels;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i]) {
      support.push_back(i);
      labels.push_back(static_cast<std::uint32_t>(i));
    }
  return {labels, detail::koszul_facets(gens, s, support)};
}

struct MultigradedBetti {
  std::uint32_t i = 0;
  Monomial sigma;
  std::uint64_t multiplicity = 0;
};

/// Graded Betti numbers beta_{i,j} of an ideal (not of its quotient).
class BettiTable {
 public:
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> entries;  // (i, j) -> beta_{i,j}
  std::vector<MultigradedBetti> multigraded;
  std::uint32_t characteristic = 0;

  [[nodiscard]] std::uint64_t at(std::uint32_t i, std::uint32_t j) const {
    auto it = entries.find({i, j});
    return it == entries.end() ? 0 : it->second;
  }
  void add(std::uint32_t i, std::uint32_t j, std::uint64_t v) {
    if (v == 0) return;
    entries[{i, j}] += v;
  }
  [[nodiscard]] bool empty() const { return entries.empty(); }

  /// max{j - i : beta_{i,j} != 0}
  [[nodiscard]] std::uint32_t reg() const {
    if (empty()) throw DomainError("regularity of an empty Betti table");
    std::uint32_t r = 0;
    for (const auto& [k, _] : entries) r = std::max(r, k.second - k.first);
    return r;
  }
  /// max{i : beta_{i,j} != 0}
  [[nodiscard]] std::uint32_t pd() const {
    if (empty()) throw DomainError("projective dimension of an empty Betti table");
    std::uint32_t p = 0;
    for (const auto& [k, _] : entries) p = std::max(p, k.first);
    return p;
  }
  /// Nonzero positions (column i, row j - i).
  [[nodiscard]] std::set<std::pair<std::uint32_t, std::uint32_t>> support() const {
    std::set<std::pair<std::uint32_t, std::uint32_t>> s;
    for (const auto& [k, _] : entries) s.emplace(k.first, k.second - k.first);
    return s;
  }
  /// Internal degrees j with beta_{p,j} != 0.
  [[nodiscard]] std::set<std::uint32_t> column_degrees(std::uint32_t p) const {
    std::set<std::uint32_t> s;
    for (const auto& [k, _] : entries)
      if (k.first == p) s.insert(k.second);
    return s;
  }

  friend bool operator==(const BettiTable& a, const BettiTable& b) { return a.entries == b.entries; }
};

/// Column i, row r holding beta_{i,i+r}; zero entries as ".".
inline std::string render_layout(const BettiTable& t, const std::string& title = "") {
  if (t.empty()) return title + "\n";
  std::uint32_t pd = t.pd();
  std::uint32_t lo = UINT32_MAX;
  std::uint32_t hi = 0;
  for (const auto& [k, _] : t.entries) {
    lo = std::min(lo, k.second - k.first);
    hi = std::max(hi, k.second - k.first);
  }
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{title};
  for (std::uint32_t i = 0; i <= pd; ++i) header.push_back(std::to_string(i));
  cells.push_back(header);
  for (std::uint32_t r = lo; r <= hi; ++r) {
    std::vector<std::string> row{std::to_string(r) + ":"};
    for (std::uint32_t i = 0; i <= pd; ++i) {
      auto v = t.at(i, i + r);
      row.push_back(v ? std::to_string(v) : ".");
    }
    cells.push_back(row);
  }
  std::vector<std::size_t> width(pd + 2, 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += " ";
      line += std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

/// Inverse of render_layout (the title cell is ignored).
inline BettiTable parse_layout(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  BettiTable t;
  std::vector<std::uint32_t> columns;
  bool header = true;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (header) {
      for (const auto& w : tok)
        if (std::all_of(w.begin(), w.end(), ::isdigit)) columns.push_back(static_cast<std::uint32_t>(std::stoul(w)));
      header = false;
      continue;
    }
    if (tok.front().back() != ':') throw SpecError("malformed Betti table row: " + line);
    auto r = static_cast<std::uint32_t>(std::stoul(tok.front().substr(0, tok.front().size() - 1)));
    if (tok.size() != columns.size() + 1) throw SpecError("Betti table row has the wrong number of entries: " + line);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (tok[c + 1] == ".") continue;
      t.add(columns[c], columns[c] + r, std::stoull(tok[c + 1]));
    }
  }
  return t;
}

inline std::string to_csv(const BettiTable& t) {
  std::string s = "i,j,beta\n";
  for (const auto& [k, v] : t.entries) s += std::to_string(k.first) + "," + std::to_string(k.second) + "," + std::to_string(v) + "\n";
  return s;
}

inline BettiTable betti_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  BettiTable t;
  if (!std::getline(in, line) || line != "i,j,beta") throw SpecError("Betti CSV must start with the header i,j,beta");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
      throw SpecError("malformed Betti CSV line: " + line);
    }
    t.add(static_cast<std::uint32_t>(std::stoul(a)), static_cast<std::uint32_t>(std::stoul(b)), std::stoull(c));
  }
  return t;
}

namespace detail {
inline std::vector<DenseMono> lcm_lattice(const std::vector<DenseMono>& gens) {
  std::set<DenseMono> all(gens.begin(), gens.end());
  std::vector<DenseMono> frontier(gens.begin(), gens.end());
  while (!frontier.empty()) {
    std::vector<DenseMono> next;
    for (const auto& a : frontier)
      for (const auto& g : gens) {
        auto m = dense_lcm(a, g);
        if (all.insert(m).second) next.push_back(std::move(m));
      }
    frontier = std::move(next);
  }
  return {all.begin(), all.end()};
}
}  // namespace detail

/// beta_{i,sigma}(I) = rank H~_{i-1}(K^sigma(I)) summed over the lcm lattice.
inline BettiTable betti_table(const MonomialIdeal& I, std::size_t jobs = 1) {
  detail::require_proper_nonzero(I, "betti_table");
  const auto& ctx = I.ambient();
  if (!ctx.bounded()) throw DomainError("betti_table needs a bounded ambient ring");
  auto gens = detail::to_dense(I);
  auto lattice = detail::lcm_lattice(gens);
  const std::uint32_t ch = ctx.characteristic;
  auto ranks = parallel_map(lattice.size(), jobs, [&](std::size_t idx) {
    const auto& sigma = lattice[idx];
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < sigma.size(); ++i)
      if (sigma[i]) support.push_back(i);
    return detail::homology_from_facets(detail::koszul_facets(gens, sigma, support), ch);
  });
  BettiTable t;
  t.characteristic = ch;
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    const auto deg = detail::dense_degree(lattice[idx]);
    for (std::size_t h = 0; h < ranks[idx].size(); ++h) {
      if (ranks[idx][h] == 0) continue;
      // H~_{h-1} gives beta_h
      auto i = static_cast<std::uint32_t>(h);
      t.add(i, deg, ranks[idx][h]);
      t.multigraded.push_back({i, detail::from_dense(lattice[idx], ctx), ranks[idx][h]});
    }
  }
  std::sort(t.multigraded.begin(), t.multigraded.end(), [](const auto& a, const auto& b) {
    return a.i < b.i || (a.i == b.i && generator_less(a.sigma, b.sigma));
  });
  return t;
}

/// Betti numbers from the Taylor complex, strand by strand in each lcm degree.
inline BettiTable taylor_betti(const MonomialIdeal& I, std::size_t cap = 12) {
  detail::require_proper_nonzero(I, "taylor_betti");
  if (I.gens().size() > cap) {
    throw OracleCapError("taylor_betti: " + std::to_string(I.gens().size()) + " generators exceed the cap of " +
                         std::to_string(cap));
  }
  const std::uint32_t ch = I.ambient().characteristic;
  auto gens = detail::to_dense(I);
  const std::size_t g = gens.size();
  std::map<detail::DenseMono, std::vector<std::uint32_t>> strands;
  for (std::uint32_t a = 1; a < (1u << g); ++a) {
    detail::DenseMono m(gens.front().size(), 0);
    for (std::size_t k = 0; k < g; ++k)
      if (a >> k & 1) m = detail::dense_lcm(m, gens[k]);
    strands[m].push_back(a);
  }
  BettiTable t;
  t.characteristic = ch;
  for (const auto& [m, subsets] : strands) {
    // basis by homological degree |A| - 1
    std::vector<std::vector<std::uint32_t>> basis(g + 1);
    for (auto a : subsets) basis[static_cast<std::size_t>(__builtin_popcount(a)) - 1].push_back(a);
    std::vector<std::size_t> rank(g + 2, 0);  // rank[i] = rank of d: F_i -> F_{i-1}
    for (std::size_t i = 1; i <= g; ++i) {
      if (basis[i].empty() || basis[i - 1].empty()) continue;
      std::map<std::uint32_t, std::uint32_t> position;
      for (std::uint32_t p = 0; p < basis[i - 1].size(); ++p) position[basis[i - 1][p]] = p;
      std::vector<SparseRow> rows;
      for (auto a : basis[i]) {
        SparseRow row;
        int pos = 0;
        for (std::uint32_t bits = a; bits; bits &= bits - 1, ++pos) {
          std::uint32_t b = a & ~(bits & -bits);
          auto it = position.find(b);
          if (it != position.end()) row.emplace_back(it->second, Coefficient(pos % 2 == 0 ? 1 : -1, ch));
        }
        rows.push_back(std::move(row));
      }
      rank[i] = exact_rank(rows);
    }
    const auto deg = detail::dense_degree(m);
    for (std::size_t i = 0; i < g; ++i) {
      std::size_t b = basis[i].size() - rank[i] - rank[i + 1];
      if (b) t.add(static_cast<std::uint32_t>(i), deg, b);
    }
  }
  return t;
}

/// 1 + sum_{i,j} (-1)^{i+1} beta_{i,j} t^j, the numerator of H_{R/I} over (1-t)^{#vars}.
inline IntPoly k_polynomial(const BettiTable& t) {
  std::uint32_t top = 0;
  for (const auto& [k, _] : t.entries) top = std::max(top, k.second);
  std::vector<mpz_class> c(top + 1, 0);
  c[0] = 1;
  for (const auto& [k, v] : t.entries) {
    mpz_class b(static_cast<unsigned long>(v));
    if (k.first % 2 == 0) {
      c[k.second] -= b;
    } else {
      c[k.second] += b;
    }
  }
  return IntPoly(std::move(c));
}

/// pd(I) = codim(I) - 1.
inline bool is_cohen_macaulay(const MonomialIdeal& I, const BettiTable& table) { return table.pd() + 1 == codim(I); }

inline bool is_cohen_macaulay(const MonomialIdeal& I) { return is_cohen_macaulay(I, betti_table(I)); }

}  // namespace equichain
