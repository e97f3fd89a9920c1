#pragma once

// Hilbert series of monomial quotients R_n/I_n, their reduced rational form,
// the bivariate (equivariant) series of a chain and checks of closed forms.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equichain/equivariance.hpp"
#include "equichain/errors.hpp"
#include "equichain/monomial_ideal.hpp"
#include "equichain/parallel.hpp"

namespace equichain {

/// Univariate polynomial in t with integer coefficients, ascending powers.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
  static IntPoly constant(long v) { return IntPoly({mpz_class(v)}); }
  /// 1 - t^a
  static IntPoly one_minus_power(std::uint32_t a) {
    std::vector<mpz_class> c(a + 1, 0);
    c[0] += 1;
    c[a] -= 1;
    return IntPoly(std::move(c));
  }

  [[nodiscard]] const std::vector<mpz_class>& coeffs() const { return c_; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] mpz_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
  [[nodiscard]] mpz_class at_one() const {
    mpz_class s = 0;
    for (const auto& x : c_) s += x;
    return s;
  }

  /// Multiplies by t^k.
  [[nodiscard]] IntPoly shifted(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<mpz_class> c(k, 0);
    c.insert(c.end(), c_.begin(), c_.end());
    return IntPoly(std::move(c));
  }

  /// Exact division by (1 - t); requires p(1) = 0.
  [[nodiscard]] IntPoly divided_by_one_minus_t() const {
    if (at_one() != 0) throw DomainError("polynomial is not divisible by 1 - t");
    // p = (1 - t) q  =>  q_i = sum_{k<=i} p_k
    std::vector<mpz_class> q;
    mpz_class acc = 0;
    for (std::size_t i = 0; i + 1 < c_.size(); ++i) {
      acc += c_[i];
      q.push_back(acc);
    }
    return IntPoly(std::move(q));
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return IntPoly(std::move(c));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return IntPoly(std::move(c));
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return IntPoly(std::move(c));
  }
  friend bool operator==(const IntPoly&, const IntPoly&) = default;

  /// e.g. "2 - 3t + t^2"
  [[nodiscard]] std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      mpz_class a = abs(c_[i]);
      if (s.empty()) {
        s += c_[i] < 0 ? "-" : "";
      } else {
        s += c_[i] < 0 ? " - " : " + ";
      }
      if (i == 0 || a != 1) s += a.get_str();
      if (i >= 1) s += "t";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<mpz_class> c_;
};

/// (1 - t)^k
inline IntPoly one_minus_t_power(std::uint32_t k) {
  IntPoly p = IntPoly::constant(1);
  for (std::uint32_t i = 0; i < k; ++i) p = p * IntPoly::one_minus_power(1);
  return p;
}

/// Hilbert series of R_n/I as raw/(1-t)^{cn} = reduced/(1-t)^dim.
struct HilbertData {
  std::uint32_t num_vars = 0;  // cn
  IntPoly raw;                 // numerator over (1-t)^{cn}
  IntPoly reduced;             // Q(t) with Q(1) != 0
  std::uint32_t dim = 0;
  mpz_class degree = 0;  // Q(1)
  std::uint32_t codim = 0;
  bool unit = false;  // I = R_n, series is 0

  [[nodiscard]] bool artinian() const { return !unit && dim == 0; }

  /// Coefficient of t^u in the power series expansion.
  [[nodiscard]] mpz_class coefficient(std::uint32_t u) const {
    if (unit) return 0;
    mpz_class total = 0;
    for (std::size_t i = 0; i <= u && i < reduced.coeffs().size(); ++i) {
      std::uint32_t k = u - static_cast<std::uint32_t>(i);
      mpz_class b;
      if (dim == 0) {
        b = k == 0 ? 1 : 0;
      } else {
        mpz_bin_uiui(b.get_mpz_t(), k + dim - 1, dim - 1);
      }
      total += reduced.coeffs()[i] * b;
    }
    return total;
  }

  /// "Q(t)/(1-t)^d"
  [[nodiscard]] std::string rational_form() const {
    if (unit) return "0";
    std::string q = "(" + reduced.to_string() + ")";
    if (dim == 0) return q;
    return q + "/(1-t)" + (dim == 1 ? std::string() : "^" + std::to_string(dim));
  }
};

enum class PivotRule {
  max_occurrence,  // variable of maximal occurrence among non-pure-power generators
  first_variable,  // smallest variable of the first non-pure-power generator
};

namespace detail {

using DenseMono = std::vector<std::uint16_t>;

inline bool dense_divides(const DenseMono& a, const DenseMono& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline unsigned dense_degree(const DenseMono& a) {
  unsigned d = 0;
  for (auto e : a) d += e;
  return d;
}

inline std::vector<DenseMono> dense_minimalize(std::vector<DenseMono> gens) {
  std::sort(gens.begin(), gens.end(),
            [](const DenseMono& a, const DenseMono& b) { return dense_degree(a) < dense_degree(b) || (dense_degree(a) == dense_degree(b) && a < b); });
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<DenseMono> out;
  for (auto& g : gens) {
    bool red = std::any_of(out.begin(), out.end(), [&](const DenseMono& h) { return dense_divides(h, g); });
    if (!red) out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<DenseMono> to_dense(const MonomialIdeal& I) {
  const auto& ctx = I.ambient();
  std::vector<DenseMono> gens;
  for (const auto& u : I.gens()) {
    DenseMono d(ctx.num_vars(), 0);
    for (const auto& f : u.factors()) d[ctx.flat_index(f.var)] = static_cast<std::uint16_t>(f.exp);
    gens.push_back(std::move(d));
  }
  return gens;
}

inline int support_size(const DenseMono& g) {
  int s = 0;
  for (auto e : g) s += e != 0;
  return s;
}

// Numerator N with H_{S/I} = N/(1-t)^{nvars}; gens are minimal.
inline IntPoly hilbert_numerator(const std::vector<DenseMono>& gens, PivotRule rule) {
  if (gens.empty()) return IntPoly::constant(1);
  const std::size_t nv = gens.front().size();
  bool all_pure = true;
  for (const auto& g : gens) {
    int s = support_size(g);
    if (s == 0) return {};
    if (s > 1) all_pure = false;
  }
  if (all_pure) {
    IntPoly p = IntPoly::constant(1);
    for (const auto& g : gens) p = p * IntPoly::one_minus_power(dense_degree(g));
    return p;
  }
  std::size_t pivot = nv;
  if (rule == PivotRule::max_occurrence) {
    std::vector<int> count(nv, 0);
    for (const auto& g : gens)
      if (support_size(g) > 1)
        for (std::size_t i = 0; i < nv; ++i) count[i] += g[i] != 0;
    pivot = static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());
  } else {
    for (const auto& g : gens) {
      if (support_size(g) <= 1) continue;
      for (std::size_t i = 0; i < nv && pivot == nv; ++i)
        if (g[i] != 0) pivot = i;
      break;
    }
  }
  // H(I) = t * H(I : x) + H(I + <x>)
  std::vector<DenseMono> col;
  std::vector<DenseMono> plus;
  col.reserve(gens.size());
  for (const auto& g : gens) {
    DenseMono h = g;
    if (h[pivot] > 0) {
      --h[pivot];
    } else {
      plus.push_back(g);
    }
    col.push_back(std::move(h));
  }
  DenseMono x(nv, 0);
  x[pivot] = 1;
  plus.push_back(std::move(x));
  return hilbert_numerator(dense_minimalize(std::move(col)), rule).shifted(1) +
         hilbert_numerator(dense_minimalize(std::move(plus)), rule);
}

}  // namespace detail

/// Hilbert series of R_n/I by pivot recursion on a variable.
inline HilbertData hilbert_series(const MonomialIdeal& I, PivotRule rule = PivotRule::max_occurrence) {
  if (!I.ambient().bounded()) throw DomainError("hilbert_series needs a bounded ambient ring");
  HilbertData h;
  h.num_vars = I.ambient().num_vars();
  if (h.num_vars > 65535) throw DomainError("too many variables");
  h.raw = detail::hilbert_numerator(detail::to_dense(I), rule);
  if (h.raw.is_zero()) {
    h.unit = true;
    h.codim = h.num_vars;
    return h;
  }
  IntPoly q = h.raw;
  std::uint32_t k = 0;
  while (q.at_one() == 0) {
    q = q.divided_by_one_minus_t();
    ++k;
  }
  h.reduced = q;
  h.dim = h.num_vars - k;
  h.degree = q.at_one();
  h.codim = k;
  return h;
}

// ---------------------------------------------------------------------------
// Bivariate series

/// Polynomial in (s, t) with integer coefficients; key (s-degree, t-degree).
class BivariatePoly {
 public:
  BivariatePoly() = default;
  static BivariatePoly constant(long v) { return monomial(0, 0, v); }
  static BivariatePoly s() { return monomial(1, 0, 1); }
  static BivariatePoly t() { return monomial(0, 1, 1); }
  static BivariatePoly monomial(std::uint32_t i, std::uint32_t j, const mpz_class& c) {
    BivariatePoly p;
    if (c != 0) p.c_[{i, j}] = c;
    return p;
  }
  static BivariatePoly from_t(const IntPoly& p) {
    BivariatePoly r;
    for (std::size_t j = 0; j < p.coeffs().size(); ++j)
      if (p.coeffs()[j] != 0) r.c_[{0, static_cast<std::uint32_t>(j)}] = p.coeffs()[j];
    return r;
  }

  [[nodiscard]] const std::map<std::pair<std::uint32_t, std::uint32_t>, mpz_class>& coeffs() const { return c_; }
  [[nodiscard]] mpz_class coeff(std::uint32_t i, std::uint32_t j) const {
    auto it = c_.find({i, j});
    return it == c_.end() ? mpz_class(0) : it->second;
  }

  friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) {
    for (const auto& [k, v] : b.c_) a.add(k, v);
    return a;
  }
  friend BivariatePoly operator-(BivariatePoly a, const BivariatePoly& b) {
    for (const auto& [k, v] : b.c_) a.add(k, -v);
    return a;
  }
  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly r;
    for (const auto& [ka, va] : a.c_)
      for (const auto& [kb, vb] : b.c_) r.add({ka.first + kb.first, ka.second + kb.second}, va * vb);
    return r;
  }
  [[nodiscard]] BivariatePoly pow(std::uint32_t e) const {
    BivariatePoly r = constant(1);
    for (std::uint32_t i = 0; i < e; ++i) r = r * *this;
    return r;
  }

 private:
  void add(std::pair<std::uint32_t, std::uint32_t> k, const mpz_class& v) {
    auto& slot = c_[k];
    slot += v;
    if (slot == 0) c_.erase(k);
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, mpz_class> c_;
};

/// Per-width Hilbert data together with the truncated expansion of
/// sum_n H_{R_n/I_n}(t) s^n over all (n, u) with n + u <= total_degree.
struct EquivariantSeriesTable {
  std::vector<HilbertData> per_width;  // index n-1
  std::uint32_t max_width = 0;
  std::uint32_t total_degree = 0;
  std::vector<std::vector<mpz_class>> coeffs;  // coeffs[n][u], n = 0..max_width

  [[nodiscard]] mpz_class coefficient(std::uint32_t n, std::uint32_t u) const {
    if (n >= coeffs.size() || u >= coeffs[n].size()) throw DomainError("coefficient outside the table truncation");
    return coeffs[n][u];
  }
};

inline EquivariantSeriesTable series_table(const std::vector<ChainSnapshot>& snaps, std::uint32_t total_degree,
                                           std::size_t jobs = 1) {
  detail::require_contiguous(snaps);
  if (!snaps.empty() && snaps.front().width != 1) throw SpecError("series_table needs snapshots from width 1");
  EquivariantSeriesTable table;
  table.per_width = parallel_map(snaps.size(), jobs, [&](std::size_t i) {
    if (!snaps[i].is_monomial()) throw DomainError("series_table needs monomial snapshots");
    return hilbert_series(snaps[i].monomial());
  });
  table.max_width = static_cast<std::uint32_t>(snaps.size());
  table.total_degree = total_degree;
  table.coeffs.resize(table.max_width + 1);
  for (std::uint32_t n = 0; n <= table.max_width; ++n) {
    std::uint32_t umax = n <= total_degree ? total_degree - n : 0;
    if (n > total_degree) continue;
    auto& row = table.coeffs[n];
    row.resize(umax + 1);
    for (std::uint32_t u = 0; u <= umax; ++u) {
      row[u] = n == 0 ? mpz_class(u == 0 ? 1 : 0) : table.per_width[n - 1].coefficient(u);
    }
  }
  return table;
}

struct SeriesMismatch {
  std::uint32_t n = 0;
  std::uint32_t u = 0;
  mpz_class table_value;
  mpq_class candidate_value;
};

/// Expands numerator/denominator as a power series in (s, t) up to total degree
/// `bound` and compares every coefficient with the table.
inline std::optional<SeriesMismatch> verify_bivariate_form(const EquivariantSeriesTable& table,
                                                           const BivariatePoly& numerator,
                                                           const BivariatePoly& denominator, std::uint32_t bound) {
  if (bound > table.total_degree || bound > table.max_width) {
    throw HorizonError("verification bound exceeds the table truncation");
  }
  mpz_class d0 = denominator.coeff(0, 0);
  if (d0 == 0) throw DomainError("candidate denominator has zero constant term");
  // F[a][b] with a + b <= bound
  std::vector<std::vector<mpq_class>> F(bound + 1);
  for (std::uint32_t a = 0; a <= bound; ++a) F[a].assign(bound - a + 1, 0);
  for (std::uint32_t total = 0; total <= bound; ++total) {
    for (std::uint32_t a = 0; a <= total; ++a) {
      std::uint32_t b = total - a;
      mpq_class v(numerator.coeff(a, b));
      for (const auto& [k, c] : denominator.coeffs()) {
        if (k == std::make_pair(0u, 0u) || k.first > a || k.second > b) continue;
        v -= mpq_class(c) * F[a - k.first][b - k.second];
      }
      v /= mpq_class(d0);
      F[a][b] = v;
    }
  }
  for (std::uint32_t total = 0; total <= bound; ++total) {
    for (std::uint32_t n = 0; n <= total; ++n) {
      std::uint32_t u = total - n;
      mpz_class expected = table.coefficient(n, u);
      if (F[n][u] != mpq_class(expected)) return SeriesMismatch{n, u, expected, F[n][u]};
    }
  }
  return std::nullopt;
}

struct DegreeGrowth {
  std::vector<std::pair<std::uint32_t, mpz_class>> degrees;  // (n, deg I_n), proper ideals only
  std::vector<mpq_class> ratios;                             // deg(I_{n+1}) / deg(I_n)
  std::optional<mpq_class> tail_ratio;                       // set when the last two ratios agree
};

inline DegreeGrowth degree_growth(const std::vector<ChainSnapshot>& snaps, std::size_t jobs = 1) {
  auto data = parallel_map(snaps.size(), jobs, [&](std::size_t i) { return hilbert_series(snaps[i].monomial()); });
  DegreeGrowth g;
  for (std::size_t i = 0; i < snaps.size(); ++i)
    if (!data[i].unit) g.degrees.emplace_back(snaps[i].width, data[i].degree);
  for (std::size_t i = 1; i < g.degrees.size(); ++i) {
    if (g.degrees[i].first != g.degrees[i - 1].first + 1) continue;
    g.ratios.push_back(mpq_class(g.degrees[i].second, g.degrees[i - 1].second));
    g.ratios.back().canonicalize();
  }
  if (g.ratios.size() >= 2 && g.ratios.back() == g.ratios[g.ratios.size() - 2]) g.tail_ratio = g.ratios.back();
  return g;
}

}  // namespace equichain
