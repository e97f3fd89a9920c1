#pragma once

// Variables x[k,j], monomials, Inc-respecting term orders and the actions of
// increasing maps and permutations on column indices.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "equichain/coefficient.hpp"
#include "equichain/errors.hpp"

namespace equichain {

/// Variable x[row, col]; rows are 1..c, columns 1, 2, ...
struct VarIndex {
  std::uint32_t row = 1;
  std::uint32_t col = 1;

  friend auto operator<=>(const VarIndex&, const VarIndex&) = default;
};

/// Number of rows, optional bounded width and the coefficient field.
struct RingContext {
  std::uint32_t rows = 1;
  std::optional<std::uint32_t> width;  // nullopt: unbounded (the ring R itself)
  std::uint32_t characteristic = 0;

  RingContext() = default;
  RingContext(std::uint32_t c, std::optional<std::uint32_t> n, std::uint32_t ch = 0)
      : rows(c), width(n), characteristic(ch) {
    if (rows == 0) throw SpecError("ring needs at least one row");
    if (width && *width == 0) throw SpecError("bounded ring width must be positive");
    validate_characteristic(ch);
  }

  [[nodiscard]] bool bounded() const { return width.has_value(); }
  [[nodiscard]] std::uint32_t num_vars() const {
    if (!width) throw DomainError("unbounded ring has infinitely many variables");
    return rows * *width;
  }
  /// Position of x[k,j] in the ascending variable sequence (k major, j minor).
  [[nodiscard]] std::uint32_t flat_index(VarIndex v) const { return (v.row - 1) * *width + (v.col - 1); }
  [[nodiscard]] VarIndex var_at(std::uint32_t flat) const { return {flat / *width + 1, flat % *width + 1}; }
  [[nodiscard]] bool contains(VarIndex v) const {
    return v.row >= 1 && v.row <= rows && v.col >= 1 && (!width || v.col <= *width);
  }

  friend bool operator==(const RingContext&, const RingContext&) = default;
};

struct Factor {
  VarIndex var;
  std::uint32_t exp = 0;

  friend auto operator<=>(const Factor&, const Factor&) = default;
};

/// Monomial as a sparse exponent map, stored ascending by (row, col) with no zero exponents.
class Monomial {
 public:
  Monomial() = default;

  /// Builds from (row, col, exp) triples; repeated variables are merged and zero exponents dropped.
  Monomial(std::initializer_list<std::array<std::uint32_t, 3>> triples) {
    std::vector<Factor> fs;
    for (const auto& t : triples) fs.push_back({{t[0], t[1]}, t[2]});
    *this = from_factors(std::move(fs));
  }

  static Monomial from_factors(std::vector<Factor> fs) {
    for (const auto& f : fs) {
      if (f.var.row == 0 || f.var.col == 0) throw SpecError("variable indices start at 1");
    }
    std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) { return a.var < b.var; });
    Monomial m;
    for (const auto& f : fs) {
      if (f.exp == 0) continue;
      if (!m.factors_.empty() && m.factors_.back().var == f.var) {
        m.factors_.back().exp += f.exp;
      } else {
        m.factors_.push_back(f);
      }
    }
    return m;
  }

  /// x[1,1]^a1 * x[1,2]^a2 * ... (row one), the generator of a partition.
  static Monomial row_power_product(std::span<const std::uint32_t> exps, std::uint32_t row = 1) {
    std::vector<Factor> fs;
    for (std::size_t j = 0; j < exps.size(); ++j) fs.push_back({{row, static_cast<std::uint32_t>(j + 1)}, exps[j]});
    return from_factors(std::move(fs));
  }

  static Monomial variable(VarIndex v, std::uint32_t e = 1) { return from_factors({{v, e}}); }

  [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }
  [[nodiscard]] bool is_one() const { return factors_.empty(); }
  [[nodiscard]] std::uint32_t degree() const {
    std::uint32_t d = 0;
    for (const auto& f : factors_) d += f.exp;
    return d;
  }
  [[nodiscard]] std::uint32_t exponent(VarIndex v) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                               [](const Factor& f, VarIndex x) { return f.var < x; });
    return (it != factors_.end() && it->var == v) ? it->exp : 0;
  }
  [[nodiscard]] std::uint32_t max_column() const {
    std::uint32_t c = 0;
    for (const auto& f : factors_) c = std::max(c, f.var.col);
    return c;
  }
  [[nodiscard]] std::uint32_t max_row() const { return factors_.empty() ? 0 : factors_.back().var.row; }
  [[nodiscard]] std::vector<std::uint32_t> columns() const {
    std::set<std::uint32_t> cols;
    for (const auto& f : factors_) cols.insert(f.var.col);
    return {cols.begin(), cols.end()};
  }
  [[nodiscard]] std::vector<VarIndex> support() const {
    std::vector<VarIndex> s;
    for (const auto& f : factors_) s.push_back(f.var);
    return s;
  }
  [[nodiscard]] bool is_pure_power() const { return factors_.size() == 1; }

  /// True iff `*this` divides `other`.
  [[nodiscard]] bool divides(const Monomial& other) const {
    auto it = other.factors_.begin();
    for (const auto& f : factors_) {
      while (it != other.factors_.end() && it->var < f.var) ++it;
      if (it == other.factors_.end() || it->var != f.var || it->exp < f.exp) return false;
    }
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    return merge(a, b, [](std::uint32_t x, std::uint32_t y) { return x + y; });
  }
  /// Exponentwise minimum.
  friend Monomial gcd(const Monomial& a, const Monomial& b) {
    return merge(a, b, [](std::uint32_t x, std::uint32_t y) { return std::min(x, y); });
  }
  /// Exponentwise maximum.
  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    return merge(a, b, [](std::uint32_t x, std::uint32_t y) { return std::max(x, y); });
  }
  /// a / b; throws unless b divides a.
  friend Monomial quotient(const Monomial& a, const Monomial& b) {
    if (!b.divides(a)) throw DomainError("quotient of monomials requested but divisor does not divide");
    return merge(a, b, [](std::uint32_t x, std::uint32_t y) { return x - y; });
  }
  /// a / gcd(a, b), always defined.
  friend Monomial strip(const Monomial& a, const Monomial& b) {
    return merge(a, b, [](std::uint32_t x, std::uint32_t y) { return x > y ? x - y : 0u; });
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Structural order used for containers only; see `cmp` for term orders.
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.factors_ <=> b.factors_; }

 private:
  template <class Op>
  static Monomial merge(const Monomial& a, const Monomial& b, Op op) {
    Monomial r;
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      Factor f;
      if (j == b.factors_.end() || (i != a.factors_.end() && i->var < j->var)) {
        f = {i->var, op(i->exp, 0u)};
        ++i;
      } else if (i == a.factors_.end() || j->var < i->var) {
        f = {j->var, op(0u, j->exp)};
        ++j;
      } else {
        f = {i->var, op(i->exp, j->exp)};
        ++i;
        ++j;
      }
      if (f.exp != 0) r.factors_.push_back(f);
    }
    return r;
  }

  std::vector<Factor> factors_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto& f : m.factors()) {
      h = (h ^ f.var.row) * 1099511628211ull;
      h = (h ^ f.var.col) * 1099511628211ull;
      h = (h ^ f.exp) * 1099511628211ull;
    }
    return h;
  }
};

// ---------------------------------------------------------------------------
// Term orders

enum class OrderKind { lex, glex, grevlex };

struct TermOrder {
  OrderKind kind = OrderKind::grevlex;

  friend bool operator==(const TermOrder&, const TermOrder&) = default;
};

inline std::string to_string(OrderKind k) {
  switch (k) {
    case OrderKind::lex: return "lex";
    case OrderKind::glex: return "glex";
    case OrderKind::grevlex: return "grevlex";
  }
  return "?";
}

inline TermOrder parse_order(std::string_view name) {
  if (name == "lex") return {OrderKind::lex};
  if (name == "glex" || name == "graded-lex") return {OrderKind::glex};
  if (name == "grevlex" || name == "graded-revlex") return {OrderKind::grevlex};
  throw SpecError("unknown term order '" + std::string(name) + "'");
}

namespace detail {

// Lex over the ascending variable sequence: the first difference at the
// largest variable decides, larger exponent wins.
inline std::strong_ordering lex_compare(const Monomial& u, const Monomial& v) {
  const auto& a = u.factors();
  const auto& b = v.factors();
  auto i = a.rbegin();
  auto j = b.rbegin();
  while (i != a.rend() && j != b.rend()) {
    if (i->var != j->var) return i->var <=> j->var;  // the larger variable present only on one side
    if (i->exp != j->exp) return i->exp <=> j->exp;
    ++i;
    ++j;
  }
  if (i != a.rend()) return std::strong_ordering::greater;
  if (j != b.rend()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

// Reverse lex tie-break: the first difference at the smallest variable decides,
// smaller exponent wins.
inline std::strong_ordering revlex_compare(const Monomial& u, const Monomial& v) {
  const auto& a = u.factors();
  const auto& b = v.factors();
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->var != j->var) {
      // smaller variable present only on one side: that side has the larger exponent there
      return i->var < j->var ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (i->exp != j->exp) return j->exp <=> i->exp;
    ++i;
    ++j;
  }
  if (i != a.end()) return std::strong_ordering::less;
  if (j != b.end()) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace detail

/// Compares two monomials in the given order. Variables ascend by (row, column).
inline std::strong_ordering cmp(const Monomial& u, const Monomial& v, TermOrder ord) {
  switch (ord.kind) {
    case OrderKind::lex:
      return detail::lex_compare(u, v);
    case OrderKind::glex:
      if (auto d = u.degree() <=> v.degree(); d != 0) return d;
      return detail::lex_compare(u, v);
    case OrderKind::grevlex:
      if (auto d = u.degree() <=> v.degree(); d != 0) return d;
      return detail::revlex_compare(u, v);
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Increasing maps and permutations

/// Strictly increasing map [1..m] -> N, stored as (pi(1), ..., pi(m)).
class IncMap {
 public:
  explicit IncMap(std::vector<std::uint32_t> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] < i + 1) throw SpecError("increasing map value below its position");
      if (i > 0 && values_[i] <= values_[i - 1]) throw SpecError("map is not strictly increasing");
    }
  }
  static IncMap identity(std::uint32_t m) {
    std::vector<std::uint32_t> v(m);
    for (std::uint32_t i = 0; i < m; ++i) v[i] = i + 1;
    return IncMap(std::move(v));
  }

  [[nodiscard]] std::uint32_t width() const { return static_cast<std::uint32_t>(values_.size()); }
  [[nodiscard]] const std::vector<std::uint32_t>& values() const { return values_; }
  [[nodiscard]] std::uint32_t operator()(std::uint32_t j) const {
    if (j == 0 || j > values_.size()) {
      throw DomainError("column " + std::to_string(j) + " outside the domain of an increasing map of width " +
                        std::to_string(values_.size()));
    }
    return values_[j - 1];
  }

 private:
  std::vector<std::uint32_t> values_;
};

/// Bijection of [1..n], stored as (sigma(1), ..., sigma(n)).
class Permutation {
 public:
  explicit Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size() + 1, false);
    for (auto v : images_) {
      if (v == 0 || v > images_.size() || seen[v]) throw SpecError("not a permutation");
      seen[v] = true;
    }
  }
  static Permutation identity(std::uint32_t n) { return Permutation(IncMap::identity(n).values()); }
  /// The transposition (a b) in Sym(n).
  static Permutation transposition(std::uint32_t n, std::uint32_t a, std::uint32_t b) {
    auto v = IncMap::identity(n).values();
    std::swap(v.at(a - 1), v.at(b - 1));
    return Permutation(std::move(v));
  }

  [[nodiscard]] std::uint32_t size() const { return static_cast<std::uint32_t>(images_.size()); }
  [[nodiscard]] const std::vector<std::uint32_t>& images() const { return images_; }
  [[nodiscard]] std::uint32_t operator()(std::uint32_t j) const {
    if (j == 0 || j > images_.size()) {
      throw DomainError("column " + std::to_string(j) + " outside Sym(" + std::to_string(images_.size()) + ")");
    }
    return images_[j - 1];
  }

 private:
  std::vector<std::uint32_t> images_;
};

/// Replaces every column j by map(j); row indices and exponents are kept.
template <class ColumnMap>
Monomial map_columns(const Monomial& u, const ColumnMap& map) {
  std::vector<Factor> fs;
  fs.reserve(u.factors().size());
  for (const auto& f : u.factors()) fs.push_back({{f.var.row, map(f.var.col)}, f.exp});
  return Monomial::from_factors(std::move(fs));
}

inline Monomial apply_inc(const IncMap& pi, const Monomial& u) { return map_columns(u, pi); }
inline Monomial apply_perm(const Permutation& sigma, const Monomial& u) { return map_columns(u, sigma); }

/// A permutation of [1..n] agreeing with `pi` on the columns of `u`, so that
/// sigma(u) = pi(u).
inline Permutation extend_to_permutation(const IncMap& pi, const Monomial& u, std::uint32_t n) {
  std::vector<std::uint32_t> image(n + 1, 0);
  std::vector<bool> used(n + 1, false);
  for (auto j : u.columns()) {
    auto t = pi(j);
    if (j > n || t > n) throw DomainError("increasing map leaves [1..n]");
    image[j] = t;
    used[t] = true;
  }
  std::uint32_t next = 1;
  for (std::uint32_t j = 1; j <= n; ++j) {
    if (image[j] != 0) continue;
    while (used[next]) ++next;
    image[j] = next;
    used[next] = true;
  }
  return Permutation(std::vector<std::uint32_t>(image.begin() + 1, image.end()));
}

// ---------------------------------------------------------------------------
// Text form: x[k,j]^e joined by '*', or x[j]^e when there is one row.

inline std::string render(const Monomial& u, std::uint32_t rows) {
  if (u.is_one()) return "1";
  std::string s;
  for (const auto& f : u.factors()) {
    if (!s.empty()) s += '*';
    s += "x[";
    if (rows != 1) s += std::to_string(f.var.row) + ",";
    s += std::to_string(f.var.col) + "]";
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
  }
  return s;
}

inline Monomial parse_monomial(std::string_view text, std::uint32_t rows) {
  auto fail = [&] { return SpecError("cannot parse monomial '" + std::string(text) + "'"); };
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "1") return {};
  std::vector<Factor> fs;
  std::size_t pos = 0;
  auto read_uint = [&](std::string_view s, std::size_t& p) {
    if (p >= s.size() || s[p] < '0' || s[p] > '9') throw fail();
    std::uint64_t v = 0;
    while (p < s.size() && s[p] >= '0' && s[p] <= '9') v = v * 10 + static_cast<std::uint64_t>(s[p++] - '0');
    if (v > UINT32_MAX) throw fail();
    return static_cast<std::uint32_t>(v);
  };
  while (pos < text.size()) {
    if (text.substr(pos, 2) != "x[") throw fail();
    pos += 2;
    std::uint32_t a = read_uint(text, pos);
    std::uint32_t k = 1;
    std::uint32_t j = a;
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      k = a;
      j = read_uint(text, pos);
    } else if (rows != 1) {
      throw fail();
    }
    if (pos >= text.size() || text[pos] != ']') throw fail();
    ++pos;
    std::uint32_t e = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      e = read_uint(text, pos);
    }
    if (k > rows) throw fail();
    fs.push_back({{k, j}, e});
    if (pos < text.size()) {
      if (text[pos] != '*') throw fail();
      ++pos;
    }
  }
  return Monomial::from_factors(std::move(fs));
}

// ---------------------------------------------------------------------------
// Randomized check that an order respects Inc.

struct OrderCounterexample {
  Monomial u;
  Monomial v;
  IncMap pi;
};

/// Draws `samples` triples (u, v, pi) with u <= v and checks pi(u) <= pi(v).
inline std::optional<OrderCounterexample> check_order_respects_inc(TermOrder ord, std::size_t samples,
                                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> rows(1, 3);
  std::uniform_int_distribution<std::uint32_t> width(1, 5);
  std::uniform_int_distribution<std::uint32_t> exp(0, 3);
  std::uniform_int_distribution<std::uint32_t> extra(0, 4);
  for (std::size_t s = 0; s < samples; ++s) {
    std::uint32_t c = rows(rng);
    std::uint32_t m = width(rng);
    auto draw = [&] {
      std::vector<Factor> fs;
      for (std::uint32_t k = 1; k <= c; ++k)
        for (std::uint32_t j = 1; j <= m; ++j)
          if (rng() % 3 == 0) fs.push_back({{k, j}, exp(rng)});
      return Monomial::from_factors(std::move(fs));
    };
    Monomial u = draw();
    Monomial v = (s % 16 == 0) ? u : draw();
    if (cmp(u, v, ord) > 0) std::swap(u, v);
    std::uint32_t n = m + extra(rng);
    std::vector<std::uint32_t> cols(n);
    for (std::uint32_t i = 0; i < n; ++i) cols[i] = i + 1;
    std::shuffle(cols.begin(), cols.end(), rng);
    cols.resize(m);
    std::sort(cols.begin(), cols.end());
    IncMap pi(cols);
    if (cmp(apply_inc(pi, u), apply_inc(pi, v), ord) > 0) return OrderCounterexample{u, v, pi};
  }
  return std::nullopt;
}

}  // namespace equichain
