#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "equichain/coefficient.hpp"
#include "equichain/ring.hpp"

namespace equichain {

struct Term {
  Monomial monomial;
  Coefficient coefficient;
};

/// Polynomial with exact coefficients; no stored zero coefficients.
class Polynomial {
 public:
  explicit Polynomial(std::uint32_t characteristic = 0) : char_(characteristic) {}
  Polynomial(const Monomial& u, Coefficient c) : char_(c.characteristic()) { add_term(u, std::move(c)); }
  static Polynomial from_monomial(const Monomial& u, std::uint32_t characteristic = 0) {
    return Polynomial(u, Coefficient(1, characteristic));
  }

  [[nodiscard]] std::uint32_t characteristic() const { return char_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] const std::map<Monomial, Coefficient>& terms() const { return terms_; }
  [[nodiscard]] bool is_monomial() const { return terms_.size() == 1; }

  void add_term(const Monomial& u, const Coefficient& c) {
    if (c.characteristic() != char_) throw DomainError("coefficient characteristic mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(u, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  [[nodiscard]] Coefficient coefficient(const Monomial& u) const {
    auto it = terms_.find(u);
    return it == terms_.end() ? Coefficient(0, char_) : it->second;
  }

  [[nodiscard]] std::uint32_t max_column() const {
    std::uint32_t c = 0;
    for (const auto& [u, _] : terms_) c = std::max(c, u.max_column());
    return c;
  }
  [[nodiscard]] std::uint32_t max_degree() const {
    std::uint32_t d = 0;
    for (const auto& [u, _] : terms_) d = std::max(d, u.degree());
    return d;
  }

  /// Leading term under `ord`; the polynomial must be nonzero.
  [[nodiscard]] Term leading_term(TermOrder ord) const {
    if (terms_.empty()) throw DomainError("leading term of the zero polynomial");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
      if (cmp(it->first, best->first, ord) > 0) best = it;
    }
    return {best->first, best->second};
  }

  /// Terms sorted descending in `ord`.
  [[nodiscard]] std::vector<Term> sorted_terms(TermOrder ord) const {
    std::vector<Term> ts;
    for (const auto& [u, c] : terms_) ts.push_back({u, c});
    std::sort(ts.begin(), ts.end(), [&](const Term& a, const Term& b) { return cmp(a.monomial, b.monomial, ord) > 0; });
    return ts;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [u, c] : o.terms_) add_term(u, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [u, c] : o.terms_) add_term(u, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.char_);
    for (const auto& [u, c] : a.terms_)
      for (const auto& [v, d] : b.terms_) r.add_term(u * v, c * d);
    return r;
  }
  [[nodiscard]] Polynomial scaled(const Coefficient& c, const Monomial& u = {}) const {
    Polynomial r(char_);
    if (c.is_zero()) return r;
    for (const auto& [v, d] : terms_) r.terms_.emplace(u * v, c * d);
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.char_ == b.char_ && a.terms_ == b.terms_;
  }
  /// Structural order for containers.
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    return std::lexicographical_compare(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), [](const auto& x, const auto& y) {
          if (x.first != y.first) return x.first < y.first;
          return x.second.value() < y.second.value();
        });
  }

 private:
  std::map<Monomial, Coefficient> terms_;
  std::uint32_t char_ = 0;
};

template <class ColumnMap>
Polynomial map_columns(const Polynomial& f, const ColumnMap& map) {
  Polynomial r(f.characteristic());
  for (const auto& [u, c] : f.terms()) r.add_term(map_columns(u, map), c);
  return r;
}

inline Polynomial apply_inc(const IncMap& pi, const Polynomial& f) { return map_columns(f, pi); }
inline Polynomial apply_perm(const Permutation& sigma, const Polynomial& f) { return map_columns(f, sigma); }

/// Scales `f` so that its structurally first term has coefficient 1.
inline Polynomial normalized(const Polynomial& f) {
  if (f.is_zero()) return f;
  return f.scaled(f.terms().begin()->second.inverse());
}

/// Terms in descending `ord`, e.g. "x[1]^2+x[2]*x[3]" or "-3/2*x[1,1]".
inline std::string render(const Polynomial& f, std::uint32_t rows, TermOrder ord) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& t : f.sorted_terms(ord)) {
    std::string c = t.coefficient.to_string();
    bool negative = t.coefficient.characteristic() == 0 && t.coefficient.value() < 0;
    if (negative) {
      s += "-";
      c = c.substr(1);
    } else if (!s.empty()) {
      s += "+";
    }
    if (t.monomial.is_one()) {
      s += c;
    } else {
      if (c != "1") s += c + "*";
      s += render(t.monomial, rows);
    }
  }
  return s;
}

/// Parses sums of terms "c*m" where c is an optional rational and m a monomial.
inline Polynomial parse_polynomial(std::string_view text, std::uint32_t rows, std::uint32_t characteristic = 0) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t += ch;
  if (t.empty()) throw SpecError("empty polynomial");
  Polynomial f(characteristic);
  if (t == "0") return f;
  std::size_t pos = 0;
  while (pos < t.size()) {
    bool negative = false;
    if (t[pos] == '+' || t[pos] == '-') {
      negative = t[pos] == '-';
      ++pos;
    }
    std::size_t end = pos;
    int depth = 0;
    while (end < t.size()) {
      if (t[end] == '[') ++depth;
      if (t[end] == ']') --depth;
      if (depth == 0 && (t[end] == '+' || t[end] == '-') && end > pos && t[end - 1] != '^') break;
      ++end;
    }
    std::string term = t.substr(pos, end - pos);
    pos = end;
    std::string coeff = "1";
    std::string mono = term;
    if (!term.empty() && term[0] != 'x') {
      auto star = term.find('*');
      coeff = term.substr(0, star);
      mono = star == std::string::npos ? "1" : term.substr(star + 1);
    }
    Coefficient c = Coefficient::parse(coeff, characteristic);
    if (negative) c = -c;
    f.add_term(parse_monomial(mono, rows), c);
  }
  return f;
}

}  // namespace equichain
