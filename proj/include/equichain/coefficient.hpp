#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>

#include "equichain/errors.hpp"

namespace equichain {

/// Checks that `ch` is a valid field characteristic: 0 or a prime.
inline void validate_characteristic(std::uint32_t ch) {
  if (ch == 0) return;
  mpz_class p(ch);
  if (mpz_probab_prime_p(p.get_mpz_t(), 25) == 0) {
    throw SpecError("field characteristic " + std::to_string(ch) + " is not prime");
  }
}

/// Exact field element: a rational number in characteristic 0, a residue in [0, p)
/// in characteristic p. Elements of different characteristics never mix.
class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(long value, std::uint32_t characteristic = 0)  // NOLINT(google-explicit-constructor)
      : value_(value), char_(characteristic) {
    normalize();
  }
  Coefficient(mpq_class value, std::uint32_t characteristic)
      : value_(std::move(value)), char_(characteristic) {
    normalize();
  }

  /// Parses "a" or "a/b". In characteristic p the fraction is reduced mod p.
  static Coefficient parse(const std::string& text, std::uint32_t characteristic) {
    mpq_class q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
      throw SpecError("invalid coefficient '" + text + "'");
    }
    q.canonicalize();
    if (characteristic != 0) {
      mpz_class p(characteristic);
      mpz_class den = q.get_den() % p;
      if (den == 0) throw SpecError("coefficient '" + text + "' has denominator divisible by p");
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
      mpz_class num = (q.get_num() * inv) % p;
      return Coefficient(mpq_class(num), characteristic);
    }
    return Coefficient(q, 0);
  }

  [[nodiscard]] std::uint32_t characteristic() const { return char_; }
  [[nodiscard]] const mpq_class& value() const { return value_; }
  [[nodiscard]] bool is_zero() const { return value_ == 0; }
  [[nodiscard]] bool is_one() const { return value_ == 1; }

  Coefficient& operator+=(const Coefficient& o) {
    check(o);
    value_ += o.value_;
    normalize();
    return *this;
  }
  Coefficient& operator-=(const Coefficient& o) {
    check(o);
    value_ -= o.value_;
    normalize();
    return *this;
  }
  Coefficient& operator*=(const Coefficient& o) {
    check(o);
    value_ *= o.value_;
    normalize();
    return *this;
  }
  Coefficient& operator/=(const Coefficient& o) {
    *this *= o.inverse();
    return *this;
  }

  [[nodiscard]] Coefficient inverse() const {
    if (is_zero()) throw DomainError("division by zero coefficient");
    if (char_ == 0) return Coefficient(mpq_class(1) / value_, 0);
    mpz_class p(char_);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), value_.get_num().get_mpz_t(), p.get_mpz_t());
    return Coefficient(mpq_class(inv), char_);
  }

  Coefficient operator-() const { return Coefficient(-value_, char_); }

  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
  friend Coefficient operator/(Coefficient a, const Coefficient& b) { return a /= b; }
  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    return a.char_ == b.char_ && a.value_ == b.value_;
  }

  [[nodiscard]] std::string to_string() const { return value_.get_str(); }
  friend std::ostream& operator<<(std::ostream& os, const Coefficient& c) { return os << c.to_string(); }

 private:
  void check(const Coefficient& o) const {
    if (o.char_ != char_) throw DomainError("mixing coefficients of different characteristics");
  }
  void normalize() {
    if (char_ == 0) return;
    mpz_class p(char_);
    mpz_class r;
    if (value_.get_den() != 1) {
      // only reached through the mpq constructor; reduce num/den mod p
      mpz_class den = value_.get_den() % p;
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
      r = value_.get_num() * inv;
    } else {
      r = value_.get_num();
    }
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
    value_ = mpq_class(r);
  }

  mpq_class value_{0};
  std::uint32_t char_ = 0;
};

}  // namespace equichain
