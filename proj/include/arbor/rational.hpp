#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace arbor {

using Integer = mpz_class;
/// gmpxx keeps results of arithmetic canonical (lowest terms, positive
/// denominator); values built from text go through parse_rational, which
/// canonicalizes.
using Rational = mpq_class;

/// Parses "a", "-a" or "a/b" (b nonzero). Throws ParseError.
Rational parse_rational(std::string_view text);

/// "a" when the denominator is one, else "a/b".
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// p^e for e >= 0.
Integer ipow(const Integer& p, long e);

/// p-adic valuation of a nonzero integer.
long vp(const Integer& n, const Integer& p);
/// p-adic valuation of a nonzero rational.
long vp(const Rational& q, const Integer& p);

/// A rational number or +infinity. Valuations of zero are +infinity.
class ExtRational {
 public:
  ExtRational() : inf_(true) {}
  ExtRational(const Rational& v) : inf_(false), v_(v) {}  // NOLINT
  ExtRational(long v) : inf_(false), v_(v) {}             // NOLINT
  static ExtRational infinity() { return ExtRational(); }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  /// Requires is_finite().
  const Rational& value() const { return v_; }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.v_ == b.v_;
  }
  friend std::strong_ordering operator<=>(const ExtRational& a,
                                          const ExtRational& b) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    if (b.inf_) return std::strong_ordering::less;
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }
  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtRational(Rational(a.v_ + b.v_));
  }

 private:
  bool inf_;
  Rational v_;
};

std::string to_string(const ExtRational& v);
std::ostream& operator<<(std::ostream& os, const ExtRational& v);

}  // namespace arbor
