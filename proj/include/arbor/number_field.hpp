#pragma once

#include <memory>
#include <string>
#include <vector>

#include "arbor/finite_field.hpp"
#include "arbor/poly.hpp"
#include "arbor/rational.hpp"

namespace arbor {

/// Exact rationals as a coefficient structure for Poly.
struct RationalField {
  using Elem = Rational;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long v) const { return Rational(v); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const;
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
};

/// Integers as a coefficient structure (no division).
struct IntegerRing {
  using Elem = Integer;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long v) const { return Integer(v); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
};

using QPoly = Poly<RationalField>;
using ZPoly = Poly<IntegerRing>;

/// Element of K = Q[t]/(m) in the power basis 1, θ, ..., θ^{n-1}, stored as
/// integer coordinates over a common positive denominator in lowest terms.
struct NFElem {
  std::vector<Integer> num;
  Integer den = 1;

  Rational coord(std::size_t i) const {
    Rational q(num[i], den);
    q.canonicalize();
    return q;
  }
  std::vector<Rational> coords() const {
    std::vector<Rational> c;
    for (std::size_t i = 0; i < num.size(); ++i) c.push_back(coord(i));
    return c;
  }
  bool is_zero() const {
    for (const auto& c : num)
      if (sgn(c) != 0) return false;
    return true;
  }
  /// Whether the element is a rational number (all higher coordinates vanish).
  bool is_rational() const {
    for (std::size_t i = 1; i < num.size(); ++i)
      if (sgn(num[i]) != 0) return false;
    return true;
  }
  friend bool operator==(const NFElem& a, const NFElem& b) {
    return a.den == b.den && a.num == b.num;
  }
  friend bool operator<(const NFElem& a, const NFElem& b) {
    if (a.den != b.den) return a.den < b.den;
    return a.num < b.num;
  }
};

/// The number field K = Q[t]/(m) for a monic irreducible integer polynomial
/// m. Also a coefficient field for Poly.
class NumberField {
 public:
  using Elem = NFElem;

  /// `min_poly` ascending, monic, degree >= 1. Irreducibility over Q is
  /// verified; throws PreconditionError otherwise.
  explicit NumberField(std::vector<Integer> min_poly);

  std::size_t degree() const { return n_; }
  const std::vector<Integer>& min_poly() const { return m_; }
  QPoly min_poly_q() const;
  /// Discriminant of the minimal polynomial.
  const Integer& poly_discriminant() const { return disc_; }

  Elem zero() const;
  Elem one() const { return from_rational(1); }
  Elem from_int(long v) const { return from_rational(Rational(v)); }
  Elem from_rational(const Rational& q) const;
  Elem from_coords(const std::vector<Rational>& c) const;
  /// θ, the class of t.
  Elem theta() const;
  Elem from_qpoly(const QPoly& p) const;
  QPoly to_qpoly(const Elem& a) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  bool is_zero(const Elem& a) const { return a.is_zero(); }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
  Elem pow(const Elem& a, unsigned long e) const;
  /// Multiplies by a rational scalar.
  Elem scale(const Elem& a, const Rational& s) const;

  /// Absolute norm N_{K/Q}(a) = Res(m, a(t)).
  Rational norm(const Elem& a) const;

  /// Human-readable form such as "2*t^2 - 1/3*t + 5".
  std::string to_string(const Elem& a) const;

  friend bool operator==(const NumberField& a, const NumberField& b) {
    return a.m_ == b.m_;
  }

 private:
  Elem normalize(std::vector<Integer> num, Integer den) const;
  std::vector<Integer> m_;
  std::size_t n_;
  Integer disc_;
  // Reduction table: θ^{n+k} as integer coordinates, k = 0 .. n-2.
  std::vector<std::vector<Integer>> high_powers_;
};

using KPoly = Poly<NumberField>;

/// Resultant of two integer polynomials (Sylvester convention).
Integer resultant_z(const ZPoly& a, const ZPoly& b);
/// Discriminant of a univariate polynomial over Q with exact degree n >= 1:
/// (-1)^{n(n-1)/2} Res(a, a') / lc(a).
Rational discriminant_q(const QPoly& a);

/// Result of integer factorization. `cofactor` is 1 unless the effort cap was
/// reached, in which case it is the unfactored (composite) remainder.
struct IntegerFactorization {
  std::vector<std::pair<Integer, unsigned>> factors;  // ascending primes
  Integer cofactor = 1;
  bool complete() const { return cofactor == 1; }
};

/// Default effort: total Pollard-rho iterations allowed (2^40).
inline constexpr unsigned long long kDefaultFactorBudget = 1ULL << 40;

/// Factors |n| (n != 0) by trial division then Brent's variant of Pollard rho.
IntegerFactorization factor_integer(
    const Integer& n, unsigned long long budget = kDefaultFactorBudget);

bool is_probable_prime(const Integer& n);

/// Irreducibility of a monic integer polynomial over Q (Zassenhaus with a
/// Mignotte bound, after cheap modular certificates).
bool is_irreducible_over_q(const std::vector<Integer>& m);

/// Lifts f ≡ g0*h0 (mod p), g0 monic and coprime to h0, to f ≡ G*H (mod p^k)
/// with G monic. Coefficients of the result lie in [0, p^k).
std::pair<ZPoly, ZPoly> hensel_lift(const ZPoly& f, const Poly<PrimeField>& g0,
                                    const Poly<PrimeField>& h0,
                                    const PrimeField& fp, unsigned k);

/// Reduction of an integer polynomial modulo p as a polynomial over F_p.
Poly<PrimeField> reduce_mod_p(const PrimeField& fp, const std::vector<Integer>& a);

}  // namespace arbor
