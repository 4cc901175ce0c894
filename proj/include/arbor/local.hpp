#pragma once

// Primes of K above unramified rational primes, residue fields, and the
// completions used for exact valuations: W_B = (Z/p^B)[t]/(g_B) with g_B the
// Hensel lift of a factor g of m mod p, optionally extended by a monic lift of
// an irreducible polynomial over the residue field.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "arbor/binary_form.hpp"
#include "arbor/finite_field.hpp"
#include "arbor/number_field.hpp"

namespace arbor {

inline constexpr long kInitialPrecision = 32;
inline constexpr long kMaxPrecision = 4096;

struct PrimeSpec {
  std::uint64_t p = 0;
  Poly<PrimeField> factor;  // monic irreducible g with g | m mod p
  std::size_t residue_degree = 0;
  ResidueField field;
  std::size_t index = 0;  // position among the primes above p

  /// g lifted to a factor of m mod p^B (memoized, thread-safe).
  const ZPoly& lifted_factor(const NumberField& K, long B) const;
  Integer p_integer() const { return Integer(static_cast<unsigned long>(p)); }
  /// "p=181,g=t+176"-style label, deterministic.
  std::string label() const;

  struct LiftCache {
    std::mutex mu;
    std::map<long, std::unique_ptr<ZPoly>> lifts;
  };
  std::shared_ptr<LiftCache> cache = std::make_shared<LiftCache>();
};

/// One PrimeSpec per irreducible factor of m mod p, ordered by (degree,
/// coefficients). Throws PreconditionError when p | disc(m).
std::vector<PrimeSpec> primes_above(const NumberField& K, std::uint64_t p);

/// The unramified local ring W_B, or W_B[x]/(H) for a tower.
class LocalRing {
 public:
  using Elem = std::vector<Integer>;  // coefficient of t^i x^j at j*f + i

  /// `K` must outlive the ring and everything derived from it.
  LocalRing(const NumberField& K, const PrimeSpec& P, long precision);

  /// W_B[x]/(H) with H a monic lift of h (irreducible over the residue field).
  LocalRing extend(const Poly<ResidueField>& h) const;

  long precision() const { return B_; }
  const Integer& p() const { return p_; }
  const Integer& modulus() const { return pB_; }
  std::size_t f() const { return f_; }
  std::size_t k() const { return k_; }
  std::size_t dim() const { return f_ * k_; }
  const ResidueField& residue_field() const { return point_.base(); }
  const PointField& point_field() const { return point_; }

  Elem zero() const { return Elem(dim()); }
  Elem one() const { return from_integer(1); }
  Elem from_int(long v) const { return from_integer(Integer(v)); }
  Elem from_integer(const Integer& v) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, const Integer& s) const;
  bool is_zero(const Elem& a) const;
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
  /// Inverse of a unit; throws PreconditionError on non-units.
  Elem inv(const Elem& a) const;
  Elem pow(const Elem& a, unsigned long e) const;

  /// Minimum p-adic valuation of the coordinates; precision() when a ≡ 0.
  long valuation(const Elem& a) const;
  /// a / p^k for a with valuation >= k. The top k digits become unknown and
  /// are set to zero.
  Elem div_p_power(const Elem& a, long k) const;

  /// Image of an element of K with v_P >= 0; throws PreconditionError if the
  /// element is not P-integral.
  Elem embed(const NFElem& a) const;
  /// Image of the class of x in the tower (zero-free generator).
  Elem generator() const;

  PointField::Elem residue(const Elem& a) const;
  /// Teichmüller-free lift: coordinates in [0, p).
  Elem lift(const PointField::Elem& z) const;

  std::string to_string(const Elem& a) const;

 private:
  Elem base_mul(const Elem& a, const Elem& b, std::size_t off_a, std::size_t off_b) const;
  void reduce_coeffs(Elem& a) const;
  // Numerator image at precision B + extra with g lifted accordingly.
  Elem embed_numerator(const std::vector<Integer>& num, long extra) const;

  const NumberField* K_;  // must outlive the ring
  PrimeSpec P_;
  long B_ = 0;
  Integer p_, pB_;
  std::size_t f_ = 1, k_ = 1;
  ZPoly g_;                        // monic, degree f
  std::vector<Elem> H_;            // monic tower modulus, k + 1 base elements
  std::vector<Elem> theta_powers_; // θ^i in W_B, i < deg K
  PointField point_;
};

/// v_P(a) with automatic precision escalation; +∞ for a = 0. Throws
/// PrecisionExceeded (carrying the lower bound) past kMaxPrecision.
ExtRational valuation(const NumberField& K, const PrimeSpec& P, const NFElem& a);

/// Reduction of a P-integral element into the residue field.
ResidueField::Elem reduce(const NumberField& K, const PrimeSpec& P, const NFElem& a);

/// A point of the residue projective line.
struct ResidualPoint {
  bool infinite = false;
  ResidueField::Elem value;
  friend bool operator==(const ResidualPoint& a, const ResidualPoint& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

/// Reduction of the projective point (x : y), (x, y) != (0, 0).
ResidualPoint reduce_point(const NumberField& K, const PrimeSpec& P, const NFElem& x,
                           const NFElem& y);
inline ResidualPoint reduce_point(const NumberField& K, const PrimeSpec& P,
                                  const NFElem& a) {
  return reduce_point(K, P, a, K.one());
}

std::string to_string(const ResidueField& F, const ResidualPoint& z);

/// Joint P-primitive reduction of a family of forms: scales by p^{-min v_P}
/// and reduces every coefficient. Returns the minimum valuation through
/// `min_val` when non-null.
std::vector<Form<ResidueField>> reduce_forms(const NumberField& K, const PrimeSpec& P,
                                             const std::vector<const KForm*>& forms,
                                             long* min_val = nullptr);

/// Canonical text for a polynomial over a finite field tower, e.g.
/// "x^2+[1,1]x+3". Deterministic; used for vertex names and sorting.
std::string to_string(const PrimeField& F, const Poly<PrimeField>& a, char var = 'x');
std::string to_string(const ResidueField& F, const ResidueField::Elem& a);
std::string to_string(const ResidueField& F, const Poly<ResidueField>& a, char var = 'x');

}  // namespace arbor
