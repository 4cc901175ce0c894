#pragma once

#include <memory>
#include <string>
#include <vector>

#include "arbor/binary_form.hpp"
#include "arbor/local.hpp"

namespace arbor {

/// A degree-d rational map as a coprime pair of integrally normalized forms
/// over K.
struct RationalMap {
  std::shared_ptr<const NumberField> K;
  KForm num, den;
  std::size_t degree = 0;

  const NumberField& field() const { return *K; }
  /// den is a constant multiple of Y^d.
  bool is_polynomial() const;
};

/// Throws PreconditionError on unequal degrees, degree < 2, or a common root
/// ("degenerate map").
RationalMap new_map(std::shared_ptr<const NumberField> K, KForm num, KForm den);
/// The affine polynomial map x -> p(x).
RationalMap polynomial_map(std::shared_ptr<const NumberField> K, const KPoly& p);

/// Res(num, den); nonzero for every constructed map.
NFElem map_resultant(const RationalMap& f);

/// f ∘ g.
RationalMap compose(const RationalMap& f, const RationalMap& g);
/// f^n, n >= 1.
RationalMap iterate(const RationalMap& f, unsigned n);

/// A point of P^1(K), normalized to (x : 1) or (1 : 0).
struct KPoint {
  bool infinite = false;
  NFElem x;
  friend bool operator==(const KPoint& a, const KPoint& b) {
    return a.infinite == b.infinite && (a.infinite || a.x == b.x);
  }
};
KPoint apply(const RationalMap& f, const KPoint& z);

struct CriticalData {
  KForm wronskian;  // degree 2d - 2
  KForm support;    // squarefree part, integrally normalized
};
CriticalData critical_data(const RationalMap& f);

/// v_P(Res) = 0 after P-primitive normalization of the pair.
bool good_reduction(const RationalMap& f, const PrimeSpec& P);

/// The reduction of f at a good prime, over the residue field.
struct ReducedMap {
  std::uint64_t p = 0;
  ResidueField field;
  Form<ResidueField> num, den;
  std::size_t degree = 0;
};

/// Throws PreconditionError at primes of bad reduction.
ReducedMap reduce_map(const RationalMap& f, const PrimeSpec& P);

struct HeightData {
  long height = 0;
  ReducedMap Q;  // f~(x) = Q(x^{p^h})
};
HeightData height_and_untwist(const ReducedMap& f);
HeightData height_and_untwist(const RationalMap& f, const PrimeSpec& P);
/// Q(x^{p^h}) as a reduced map, for the reconstruction check.
ReducedMap retwist(const HeightData& hd);

enum class Regime { TAME, WILD };
const char* to_string(Regime r);
/// TAME iff p > d and the height is zero.
Regime regime(const ReducedMap& f);

/// A geometric point of the residual line, in a chosen finite extension F of
/// the residue field.
struct GeoPoint {
  bool infinite = false;
  PointField::Elem z;
  friend bool operator==(const GeoPoint& a, const GeoPoint& b) {
    return a.infinite == b.infinite && (a.infinite || a.z == b.z);
  }
  friend bool operator<(const GeoPoint& a, const GeoPoint& b) {
    if (a.infinite != b.infinite) return b.infinite;
    return !a.infinite && a.z < b.z;
  }
};

/// The reduced map with coefficients embedded in F.
struct PointMap {
  PointField F;
  Poly<PointField> A, B;
  std::size_t degree;
  GeoPoint apply(const GeoPoint& z) const;
  /// Multiplicity of s as a root of f~(x) - f~(s) (projectively).
  long local_degree(const GeoPoint& s) const;
};
PointMap over(const ReducedMap& f, const PointField& F);
/// F = residue field viewed as a degree-one extension.
PointField trivial_extension(const ResidueField& R);

struct ResidualOrbit {
  GeoPoint start;
  std::vector<GeoPoint> tail, cycle;
  std::size_t period() const { return cycle.size(); }
  bool purely_periodic() const { return tail.empty(); }
};
ResidualOrbit residual_orbit(const PointMap& f, const GeoPoint& start);

/// A closed point: ∞ or a monic irreducible polynomial over the residue field.
struct ClosedPoint {
  bool infinite = false;
  Poly<ResidueField> minpoly;
  std::size_t degree() const { return infinite ? 1 : minpoly.size() - 1; }
  friend bool operator==(const ClosedPoint& a, const ClosedPoint& b) {
    return a.infinite == b.infinite && (a.infinite || a.minpoly == b.minpoly);
  }
  /// (degree, then coefficients from the top); ∞ sorts first.
  friend bool operator<(const ClosedPoint& a, const ClosedPoint& b);
};
std::string to_string(const ResidueField& R, const ClosedPoint& c);

/// Minimal polynomial over the residue field of a geometric point of F.
ClosedPoint closed_point(const PointField& F, const GeoPoint& z);
/// The field generated by a closed point and the class of x in it.
std::pair<PointField, GeoPoint> generic_point(const ResidueField& R, const ClosedPoint& c);

/// Closed points of the residual critical locus (roots of the reduced
/// Jacobian, ∞ included). Throws PreconditionError at positive height.
std::vector<ClosedPoint> residual_critical_points(const ReducedMap& f);

/// Product of local degrees around a purely periodic residual cycle. Throws
/// PreconditionError ("wild/inseparable regime") at positive height.
long branch_ram_index(const ReducedMap& f, const PointMap& fm, const std::vector<GeoPoint>& cycle);

/// Frobenius untwisting of a residual branch prefix (entry n is mapped by
/// Φ^{hn}); requires the coefficients of f~ to be fixed by Φ^h and throws a
/// PreconditionError naming a suitable iterate otherwise.
std::vector<GeoPoint> untwist_branch(const ReducedMap& f, const PointField& F,
                                     const std::vector<GeoPoint>& prefix, long h);
/// Inverse of untwist_branch.
std::vector<GeoPoint> retwist_branch(const ReducedMap& f, const PointField& F,
                                     const std::vector<GeoPoint>& prefix, long h);
/// Least k >= 1 such that Φ^{hk} fixes every coefficient of f~.
long fixing_iterate(const ReducedMap& f, long h);

std::string to_string(const PointField& F, const GeoPoint& z);

}  // namespace arbor
