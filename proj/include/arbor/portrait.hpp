#pragma once

// Pre-critical incidence portraits at a prime, to finite depth.
//
// Level k of the pre-critical support is stored as its "first-hit" form U_k:
// the points z with f^k(z) critical and f^j(z) not critical for j < k. Then
// U_0 is the critical support, U_k is the pullback of U_{k-1} with critical
// factors stripped, and the cumulative form is the product (automatically
// squarefree).

#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "arbor/dynamics.hpp"
#include "arbor/error.hpp"

namespace arbor {

inline constexpr std::size_t kDefaultDepth = 6;
inline constexpr std::size_t kLevelDegreeCap = 4096;
/// The exact discriminant cross-check runs only up to this form degree.
inline constexpr std::size_t kExactDiscMaxDegree = 48;

namespace form {

/// Removes from T every root it shares with S (with full multiplicity).
template <class R>
Form<R> strip_common(const R& r, Form<R> T, const Form<R>& S) {
  while (T.coeffs.size() > 1 && S.coeffs.size() > 1) {
    Poly<R> g = poly::gcd(r, T.coeffs, S.coeffs);
    if (g.size() <= 1) break;
    T.coeffs = *poly::exact_div(r, T.coeffs, g);
    T.degree -= g.size() - 1;
  }
  if (S.infinity_multiplicity() > 0)
    while (T.infinity_multiplicity() > 0) T.degree -= 1;
  return T;
}

/// First-hit level forms U_0..U_N for the map (A : B) with critical support S.
template <class R>
std::vector<Form<R>> first_hit_levels(const R& r, const Form<R>& A, const Form<R>& B,
                                      const Form<R>& S, std::size_t N,
                                      std::size_t cap = kLevelDegreeCap) {
  std::vector<Form<R>> U{S};
  std::size_t total = S.degree;
  for (std::size_t k = 1; k <= N; ++k) {
    if (total + U.back().degree * A.degree > cap * 2)
      throw ResourceError("pre-critical form degree cap exceeded at depth " +
                          std::to_string(k) + "; lower the depth");
    Form<R> T = strip_common(r, pullback(r, U.back(), A, B), S);
    if constexpr (std::is_same_v<R, NumberField>) T = normalized(r, std::move(T));
    total += T.degree;
    if (total > cap)
      throw ResourceError("pre-critical form degree cap exceeded at depth " +
                          std::to_string(k) + "; lower the depth");
    U.push_back(std::move(T));
  }
  return U;
}

}  // namespace form

struct LevelForms {
  std::size_t depth = 0;
  std::vector<KForm> levels;  // first-hit forms, integrally normalized
  KForm cumulative;           // product of the levels
};

/// Throws PreconditionError for powering maps and ResourceError past the
/// degree cap.
LevelForms precritical_form(const RationalMap& f, std::size_t N = kDefaultDepth);

/// Residual first-hit levels of the reduced map itself.
std::vector<Form<ResidueField>> residual_levels(const ReducedMap& f, std::size_t N);

struct DirectedCycle {
  bool found = false;
  std::vector<ClosedPoint> cycle;  // witness, starting at a critical point
};

/// Exact: some residual critical point is purely periodic. Finite critical
/// points are tried before ∞.
DirectedCycle has_directed_cycle(const RationalMap& f, const PrimeSpec& P);
DirectedCycle has_directed_cycle(const ReducedMap& f);

struct CollisionVerdict {
  bool collision = false;
  std::size_t depth = 0;  // level of first collision, or N when none
  std::optional<ClosedPoint> witness;
  int multiplicity = 1;
  /// Result of the discriminant-valuation detector when it ran.
  std::optional<bool> by_discriminant;
};

struct PortraitVertex {
  ClosedPoint point;
  std::size_t level = 0;
  int multiplicity = 1;
  std::string name;
};

struct PortraitRec {
  PrimeSpec prime;
  std::size_t depth = 0;
  long height = 0;
  Regime regime = Regime::TAME;
  std::vector<PortraitVertex> vertices;  // sorted by (level, name)
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  DirectedCycle directed;
  CollisionVerdict collision;
  std::size_t cumulative_degree = 0;
};

struct PortraitOptions {
  std::size_t depth = kDefaultDepth;
  bool exact_check = true;  // also run the discriminant detector
};

/// Requires good reduction and height zero at P.
PortraitRec portrait(const RationalMap& f, const PrimeSpec& P, const PortraitOptions& opt = {});
/// Same, reusing precomputed level forms (depth taken from `lf`).
PortraitRec portrait(const RationalMap& f, const PrimeSpec& P, const LevelForms& lf,
                     bool exact_check = true);

CollisionVerdict has_collision(const RationalMap& f, const PrimeSpec& P, std::size_t N,
                               bool exact_check = true);
/// Collision detection from precomputed level forms (no reduction check).
CollisionVerdict collision_from_levels(const RationalMap& f, const PrimeSpec& P,
                                       const LevelForms& lf, bool exact_check = true);

struct GcrVerdict {
  bool bad = false;
  std::size_t depth = 0;
  DirectedCycle directed;
  CollisionVerdict collision;
};
/// BAD on a directed cycle or a collision up to depth N, else GOOD_UP_TO(N).
GcrVerdict good_critical_reduction(const RationalMap& f, const PrimeSpec& P, std::size_t N);
std::string to_string(const GcrVerdict& v);

std::string export_dot(const PortraitRec& rec);

/// Name of a closed point: the root for degree one, the factor otherwise.
std::string point_name(const ResidueField& R, const ClosedPoint& c);

}  // namespace arbor
