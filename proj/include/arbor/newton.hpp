#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "arbor/local.hpp"
#include "arbor/rational.hpp"

namespace arbor {

struct NewtonSegment {
  Rational slope;
  long length;
};

/// Lower convex hull of the points (i, v_i) with v_i finite.
struct NewtonPolygon {
  std::vector<ExtRational> points;
  std::vector<std::pair<long, Rational>> vertices;
  std::vector<NewtonSegment> segments;  // slopes strictly increasing
  long zero_roots = 0;                  // leading infinite entries

  /// -slope repeated by length, left to right (so descending).
  std::vector<Rational> root_valuations() const;
  /// Sum of the horizontal lengths.
  long length() const;
};

/// Throws PreconditionError when every entry is +∞.
NewtonPolygon newton_polygon(const std::vector<ExtRational>& valuations);

/// Least index with valuation 0. Throws ResourceError ("increase precision")
/// when no entry within the truncation is a unit.
std::size_t weierstrass_degree(const std::vector<ExtRational>& valuations);

/// S = W u with W monic of degree e = weierstrass degree, W ≡ x^e mod p, and
/// u(0) a unit. The identity W u = S holds exactly in (Z/p^B)[...][x] for the
/// truncated input of length `truncation`.
struct Preparation {
  Poly<LocalRing> W;
  Poly<LocalRing> u;
  std::size_t degree = 0;      // e
  std::size_t truncation = 0;  // x-adic truncation of the input
  long precision = 0;          // p-adic precision B
};

Preparation weierstrass_prepare(const LocalRing& R, const std::vector<LocalRing::Elem>& series);

/// Coefficient valuations of a polynomial over a local ring; entries with
/// valuation >= precision are reported as +∞.
std::vector<ExtRational> valuations(const LocalRing& R, const Poly<LocalRing>& a);

}  // namespace arbor
