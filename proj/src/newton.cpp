#include "arbor/newton.hpp"

#include "arbor/error.hpp"

namespace arbor {

std::vector<Rational> NewtonPolygon::root_valuations() const {
  std::vector<Rational> out;
  for (const auto& s : segments)
    for (long i = 0; i < s.length; ++i) out.push_back(-s.slope);
  return out;
}

long NewtonPolygon::length() const {
  long n = 0;
  for (const auto& s : segments) n += s.length;
  return n;
}

NewtonPolygon newton_polygon(const std::vector<ExtRational>& vals) {
  NewtonPolygon np;
  np.points = vals;
  std::vector<std::pair<long, Rational>> hull;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].is_infinite()) {
      if (hull.empty()) ++np.zero_roots;
      continue;
    }
    std::pair<long, Rational> q{static_cast<long>(i), vals[i].value()};
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b unless slope(a,b) < slope(b,q).
      Rational s1 = (b.second - a.second) / (b.first - a.first);
      Rational s2 = (q.second - b.second) / (q.first - b.first);
      if (s1 < s2) break;
      hull.pop_back();
    }
    hull.push_back(q);
  }
  if (hull.empty()) throw PreconditionError("newton_polygon: all valuations are infinite");
  np.vertices = hull;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const long len = hull[i].first - hull[i - 1].first;
    np.segments.push_back({(hull[i].second - hull[i - 1].second) / len, len});
  }
  return np;
}

std::size_t weierstrass_degree(const std::vector<ExtRational>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i].is_finite() && vals[i].value() == 0) return i;
  throw ResourceError("no unit coefficient within truncation: increase precision");
}

std::vector<ExtRational> valuations(const LocalRing& R, const Poly<LocalRing>& a) {
  std::vector<ExtRational> v;
  for (const auto& c : a) {
    long x = R.valuation(c);
    v.push_back(x >= R.precision() ? ExtRational::infinity() : ExtRational(Rational(x)));
  }
  return v;
}

namespace {

Poly<PointField> residue_poly(const LocalRing& R, const Poly<LocalRing>& a) {
  Poly<PointField> r;
  for (const auto& c : a) r.push_back(R.residue(c));
  poly::trim(R.point_field(), r);
  return r;
}

Poly<LocalRing> lift_poly(const LocalRing& R, const Poly<PointField>& a) {
  Poly<LocalRing> r;
  for (const auto& c : a) r.push_back(R.lift(c));
  return r;
}

}  // namespace

Preparation weierstrass_prepare(const LocalRing& R, const std::vector<LocalRing::Elem>& series) {
  Preparation out;
  out.truncation = series.size();
  out.precision = R.precision();
  Poly<LocalRing> S = poly::trimmed(R, series);
  const std::size_t e = weierstrass_degree(valuations(R, S));
  out.degree = e;
  if (e == 0) {
    out.W = {R.one()};
    out.u = S;
    return out;
  }
  if (series.size() <= e) throw ResourceError("weierstrass_prepare: truncation too short");
  const PointField& F = R.point_field();
  Poly<PointField> Sbar = residue_poly(R, S);
  Poly<PointField> G0 = poly::monomial(F, F.one(), e);
  Poly<PointField> H0(Sbar.begin() + static_cast<long>(e), Sbar.end());
  auto [one, s, t] = poly::xgcd(F, G0, H0);
  (void)one;
  (void)s;
  Poly<LocalRing> G = lift_poly(R, G0), H = lift_poly(R, H0);
  Integer pj = R.p();
  for (long j = 1; j < R.precision(); ++j) {
    Poly<LocalRing> E = poly::sub(R, S, poly::mul(R, G, H));
    if (E.empty()) break;
    Poly<LocalRing> Ej;
    for (const auto& c : E) Ej.push_back(R.div_p_power(c, j));
    Poly<PointField> ej = residue_poly(R, Ej);
    if (!ej.empty()) {
      Poly<PointField> dg = poly::rem(F, poly::mul(F, t, ej), G0);
      Poly<PointField> dh = *poly::exact_div(F, poly::sub(F, ej, poly::mul(F, H0, dg)), G0);
      auto bump = [&](Poly<LocalRing>& X, const Poly<PointField>& d) {
        Poly<LocalRing> L = lift_poly(R, d);
        for (auto& c : L) c = R.scale(c, pj);
        X = poly::add(R, X, L);
      };
      bump(G, dg);
      bump(H, dh);
    }
    pj *= R.p();
  }
  out.W = G;
  out.u = H;
  return out;
}

}  // namespace arbor
