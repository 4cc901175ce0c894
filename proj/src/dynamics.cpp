#include "arbor/dynamics.hpp"

#include <map>
#include <numeric>

#include "arbor/error.hpp"

namespace arbor {

namespace {

RationalMap make_unchecked(std::shared_ptr<const NumberField> K, KForm num, KForm den) {
  normalize_integral(*K, {&num, &den});
  const std::size_t d = num.degree;
  return RationalMap{std::move(K), std::move(num), std::move(den), d};
}

template <class R>
typename R::Elem top(const R& r, const Form<R>& F) {
  return F.coeff(r, F.degree);
}

}  // namespace

bool RationalMap::is_polynomial() const { return den.affine_degree() == 0; }

NFElem map_resultant(const RationalMap& f) {
  return form::resultant(*f.K, f.num, f.den);
}

RationalMap new_map(std::shared_ptr<const NumberField> K, KForm num, KForm den) {
  if (num.degree != den.degree)
    throw PreconditionError("numerator and denominator have different degrees");
  if (num.degree < 2) throw PreconditionError("map degree must be at least 2");
  if (num.is_zero() || den.is_zero()) throw PreconditionError("degenerate map");
  RationalMap f = make_unchecked(std::move(K), std::move(num), std::move(den));
  if (map_resultant(f).is_zero()) throw PreconditionError("degenerate map");
  return f;
}

RationalMap polynomial_map(std::shared_ptr<const NumberField> K, const KPoly& p) {
  const std::size_t d = static_cast<std::size_t>(poly::deg<NumberField>(p));
  KForm num{p, d}, den{KPoly{K->one()}, d};
  return new_map(std::move(K), std::move(num), std::move(den));
}

RationalMap compose(const RationalMap& f, const RationalMap& g) {
  const NumberField& K = *f.K;
  KForm a = form::pullback(K, f.num, g.num, g.den);
  KForm b = form::pullback(K, f.den, g.num, g.den);
  return make_unchecked(f.K, std::move(a), std::move(b));
}

RationalMap iterate(const RationalMap& f, unsigned n) {
  if (n == 0) throw PreconditionError("iterate: n must be positive");
  RationalMap g = f;
  for (unsigned i = 1; i < n; ++i) g = compose(f, g);
  return g;
}

KPoint apply(const RationalMap& f, const KPoint& z) {
  const NumberField& K = *f.K;
  NFElem a, b;
  if (z.infinite) {
    a = top(K, f.num);
    b = top(K, f.den);
  } else {
    a = form::eval(K, f.num, z.x, K.one());
    b = form::eval(K, f.den, z.x, K.one());
  }
  if (b.is_zero()) return KPoint{true, K.zero()};
  return KPoint{false, K.mul(a, K.inv(b))};
}

CriticalData critical_data(const RationalMap& f) {
  const NumberField& K = *f.K;
  KForm J = form::jacobian(K, f.num, f.den);
  if (J.is_zero()) throw PreconditionError("critical form vanishes identically");
  KForm S = normalized(K, form::squarefree_part(K, J));
  return CriticalData{normalized(K, J), S};
}

bool good_reduction(const RationalMap& f, const PrimeSpec& P) {
  auto red = reduce_forms(*f.K, P, {&f.num, &f.den});
  return !P.field.is_zero(form::resultant(P.field, red[0], red[1]));
}

ReducedMap reduce_map(const RationalMap& f, const PrimeSpec& P) {
  auto red = reduce_forms(*f.K, P, {&f.num, &f.den});
  if (P.field.is_zero(form::resultant(P.field, red[0], red[1])))
    throw PreconditionError("bad reduction at " + P.label());
  return ReducedMap{P.p, P.field, std::move(red[0]), std::move(red[1]), f.degree};
}

// ---------------------------------------------------------------------------
// Height

HeightData height_and_untwist(const ReducedMap& f) {
  const ResidueField& R = f.field;
  unsigned long g = 0;
  for (const auto* F : {&f.num, &f.den})
    for (std::size_t i = 1; i < F->coeffs.size(); ++i)
      if (!R.is_zero(F->coeffs[i])) g = std::gcd(g, static_cast<unsigned long>(i));
  // d itself is an exponent of X^d or of Y^d; the Y side enters through d - i.
  for (const auto* F : {&f.num, &f.den})
    for (std::size_t i = 0; i < F->coeffs.size(); ++i)
      if (!R.is_zero(F->coeffs[i]) && i < f.degree)
        g = std::gcd(g, static_cast<unsigned long>(f.degree - i));
  long h = 0;
  unsigned long q = 1;
  while (g != 0 && g % (q * f.p) == 0) {
    q *= f.p;
    ++h;
  }
  auto squeeze = [&](const Form<ResidueField>& F) {
    Poly<ResidueField> c;
    for (std::size_t i = 0; i < F.coeffs.size(); i += q) c.push_back(F.coeffs[i]);
    poly::trim(R, c);
    return Form<ResidueField>{std::move(c), F.degree / q};
  };
  return HeightData{h, ReducedMap{f.p, R, squeeze(f.num), squeeze(f.den), f.degree / q}};
}

HeightData height_and_untwist(const RationalMap& f, const PrimeSpec& P) {
  return height_and_untwist(reduce_map(f, P));
}

ReducedMap retwist(const HeightData& hd) {
  const ReducedMap& Q = hd.Q;
  const ResidueField& R = Q.field;
  std::size_t q = 1;
  for (long i = 0; i < hd.height; ++i) q *= Q.p;
  auto spread = [&](const Form<ResidueField>& F) {
    Poly<ResidueField> c;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
      if (i > 0) c.resize(c.size() + q - 1, R.zero());
      c.push_back(F.coeffs[i]);
    }
    poly::trim(R, c);
    return Form<ResidueField>{std::move(c), F.degree * q};
  };
  return ReducedMap{Q.p, R, spread(Q.num), spread(Q.den), Q.degree * q};
}

const char* to_string(Regime r) { return r == Regime::TAME ? "TAME" : "WILD"; }

Regime regime(const ReducedMap& f) {
  if (f.p <= f.degree) return Regime::WILD;
  return height_and_untwist(f).height == 0 ? Regime::TAME : Regime::WILD;
}

// ---------------------------------------------------------------------------
// Residual points

PointField trivial_extension(const ResidueField& R) {
  return PointField(R, Poly<ResidueField>{R.zero(), R.one()});
}

PointMap over(const ReducedMap& f, const PointField& F) {
  auto lift = [&](const Poly<ResidueField>& a) {
    Poly<PointField> out;
    for (const auto& c : a) out.push_back(F.embed(c));
    return out;
  };
  return PointMap{F, lift(f.num.coeffs), lift(f.den.coeffs), f.degree};
}

GeoPoint PointMap::apply(const GeoPoint& s) const {
  PointField::Elem a, b;
  if (s.infinite) {
    a = degree < A.size() ? A[degree] : F.zero();
    b = degree < B.size() ? B[degree] : F.zero();
  } else {
    a = poly::eval(F, A, s.z);
    b = poly::eval(F, B, s.z);
  }
  if (F.is_zero(b)) return GeoPoint{true, F.zero()};
  return GeoPoint{false, F.mul(a, F.inv(b))};
}

long PointMap::local_degree(const GeoPoint& s) const {
  GeoPoint t = apply(s);
  Poly<PointField> T = t.infinite ? B : poly::sub(F, A, poly::scale(F, B, t.z));
  if (T.empty()) throw std::logic_error("local_degree: vanishing form");
  if (s.infinite) return static_cast<long>(degree) - poly::deg<PointField>(T);
  return ff::root_multiplicity(F, T, s.z);
}

ResidualOrbit residual_orbit(const PointMap& f, const GeoPoint& start) {
  std::map<GeoPoint, std::size_t> seen;
  std::vector<GeoPoint> path;
  GeoPoint z = start;
  while (!seen.count(z)) {
    seen.emplace(z, path.size());
    path.push_back(z);
    z = f.apply(z);
  }
  const std::size_t c = seen[z];
  ResidualOrbit o;
  o.start = start;
  o.tail.assign(path.begin(), path.begin() + static_cast<long>(c));
  o.cycle.assign(path.begin() + static_cast<long>(c), path.end());
  return o;
}

bool operator<(const ClosedPoint& a, const ClosedPoint& b) {
  if (a.infinite != b.infinite) return a.infinite;
  if (a.infinite) return false;
  return ff::detail::factor_less<ResidueField>(a.minpoly, b.minpoly);
}

std::string to_string(const ResidueField& R, const ClosedPoint& c) {
  return c.infinite ? "inf" : to_string(R, c.minpoly, 'x');
}

ClosedPoint closed_point(const PointField& F, const GeoPoint& z) {
  if (z.infinite) return ClosedPoint{true, {}};
  const ResidueField& R = F.base();
  Poly<PointField> m{F.one()};
  PointField::Elem c = z.z;
  do {
    m = poly::mul(F, m, Poly<PointField>{F.neg(c), F.one()});
    c = F.pow(c, R.size());
  } while (!(c == z.z));
  Poly<ResidueField> out;
  for (const auto& a : m) {
    if (!F.in_base(a)) throw std::logic_error("closed_point: coefficient outside base");
    out.push_back(a[0]);
  }
  return ClosedPoint{false, std::move(out)};
}

std::pair<PointField, GeoPoint> generic_point(const ResidueField& R, const ClosedPoint& c) {
  if (c.infinite) {
    PointField F = trivial_extension(R);
    return {F, GeoPoint{true, F.zero()}};
  }
  PointField F(R, c.minpoly);
  return {F, GeoPoint{false, F.gen()}};
}

namespace {

void require_separable(const ReducedMap& f) {
  if (height_and_untwist(f).height > 0)
    throw PreconditionError("wild/inseparable regime: reduced map has positive height");
}

}  // namespace

std::vector<ClosedPoint> residual_critical_points(const ReducedMap& f) {
  require_separable(f);
  const ResidueField& R = f.field;
  Form<ResidueField> J = form::jacobian(R, f.num, f.den);
  if (J.is_zero()) throw PreconditionError("reduced critical form vanishes");
  std::vector<ClosedPoint> out;
  if (J.infinity_multiplicity() > 0) out.push_back(ClosedPoint{true, {}});
  for (auto& e : ff::factor(R, J.coeffs)) out.push_back(ClosedPoint{false, e.factor});
  return out;
}

long branch_ram_index(const ReducedMap& f, const PointMap& fm,
                      const std::vector<GeoPoint>& cycle) {
  require_separable(f);
  long e = 1;
  for (const auto& s : cycle) e *= fm.local_degree(s);
  return e;
}

// ---------------------------------------------------------------------------
// Untwisting

namespace {

ResidueField::Elem frob_power(const ResidueField& R, ResidueField::Elem a, long k) {
  for (long i = 0; i < k; ++i) a = R.frobenius(a);
  return a;
}

GeoPoint frob_point(const PointField& F, GeoPoint z, long k, bool inverse) {
  if (z.infinite) return z;
  for (long i = 0; i < k; ++i) z.z = inverse ? F.pth_root(z.z) : F.frobenius(z.z);
  return z;
}

bool coefficients_fixed(const ReducedMap& f, long k) {
  const ResidueField& R = f.field;
  for (const auto* F : {&f.num, &f.den})
    for (const auto& c : F->coeffs)
      if (!(frob_power(R, c, k) == c)) return false;
  return true;
}

std::vector<GeoPoint> twist(const ReducedMap& f, const PointField& F,
                            const std::vector<GeoPoint>& prefix, long h, bool inverse) {
  if (h > 0 && !coefficients_fixed(f, h)) {
    throw PreconditionError("untwisting needs coefficients fixed by Frobenius^" +
                            std::to_string(h) + "; pass to the iterate f^" +
                            std::to_string(fixing_iterate(f, h)));
  }
  std::vector<GeoPoint> out;
  for (std::size_t n = 0; n < prefix.size(); ++n)
    out.push_back(frob_point(F, prefix[n], h * static_cast<long>(n), inverse));
  return out;
}

}  // namespace

long fixing_iterate(const ReducedMap& f, long h) {
  if (h <= 0) return 1;
  const long deg = static_cast<long>(f.field.absolute_degree());
  const long bound = deg / std::gcd(deg, h);
  for (long k = 1; k < bound; ++k)
    if (coefficients_fixed(f, h * k)) return k;
  return bound;
}

std::vector<GeoPoint> untwist_branch(const ReducedMap& f, const PointField& F,
                                     const std::vector<GeoPoint>& prefix, long h) {
  return twist(f, F, prefix, h, false);
}

std::vector<GeoPoint> retwist_branch(const ReducedMap& f, const PointField& F,
                                     const std::vector<GeoPoint>& prefix, long h) {
  return twist(f, F, prefix, h, true);
}

std::string to_string(const PointField& F, const GeoPoint& z) {
  if (z.infinite) return "inf";
  const ResidueField& R = F.base();
  if (F.degree() == 1) return to_string(R, z.z[0]);
  std::string s = "[";
  for (std::size_t i = 0; i < z.z.size(); ++i) {
    if (i) s += ",";
    s += to_string(R, z.z[i]);
  }
  return s + "]";
}

}  // namespace arbor
