#include <algorithm>
#include <map>

#include "arbor/error.hpp"
#include "arbor/ramify.hpp"

namespace arbor {

Policy parse_policy(const std::string& s) {
  if (s == "nearest" || s == "nearest-cycle") return Policy::NEAREST;
  if (s == "farthest") return Policy::FARTHEST;
  if (s == "all") return Policy::ALL;
  throw PreconditionError("unknown policy '" + s + "' (nearest-cycle, farthest, all)");
}

const char* to_string(Policy p) {
  switch (p) {
    case Policy::NEAREST: return "nearest-cycle";
    case Policy::FARTHEST: return "farthest";
    case Policy::ALL: return "all";
  }
  return "?";
}

namespace {

using Elem = LocalRing::Elem;

struct NeedPrecision {};

// The map over W, P-primitive, as polynomials in the chart coordinate.
struct MapW {
  std::size_t d = 0;
  Poly<LocalRing> A_aff, B_aff, A_inv, B_inv;
};

MapW embed_map(const RationalMap& f, const PrimeSpec& P, const LocalRing& W) {
  const NumberField& K = f.field();
  long mv = 0;
  reduce_forms(K, P, {&f.num, &f.den}, &mv);
  Rational s = 1;
  const Integer p = P.p_integer();
  if (mv > 0) s = Rational(1, ipow(p, mv));
  if (mv < 0) s = Rational(ipow(p, -mv));
  MapW m;
  m.d = f.degree;
  for (std::size_t i = 0; i <= m.d; ++i) {
    m.A_aff.push_back(W.embed(K.scale(f.num.coeff(K, i), s)));
    m.B_aff.push_back(W.embed(K.scale(f.den.coeff(K, i), s)));
  }
  m.A_inv.assign(m.A_aff.rbegin(), m.A_aff.rend());
  m.B_inv.assign(m.B_aff.rbegin(), m.B_aff.rend());
  poly::trim(W, m.A_aff);
  poly::trim(W, m.B_aff);
  poly::trim(W, m.A_inv);
  poly::trim(W, m.B_inv);
  return m;
}

struct Dual {
  Elem v, dv;
};

Dual eval_dual(const LocalRing& W, const Poly<LocalRing>& a, const Dual& t) {
  Dual acc{W.zero(), W.zero()};
  for (std::size_t i = a.size(); i-- > 0;) {
    Elem v = W.add(W.mul(acc.v, t.v), a[i]);
    Elem dv = W.add(W.mul(acc.v, t.dv), W.mul(acc.dv, t.v));
    acc = {std::move(v), std::move(dv)};
  }
  return acc;
}

Dual image(const LocalRing& W, const MapW& m, bool src_inv, const Dual& t, bool dst_inv) {
  Dual a = eval_dual(W, src_inv ? m.A_inv : m.A_aff, t);
  Dual b = eval_dual(W, src_inv ? m.B_inv : m.B_aff, t);
  if (dst_inv) std::swap(a, b);
  Elem ib = W.inv(b.v);
  Elem q = W.mul(a.v, ib);
  Elem dq = W.mul(W.sub(a.dv, W.mul(q, b.dv)), ib);
  return {q, dq};
}

Poly<LocalRing> inv_series(const LocalRing& W, const Poly<LocalRing>& a, std::size_t T) {
  Elem b0 = W.inv(a.at(0));
  Poly<LocalRing> b{b0};
  for (std::size_t k = 1; k < T; ++k) {
    Elem s = W.zero();
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) s = W.add(s, W.mul(a[j], b[k - j]));
    b.push_back(W.neg(W.mul(b0, s)));
  }
  return b;
}

// S(y) = chart_dst(f(chart_src^{-1}(c_src + y))) - c_dst, first T terms; the
// constant term is zero to precision.
Poly<LocalRing> series_at(const LocalRing& W, const MapW& m, const LocalPoint& src,
                          const LocalPoint& dst, std::size_t T) {
  Poly<LocalRing> a = poly::truncate(W, poly::taylor_shift(W, src.inverted ? m.A_inv : m.A_aff, src.coord), T);
  Poly<LocalRing> b = poly::truncate(W, poly::taylor_shift(W, src.inverted ? m.B_inv : m.B_aff, src.coord), T);
  if (dst.inverted) std::swap(a, b);
  Poly<LocalRing> s = poly::mul_trunc(W, a, inv_series(W, b, T), T);
  s.resize(T, W.zero());
  s[0] = W.sub(s[0], dst.coord);
  if (W.valuation(s[0]) < W.precision() / 2)
    throw std::logic_error("series_at: centre is not mapped to the next centre");
  s[0] = W.zero();
  return s;
}

long log2_ceil(long b) {
  long k = 0;
  while ((1L << k) < b) ++k;
  return k;
}

Integer denominator(const ExtRational& v) {
  return v.is_finite() ? Integer(v.value().get_den()) : Integer(1);
}

ExtRational divide(const ExtRational& v, long e) {
  if (v.is_infinite()) return v;
  return ExtRational(Rational(v.value() / e));
}

}  // namespace

// ---------------------------------------------------------------------------
// Periodic points

LiftedCycle lift_periodic_point(const RationalMap& f, const PrimeSpec& P, const ClosedPoint& start,
                                long precision) {
  const NumberField& K = f.field();
  ReducedMap r = reduce_map(f, P);
  if (height_and_untwist(r).height > 0)
    throw PreconditionError("wild/inseparable regime: positive height at " + P.label());
  LocalRing W0(K, P, precision);
  LocalRing W = (start.infinite || start.degree() == 1) ? W0 : W0.extend(start.minpoly);
  const PointField& F = W.point_field();
  GeoPoint z{start.infinite, F.zero()};
  if (!start.infinite) z.z = start.degree() == 1 ? F.embed(P.field.neg(start.minpoly[0])) : F.gen();
  PointMap pm = over(r, F);
  ResidualOrbit o = residual_orbit(pm, z);
  if (!o.purely_periodic())
    throw PreconditionError("point is not residually periodic: no cycle through it");
  const std::size_t m = o.cycle.size();
  MapW mw = embed_map(f, P, W);
  std::vector<bool> inv(m);
  for (std::size_t i = 0; i < m; ++i) inv[i] = o.cycle[i].infinite;

  Elem u = inv[0] ? W.zero() : W.lift(o.cycle[0].z);
  const long max_iter = 2 * log2_ceil(W.precision()) + 8;
  bool converged = false;
  for (long it = 0; it < max_iter; ++it) {
    Dual t{u, W.one()};
    for (std::size_t i = 0; i < m; ++i) t = image(W, mw, inv[i], t, inv[(i + 1) % m]);
    Elem F1 = W.sub(t.v, u);
    Elem D1 = W.sub(t.dv, W.one());
    if (F.is_zero(W.residue(D1)))
      throw PreconditionError("indifferent residual cycle (multiplier 1): lifting unsupported");
    Elem next = W.sub(u, W.mul(F1, W.inv(D1)));
    if (next == u) {
      converged = true;
      break;
    }
    u = std::move(next);
  }
  if (!converged) throw ResourceError("periodic point lift did not converge");
  LiftedCycle lc{W, o.cycle, {}, {}};
  Dual t{u, W.one()};
  for (std::size_t i = 0; i < m; ++i) {
    lc.points.push_back(LocalPoint{inv[i], t.v});
    lc.local_degrees.push_back(pm.local_degree(o.cycle[i]));
    t = image(W, mw, inv[i], t, inv[(i + 1) % m]);
  }
  return lc;
}

// ---------------------------------------------------------------------------
// Polygon steps

std::vector<ExtRational> step_root_valuations(const std::vector<ExtRational>& vals,
                                              const ExtRational& delta) {
  const std::size_t e = weierstrass_degree(vals);
  if (e == 0) throw std::logic_error("step_root_valuations: unit constant term");
  std::vector<ExtRational> out;
  if (delta.is_infinite()) {
    // y = 0 is a root; the rest come from S(y)/y.
    out.push_back(ExtRational::infinity());
    std::vector<ExtRational> pts(vals.begin() + 1, vals.begin() + static_cast<long>(e) + 1);
    NewtonPolygon np = newton_polygon(pts);
    for (long i = 0; i < np.zero_roots; ++i) out.push_back(ExtRational::infinity());
    for (const auto& v : np.root_valuations()) out.push_back(ExtRational(v));
    return out;
  }
  std::vector<ExtRational> pts{delta};
  for (std::size_t i = 1; i <= e; ++i)
    pts.push_back(vals[i] >= delta ? ExtRational::infinity() : vals[i]);
  for (const auto& v : newton_polygon(pts).root_valuations()) out.push_back(ExtRational(v));
  return out;
}

GrowthLaw growth_law(const std::vector<ExtRational>& deltas, long m, long e) {
  GrowthLaw g;
  g.period = m;
  g.e_B = e;
  const long n = static_cast<long>(deltas.size());
  for (long i = 0; i < n; ++i)
    if (denominator(deltas[static_cast<std::size_t>(i)]) > 1) {
      g.first_ramified = i;
      break;
    }
  long n0 = n - m;  // vacuous start
  for (long k = n - m - 1; k >= 0; --k) {
    if (deltas[static_cast<std::size_t>(k + m)] == divide(deltas[static_cast<std::size_t>(k)], e))
      n0 = k;
    else
      break;
  }
  if (n0 < n - m) {
    g.onset = n0;
    g.delta_onset = deltas[static_cast<std::size_t>(n0)];
  }
  return g;
}

std::vector<ExtRational> simulate_series(const std::vector<ExtRational>& vals,
                                         const ExtRational& delta0, std::size_t depth,
                                         Policy policy) {
  std::vector<ExtRational> out{delta0};
  for (std::size_t n = 1; n <= depth; ++n) {
    auto roots = step_root_valuations(vals, out.back());
    out.push_back(policy == Policy::FARTHEST ? roots.back() : roots.front());
  }
  return out;
}

std::optional<std::size_t> polygon_onset(const std::vector<ExtRational>& vals,
                                         const std::vector<ExtRational>& deltas) {
  const std::size_t e = weierstrass_degree(vals);
  for (std::size_t n = 0; n < deltas.size(); ++n) {
    if (deltas[n].is_infinite()) continue;
    bool ok = true;
    for (std::size_t i = 1; i < e && ok; ++i)
      if (vals[i].is_finite() &&
          vals[i].value() < deltas[n].value() * Rational(static_cast<long>(e - i), static_cast<long>(e)))
        ok = false;
    if (ok) return n;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Branch simulation

namespace {

BranchSimRec simulate(const RationalMap& f, const PrimeSpec& P, const NFElem& alpha0, long depth,
                      Policy policy, long B) {
  const NumberField& K = f.field();
  ReducedMap r = reduce_map(f, P);
  if (height_and_untwist(r).height > 0)
    throw PreconditionError("wild/inseparable regime: positive height at " + P.label());
  ResidualPoint a0 = reduce_point(K, P, alpha0);
  ClosedPoint start{a0.infinite, {}};
  if (!a0.infinite) start.minpoly = {P.field.neg(a0.value), P.field.one()};
  LiftedCycle lc = [&] {
    try {
      return lift_periodic_point(f, P, start, B);
    } catch (const PreconditionError& e) {
      if (std::string(e.what()).find("not residually periodic") != std::string::npos)
        throw PreconditionError("base point is not residually periodic at " + P.label() +
                                ": its backward branches follow no cycle");
      throw;
    }
  }();
  const LocalRing& W = lc.W;
  const std::size_t m = lc.points.size();
  const std::size_t d = f.degree;
  MapW mw = embed_map(f, P, W);

  std::vector<std::vector<ExtRational>> vals(m);
  long eB = 1;
  for (std::size_t j = 0; j < m; ++j) {
    Poly<LocalRing> s = series_at(W, mw, lc.points[j], lc.points[(j + 1) % m], d + 1);
    vals[j] = valuations(W, s);
    vals[j].resize(d + 1, ExtRational::infinity());
    vals[j][0] = ExtRational::infinity();
    if (weierstrass_degree(vals[j]) != static_cast<std::size_t>(lc.local_degrees[j]))
      throw std::logic_error("series Weierstrass degree differs from the residual local degree");
    eB *= lc.local_degrees[j];
  }

  // δ_0.
  const LocalPoint& c0 = lc.points[0];
  Elem y0 = W.sub(c0.inverted ? W.embed(K.inv(alpha0)) : W.embed(alpha0), c0.coord);
  ExtRational delta0 = ExtRational(Rational(W.valuation(y0)));
  if (W.valuation(y0) >= W.precision()) {
    KPoint z{false, alpha0};
    for (std::size_t i = 0; i < m; ++i) z = apply(f, z);
    if (!(z == KPoint{false, alpha0})) throw NeedPrecision{};
    delta0 = ExtRational::infinity();
  }

  auto centre_index = [&](long n) { return static_cast<std::size_t>((m - static_cast<std::size_t>(n) % m) % m); };
  auto abs_val = [&](long n, const ExtRational& delta) -> std::optional<Rational> {
    const LocalPoint& c = lc.points[centre_index(n)];
    const long vc = W.valuation(c.coord);
    const ExtRational evc = vc >= W.precision() ? ExtRational::infinity() : ExtRational(Rational(vc));
    ExtRational v;
    if (delta < evc) v = delta;
    else if (evc < delta) v = evc;
    else return std::nullopt;
    if (v.is_infinite()) return std::nullopt;
    return c.inverted ? Rational(-v.value()) : v.value();
  };

  BranchSimRec rec{P, alpha0, policy, depth, regime(r), W.precision(), 0, {}, {}, {}, {}};
  for (const auto& g : lc.residues) rec.cycle.push_back(to_string(W.point_field(), g));
  rec.steps.push_back(BranchStep{0, delta0, abs_val(0, delta0), denominator(delta0)});

  std::map<ExtRational, Integer> nodes{{delta0, Integer(1)}};
  Integer off = 0;
  if (policy == Policy::ALL) rec.levels.push_back(LevelMultiset{0, {delta0}, 0});
  for (long n = 1; n <= depth; ++n) {
    // c_n maps to c_{n-1}: the series at position centre_index(n).
    const std::size_t j = centre_index(n);
    const long e = lc.local_degrees[j];
    auto roots = step_root_valuations(vals[j], rec.steps.back().delta);
    const ExtRational dn = policy == Policy::FARTHEST ? roots.back() : roots.front();
    rec.steps.push_back(BranchStep{n, dn, abs_val(n, dn), denominator(dn)});
    if (policy == Policy::ALL) {
      std::map<ExtRational, Integer> next;
      Integer count = 0;
      for (const auto& [v, c] : nodes) {
        for (const auto& rv : step_root_valuations(vals[j], v)) next[rv] += c;
        count += c;
      }
      off = off * static_cast<long>(d) + count * static_cast<long>(d - static_cast<std::size_t>(e));
      nodes = std::move(next);
      LevelMultiset lm{n, {}, off};
      for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
        for (Integer k = 0; k < it->second; ++k) lm.on_disk.push_back(it->first);
      rec.levels.push_back(std::move(lm));
    }
  }
  std::vector<ExtRational> deltas;
  for (const auto& s : rec.steps) deltas.push_back(s.delta);
  rec.growth = growth_law(deltas, static_cast<long>(m), eB);
  rec.growth.asserted = rec.regime == Regime::TAME;
  return rec;
}

}  // namespace

BranchSimRec branch_valuations(const RationalMap& f, const PrimeSpec& P, const NFElem& alpha0,
                               long depth, Policy policy) {
  if (depth < 0) throw PreconditionError("depth must be non-negative");
  for (long B = kInitialPrecision; B <= kMaxPrecision; B *= 2) {
    try {
      return simulate(f, P, alpha0, depth, policy, B);
    } catch (const NeedPrecision&) {
    }
  }
  throw PrecisionExceeded("branch_valuations: base point agrees with the periodic point beyond precision " +
                              std::to_string(kMaxPrecision),
                          kMaxPrecision);
}

// ---------------------------------------------------------------------------
// Oracle

std::vector<ExtRational> ValuationMultiset::positive() const {
  std::vector<ExtRational> out;
  for (const auto& v : values)
    if (v > ExtRational(0)) out.push_back(v);
  return out;
}

Integer ValuationMultiset::off_disk() const {
  Integer n = at_infinity;
  for (const auto& v : values)
    if (!(v > ExtRational(0))) ++n;
  return n;
}

namespace {

struct OracleRun {
  ValuationMultiset vm;
  bool leading_zero = false;  // y = 0 looked like a root to precision
};

OracleRun oracle_run(const RationalMap& f, const PrimeSpec& P, const NFElem& alpha0, unsigned n,
                     const LocalRing& W, const LocalPoint& shift) {
  const NumberField& K = f.field();
  Integer total = 1;
  for (unsigned i = 0; i < n; ++i) total *= static_cast<long>(f.degree);
  if (total > kOracleDegreeCap)
    throw ResourceError("oracle: d^n = " + total.get_str() + " exceeds the degree cap " +
                        std::to_string(kOracleDegreeCap));
  MapW mw = embed_map(f, P, W);
  const std::size_t d = f.degree;
  Poly<LocalRing> X, Y;
  if (shift.inverted) {
    X = {W.one()};
    Y = poly::trimmed(W, Poly<LocalRing>{shift.coord, W.one()});
  } else {
    X = poly::trimmed(W, Poly<LocalRing>{shift.coord, W.one()});
    Y = {W.one()};
  }
  for (unsigned it = 0; it < n; ++it) {
    std::vector<Poly<LocalRing>> xp{Poly<LocalRing>{W.one()}}, yp{Poly<LocalRing>{W.one()}};
    for (std::size_t i = 1; i <= d; ++i) {
      xp.push_back(poly::mul(W, xp.back(), X));
      yp.push_back(poly::mul(W, yp.back(), Y));
    }
    Poly<LocalRing> nx, ny;
    for (std::size_t i = 0; i <= d; ++i) {
      Poly<LocalRing> mono = poly::mul(W, xp[i], yp[d - i]);
      if (i < mw.A_aff.size() && !W.is_zero(mw.A_aff[i]))
        nx = poly::add(W, nx, poly::scale(W, mono, mw.A_aff[i]));
      if (i < mw.B_aff.size() && !W.is_zero(mw.B_aff[i]))
        ny = poly::add(W, ny, poly::scale(W, mono, mw.B_aff[i]));
    }
    X = std::move(nx);
    Y = std::move(ny);
  }
  Poly<LocalRing> T;
  if (valuation(K, P, alpha0) >= ExtRational(0))
    T = poly::sub(W, X, poly::scale(W, Y, W.embed(alpha0)));
  else
    T = poly::sub(W, Y, poly::scale(W, X, W.embed(K.inv(alpha0))));
  std::vector<ExtRational> vals = valuations(W, T);
  const long N = total.get_si();
  vals.resize(static_cast<std::size_t>(N) + 1, ExtRational::infinity());
  OracleRun run;
  run.vm.precision = W.precision();
  NewtonPolygon np = newton_polygon(vals);
  run.leading_zero = np.zero_roots > 0;
  for (long i = 0; i < np.zero_roots; ++i) run.vm.values.push_back(ExtRational::infinity());
  for (const auto& v : np.root_valuations()) run.vm.values.push_back(ExtRational(v));
  run.vm.at_infinity = N - np.zero_roots - np.length();
  return run;
}

}  // namespace

ValuationMultiset iterate_valuation_oracle(const RationalMap& f, const PrimeSpec& P,
                                           const NFElem& alpha0, unsigned n,
                                           const std::optional<NFElem>& shift) {
  const NumberField& K = f.field();
  NFElem s = shift.value_or(K.zero());
  const bool inverted = valuation(K, P, s) < ExtRational(0);
  for (long B = kInitialPrecision; B <= kMaxPrecision; B *= 2) {
    LocalRing W(K, P, B);
    LocalPoint sp{inverted, inverted ? W.embed(K.inv(s)) : W.embed(s)};
    OracleRun run = oracle_run(f, P, alpha0, n, W, sp);
    if (!run.leading_zero) return run.vm;
    KPoint z{false, s};
    for (unsigned i = 0; i < n; ++i) z = apply(f, z);
    if (z == KPoint{false, alpha0}) return run.vm;  // genuine root at the shift
  }
  throw PrecisionExceeded("oracle: shift agrees with a preimage beyond precision " +
                              std::to_string(kMaxPrecision),
                          kMaxPrecision);
}

ValuationMultiset iterate_valuation_oracle(const RationalMap& f, const PrimeSpec& P,
                                           const NFElem& alpha0, unsigned n, const LocalRing& W,
                                           const LocalPoint& shift) {
  return oracle_run(f, P, alpha0, n, W, shift).vm;
}

// ---------------------------------------------------------------------------
// Tame bound

Integer tame_bound(std::size_t d) {
  Integer fact = 1;
  for (std::size_t i = 2; i <= d; ++i) fact *= static_cast<unsigned long>(i);
  Integer out = 1;
  for (std::size_t i = 0; i + 2 < 2 * d; ++i) out *= fact;
  return out;
}

bool tame_bound_check(const RationalMap& f, const PrimeSpec& P,
                      const std::vector<Integer>& denominators) {
  ReducedMap r = reduce_map(f, P);
  if (regime(r) != Regime::TAME)
    throw PreconditionError("tame bound needs the tame regime (p > d, height 0)");
  if (has_directed_cycle(r).found)
    throw PreconditionError("tame bound needs no directed cycle at " + P.label());
  const Integer bound = tame_bound(f.degree);
  for (const auto& q : denominators)
    if (!mpz_divisible_p(bound.get_mpz_t(), q.get_mpz_t())) return false;
  return true;
}

bool tame_bound_check(const RationalMap& f, const PrimeSpec& P, const BranchSimRec& sim) {
  std::vector<Integer> den;
  for (const auto& s : sim.steps) den.push_back(s.certificate);
  for (const auto& l : sim.levels)
    for (const auto& v : l.on_disk) den.push_back(denominator(v));
  return tame_bound_check(f, P, den);
}

// ---------------------------------------------------------------------------
// Collision recipe

NFElem lift_residue(const NumberField& K, const PrimeSpec& P, const ResidueField::Elem& a) {
  std::vector<Rational> c(K.degree(), Rational(0));
  for (std::size_t i = 0; i < a.size() && i < c.size(); ++i)
    c[i] = Rational(Integer(static_cast<unsigned long>(a[i])));
  (void)P;
  return K.from_coords(c);
}

RamifiedStep collision_recipe(const RationalMap& f, const PrimeSpec& P,
                              const CollisionVerdict& collision) {
  const NumberField& K = f.field();
  if (!collision.collision || !collision.witness)
    throw PreconditionError("collision recipe needs a collision witness");
  const ClosedPoint& w = *collision.witness;
  if (!w.infinite && w.degree() != 1)
    throw PreconditionError("collision witness is not rational over the residue field");
  ReducedMap r = reduce_map(f, P);
  PointField F = trivial_extension(P.field);
  PointMap pm = over(r, F);
  GeoPoint z{w.infinite, F.zero()};
  if (!w.infinite) z.z = F.embed(P.field.neg(w.minpoly[0]));
  std::optional<GeoPoint> q;
  for (std::size_t k = 0; k <= collision.depth + 1; ++k) {
    if (!z.infinite && pm.local_degree(z) >= 2) {
      q = z;
      break;
    }
    z = pm.apply(z);
  }
  if (!q) throw PreconditionError("no finite residual critical point on the witness orbit");
  NFElem s = lift_residue(K, P, q->z[0]);
  KPoint fs = apply(f, KPoint{false, s});
  if (fs.infinite) throw PreconditionError("critical lift maps to infinity");
  RamifiedStep out;
  out.shift = s;
  out.alpha0 = K.add(fs.x, K.from_rational(Rational(P.p_integer())));
  out.critical = closed_point(F, *q);
  out.oracle = iterate_valuation_oracle(f, P, out.alpha0, 1, s);
  for (const auto& v : out.oracle.positive())
    out.max_denominator = std::max(out.max_denominator, denominator(v));
  return out;
}

}  // namespace arbor
