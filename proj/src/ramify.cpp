#include <algorithm>
#include <atomic>
#include <deque>
#include <set>
#include <thread>

#include "arbor/error.hpp"
#include "arbor/ramify.hpp"

namespace arbor {

// ---------------------------------------------------------------------------
// PCF orbits, by dynamic evaluation over K[x]/(h)

namespace {

struct Split {
  KPoly a, b;
};

std::size_t bit_size(const KPoly& a) {
  std::size_t bits = 0;
  for (const auto& c : a) {
    bits = std::max(bits, mpz_sizeinbase(c.den.get_mpz_t(), 2));
    for (const auto& x : c.num) bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
  }
  return bits;
}

KPoly eval_mod(const NumberField& K, const KPoly& p, const KPoly& z, const KPoly& h) {
  KPoly acc;
  for (std::size_t i = p.size(); i-- > 0;)
    acc = poly::add(K, poly::mulmod(K, acc, z, h), poly::constant(K, p[i]));
  return poly::rem(K, acc, h);
}

// Either an orbit for the whole component or a nontrivial splitting of h.
struct ComponentResult {
  std::optional<CriticalOrbit> orbit;
  std::optional<Split> split;
  bool inconclusive = false;
};

std::optional<Split> proper_split(const NumberField& K, const KPoly& h, const KPoly& v) {
  KPoly g = poly::gcd(K, h, v);
  if (g.size() <= 1 || g.size() == h.size()) return std::nullopt;
  return Split{g, *poly::exact_div(K, h, g)};
}

ComponentResult run_component(const RationalMap& f, const KPoly& h, std::size_t cap) {
  const NumberField& K = f.field();
  const KPoly& A = f.num.coeffs;
  const KPoly& B = f.den.coeffs;
  CriticalOrbit o;
  o.component = h;
  o.points.push_back(OrbitValue{false, poly::rem(K, poly::x(K), h)});
  const KPoint inf_image = apply(f, KPoint{true, K.zero()});
  for (std::size_t n = 0;; ++n) {
    const OrbitValue& zn = o.points[n];
    for (std::size_t j = 0; j < n; ++j) {
      const OrbitValue& zj = o.points[j];
      bool equal = false;
      if (zn.infinite || zj.infinite) {
        equal = zn.infinite && zj.infinite;
      } else {
        KPoly diff = poly::sub(K, zn.value, zj.value);
        if (diff.empty()) {
          equal = true;
        } else if (auto s = proper_split(K, h, diff)) {
          return ComponentResult{std::nullopt, s, false};
        }
      }
      if (equal) {
        o.points.pop_back();
        o.tail = j;
        o.period = n - j;
        o.finite = true;
        return ComponentResult{o, std::nullopt, false};
      }
    }
    if (n >= cap || (!zn.infinite && bit_size(zn.value) > kPcfBitsCap)) {
      return ComponentResult{o, std::nullopt, true};
    }
    OrbitValue next;
    if (zn.infinite) {
      next = inf_image.infinite ? OrbitValue{true, {}} : OrbitValue{false, poly::constant(K, inf_image.x)};
    } else {
      KPoly a = eval_mod(K, A, zn.value, h);
      KPoly b = eval_mod(K, B, zn.value, h);
      if (b.empty()) {
        next = OrbitValue{true, {}};
      } else if (auto s = proper_split(K, h, b)) {
        return ComponentResult{std::nullopt, s, false};
      } else {
        auto [g, inv, t] = poly::xgcd(K, b, h);
        (void)t;
        next = OrbitValue{false, poly::mulmod(K, a, inv, h)};
      }
    }
    o.points.push_back(std::move(next));
  }
}

bool poly_less(const KPoly& a, const KPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;)
    if (!(a[i] == b[i])) return a[i] < b[i];
  return false;
}

}  // namespace

PcfCheck pcf_check(const RationalMap& f, std::size_t step_cap) {
  const NumberField& K = f.field();
  CriticalData cd = critical_data(f);
  const KForm& S = cd.support;
  PcfCheck out;
  out.pcf = true;

  if (S.infinity_multiplicity() > 0) {
    CriticalOrbit o;
    o.at_infinity = true;
    std::vector<KPoint> pts{KPoint{true, K.zero()}};
    bool done = false;
    for (std::size_t n = 0; n <= step_cap && !done; ++n) {
      KPoint z = apply(f, pts.back());
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (pts[j] == z) {
          o.tail = j;
          o.period = pts.size() - j;
          o.finite = done = true;
          break;
        }
      if (!done) {
        if (!z.infinite && bit_size(KPoly{z.x}) > kPcfBitsCap) break;
        pts.push_back(z);
      }
    }
    for (const auto& z : pts)
      o.points.push_back(z.infinite ? OrbitValue{true, {}} : OrbitValue{false, poly::constant(K, z.x)});
    if (!o.finite) out.inconclusive = true;
    out.orbits.push_back(std::move(o));
  }

  std::vector<CriticalOrbit> finite;
  if (S.coeffs.size() > 1) {
    std::deque<KPoly> work;
    KPoly h0 = poly::monic(K, S.coeffs);
    // Separate the root 0 so that c is a unit on every other component.
    if (auto s = proper_split(K, h0, poly::x(K))) {
      work.push_back(s->a);
      work.push_back(s->b);
    } else {
      work.push_back(h0);
    }
    while (!work.empty()) {
      KPoly h = std::move(work.front());
      work.pop_front();
      ComponentResult r = run_component(f, h, step_cap);
      if (r.split) {
        work.push_back(poly::monic(K, r.split->a));
        work.push_back(poly::monic(K, r.split->b));
        continue;
      }
      if (r.inconclusive) out.inconclusive = true;
      finite.push_back(std::move(*r.orbit));
    }
  }
  std::sort(finite.begin(), finite.end(),
            [](const CriticalOrbit& a, const CriticalOrbit& b) { return poly_less(a.component, b.component); });
  for (auto& o : finite) out.orbits.push_back(std::move(o));
  std::rotate(out.orbits.begin(),
              out.orbits.begin() + (S.infinity_multiplicity() > 0 ? 1 : 0), out.orbits.end());
  if (out.inconclusive) {
    out.pcf = false;
    out.note = "not PCF within cap (" + std::to_string(step_cap) + " steps, " +
               std::to_string(kPcfBitsCap) + " bits)";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Δ_f and primes

namespace {

std::vector<std::uint64_t> small_primes_of(const Integer& n, std::set<std::uint64_t>& acc,
                                           IntegerFactorization* keep) {
  std::vector<std::uint64_t> out;
  if (n == 0 || n == 1 || n == -1) return out;
  IntegerFactorization fz = factor_integer(n);
  for (const auto& [q, e] : fz.factors)
    if (q.fits_ulong_p()) {
      acc.insert(q.get_ui());
      out.push_back(q.get_ui());
    }
  if (keep) *keep = fz;
  return out;
}

}  // namespace

PcfReport pcf_primes(const RationalMap& f) { return pcf_primes(f, pcf_check(f)); }

PcfReport pcf_primes(const RationalMap& f, PcfCheck check) {
  const NumberField& K = f.field();
  if (!check.pcf) throw PreconditionError("map is not certified PCF: " + check.note);
  PcfReport rep;
  std::set<std::uint64_t> cand;
  for (std::size_t i = 0; i < check.orbits.size(); ++i) {
    const CriticalOrbit& o = check.orbits[i];
    const std::size_t len = o.points.size();
    std::vector<std::size_t> ns;
    for (std::size_t n = 1; n < len; ++n) ns.push_back(n);
    if (o.tail == 0) ns.push_back(o.period);  // f^period(c) = c
    for (std::size_t n : ns) {
      DeltaEntry e;
      e.orbit = i;
      e.n = n;
      const OrbitValue& c = o.points[0];
      const OrbitValue& z = n < len ? o.points[n] : o.points[0];
      if (n == len) {
        e.zero = true;
      } else if (!c.infinite && !z.infinite) {
        e.value = poly::sub(K, c.value, z.value);
        e.zero = e.value.empty();
      } else if (c.infinite && z.infinite) {
        e.zero = true;
      } else {
        // Distance to ∞ in the chart 1/x: primes where the finite side is not integral.
        const KPoly& y = c.infinite ? z.value : c.value;
        if (y.empty()) {
          e.unit = true;
        } else if (o.at_infinity) {
          e.value = poly::constant(K, K.inv(y[0]));
        } else {
          auto [g, inv, t] = poly::xgcd(K, y, o.component);
          (void)t;
          e.value = inv;
        }
      }
      if (!e.zero && !e.unit) {
        NFElem r = o.at_infinity ? (e.value.empty() ? K.zero() : e.value[0])
                                 : poly::resultant(K, o.component, e.value);
        e.norm = K.norm(r);
        small_primes_of(e.norm.get_num(), cand, &e.factorization);
        IntegerFactorization dummy;
        small_primes_of(e.norm.get_den(), cand, nullptr);
      }
      if (e.zero) rep.all_primes = true;
      rep.delta.push_back(std::move(e));
    }
  }
  rep.candidate_primes.assign(cand.begin(), cand.end());
  for (std::uint64_t p = 2; p <= f.degree; ++p)
    if (is_probable_prime(Integer(static_cast<unsigned long>(p)))) rep.wild_primes.push_back(p);
  std::set<std::uint64_t> bad;
  Rational nres = K.norm(map_resultant(f));
  small_primes_of(nres.get_num(), bad, nullptr);
  small_primes_of(nres.get_den(), bad, nullptr);
  rep.bad_primes.assign(bad.begin(), bad.end());
  std::set<std::uint64_t> skip;
  small_primes_of(K.poly_discriminant(), skip, nullptr);
  rep.skipped_primes.assign(skip.begin(), skip.end());
  // Prime-power degree PCF polynomials are infinitely (wildly) ramified at p | d.
  if (f.is_polynomial()) {
    auto fz = factor_integer(Integer(static_cast<unsigned long>(f.degree)));
    rep.wild_infinitely_ramified = fz.factors.size() == 1;
  }
  if (rep.all_primes)
    rep.note = "a critical point is periodic: every tame good prime qualifies for suitable base points";
  rep.check = std::move(check);
  return rep;
}

// ---------------------------------------------------------------------------
// Base point verdicts

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::INF_RAMIFIED: return "INF_RAMIFIED";
    case Verdict::NO_INF_RAMIFICATION: return "NO_INF_RAMIFICATION";
    case Verdict::WILD_REGIME: return "WILD_REGIME";
    case Verdict::BAD_REDUCTION: return "BAD_REDUCTION";
  }
  return "?";
}

namespace {

BasepointVerdict verdict_reduced(const NumberField& K, const ReducedMap& r, const NFElem& alpha0,
                                 const PrimeSpec& P) {
  BasepointVerdict out;
  if (r.p <= r.degree || height_and_untwist(r).height > 0) {
    out.verdict = Verdict::WILD_REGIME;
    return out;
  }
  ResidualPoint a = reduce_point(K, P, alpha0);
  auto crit = residual_critical_points(r);
  std::stable_partition(crit.begin(), crit.end(), [](const ClosedPoint& c) { return !c.infinite; });
  for (const auto& c : crit) {
    auto [F, z] = generic_point(r.field, c);
    ResidualOrbit o = residual_orbit(over(r, F), z);
    if (!o.purely_periodic()) continue;
    GeoPoint az{a.infinite, a.infinite ? F.zero() : F.embed(a.value)};
    if (std::find(o.cycle.begin(), o.cycle.end(), az) == o.cycle.end()) continue;
    out.verdict = Verdict::INF_RAMIFIED;
    out.critical = c;
    for (const auto& w : o.cycle) out.cycle.push_back(closed_point(F, w));
    return out;
  }
  out.verdict = Verdict::NO_INF_RAMIFICATION;
  return out;
}

}  // namespace

BasepointVerdict basepoint_verdict(const RationalMap& f, const NFElem& alpha0, const PrimeSpec& P) {
  if (!good_reduction(f, P)) return BasepointVerdict{Verdict::BAD_REDUCTION, std::nullopt, {}};
  return verdict_reduced(f.field(), reduce_map(f, P), alpha0, P);
}

// ---------------------------------------------------------------------------
// Scans

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> comp(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = true;
  }
  return out;
}

namespace {

ScanRow scan_prime(const RationalMap& f, const NFElem& alpha0, std::uint64_t p,
                   const std::optional<LevelForms>& lf, std::optional<std::uint64_t> wild_inf_prime) {
  const NumberField& K = f.field();
  ScanRow row;
  row.p = p;
  if (mpz_divisible_ui_p(K.poly_discriminant().get_mpz_t(), p)) {
    row.skipped = true;
    row.skip_reason = "ramified-or-nonmonogenic base prime: manual analysis required";
    return row;
  }
  for (const PrimeSpec& P : primes_above(K, p)) {
    PrimeRow pr{P, false, 0, Regime::WILD, std::nullopt, std::nullopt, {}, {}, false};
    pr.good = good_reduction(f, P);
    if (!pr.good) {
      pr.verdict.verdict = Verdict::BAD_REDUCTION;
      row.primes.push_back(std::move(pr));
      continue;
    }
    ReducedMap r = reduce_map(f, P);
    pr.height = height_and_untwist(r).height;
    pr.regime = regime(r);
    if (pr.height == 0) {
      DirectedCycle dc = has_directed_cycle(r);
      pr.directed = dc.found;
      for (const auto& c : dc.cycle) pr.directed_cycle.push_back(point_name(P.field, c));
      if (lf) {
        CollisionVerdict cv = collision_from_levels(f, P, *lf, false);
        if (cv.collision) pr.collision_depth = cv.depth;
      }
    }
    pr.verdict = verdict_reduced(K, r, alpha0, P);
    pr.wild_infinitely_ramified = wild_inf_prime && *wild_inf_prime == p;
    row.primes.push_back(std::move(pr));
  }
  return row;
}

}  // namespace

ScanReport scan(const RationalMap& f, const NFElem& alpha0, std::uint64_t p_max, std::size_t depth,
                unsigned threads) {
  ScanReport rep{alpha0, p_max, depth, {}, {}};
  std::optional<LevelForms> lf;
  try {
    lf = precritical_form(f, depth);
  } catch (const PreconditionError&) {
  } catch (const ResourceError&) {
  }
  std::optional<std::uint64_t> wild_inf;
  if (f.is_polynomial()) {
    auto fz = factor_integer(Integer(static_cast<unsigned long>(f.degree)));
    if (fz.factors.size() == 1 && pcf_check(f).pcf) wild_inf = fz.factors[0].first.get_ui();
  }
  const auto primes = primes_up_to(p_max);
  rep.rows.resize(primes.size());
  if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(primes.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(primes.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < primes.size(); i = next++) {
      try {
        rep.rows[i] = scan_prime(f, alpha0, primes[i], lf, wild_inf);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& row : rep.rows)
    for (const auto& pr : row.primes)
      if (pr.verdict.verdict == Verdict::INF_RAMIFIED) {
        rep.inf_ramified.push_back(row.p);
        break;
      }
  return rep;
}

std::vector<SparseHit> sparseness_scan(const RationalMap& f, const NFElem& c, const NFElem& alpha0,
                                       std::uint64_t p_max, std::size_t depth) {
  const NumberField& K = f.field();
  std::vector<SparseHit> out;
  if (depth == 0) return out;
  // Norm numerators of the two families; zero entries are divisible by everything.
  std::vector<std::optional<Integer>> fam1, fam2;
  KPoint z{false, c};
  for (std::size_t n = 1; n <= depth; ++n) {
    z = apply(f, z);
    if (z.infinite) {
      fam1.push_back(Integer(1));
      fam2.push_back(Integer(1));
      continue;
    }
    NFElem a = K.sub(z.x, c), b = K.sub(z.x, alpha0);
    fam1.push_back(a.is_zero() ? std::nullopt : std::optional<Integer>(K.norm(a).get_num()));
    fam2.push_back(b.is_zero() ? std::nullopt : std::optional<Integer>(K.norm(b).get_num()));
  }
  auto first_hit = [](const std::vector<std::optional<Integer>>& fam, std::uint64_t p) -> std::size_t {
    for (std::size_t i = 0; i < fam.size(); ++i)
      if (!fam[i] || mpz_divisible_ui_p(fam[i]->get_mpz_t(), p)) return i + 1;
    return 0;
  };
  for (std::uint64_t p : primes_up_to(p_max)) {
    const std::size_t n = first_hit(fam1, p), m = first_hit(fam2, p);
    if (n && m) out.push_back(SparseHit{p, n, m});
  }
  return out;
}

}  // namespace arbor
