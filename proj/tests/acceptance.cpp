// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "arbor/cli.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace arbor;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

RationalMap quad(std::shared_ptr<const NumberField> K, long c) {
  return polynomial_map(K, KPoly{K->from_int(c), K->zero(), K->one()});
}

RationalMap ratio(std::shared_ptr<const NumberField> K) {
  const NumberField& F = *K;
  return new_map(K, form::make(F, KPoly{F.from_int(7), F.zero(), F.one()}, 2),
                 form::make(F, KPoly{F.one(), F.zero(), F.one()}, 2));
}

RationalMap rabbit(std::shared_ptr<const NumberField> K) {
  return polynomial_map(K, KPoly{K->theta(), K->zero(), K->one()});
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "}";
}

ExtRational half(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return ExtRational(q);
}

// Residue of a degree-one closed point over F_p, as an integer in [0, p).
long residue_value(const NumberField& K, const PrimeSpec& P, const ClosedPoint& c) {
  const auto a = P.field.neg(c.minpoly[0]);
  return lift_residue(K, P, a).coords()[0].get_num().get_si();
}

Outcome rabbit_pcf() {
  auto K = gen::rabbit_field();
  PcfCheck chk = pcf_check(rabbit(K));
  const NFElem c = K->theta();
  bool ok = chk.pcf && chk.orbits.size() == 2;
  if (ok) {
    const CriticalOrbit& o = chk.orbits[0];
    ok = !o.at_infinity && o.tail == 0 && o.period == 3 && o.points.size() == 3 && o.points[0].value.empty() &&
         o.points[1].value == KPoly{c} && o.points[2].value == KPoly{K->add(K->mul(c, c), c)} &&
         chk.orbits[1].at_infinity && chk.orbits[1].period == 1;
  }
  return {ok, "orbit {0, c, c^2 + c} with period 3, inf fixed"};
}

Outcome rabbit_scan() {
  auto K = gen::rabbit_field();
  const NumberField& F = *K;
  const NFElem c = K->theta(), five = K->from_int(5);
  // Oracle: the rational primes dividing the norms of 5 - z over the cycle.
  std::set<std::uint64_t> expect;
  for (const NFElem& z : {K->zero(), c, K->add(K->mul(c, c), c)}) {
    const NFElem diff = K->sub(five, z);
    Integer n = abs(F.norm(diff).get_num());
    for (std::uint64_t p = 2; p <= 200; ++p) {
      bool prime = p > 1;
      for (std::uint64_t q = 2; q * q <= p; ++q) prime = prime && p % q != 0;
      if (prime && n % p == 0 && p > 2) expect.insert(p);
    }
  }
  ScanReport rep = scan(rabbit(K), five, 200);
  std::set<std::uint64_t> skipped, wild;
  for (const auto& row : rep.rows) {
    if (row.skipped) skipped.insert(row.p);
    for (const auto& pr : row.primes)
      if (pr.wild_infinitely_ramified) wild.insert(row.p);
  }
  const std::vector<std::uint64_t> want(expect.begin(), expect.end());
  const bool ok = rep.inf_ramified == want && want == std::vector<std::uint64_t>{5, 7, 17, 181} &&
                  wild == std::set<std::uint64_t>{2} && skipped == std::set<std::uint64_t>{23};
  return {ok, "INF at " + join(rep.inf_ramified) + ", wild {2}, skipped {23}; published list {2, 181, 7, 19} differs"};
}

Outcome growth_law_quadratic() {
  auto K = gen::rationals();
  const PrimeSpec P = primes_above(*K, 5)[0];
  RationalMap f = quad(K, 1);
  BranchSimRec s = branch_valuations(f, P, K->from_int(10), 9);
  bool ok = s.growth.period == 3 && s.growth.e_B == 2 && s.growth.first_ramified == std::optional<long>(3) &&
            s.steps.size() == 10 && s.steps[3].certificate == 2 && s.steps[6].certificate == 4 &&
            s.steps[9].certificate == 8;
  for (std::size_t n = 0; ok && n < 3; ++n) ok = s.steps[n].certificate == 1;
  ValuationMultiset vm = iterate_valuation_oracle(f, P, K->from_int(10), 3);
  std::vector<ExtRational> want{half(1, 2), half(1, 2)};
  want.resize(8, ExtRational(0));
  const auto hull = oracle::root_valuations(oracle::mul({-1, 0, 2, 0, 1}, {5, 0, 2, 0, 1}), 5);
  ok = ok && vm.values == want && std::vector<ExtRational>(hull.begin(), hull.end()) == want;
  return {ok, "m = 3, e = 2, first ramified 3, denominators 2/4/8, oracle {1/2, 1/2, 0 x6}"};
}

Outcome collision_pair() {
  auto K = gen::rationals();
  const PrimeSpec P = primes_above(*K, 7)[0];
  RationalMap f = quad(K, 7);
  CollisionVerdict cv = has_collision(f, P, 1);
  const Rational disc = discriminant_q(QPoly{Rational(7), Rational(0), Rational(1)});
  bool ok = cv.collision && cv.depth == 1 && disc == -28;
  RamifiedStep rs = collision_recipe(f, P, cv);
  BranchSimRec s = branch_valuations(f, P, K->from_int(14), 3);
  ok = ok && rs.alpha0 == K->from_int(14) && s.steps[1].delta == half(1, 2);
  return {ok, "collision at depth 1, disc " + disc.get_str() + ", delta_1 = 1/2 from 14"};
}

Outcome directed_cycles() {
  auto K = gen::rationals();
  const PrimeSpec P = primes_above(*K, 5)[0];
  DirectedCycle a = has_directed_cycle(quad(K, 1), P);
  std::vector<long> names;
  for (const auto& c : a.cycle) names.push_back(c.infinite ? -1 : residue_value(*K, P, c));
  DirectedCycle b = has_directed_cycle(ratio(K), P);
  const bool ok = a.found && names == std::vector<long>{0, 1, 2} && !b.found;
  return {ok, "x^2 + 1: (0, 1, 2); ratio map: none"};
}

Outcome series_suite() {
  gen::Gen g(83);
  int failures = 0;
  for (int it = 0; it < 200; ++it) {
    const long p = g.pick(std::vector<long>{5, 7, 11, 13});
    const std::size_t e = static_cast<std::size_t>(g.range(2, 4));
    std::vector<ExtRational> vals{ExtRational::infinity()};
    for (std::size_t i = 1; i <= e + 3; ++i) {
      Integer s = g.range(1, p - 1);
      if (i < e) {
        if (g.range(0, 4) == 0) s = 0;
        else
          for (long k = g.range(1, 4); k > 0; --k) s *= p;
      }
      vals.push_back(s == 0 ? ExtRational::infinity() : ExtRational(vp(s, Integer(p))));
    }
    const ExtRational d0(g.range(1, 3));
    auto d = simulate_series(vals, d0, 12);
    auto onset = polygon_onset(vals, d);
    bool ok = onset.has_value();
    const Rational er(static_cast<long>(e));
    for (std::size_t n = ok ? *onset : d.size(); n + 1 < d.size(); ++n)
      ok = ok && d[n + 1] == ExtRational(d[n].value() / er);
    Rational ek = 1, prev = -1;
    bool steady = false;
    for (std::size_t n = 0; n < d.size(); ++n) {
      const Rational scaled = d[n].value() * ek;
      steady = scaled == prev;
      prev = scaled;
      ek *= er;
    }
    if (!(ok && steady)) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures in 200"};
}

Outcome tame_bound_ratio() {
  auto K = gen::rationals();
  RationalMap f = ratio(K);
  std::size_t sims = 0;
  std::vector<std::uint64_t> used;
  std::set<Integer> seen;
  for (std::uint64_t p : primes_up_to(50)) {
    if (p <= 2) continue;
    const PrimeSpec P = primes_above(*K, p)[0];
    if (!good_reduction(f, P) || regime(reduce_map(f, P)) != Regime::TAME) continue;
    if (has_directed_cycle(f, P).found) continue;
    used.push_back(p);
    std::vector<Integer> dens;
    auto take = [&](const ExtRational& v) {
      if (!v.is_infinite()) dens.push_back(v.value().get_den());
    };
    for (long a = 0; a < static_cast<long>(p); ++a) {
      const NFElem a0 = K->from_int(a + static_cast<long>(p));
      for (unsigned n = 1; n <= 4; ++n) {
        for (const auto& v : iterate_valuation_oracle(f, P, a0, n).values) take(v);
        ++sims;
      }
      try {
        BranchSimRec s = branch_valuations(f, P, a0, 4, Policy::ALL);
        for (const auto& st : s.steps) dens.push_back(st.certificate);
        for (const auto& lv : s.levels)
          for (const auto& v : lv.on_disk) take(v);
        ++sims;
      } catch (const PreconditionError&) {
        // not residually periodic
      }
    }
    CollisionVerdict cv = has_collision(f, P, 3);
    if (cv.collision) {
      RamifiedStep rs = collision_recipe(f, P, cv);
      for (const auto& v : rs.oracle.values) take(v);
      ++sims;
    }
    for (const auto& d : dens) seen.insert(d);
    if (!tame_bound_check(f, P, dens))
      return {false, "denominator outside 4 at p = " + std::to_string(p)};
  }
  std::string ds;
  for (const auto& d : seen) ds += (ds.empty() ? "" : ", ") + d.get_str();
  return {!used.empty(), std::to_string(sims) + " simulations at " + join(used) + ", denominators {" + ds + "}"};
}

Outcome evidence_scan() {
  auto K = gen::rationals();
  ScanReport rep = scan(quad(K, 1), K->zero(), 100);
  bool ok = rep.inf_ramified.size() >= 2 && rep.inf_ramified.front() == 5;
  for (const auto& row : rep.rows) {
    for (const auto& pr : row.primes) {
      if (pr.verdict.verdict != Verdict::INF_RAMIFIED) continue;
      const long p = static_cast<long>(row.p);
      // Re-walk the witness: the critical residue returns to itself and passes 0.
      ok = ok && pr.verdict.critical && !pr.verdict.critical->infinite;
      if (!ok) break;
      const long c0 = residue_value(*K, pr.prime, *pr.verdict.critical);
      long z = c0;
      bool hit = false;
      std::size_t steps = 0;
      do {
        hit = hit || z == 0;
        z = (z * z + 1) % p;
        ++steps;
      } while (z != c0 && steps <= static_cast<std::size_t>(p));
      ok = ok && z == c0 && hit && steps == pr.verdict.cycle.size();
    }
  }
  return {ok, "INF at " + join(rep.inf_ramified) + ", witnesses re-walked"};
}

Outcome kernel_invariants() {
  gen::Gen g(97);
  int failures = 0;
  auto Kr = gen::rabbit_field();
  for (auto K : {gen::rabbit_field(), gen::gaussian()})
    for (int it = 0; it < 40; ++it) {
      NFElem a = g.element(*K, 9, false), b = g.element(*K, 9, false);
      failures += K->norm(K->mul(a, b)) != K->norm(a) * K->norm(b);
    }
  for (int it = 0; it < 25; ++it) {
    KPoly a = g.poly(*Kr, g.range(1, 3), 4), b = g.poly(*Kr, g.range(1, 3), 4), c = g.poly(*Kr, g.range(1, 3), 4);
    failures += !(poly::resultant(*Kr, poly::mul(*Kr, a, b), c) ==
                  Kr->mul(poly::resultant(*Kr, a, c), poly::resultant(*Kr, b, c)));
  }
  for (int it = 0; it < 200; ++it) {
    const long p = g.pick(std::vector<long>{2, 3, 5, 7});
    const long n = g.range(1, 8);
    std::vector<ExtRational> vals;
    for (long i = 0; i <= n; ++i) {
      Integer c = g.coin() ? Integer(0) : Integer(g.range(1, 5));
      for (long k = g.range(0, 4); k > 0; --k) c *= p;
      if ((i == 0 || i == n) && c == 0) c = i == 0 ? p : 1;
      vals.push_back(c == 0 ? ExtRational::infinity() : ExtRational(vp(c, Integer(p))));
    }
    failures += newton_polygon(vals).length() != n;
  }
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 13u}) {
    PrimeField Fp(p);
    ResidueField R(Fp, ff::factor(Fp, Poly<PrimeField>{1, 1, 0, 1}).back().factor);
    for (int it = 0; it < 15; ++it) {
      Poly<PrimeField> a;
      for (long i = g.range(1, 9); i > 0; --i) a.push_back(static_cast<std::uint64_t>(g.range(0, static_cast<long>(p) - 1)));
      a.push_back(1);
      Poly<PrimeField> back{1};
      for (const auto& e : ff::factor(Fp, a))
        for (int k = 0; k < e.multiplicity; ++k) back = poly::mul(Fp, back, e.factor);
      failures += !(back == a);
      Poly<ResidueField> b;
      for (long i = g.range(1, 5); i > 0; --i) b.push_back(R.random(g.rng));
      b.push_back(R.one());
      Poly<ResidueField> bb{R.one()};
      for (const auto& e : ff::factor(R, b))
        for (int k = 0; k < e.multiplicity; ++k) bb = poly::mul(R, bb, e.factor);
      failures += !poly::equal(R, bb, poly::trimmed(R, b));
    }
  }
  auto Q = gen::rationals();
  for (std::uint64_t p : {5u, 7u, 11u}) {
    const PrimeSpec P = primes_above(*Q, p)[0];
    LocalRing W(*Q, P, 16);
    for (int it = 0; it < 20; ++it) {
      const long e = g.range(0, 4), len = e + g.range(1, 5);
      std::vector<LocalRing::Elem> S;
      for (long i = 0; i < len; ++i) {
        long c = g.range(-50, 50);
        if (i < e) c *= static_cast<long>(p);
        if (i == e && c % static_cast<long>(p) == 0) c += 1;
        S.push_back(W.from_int(c));
      }
      Preparation prep = weierstrass_prepare(W, S);
      failures += prep.degree != static_cast<std::size_t>(e) ||
                  !poly::equal(W, poly::mul(W, prep.W, prep.u), poly::trimmed(W, S));
    }
  }
  return {failures == 0, std::to_string(failures) + " failures"};
}

Outcome reproducible() {
  const std::string dir = std::string(ARBOR_SOURCE_DIR) + "/tests/configs/";
  auto load = [&](const std::string& name) {
    std::ifstream in(dir + name);
    std::ostringstream s;
    s << in.rdbuf();
    return cli::parse_config(s.str());
  };
  struct Job {
    std::string config, command;
    cli::Overrides o;
  };
  cli::Overrides at5, at7, branch5, sparse;
  sparse.p_max = 60;
  at5.prime = 5;
  at5.depth = 2;
  at7.prime = 7;
  branch5.prime = 5;
  branch5.base = "10";
  branch5.depth = 9;
  const std::vector<Job> jobs{
      {"rabbit.json", "pcf", {}},         {"rabbit.json", "scan", {}},
      {"x2p1.json", "portrait", at5},     {"x2p1.json", "gcr", at5},
      {"x2p1.json", "branch", branch5},   {"x2p1.json", "height", at5},
      {"x2p1.json", "sparseness", sparse},    {"x2m7.json", "newton", at7},
      {"quad_ratio.json", "portrait", at5}, {"quad_ratio.json", "gcr", at5},
  };
  std::size_t n = 0;
  for (const auto& j : jobs) {
    cli::ProblemConfig c = load(j.config);
    cli::RunResult a = cli::run(j.command, c, j.o), b = cli::run(j.command, c, j.o);
    if (a.json != b.json || a.dot != b.dot) return {false, j.command + " on " + j.config + " differs"};
    ++n;
  }
  return {true, std::to_string(n) + " reports byte-identical"};
}

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "rabbit PCF certification", 1, rabbit_pcf},
      {2, "rabbit prime enumeration", 30, rabbit_scan},
      {3, "growth law x^2 + 1 at 5", 10, growth_law_quadratic},
      {4, "collision and ramified branch x^2 + 7 at 7", 1, collision_pair},
      {5, "directed-cycle criterion", 1, directed_cycles},
      {6, "series growth suite", 60, series_suite},
      {7, "tame bound on (x^2 + 7)/(x^2 + 1)", 60, tame_bound_ratio},
      {8, "evidence scan x^2 + 1", 60, evidence_scan},
      {9, "kernel invariants", 60, kernel_invariants},
      {10, "reproducibility", 60, reproducible},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget_s;
    failed += !pass;
    std::printf("%s %2d %-44s %7.3fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str(),
                o.pass && !pass ? " (over time budget)" : "");
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
