#include <gtest/gtest.h>

#include "arbor/ramify.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace arbor;

namespace {

struct SeriesCase {
  long p = 5;
  std::size_t e = 2;
  std::vector<ExtRational> vals;
  ExtRational delta0;
};

// A monic-at-e integral series S(y) = sum s_i y^i with s_0 = 0, built from
// explicit p-adic integers so the valuations are those of real coefficients.
SeriesCase random_series(gen::Gen& g) {
  SeriesCase c;
  c.p = g.pick(std::vector<long>{5, 7, 11, 13});
  c.e = static_cast<std::size_t>(g.range(2, 4));
  c.vals.push_back(ExtRational::infinity());
  for (std::size_t i = 1; i <= c.e + 3; ++i) {
    Integer s = g.range(1, c.p - 1);
    if (i < c.e) {
      if (g.range(0, 4) == 0) {
        s = 0;
      } else {
        for (long k = g.range(1, 4); k > 0; --k) s *= c.p;
      }
    }
    c.vals.push_back(s == 0 ? ExtRational::infinity() : ExtRational(vp(s, Integer(c.p))));
  }
  Integer a0 = g.range(1, c.p - 1);
  for (long k = g.range(1, 3); k > 0; --k) a0 *= c.p;
  c.delta0 = ExtRational(vp(a0, Integer(c.p)));
  return c;
}

}  // namespace

TEST(SeriesGrowth, TwoHundredRandomSeries) {
  gen::Gen g(83);
  int failures = 0;
  for (int it = 0; it < 200; ++it) {
    SeriesCase c = random_series(g);
    const Rational e(static_cast<long>(c.e));
    auto d = simulate_series(c.vals, c.delta0, 12);
    auto onset = polygon_onset(c.vals, d);
    ASSERT_TRUE(onset.has_value()) << it;
    bool ok = true;
    // (a) the division law holds from the polygon onset on.
    for (std::size_t n = *onset; n + 1 < d.size(); ++n)
      ok = ok && d[n + 1] == ExtRational(d[n].value() / e);
    // (b) e^n delta_n is eventually constant.
    Rational ek = 1, prev = -1;
    std::size_t run = 0;
    for (std::size_t n = 0; n < d.size(); ++n) {
      Rational scaled = d[n].value() * ek;
      run = scaled == prev ? run + 1 : 0;
      prev = scaled;
      ek *= e;
    }
    ok = ok && run >= 1;
    // Before the onset each step is the top slope of the polygon, which an
    // independent hull over (0, delta), (i, v_i) reproduces.
    for (std::size_t n = 0; n + 1 < d.size(); ++n) {
      Rational best = -1;
      for (std::size_t i = 1; i <= c.e; ++i) {
        if (c.vals[i].is_infinite() || !(c.vals[i] < d[n])) continue;
        Rational slope = (d[n].value() - c.vals[i].value()) / Rational(static_cast<long>(i));
        if (slope > best) best = slope;
      }
      ok = ok && d[n + 1] == ExtRational(best);
    }
    if (!ok) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(BranchGrowth, RamificationIndexFromCriticalCycle) {
  gen::Gen g(89);
  auto K = gen::rationals();
  int checked = 0;
  for (int it = 0; it < 120 && checked < 30; ++it) {
    const long c = g.range(-20, 20), p = g.pick(std::vector<long>{5, 7, 11, 13, 17});
    if (c == 0) continue;
    const long z0 = g.range(0, p - 1);
    auto [tail, period] = oracle::orbit({c, 0, 1}, {1}, 2, z0, p);
    long z = z0;
    for (std::size_t i = 0; i < tail; ++i) z = ((z * z + c) % p + p) % p;
    // Local degree 2 exactly at residue 0 on the cycle.
    bool through_zero = false;
    long w = z;
    for (std::size_t i = 0; i < period; ++i) {
      through_zero = through_zero || w == 0;
      w = ((w * w + c) % p + p) % p;
    }
    std::optional<BranchSimRec> sim;
    try {
      sim = branch_valuations(polynomial_map(K, KPoly{K->from_int(c), K->zero(), K->one()}),
                            primes_above(*K, static_cast<std::uint64_t>(p))[0], K->from_int(z + p), 12);
    } catch (const PreconditionError&) {
      continue;
    }
    const BranchSimRec& s = *sim;
    EXPECT_EQ(s.growth.period, static_cast<long>(period));
    EXPECT_EQ(s.growth.e_B, through_zero ? 2 : 1);
    if (!through_zero) {
      EXPECT_FALSE(s.growth.first_ramified.has_value());
    } else {
      ASSERT_TRUE(s.growth.onset.has_value());
      for (std::size_t n = static_cast<std::size_t>(*s.growth.onset); n + period < s.steps.size(); ++n)
        EXPECT_EQ(s.steps[n + period].delta, ExtRational(s.steps[n].delta.value() / 2));
    }
    ++checked;
  }
  EXPECT_GE(checked, 20);
}
