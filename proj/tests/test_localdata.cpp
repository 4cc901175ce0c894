#include <gtest/gtest.h>

#include "arbor/newton.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace arbor;

TEST(Primes, AboveRabbitPrimes) {
  auto K = gen::rabbit_field();
  EXPECT_THROW(primes_above(*K, 23), PreconditionError);
  for (std::uint64_t p : {2u, 5u, 7u, 17u, 181u}) {
    auto Ps = primes_above(*K, p);
    std::size_t total = 0;
    for (const auto& P : Ps) {
      total += P.residue_degree;
      // g divides m mod p.
      oracle::FP m = oracle::reduce({1, 1, 2, 1}, static_cast<long>(p));
      oracle::FP g(P.factor.begin(), P.factor.end());
      for (auto& c : g) c %= static_cast<long>(p);
      EXPECT_TRUE(oracle::rem(m, g, static_cast<long>(p)).empty()) << P.label();
    }
    EXPECT_EQ(total, 3u) << p;
  }
}

TEST(Valuation, RabbitIdeals) {
  auto K = gen::rabbit_field();
  const NFElem a = K->sub(K->from_int(5), K->theta());
  long hits = 0;
  for (const auto& P : primes_above(*K, 181)) {
    ExtRational v = valuation(*K, P, a);
    if (v > ExtRational(0)) {
      EXPECT_EQ(v, ExtRational(1));
      EXPECT_EQ(P.residue_degree, 1u);
      ++hits;
    }
  }
  EXPECT_EQ(hits, 1);
  EXPECT_TRUE(valuation(*K, primes_above(*K, 5)[0], K->zero()).is_infinite());
}

TEST(Valuation, NormFormula) {
  // sum over P | p of f_P v_P(a) equals v_p(N(a)) at unramified p.
  gen::Gen g(21);
  for (auto K : {gen::rabbit_field(), gen::gaussian()}) {
    for (int it = 0; it < 30; ++it) {
      NFElem a = g.element(*K, 30, false);
      if (a.is_zero()) continue;
      for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u}) {
        if (mpz_divisible_ui_p(K->poly_discriminant().get_mpz_t(), p)) continue;
        Rational sum = 0;
        for (const auto& P : primes_above(*K, p))
          sum += valuation(*K, P, a).value() * static_cast<long>(P.residue_degree);
        EXPECT_EQ(sum, vp(K->norm(a), Integer(static_cast<unsigned long>(p))));
      }
    }
  }
}

TEST(LocalRing, UnitsInvert) {
  auto K = gen::rabbit_field();
  gen::Gen g(4);
  for (std::uint64_t p : {5u, 7u}) {
    for (const auto& P : primes_above(*K, p)) {
      LocalRing W(*K, P, 20);
      for (int it = 0; it < 10; ++it) {
        NFElem a = g.element(*K, 40);
        if (valuation(*K, P, a) != ExtRational(0)) continue;
        auto x = W.embed(a);
        EXPECT_EQ(W.mul(x, W.inv(x)), W.one());
      }
      EXPECT_EQ(W.valuation(W.from_int(static_cast<long>(p * p * 3))), 2);
    }
  }
}

TEST(Newton, SqrtSeven) {
  auto np = newton_polygon({ExtRational(1), ExtRational::infinity(), ExtRational(0)});
  ASSERT_EQ(np.segments.size(), 1u);
  EXPECT_EQ(np.segments[0].slope, Rational(-1, 2));
  EXPECT_EQ(np.segments[0].length, 2);
  EXPECT_EQ(np.root_valuations(), (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
}

TEST(Newton, MatchesHullOracle) {
  gen::Gen g(17);
  for (int it = 0; it < 200; ++it) {
    const long p = g.pick(std::vector<long>{2, 3, 5, 7});
    oracle::ZP a;
    const long n = g.range(1, 8);
    for (long i = 0; i <= n; ++i) {
      oracle::Z c = g.coin() ? oracle::Z(0) : oracle::Z(g.range(1, 5));
      for (long k = g.range(0, 4); k > 0; --k) c *= p;
      a.push_back(c);
    }
    a[0] = a[0] == 0 ? oracle::Z(p) : a[0];
    a.back() = a.back() == 0 ? oracle::Z(1) : a.back();
    std::vector<ExtRational> vals;
    for (const auto& c : a)
      vals.push_back(c == 0 ? ExtRational::infinity()
                            : ExtRational(vp(Integer(c), Integer(p))));
    NewtonPolygon np = newton_polygon(vals);
    EXPECT_EQ(np.root_valuations(), oracle::root_valuations(a, static_cast<unsigned long>(p)));
    // Horizontal length equals the degree when both ends are finite.
    EXPECT_EQ(np.length(), n);
  }
}

TEST(Newton, LeadingZeros) {
  auto np = newton_polygon({ExtRational::infinity(), ExtRational::infinity(), ExtRational(2),
                            ExtRational(0)});
  EXPECT_EQ(np.zero_roots, 2);
  EXPECT_EQ(np.length(), 1);
  EXPECT_EQ(weierstrass_degree({ExtRational(1), ExtRational(1), ExtRational(0)}), 2u);
  EXPECT_THROW(weierstrass_degree({ExtRational(1), ExtRational(2)}), ResourceError);
}

TEST(Weierstrass, Recombines) {
  gen::Gen g(23);
  auto K = gen::rationals();
  for (std::uint64_t p : {5u, 7u, 11u}) {
    const PrimeSpec P = primes_above(*K, p)[0];
    LocalRing W(*K, P, 16);
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
      EXPECT_EQ(prep.degree, static_cast<std::size_t>(e));
      EXPECT_TRUE(poly::equal(W, poly::mul(W, prep.W, prep.u), poly::trimmed(W, S)));
      ASSERT_EQ(prep.W.size(), static_cast<std::size_t>(e + 1));
      EXPECT_EQ(prep.W.back(), W.one());
      for (long i = 0; i < e; ++i) EXPECT_GE(W.valuation(prep.W[static_cast<std::size_t>(i)]), 1);
    }
  }
}
