#include <gtest/gtest.h>

#include "arbor/binary_form.hpp"
#include "arbor/number_field.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace arbor;

namespace {

QPoly qpoly(const std::vector<long>& c) {
  QPoly p;
  for (long v : c) p.push_back(Rational(v));
  return p;
}

std::vector<Rational> qvec(const QPoly& p) { return std::vector<Rational>(p.begin(), p.end()); }

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(to_string(parse_rational("-6/4")), "-3/2");
  EXPECT_EQ(to_string(parse_rational("7")), "7");
  EXPECT_THROW(parse_rational("1.5"), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("1/-2"), ParseError);
  EXPECT_EQ(vp(Rational(50, 3), Integer(5)), 2);
  EXPECT_EQ(vp(Rational(2, 25), Integer(5)), -2);
  EXPECT_EQ(to_string(ExtRational::infinity()), "inf");
  EXPECT_LT(ExtRational(Rational(1, 2)), ExtRational::infinity());
}

TEST(Poly, DivisionAndGcd) {
  RationalField Qf;
  QPoly a = qpoly({-1, 0, 0, 1}), b = qpoly({-1, 1});
  auto [q, r] = poly::divmod(Qf, a, b);
  EXPECT_TRUE(r.empty());
  EXPECT_TRUE(poly::equal(Qf, q, qpoly({1, 1, 1})));
  EXPECT_TRUE(poly::equal(Qf, poly::gcd(Qf, a, qpoly({-1, 0, 1})), b));
}

TEST(Resultant, FrozenAgainstSylvester) {
  RationalField Qf;
  // Res(x^2 + 1, x - 2) = 5 and Res(x^2 + 7, 2x) = 28 by the determinant.
  struct Case {
    std::vector<long> a, b;
  } cases[] = {{{1, 0, 1}, {-2, 1}}, {{7, 0, 1}, {0, 2}}, {{1, 1, 2, 1}, {1, 4, 3}}};
  for (const auto& c : cases) {
    QPoly a = qpoly(c.a), b = qpoly(c.b);
    EXPECT_EQ(poly::resultant(Qf, a, b), oracle::sylvester(qvec(a), qvec(b)));
  }
  EXPECT_EQ(oracle::sylvester(qvec(qpoly({1, 0, 1})), qvec(qpoly({-2, 1}))), 5);
  EXPECT_EQ(oracle::sylvester(qvec(qpoly({7, 0, 1})), qvec(qpoly({0, 2}))), 28);
}

TEST(Resultant, RandomMatchesSylvester) {
  gen::Gen g(11);
  RationalField Qf;
  for (int it = 0; it < 60; ++it) {
    QPoly a, b;
    const long da = g.range(1, 5), db = g.range(1, 5);
    for (long i = 0; i <= da; ++i) a.push_back(g.rational());
    for (long i = 0; i <= db; ++i) b.push_back(g.rational());
    if (a.back() == 0) a.back() = 1;
    if (b.back() == 0) b.back() = -2;
    EXPECT_EQ(poly::resultant(Qf, a, b), oracle::sylvester(qvec(a), qvec(b)));
  }
}

TEST(NumberField, RabbitNorms) {
  auto K = gen::rabbit_field();
  EXPECT_EQ(K->degree(), 3u);
  EXPECT_EQ(abs(K->poly_discriminant()), 23);
  const NFElem c = K->theta();
  // N(5 - c) = m(5) for monic m.
  EXPECT_EQ(K->norm(K->sub(K->from_int(5), c)), 181);
  std::vector<Rational> m{1, 1, 2, 1};
  // N(c^2 + c - 5) and N(c^2 + 2c + 3) as Sylvester determinants with m.
  Rational n1 = oracle::sylvester(m, {-5, 1, 1});
  Rational n2 = oracle::sylvester(m, {3, 2, 1});
  EXPECT_EQ(abs(n1), 119);
  EXPECT_EQ(abs(n2), 17);
  NFElem c2 = K->mul(c, c);
  EXPECT_EQ(K->norm(K->add(K->add(c2, c), K->from_int(-5))), n1);
  EXPECT_EQ(K->norm(K->add(K->add(c2, K->scale(c, 2)), K->from_int(3))), n2);
  // The rabbit parameter satisfies c^3 + 2c^2 + c + 1 = 0.
  NFElem m_at_c = K->add(K->add(K->mul(c2, c), K->scale(c2, 2)), K->add(c, K->one()));
  EXPECT_TRUE(m_at_c.is_zero());
}

TEST(NumberField, InverseAndIrreducibility) {
  auto K = gen::rabbit_field();
  gen::Gen g(3);
  for (int it = 0; it < 20; ++it) {
    NFElem a = g.element(*K, 9, false);
    if (a.is_zero()) continue;
    EXPECT_EQ(K->mul(a, K->inv(a)), K->one());
  }
  EXPECT_THROW(NumberField(std::vector<Integer>{-1, 0, 1}), PreconditionError);
  EXPECT_TRUE(is_irreducible_over_q({1, 1, 2, 1}));
  EXPECT_FALSE(is_irreducible_over_q({-2, 1, -2, 1}));
}

TEST(NumberField, NormMultiplicative) {
  gen::Gen g(5);
  for (auto K : {gen::rabbit_field(), gen::gaussian()}) {
    for (int it = 0; it < 40; ++it) {
      NFElem a = g.element(*K, 9, false), b = g.element(*K, 9, false);
      EXPECT_EQ(K->norm(K->mul(a, b)), K->norm(a) * K->norm(b));
    }
  }
}

TEST(NumberField, ResultantMultiplicative) {
  gen::Gen g(7);
  auto K = gen::rabbit_field();
  for (int it = 0; it < 25; ++it) {
    KPoly a = g.poly(*K, g.range(1, 3), 4), b = g.poly(*K, g.range(1, 3), 4),
          c = g.poly(*K, g.range(1, 3), 4);
    NFElem lhs = poly::resultant(*K, poly::mul(*K, a, b), c);
    NFElem rhs = K->mul(poly::resultant(*K, a, c), poly::resultant(*K, b, c));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Integers, Factorization) {
  auto f = factor_integer(Integer(-119));
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0].first, 7);
  EXPECT_EQ(f.factors[1].first, 17);
  EXPECT_TRUE(f.complete());
  gen::Gen g(9);
  for (int it = 0; it < 30; ++it) {
    Integer n = Integer(g.range(2, 1000000)) * Integer(g.range(2, 1000000));
    auto fz = factor_integer(n);
    Integer back = 1;
    for (const auto& [p, e] : fz.factors) {
      EXPECT_TRUE(is_probable_prime(p));
      for (unsigned i = 0; i < e; ++i) back *= p;
    }
    EXPECT_EQ(back, n);
  }
  EXPECT_EQ(discriminant_q(qpoly({1, 1, 2, 1})), -23);
}

TEST(FiniteField, FactorSmall) {
  PrimeField F5(5);
  Poly<PrimeField> a{1, 0, 1};
  auto fs = ff::factor(F5, a);
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0].factor, (Poly<PrimeField>{2, 1}));
  EXPECT_EQ(fs[1].factor, (Poly<PrimeField>{3, 1}));
  // x^2 + 2 stays irreducible mod 5.
  EXPECT_EQ(ff::factor(F5, Poly<PrimeField>{2, 0, 1}).size(), 1u);
}

TEST(FiniteField, FactorRemultiplies) {
  gen::Gen g(13);
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 13u}) {
    PrimeField Fp(p);
    ResidueField R(Fp, ff::factor(Fp, Poly<PrimeField>{1, 1, 0, 1}).back().factor);
    for (int it = 0; it < 15; ++it) {
      Poly<PrimeField> a;
      const long d = g.range(1, 9);
      for (long i = 0; i < d; ++i) a.push_back(static_cast<std::uint64_t>(g.range(0, static_cast<long>(p) - 1)));
      a.push_back(1);
      Poly<PrimeField> back{1};
      for (const auto& e : ff::factor(Fp, a))
        for (int k = 0; k < e.multiplicity; ++k) back = poly::mul(Fp, back, e.factor);
      EXPECT_EQ(back, a);

      Poly<ResidueField> b;
      for (long i = 0; i < g.range(1, 5); ++i) b.push_back(R.random(g.rng));
      b.push_back(R.one());
      Poly<ResidueField> bb{R.one()};
      for (const auto& e : ff::factor(R, b))
        for (int k = 0; k < e.multiplicity; ++k) bb = poly::mul(R, bb, e.factor);
      EXPECT_TRUE(poly::equal(R, bb, poly::trimmed(R, b)));
    }
  }
}

TEST(Forms, DiscriminantAndInfinity) {
  auto K = gen::rationals();
  // x^2 + 7 as a degree-3 form has a simple root at ∞.
  KForm F = form::make(*K, KPoly{K->from_int(7), K->zero(), K->one()}, 3);
  EXPECT_EQ(F.infinity_multiplicity(), 1u);
  KForm G = form::make(*K, KPoly{K->from_int(7), K->zero(), K->one()}, 2);
  EXPECT_EQ(form::discriminant(*K, G), K->from_int(-28));
}
