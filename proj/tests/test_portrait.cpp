#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "arbor/portrait.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace arbor;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(ARBOR_SOURCE_DIR) + "/tests/golden/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RationalMap quad(std::shared_ptr<const NumberField> K, long c) {
  return polynomial_map(K, KPoly{K->from_int(c), K->zero(), K->one()});
}

RationalMap ratio(std::shared_ptr<const NumberField> K) {
  const NumberField& F = *K;
  return new_map(K, form::make(F, KPoly{F.from_int(7), F.zero(), F.one()}, 2),
                 form::make(F, KPoly{F.one(), F.zero(), F.one()}, 2));
}

// Cumulative pre-critical polynomial of x^2 + c through depth N, directly:
// x * f(x) * f^2(x) * ... (affine part; ∞ is a simple root of the form).
std::vector<oracle::ZP> quad_levels(long c, std::size_t N) {
  std::vector<oracle::ZP> out{{0, 1}};
  oracle::ZP f{c, 0, 1}, fk{0, 1};
  for (std::size_t k = 1; k <= N; ++k) {
    fk = oracle::compose(f, fk);
    out.push_back(fk);
  }
  return out;
}

// Levels of (x^2 + 7)/(x^2 + 1) as forms: level k+1 is the pullback of level k.
// The critical points are 0 and ∞ and neither is ever hit again.
std::vector<std::pair<oracle::ZP, std::size_t>> ratio_levels(std::size_t N) {
  const oracle::ZP A{7, 0, 1}, B{1, 0, 1};
  auto pull = [&](const oracle::ZP& P, std::size_t n) {
    oracle::ZP out;
    for (std::size_t i = 0; i < P.size(); ++i)
      out = oracle::add(out, oracle::scale(oracle::mul(oracle::pow(A, static_cast<unsigned>(i)),
                                                      oracle::pow(B, static_cast<unsigned>(n - i))),
                                           P[i]));
    return out;
  };
  // Level 0 is x * y (0 and ∞).
  std::vector<std::pair<oracle::ZP, std::size_t>> out{{{0, 1}, 2}};
  for (std::size_t k = 1; k <= N; ++k) out.push_back({pull(out.back().first, out.back().second), 2 * out.back().second});
  return out;
}

std::optional<std::size_t> first_collision(const std::vector<std::pair<oracle::ZP, std::size_t>>& lv, long p) {
  oracle::ZP C{1};
  std::size_t n = 0;
  for (std::size_t k = 0; k < lv.size(); ++k) {
    C = oracle::mul(C, lv[k].first);
    n += lv[k].second;
    if (oracle::repeated_root(C, n, p)) return k;
  }
  return std::nullopt;
}

}  // namespace

TEST(Portrait, QuadraticAtFiveGolden) {
  auto K = gen::rationals();
  PortraitRec r = portrait(quad(K, 1), primes_above(*K, 5)[0], PortraitOptions{2, true});
  EXPECT_EQ(export_dot(r), golden("x2p1_p5_depth2.dot"));
  ASSERT_TRUE(r.directed.found);
  ASSERT_EQ(r.directed.cycle.size(), 3u);
  std::vector<std::string> names;
  for (const auto& c : r.directed.cycle) names.push_back(point_name(r.prime.field, c));
  EXPECT_EQ(names, (std::vector<std::string>{"0", "1", "2"}));
  EXPECT_FALSE(r.collision.collision);
  EXPECT_EQ(r.collision.by_discriminant, std::optional<bool>(false));
  EXPECT_EQ(r.cumulative_degree, 8u);
}

TEST(Portrait, CollisionGoldens) {
  auto K = gen::rationals();
  PortraitRec a = portrait(quad(K, 7), primes_above(*K, 7)[0], PortraitOptions{1, true});
  EXPECT_EQ(export_dot(a), golden("x2p7_p7_depth1.dot"));
  EXPECT_TRUE(a.collision.collision);
  EXPECT_EQ(a.collision.depth, 1u);
  PortraitRec b = portrait(ratio(K), primes_above(*K, 5)[0], PortraitOptions{2, true});
  EXPECT_EQ(export_dot(b), golden("ratio_p5_depth2.dot"));
  EXPECT_FALSE(b.directed.found);
}

TEST(Portrait, PoweringMapRejected) {
  auto K = gen::rationals();
  EXPECT_THROW(precritical_form(quad(K, 0), 2), PreconditionError);
}

TEST(Portrait, DegreeCap) {
  auto K = gen::rationals();
  EXPECT_THROW(precritical_form(quad(K, 1), 13), ResourceError);
}

TEST(Gcr, RatioAtFive) {
  auto K = gen::rationals();
  const PrimeSpec P = primes_above(*K, 5)[0];
  std::ostringstream got;
  for (std::size_t N = 0; N <= 3; ++N) got << N << " " << to_string(good_critical_reduction(ratio(K), P, N)) << "\n";
  EXPECT_EQ(got.str(), golden("ratio_p5_gcr.txt"));
  EXPECT_EQ(first_collision(ratio_levels(3), 5), std::optional<std::size_t>(2));
}

TEST(Gcr, RatioCollisionsMatchOracle) {
  auto K = gen::rationals();
  RationalMap g = ratio(K);
  auto lv = ratio_levels(3);
  for (std::uint64_t p : primes_up_to(50)) {
    if (p <= 3) continue;
    const PrimeSpec P = primes_above(*K, p)[0];
    CollisionVerdict cv = has_collision(g, P, 3, true);
    auto expect = first_collision(lv, static_cast<long>(p));
    EXPECT_EQ(cv.collision, expect.has_value()) << p;
    if (expect) EXPECT_EQ(cv.depth, *expect) << p;
  }
}

TEST(Gcr, QuadraticCollisionsMatchOracle) {
  // Detector agreement and depth, against x f(x) f^2(x) ... mod p.
  gen::Gen g(53);
  auto K = gen::rationals();
  for (int it = 0; it < 40; ++it) {
    long c = g.range(-30, 30);
    if (c == 0 || c == -1) continue;
    const long p = g.pick(std::vector<long>{3, 5, 7, 11, 13, 17});
    auto levels = quad_levels(c, 3);
    std::vector<std::pair<oracle::ZP, std::size_t>> lv;
    for (std::size_t k = 0; k < levels.size(); ++k) lv.push_back({levels[k], levels[k].size() - 1 + (k == 0)});
    auto expect = first_collision(lv, p);
    CollisionVerdict cv = has_collision(quad(K, c), primes_above(*K, static_cast<std::uint64_t>(p))[0], 3, true);
    EXPECT_EQ(cv.collision, expect.has_value()) << c << " " << p;
    if (expect) EXPECT_EQ(cv.depth, *expect) << c << " " << p;
    ASSERT_TRUE(cv.by_discriminant.has_value());
    EXPECT_EQ(*cv.by_discriminant, cv.collision);
  }
}

TEST(Gcr, CollisionsAreMonotone) {
  gen::Gen g(59);
  auto K = gen::rationals();
  for (int it = 0; it < 25; ++it) {
    RationalMap f = g.map(K, 2, g.coin(), 4);
    const std::uint64_t p = static_cast<std::uint64_t>(g.pick(std::vector<long>{5, 7, 11}));
    const PrimeSpec P = primes_above(*K, p)[0];
    if (!good_reduction(f, P)) continue;
    try {
      std::optional<std::size_t> first;
      for (std::size_t N = 0; N <= 3; ++N) {
        CollisionVerdict cv = has_collision(f, P, N, true);
        if (first) {
          EXPECT_TRUE(cv.collision);
          EXPECT_EQ(cv.depth, *first);
        } else if (cv.collision) {
          first = cv.depth;
        }
      }
    } catch (const PreconditionError&) {
      // powering maps and relatives
    }
  }
}

TEST(DirectedCycle, ResidualOrbitOracle) {
  auto K = gen::rationals();
  for (long c = -12; c <= 12; ++c) {
    for (long p : {5L, 7L, 11L, 13L}) {
      auto dc = has_directed_cycle(quad(K, c), primes_above(*K, static_cast<std::uint64_t>(p))[0]);
      // ∞ is always a fixed critical point, but finite critical points come first.
      ASSERT_TRUE(dc.found);
      const bool zero_periodic = oracle::orbit({c, 0, 1}, {1}, 2, 0, p).first == 0;
      EXPECT_EQ(!dc.cycle.front().infinite, zero_periodic) << c << " " << p;
    }
  }
  auto r = has_directed_cycle(ratio(K), primes_above(*K, 5)[0]);
  EXPECT_FALSE(r.found);
}
