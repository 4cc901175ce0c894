#pragma once

// Slow, direct reference computations used to freeze expected values.
// Nothing here calls into the library.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using Z = mpz_class;
using Q = mpq_class;
using ZP = std::vector<Z>;  // ascending

inline void trim(ZP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline ZP add(const ZP& a, const ZP& b) {
  ZP c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  trim(c);
  return c;
}

inline ZP mul(const ZP& a, const ZP& b) {
  if (a.empty() || b.empty()) return {};
  ZP c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  trim(c);
  return c;
}

inline ZP scale(const ZP& a, const Z& s) {
  ZP c(a);
  for (auto& x : c) x *= s;
  trim(c);
  return c;
}

inline ZP pow(const ZP& a, unsigned e) {
  ZP r{1};
  for (unsigned i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

/// a(b(x)).
inline ZP compose(const ZP& a, const ZP& b) {
  ZP r;
  for (std::size_t i = a.size(); i-- > 0;) r = add(mul(r, b), ZP{a[i]});
  return r;
}

/// Determinant by cofactor-free Gaussian elimination over Q.
inline Q det(std::vector<std::vector<Q>> m) {
  const std::size_t n = m.size();
  Q d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Q f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

/// Sylvester determinant Res(a, b) for ascending coefficient lists of exact
/// degrees da = a.size()-1, db = b.size()-1.
inline Q sylvester(const std::vector<Q>& a, const std::vector<Q>& b) {
  const std::size_t da = a.size() - 1, db = b.size() - 1, n = da + db;
  if (n == 0) return 1;
  std::vector<std::vector<Q>> m(n, std::vector<Q>(n, 0));
  for (std::size_t r = 0; r < db; ++r)
    for (std::size_t i = 0; i <= da; ++i) m[r][r + i] = a[da - i];
  for (std::size_t r = 0; r < da; ++r)
    for (std::size_t i = 0; i <= db; ++i) m[db + r][r + i] = b[db - i];
  return det(m);
}

inline std::vector<Q> to_q(const ZP& a) { return std::vector<Q>(a.begin(), a.end()); }

inline long vp(Z n, unsigned long p) {
  if (n == 0) return 1L << 40;
  long v = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    n /= p;
    ++v;
  }
  return v;
}

/// Root valuations (descending) of an integer polynomial with nonzero
/// constant term, from the lower convex hull of (i, v_p(a_i)).
inline std::vector<Q> root_valuations(const ZP& a, unsigned long p) {
  std::vector<std::pair<long, long>> pts;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) pts.push_back({static_cast<long>(i), vp(a[i], p)});
  std::vector<std::pair<long, long>> hull;
  for (const auto& q : pts) {
    while (hull.size() >= 2) {
      auto [x1, y1] = hull[hull.size() - 2];
      auto [x2, y2] = hull.back();
      // Drop the middle point when it lies on or above the chord.
      if ((y2 - y1) * (q.first - x1) >= (q.second - y1) * (x2 - x1)) hull.pop_back();
      else break;
    }
    hull.push_back(q);
  }
  std::vector<Q> out;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    Q slope(hull[k + 1].second - hull[k].second, hull[k + 1].first - hull[k].first);
    slope.canonicalize();
    for (long i = hull[k].first; i < hull[k + 1].first; ++i) out.push_back(-slope);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polynomials over F_p with small p.

using FP = std::vector<long>;

inline void trim(FP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FP reduce(const ZP& a, long p) {
  FP r;
  for (const auto& c : a) {
    Z t = c % p;
    if (t < 0) t += p;
    r.push_back(t.get_si());
  }
  trim(r);
  return r;
}

inline long inv_mod(long a, long p) {
  long r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline FP rem(FP a, const FP& b, long p) {
  const long li = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    long c = a.back() * li % p;
    const std::size_t s = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = ((a[s + i] - c * b[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

inline FP gcd(FP a, FP b, long p) {
  while (!b.empty()) {
    FP r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline FP deriv(const FP& a, long p) {
  FP d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(static_cast<long>(i) * a[i] % p);
  trim(d);
  return d;
}

/// Repeated root of a projective form of formal degree n over F_p
/// (∞ counted by the degree drop).
inline bool repeated_root(const ZP& a, std::size_t n, long p) {
  FP r = reduce(a, p);
  if (r.empty()) return true;
  if (n - (r.size() - 1) >= 2) return true;
  return gcd(r, deriv(r, p), p).size() > 1;
}

/// Orbit of a residue (p means ∞) under x -> A(x)/B(x) with integer
/// polynomials, by brute force. Returns (tail length, period).
inline std::pair<std::size_t, std::size_t> orbit(const ZP& A, const ZP& B, std::size_t d, long x,
                                                 long p) {
  auto ev = [&](const ZP& f, long t) {
    Z acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * t + f[i];
    Z r = acc % p;
    if (r < 0) r += p;
    return r.get_si();
  };
  auto lead = [&](const ZP& f) {
    Z c = f.size() == d + 1 ? f[d] : Z(0);
    Z r = c % p;
    if (r < 0) r += p;
    return r.get_si();
  };
  std::map<long, std::size_t> seen;
  std::vector<long> path;
  while (!seen.count(x)) {
    seen[x] = path.size();
    path.push_back(x);
    long a, b;
    if (x == p) {
      a = lead(A);
      b = lead(B);
    } else {
      a = ev(A, x);
      b = ev(B, x);
    }
    x = b == 0 ? p : a * inv_mod(b, p) % p;
  }
  return {seen[x], path.size() - seen[x]};
}

}  // namespace oracle
