#pragma once

// Dense univariate polynomials over a coefficient structure R.
//
// R is a small descriptor object (it may carry a modulus or a defining
// polynomial) exposing
//
//   using Elem;
//   Elem zero() const;  Elem one() const;  Elem from_int(long) const;
//   Elem add(a, b) const;  Elem sub(a, b) const;  Elem mul(a, b) const;
//   Elem neg(a) const;  bool is_zero(a) const;  bool equal(a, b) const;
//
// and, for the routines that divide, `Elem inv(a) const` (defined on
// units). A polynomial is a std::vector<Elem> in ascending degree with no
// trailing zero; the zero polynomial is the empty vector.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "arbor/rational.hpp"

namespace arbor {

template <class R>
using Poly = std::vector<typename R::Elem>;

template <class R>
concept CoefficientRing = requires(const R& r, const typename R::Elem& a) {
  { r.zero() } -> std::convertible_to<typename R::Elem>;
  { r.one() } -> std::convertible_to<typename R::Elem>;
  { r.add(a, a) } -> std::convertible_to<typename R::Elem>;
  { r.sub(a, a) } -> std::convertible_to<typename R::Elem>;
  { r.mul(a, a) } -> std::convertible_to<typename R::Elem>;
  { r.neg(a) } -> std::convertible_to<typename R::Elem>;
  { r.is_zero(a) } -> std::convertible_to<bool>;
  { r.from_int(1L) } -> std::convertible_to<typename R::Elem>;
};

namespace poly {

template <class R>
void trim(const R& r, Poly<R>& p) {
  while (!p.empty() && r.is_zero(p.back())) p.pop_back();
}

template <class R>
Poly<R> trimmed(const R& r, Poly<R> p) {
  trim(r, p);
  return p;
}

/// Degree; -1 for the zero polynomial.
template <class R>
long deg(const Poly<R>& p) {
  return static_cast<long>(p.size()) - 1;
}

template <class R>
Poly<R> constant(const R& r, const typename R::Elem& c) {
  if (r.is_zero(c)) return {};
  return {c};
}

/// The monomial x.
template <class R>
Poly<R> x(const R& r) {
  return {r.zero(), r.one()};
}

template <class R>
Poly<R> monomial(const R& r, const typename R::Elem& c, std::size_t k) {
  if (r.is_zero(c)) return {};
  Poly<R> p(k + 1, r.zero());
  p[k] = c;
  return p;
}

template <class R>
bool equal(const R& r, const Poly<R>& a, const Poly<R>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!r.equal(a[i], b[i])) return false;
  return true;
}

template <class R>
bool is_one(const R& r, const Poly<R>& a) {
  return a.size() == 1 && r.equal(a[0], r.one());
}

template <class R>
Poly<R> add(const R& r, const Poly<R>& a, const Poly<R>& b) {
  Poly<R> c(std::max(a.size(), b.size()), r.zero());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = r.add(c[i], b[i]);
  trim(r, c);
  return c;
}

template <class R>
Poly<R> sub(const R& r, const Poly<R>& a, const Poly<R>& b) {
  Poly<R> c(std::max(a.size(), b.size()), r.zero());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = r.sub(c[i], b[i]);
  trim(r, c);
  return c;
}

template <class R>
Poly<R> neg(const R& r, const Poly<R>& a) {
  Poly<R> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = r.neg(a[i]);
  return c;
}

template <class R>
Poly<R> scale(const R& r, const Poly<R>& a, const typename R::Elem& s) {
  if (r.is_zero(s)) return {};
  Poly<R> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = r.mul(a[i], s);
  trim(r, c);
  return c;
}

template <class R>
Poly<R> mul(const R& r, const Poly<R>& a, const Poly<R>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<R> c(a.size() + b.size() - 1, r.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (r.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = r.add(c[i + j], r.mul(a[i], b[j]));
  }
  trim(r, c);
  return c;
}

/// Product truncated mod x^n.
template <class R>
Poly<R> mul_trunc(const R& r, const Poly<R>& a, const Poly<R>& b,
                  std::size_t n) {
  if (a.empty() || b.empty() || n == 0) return {};
  Poly<R> c(std::min(n, a.size() + b.size() - 1), r.zero());
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (r.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j)
      c[i + j] = r.add(c[i + j], r.mul(a[i], b[j]));
  }
  trim(r, c);
  return c;
}

template <class R>
Poly<R> truncate(const R& r, Poly<R> a, std::size_t n) {
  if (a.size() > n) a.resize(n);
  trim(r, a);
  return a;
}

template <class R>
Poly<R> pow(const R& r, const Poly<R>& a, unsigned long e) {
  Poly<R> result{r.one()};
  Poly<R> base = a;
  while (e > 0) {
    if (e & 1UL) result = mul(r, result, base);
    e >>= 1;
    if (e > 0) base = mul(r, base, base);
  }
  return result;
}

/// Formal derivative.
template <class R>
Poly<R> derivative(const R& r, const Poly<R>& a) {
  if (a.size() <= 1) return {};
  Poly<R> d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i)
    d[i - 1] = r.mul(r.from_int(static_cast<long>(i)), a[i]);
  trim(r, d);
  return d;
}

template <class R>
typename R::Elem eval(const R& r, const Poly<R>& a, const typename R::Elem& x) {
  typename R::Elem acc = r.zero();
  for (std::size_t i = a.size(); i-- > 0;) acc = r.add(r.mul(acc, x), a[i]);
  return acc;
}

/// a(b(x)).
template <class R>
Poly<R> compose(const R& r, const Poly<R>& a, const Poly<R>& b) {
  Poly<R> acc;
  for (std::size_t i = a.size(); i-- > 0;)
    acc = add(r, mul(r, acc, b), constant(r, a[i]));
  return acc;
}

/// a(x + s).
template <class R>
Poly<R> taylor_shift(const R& r, const Poly<R>& a, const typename R::Elem& s) {
  Poly<R> c = a;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j)
      c[j - 1] = r.add(c[j - 1], r.mul(s, c[j]));
  trim(r, c);
  return c;
}

/// Division with remainder. The divisor's leading coefficient must be a
/// unit of R.
template <class R>
std::pair<Poly<R>, Poly<R>> divmod(const R& r, const Poly<R>& a,
                                   const Poly<R>& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  if (a.size() < b.size()) return {Poly<R>{}, a};
  const auto lc_inv = r.inv(b.back());
  Poly<R> rem = a;
  Poly<R> q(a.size() - b.size() + 1, r.zero());
  for (std::size_t k = q.size(); k-- > 0;) {
    const auto& top = rem[k + b.size() - 1];
    if (r.is_zero(top)) continue;
    auto c = r.mul(top, lc_inv);
    q[k] = c;
    for (std::size_t j = 0; j < b.size(); ++j)
      rem[k + j] = r.sub(rem[k + j], r.mul(c, b[j]));
  }
  rem.resize(b.size() - 1);
  trim(r, rem);
  trim(r, q);
  return {std::move(q), std::move(rem)};
}

template <class R>
Poly<R> rem(const R& r, const Poly<R>& a, const Poly<R>& b) {
  return divmod(r, a, b).second;
}

template <class R>
Poly<R> quo(const R& r, const Poly<R>& a, const Poly<R>& b) {
  return divmod(r, a, b).first;
}

/// Quotient a / b when b divides a exactly; nullopt otherwise.
template <class R>
std::optional<Poly<R>> exact_div(const R& r, const Poly<R>& a,
                                 const Poly<R>& b) {
  auto [q, rm] = divmod(r, a, b);
  if (!rm.empty()) return std::nullopt;
  return q;
}

template <class R>
Poly<R> monic(const R& r, const Poly<R>& a) {
  if (a.empty()) return a;
  return scale(r, a, r.inv(a.back()));
}

/// Monic gcd over a field; gcd(0, 0) = 0.
template <class R>
Poly<R> gcd(const R& r, Poly<R> a, Poly<R> b) {
  while (!b.empty()) {
    Poly<R> t = rem(r, a, monic(r, b));
    a = std::move(b);
    b = std::move(t);
  }
  return monic(r, a);
}

/// Returns (g, s, t) with s*a + t*b = g, g monic.
template <class R>
std::tuple<Poly<R>, Poly<R>, Poly<R>> xgcd(const R& r, const Poly<R>& a,
                                           const Poly<R>& b) {
  Poly<R> r0 = a, r1 = b;
  Poly<R> s0{r.one()}, s1;
  Poly<R> t0, t1{r.one()};
  while (!r1.empty()) {
    auto [q, rr] = divmod(r, r0, r1);
    Poly<R> s2 = sub(r, s0, mul(r, q, s1));
    Poly<R> t2 = sub(r, t0, mul(r, q, t1));
    r0 = std::move(r1);
    r1 = std::move(rr);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) return {r0, s0, t0};
  auto li = r.inv(r0.back());
  return {scale(r, r0, li), scale(r, s0, li), scale(r, t0, li)};
}

template <class R>
Poly<R> mulmod(const R& r, const Poly<R>& a, const Poly<R>& b,
               const Poly<R>& m) {
  return rem(r, mul(r, a, b), m);
}

/// a^e mod m.
template <class R>
Poly<R> powmod(const R& r, const Poly<R>& a, const Integer& e,
               const Poly<R>& m) {
  Poly<R> result = rem(r, Poly<R>{r.one()}, m);
  Poly<R> base = rem(r, a, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return result;
  for (std::size_t i = bits; i-- > 0;) {
    result = mulmod(r, result, result, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mulmod(r, result, base, m);
  }
  return result;
}

/// Resultant of polynomials of exact degrees deg a and deg b over a field,
/// in the Sylvester-determinant convention (a's rows first). Res(a, c) for
/// a constant c is c^{deg a}.
template <class R>
typename R::Elem resultant(const R& r, Poly<R> a, Poly<R> b) {
  if (a.empty() || b.empty()) return r.zero();
  typename R::Elem acc = r.one();
  // Res(a,b) = (-1)^{deg a deg b} Res(b,a); Res(b,a) = lc(b)^{da-dr} Res(b, a mod b).
  while (true) {
    const long da = deg<R>(a), db = deg<R>(b);
    if (db == 0) {
      typename R::Elem pw = r.one();
      for (long i = 0; i < da; ++i) pw = r.mul(pw, b[0]);
      return r.mul(acc, pw);
    }
    if (da == 0) {
      typename R::Elem pw = r.one();
      for (long i = 0; i < db; ++i) pw = r.mul(pw, a[0]);
      return r.mul(acc, pw);
    }
    if (da < db) {
      if ((da * db) % 2 == 1) acc = r.neg(acc);
      std::swap(a, b);
      continue;
    }
    Poly<R> rr = rem(r, a, b);
    if (rr.empty()) return r.zero();
    const long dr = deg<R>(rr);
    if ((da * db) % 2 == 1) acc = r.neg(acc);
    for (long i = 0; i < da - dr; ++i) acc = r.mul(acc, b.back());
    // Now acc * Res(b, rr) with the sign of swapping already applied.
    a = std::move(b);
    b = std::move(rr);
    // Res(b, rr) has b first; the loop treats (a, b) := (b, rr).
  }
}

}  // namespace poly
}  // namespace arbor
