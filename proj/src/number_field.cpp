#include "arbor/number_field.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "arbor/error.hpp"

namespace arbor {

RationalField::Elem RationalField::inv(const Elem& a) const {
  if (sgn(a) == 0) throw std::domain_error("rational inverse of zero");
  return Rational(1) / a;
}

// ---------------------------------------------------------------------------
// Integer polynomial helpers

namespace {

ZPoly z_trim(ZPoly a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
  return a;
}

QPoly to_q(const ZPoly& a) {
  QPoly q;
  for (const auto& c : a) q.push_back(Rational(c));
  return q;
}

Integer mod_sym(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (2 * r > m) r -= m;
  return r;
}

ZPoly lift_fp(const Poly<PrimeField>& a) {
  ZPoly z;
  for (auto c : a) z.push_back(Integer(static_cast<unsigned long>(c)));
  return z;
}

}  // namespace

std::pair<ZPoly, ZPoly> hensel_lift(const ZPoly& f, const Poly<PrimeField>& g0,
                                    const Poly<PrimeField>& h0,
                                    const PrimeField& fp, unsigned k) {
  auto [one, s, t] = poly::xgcd(fp, g0, h0);
  if (one.size() != 1) throw std::logic_error("hensel_lift: factors not coprime");
  IntegerRing zr;
  ZPoly G = lift_fp(g0), H = lift_fp(h0);
  const Integer p(static_cast<unsigned long>(fp.characteristic()));
  Integer pj = p;
  for (unsigned j = 1; j < k; ++j) {
    ZPoly e = poly::sub(zr, f, poly::mul(zr, G, H));
    Poly<PrimeField> ep;
    for (auto& c : e) {
      Integer q;
      mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), pj.get_mpz_t());
      ep.push_back(fp.from_integer(q));
    }
    poly::trim(fp, ep);
    Poly<PrimeField> dg = poly::rem(fp, poly::mul(fp, t, ep), g0);
    Poly<PrimeField> dh =
        *poly::exact_div(fp, poly::sub(fp, ep, poly::mul(fp, h0, dg)), g0);
    G = poly::add(zr, G, poly::scale(zr, lift_fp(dg), pj));
    H = poly::add(zr, H, poly::scale(zr, lift_fp(dh), pj));
    pj *= p;
  }
  for (auto& c : G) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), pj.get_mpz_t());
  for (auto& c : H) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), pj.get_mpz_t());
  return {z_trim(G), z_trim(H)};
}

namespace {

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<bool> sieve(limit + 1, true);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) sieve[j] = false;
  }
  return out;
}

}  // namespace

Poly<PrimeField> reduce_mod_p(const PrimeField& fp, const std::vector<Integer>& a) {
  Poly<PrimeField> r;
  for (const auto& c : a) r.push_back(fp.from_integer(c));
  poly::trim(fp, r);
  return r;
}

Integer resultant_z(const ZPoly& a, const ZPoly& b) {
  RationalField qf;
  Rational r = poly::resultant(qf, poly::trimmed(qf, to_q(a)), poly::trimmed(qf, to_q(b)));
  return r.get_num();
}

Rational discriminant_q(const QPoly& a) {
  RationalField qf;
  const long n = poly::deg<RationalField>(a);
  if (n < 1) throw std::invalid_argument("discriminant_q: degree < 1");
  Rational r = poly::resultant(qf, a, poly::derivative(qf, a)) / a.back();
  if ((n * (n - 1) / 2) % 2 == 1) r = -r;
  return r;
}

// ---------------------------------------------------------------------------
// Irreducibility over Q

bool is_irreducible_over_q(const std::vector<Integer>& m_in) {
  ZPoly m = z_trim(m_in);
  const long n = static_cast<long>(m.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  if (m.back() != 1) throw std::invalid_argument("is_irreducible_over_q: not monic");
  const Rational disc = discriminant_q(to_q(m));
  if (disc == 0) return false;  // repeated factor

  // Degree-pattern sieve over several unramified primes.
  std::set<long> feasible;
  for (long d = 1; d < n; ++d) feasible.insert(d);
  std::uint64_t best_p = 0;
  std::size_t best_count = static_cast<std::size_t>(-1);
  int used = 0;
  for (std::uint64_t p : small_primes(2000)) {
    if (used >= 12 && best_p != 0) break;
    if (mpz_divisible_ui_p(disc.get_num().get_mpz_t(), p)) continue;
    PrimeField fp(p);
    auto fs = ff::factor(fp, reduce_mod_p(fp, m));
    ++used;
    if (fs.size() == 1) return true;
    std::set<long> sums{0};
    for (auto& e : fs) {
      std::set<long> next = sums;
      for (long s : sums) next.insert(s + static_cast<long>(e.factor.size()) - 1);
      sums = std::move(next);
    }
    std::set<long> inter;
    for (long d : feasible)
      if (sums.count(d)) inter.insert(d);
    feasible = std::move(inter);
    if (feasible.empty()) return true;
    if (fs.size() < best_count) {
      best_count = fs.size();
      best_p = p;
    }
  }

  // Zassenhaus recombination at the prime with the fewest modular factors.
  PrimeField fp(best_p);
  auto fs = ff::factor(fp, reduce_mod_p(fp, m));
  double norm2 = 0;
  for (auto& c : m) norm2 += c.get_d() * c.get_d();
  Integer bound = Integer(static_cast<unsigned long>(std::ceil(std::sqrt(norm2)))) + 1;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(n));
  const Integer p(static_cast<unsigned long>(best_p));
  unsigned k = 1;
  Integer pk = p;
  while (pk <= 2 * bound) {
    pk *= p;
    ++k;
  }
  // Sequential binary lifting.
  std::vector<ZPoly> lifted;
  ZPoly rest = m;
  Poly<PrimeField> rest_mod = reduce_mod_p(fp, m);
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    Poly<PrimeField> h0 = *poly::exact_div(fp, rest_mod, fs[i].factor);
    auto [G, H] = hensel_lift(rest, fs[i].factor, h0, fp, k);
    lifted.push_back(G);
    rest = H;
    rest_mod = h0;
  }
  lifted.push_back(rest);
  const std::size_t r = lifted.size();
  IntegerRing zr;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << r); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) * 2 > r) continue;
    ZPoly prod{Integer(1)};
    for (std::size_t i = 0; i < r; ++i)
      if (mask >> i & 1) {
        prod = poly::mul(zr, prod, lifted[i]);
        for (auto& c : prod) c = mod_sym(c, pk);
      }
    prod = z_trim(prod);
    if (prod.size() < 2 || static_cast<long>(prod.size()) - 1 >= n) continue;
    // Trial division over Z (prod is monic).
    RationalField qf;
    auto q = poly::exact_div(qf, to_q(m), to_q(prod));
    if (q) {
      bool integral = true;
      for (auto& c : *q)
        if (c.get_den() != 1) integral = false;
      if (integral) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// NumberField

NumberField::NumberField(std::vector<Integer> min_poly) : m_(z_trim(std::move(min_poly))) {
  if (m_.size() < 2) throw PreconditionError("min_poly must have degree >= 1");
  if (m_.back() != 1) throw PreconditionError("min_poly must be monic");
  n_ = m_.size() - 1;
  if (!is_irreducible_over_q(m_)) throw PreconditionError("min_poly is reducible over Q");
  disc_ = n_ == 1 ? Integer(1) : discriminant_q(to_q(m_)).get_num();
  // θ^n = -sum m_i θ^i; build θ^{n+k} for k = 0..n-2.
  std::vector<Integer> cur(n_);
  for (std::size_t i = 0; i < n_; ++i) cur[i] = -m_[i];
  for (std::size_t k = 0; k + 1 < n_; ++k) {
    high_powers_.push_back(cur);
    std::vector<Integer> next(n_);
    for (std::size_t i = 0; i + 1 < n_; ++i) next[i + 1] = cur[i];
    const Integer top = cur[n_ - 1];
    for (std::size_t i = 0; i < n_; ++i) next[i] -= top * m_[i];
    cur = std::move(next);
  }
}

QPoly NumberField::min_poly_q() const { return to_q(m_); }

NFElem NumberField::normalize(std::vector<Integer> num, Integer den) const {
  if (sgn(den) < 0) {
    den = -den;
    for (auto& c : num) c = -c;
  }
  Integer g = den;
  for (const auto& c : num) {
    if (g == 1) break;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  if (g != 1 && g != 0) {
    for (auto& c : num) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
  }
  bool zero = true;
  for (const auto& c : num)
    if (sgn(c) != 0) zero = false;
  if (zero) den = 1;
  return NFElem{std::move(num), std::move(den)};
}

NFElem NumberField::zero() const { return NFElem{std::vector<Integer>(n_), 1}; }

NFElem NumberField::from_rational(const Rational& q) const {
  NFElem e{std::vector<Integer>(n_), q.get_den()};
  e.num[0] = q.get_num();
  return e;
}

NFElem NumberField::from_coords(const std::vector<Rational>& c) const {
  if (c.size() > n_) throw std::invalid_argument("from_coords: too many coordinates");
  Integer den = 1;
  for (const auto& q : c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> num(n_);
  for (std::size_t i = 0; i < c.size(); ++i) num[i] = c[i].get_num() * (den / c[i].get_den());
  return normalize(std::move(num), den);
}

NFElem NumberField::theta() const {
  if (n_ == 1) return from_rational(Rational(-m_[0]));
  NFElem e = zero();
  e.num[1] = 1;
  return e;
}

NFElem NumberField::from_qpoly(const QPoly& p) const {
  RationalField qf;
  QPoly r = poly::rem(qf, p, min_poly_q());
  std::vector<Rational> c(r.begin(), r.end());
  return from_coords(c);
}

QPoly NumberField::to_qpoly(const NFElem& a) const {
  RationalField qf;
  return poly::trimmed(qf, a.coords());
}

NFElem NumberField::add(const NFElem& a, const NFElem& b) const {
  if (a.den == b.den) {
    std::vector<Integer> num(n_);
    for (std::size_t i = 0; i < n_; ++i) num[i] = a.num[i] + b.num[i];
    return a.den == 1 ? NFElem{std::move(num), 1} : normalize(std::move(num), a.den);
  }
  std::vector<Integer> num(n_);
  for (std::size_t i = 0; i < n_; ++i) num[i] = a.num[i] * b.den + b.num[i] * a.den;
  return normalize(std::move(num), a.den * b.den);
}

NFElem NumberField::sub(const NFElem& a, const NFElem& b) const { return add(a, neg(b)); }

NFElem NumberField::neg(const NFElem& a) const {
  NFElem e = a;
  for (auto& c : e.num) c = -c;
  return e;
}

NFElem NumberField::mul(const NFElem& a, const NFElem& b) const {
  if (a.is_zero() || b.is_zero()) return zero();
  std::vector<Integer> c(2 * n_ - 1);
  for (std::size_t i = 0; i < n_; ++i) {
    if (sgn(a.num[i]) == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (sgn(b.num[j]) == 0) continue;
      mpz_addmul(c[i + j].get_mpz_t(), a.num[i].get_mpz_t(), b.num[j].get_mpz_t());
    }
  }
  std::vector<Integer> num(c.begin(), c.begin() + static_cast<long>(n_));
  for (std::size_t k = n_; k < 2 * n_ - 1; ++k) {
    if (sgn(c[k]) == 0) continue;
    const auto& row = high_powers_[k - n_];
    for (std::size_t i = 0; i < n_; ++i)
      mpz_addmul(num[i].get_mpz_t(), c[k].get_mpz_t(), row[i].get_mpz_t());
  }
  Integer den = a.den * b.den;
  if (den == 1) return NFElem{std::move(num), 1};
  return normalize(std::move(num), std::move(den));
}

NFElem NumberField::scale(const NFElem& a, const Rational& s) const {
  std::vector<Integer> num(n_);
  for (std::size_t i = 0; i < n_; ++i) num[i] = a.num[i] * s.get_num();
  return normalize(std::move(num), a.den * s.get_den());
}

NFElem NumberField::inv(const NFElem& a) const {
  if (a.is_zero()) throw std::domain_error("number field inverse of zero");
  if (a.is_rational()) return from_rational(Rational(1) / a.coord(0));
  RationalField qf;
  auto [g, s, t] = poly::xgcd(qf, to_qpoly(a), min_poly_q());
  if (g.size() != 1) throw std::logic_error("number field: non-invertible element");
  return from_qpoly(s);
}

NFElem NumberField::pow(const NFElem& a, unsigned long e) const {
  NFElem r = one(), b = a;
  while (e) {
    if (e & 1UL) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

Rational NumberField::norm(const NFElem& a) const {
  if (a.is_zero()) return 0;
  RationalField qf;
  QPoly ap = to_qpoly(a);
  if (ap.size() == 1) {
    Rational r = 1;
    for (std::size_t i = 0; i < n_; ++i) r *= ap[0];
    return r;
  }
  return poly::resultant(qf, min_poly_q(), ap);
}

std::string NumberField::to_string(const NFElem& a) const {
  std::string out;
  for (std::size_t i = n_; i-- > 0;) {
    Rational c = a.coord(i);
    if (sgn(c) == 0) continue;
    const bool negative = sgn(c) < 0;
    Rational mag = abs(c);
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (i == 0 || mag != 1) {
      out += arbor::to_string(mag);
      if (i > 0) out += "*";
    }
    if (i >= 1) out += "t";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Integer factorization

bool is_probable_prime(const Integer& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

namespace {

/// Brent's cycle-finding Pollard rho. Returns a nontrivial factor or 0 when
/// the budget runs out.
Integer pollard_brent(const Integer& n, unsigned long long& budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; budget > 0; ++c) {
    Integer y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto step = [&](const Integer& v) {
      Integer w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      do {
        ys = y;
        const unsigned long lim = std::min(m, r - k);
        for (unsigned long i = 0; i < lim; ++i) {
          y = step(y);
          Integer diff = abs(x - y);
          q = q * diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        if (budget <= lim) {
          budget = 0;
          return 0;
        }
        budget -= lim;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        Integer diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

}  // namespace

IntegerFactorization factor_integer(const Integer& n_in, unsigned long long budget) {
  if (n_in == 0) throw PreconditionError("factor_integer: zero has no factorization");
  IntegerFactorization out;
  Integer n = abs(n_in);
  std::map<Integer, unsigned> acc;
  static const std::vector<std::uint64_t> primes = small_primes(10000);
  for (std::uint64_t p : primes) {
    if (n == 1) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++acc[Integer(static_cast<unsigned long>(p))];
    }
  }
  std::vector<Integer> pending;
  if (n != 1) pending.push_back(n);
  Integer unfactored = 1;
  while (!pending.empty()) {
    Integer c = pending.back();
    pending.pop_back();
    if (is_probable_prime(c)) {
      ++acc[c];
      continue;
    }
    if (mpz_perfect_square_p(c.get_mpz_t())) {
      Integer s;
      mpz_sqrt(s.get_mpz_t(), c.get_mpz_t());
      pending.push_back(s);
      pending.push_back(s);
      continue;
    }
    Integer d = pollard_brent(c, budget);
    if (d == 0) {
      unfactored *= c;
      continue;
    }
    pending.push_back(d);
    pending.push_back(c / d);
  }
  for (auto& [p, e] : acc) out.factors.push_back({p, e});
  out.cofactor = unfactored;
  return out;
}

}  // namespace arbor
