#pragma once

// Finite fields as towers: PrimeField is Z/p, ExtField<Base> is
// Base[x]/(h) for a monic irreducible h over Base. The residue field of a
// prime of a number field is ExtField<PrimeField>; a closed point of the
// residual projective line of degree k lives in ExtField<ExtField<PrimeField>>.
//
// Factorization (squarefree, distinct-degree, equal-degree) is generic over
// any of these.

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbor/poly.hpp"
#include "arbor/rational.hpp"

namespace arbor {

class PrimeField {
 public:
  using Elem = std::uint64_t;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p < 2) throw std::invalid_argument("PrimeField: modulus < 2");
    if (p >= (std::uint64_t{1} << 62))
      throw std::invalid_argument("PrimeField: modulus too large");
  }

  std::uint64_t characteristic() const { return p_; }
  Integer size() const { return Integer(static_cast<unsigned long>(p_)); }
  /// Degree over the prime field.
  unsigned long absolute_degree() const { return 1; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long v) const {
    long r = v % static_cast<long>(p_);
    return static_cast<Elem>(r < 0 ? r + static_cast<long>(p_) : r);
  }
  Elem from_integer(const Integer& v) const {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p_);
    return r.get_ui();
  }
  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
    // Extended Euclid on signed 128-bit values.
    __int128 t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      __int128 q = r / nr;
      __int128 tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<Elem>(t);
  }
  bool is_zero(Elem a) const { return a == 0; }
  bool equal(Elem a, Elem b) const { return a == b; }
  Elem pth_root(Elem a) const { return a; }
  Elem frobenius(Elem a) const { return a; }
  template <class Rng>
  Elem random(Rng& rng) const {
    return std::uniform_int_distribution<std::uint64_t>(0, p_ - 1)(rng);
  }
  /// Integer value in [0, p).
  std::string to_string(Elem a) const { return std::to_string(a); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) {
    return a.p_ == b.p_;
  }

 private:
  std::uint64_t p_;
};

template <class Base>
class ExtField {
 public:
  using BaseElem = typename Base::Elem;
  using Elem = std::vector<BaseElem>;

  /// `modulus` must be monic and irreducible over `base`; irreducibility is
  /// the caller's contract (checked by the factorization routines that build
  /// these).
  ExtField(Base base, Poly<Base> modulus)
      : base_(std::move(base)), mod_(std::move(modulus)) {
    poly::trim(base_, mod_);
    if (mod_.size() < 2) throw std::invalid_argument("ExtField: degree < 1");
    if (!base_.equal(mod_.back(), base_.one()))
      throw std::invalid_argument("ExtField: modulus not monic");
    n_ = mod_.size() - 1;
    size_ = 1;
    Integer bs = base_.size();
    for (std::size_t i = 0; i < n_; ++i) size_ *= bs;
  }

  const Base& base() const { return base_; }
  const Poly<Base>& modulus() const { return mod_; }
  std::size_t degree() const { return n_; }
  std::uint64_t characteristic() const { return base_.characteristic(); }
  const Integer& size() const { return size_; }
  unsigned long absolute_degree() const {
    return base_.absolute_degree() * static_cast<unsigned long>(n_);
  }

  Elem zero() const { return Elem(n_, base_.zero()); }
  Elem one() const { return embed(base_.one()); }
  Elem embed(const BaseElem& b) const {
    Elem e(n_, base_.zero());
    e[0] = b;
    return e;
  }
  /// Class of the polynomial variable (a root of the modulus).
  Elem gen() const {
    if (n_ == 1) return embed(base_.neg(mod_[0]));
    Elem e(n_, base_.zero());
    e[1] = base_.one();
    return e;
  }
  Elem from_int(long v) const { return embed(base_.from_int(v)); }
  Elem from_poly(const Poly<Base>& p) const {
    Poly<Base> r = poly::rem(base_, p, mod_);
    Elem e(n_, base_.zero());
    for (std::size_t i = 0; i < r.size(); ++i) e[i] = r[i];
    return e;
  }
  Poly<Base> to_poly(const Elem& a) const { return poly::trimmed(base_, a); }

  Elem add(const Elem& a, const Elem& b) const {
    Elem c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = base_.add(a[i], b[i]);
    return c;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = base_.sub(a[i], b[i]);
    return c;
  }
  Elem neg(const Elem& a) const {
    Elem c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = base_.neg(a[i]);
    return c;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    return from_poly(poly::mul(base_, to_poly(a), to_poly(b)));
  }
  Elem inv(const Elem& a) const {
    auto [g, s, t] = poly::xgcd(base_, to_poly(a), mod_);
    if (g.size() != 1) throw std::domain_error("ExtField: inverse of zero");
    return from_poly(s);
  }
  bool is_zero(const Elem& a) const {
    for (const auto& c : a)
      if (!base_.is_zero(c)) return false;
    return true;
  }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  Elem pow(const Elem& a, const Integer& e) const {
    Elem r = one();
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (std::size_t i = bits; i-- > 0;) {
      r = mul(r, r);
      if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
    }
    return r;
  }
  /// a^p.
  Elem frobenius(const Elem& a) const {
    return pow(a, Integer(static_cast<unsigned long>(characteristic())));
  }
  /// The unique b with b^p = a, i.e. a^(q/p).
  Elem pth_root(const Elem& a) const {
    Integer e = size_ / Integer(static_cast<unsigned long>(characteristic()));
    return pow(a, e);
  }
  template <class Rng>
  Elem random(Rng& rng) const {
    Elem e(n_);
    for (auto& c : e) c = base_.random(rng);
    return e;
  }

  /// Whether `a` lies in the base field (all higher coordinates vanish).
  bool in_base(const Elem& a) const {
    for (std::size_t i = 1; i < n_; ++i)
      if (!base_.is_zero(a[i])) return false;
    return true;
  }

  friend bool operator==(const ExtField& a, const ExtField& b) {
    return a.base_ == b.base_ && a.mod_ == b.mod_;
  }

 private:
  Base base_;
  Poly<Base> mod_;
  std::size_t n_ = 1;
  Integer size_;
};

/// Residue fields of primes of number fields.
using ResidueField = ExtField<PrimeField>;
/// Finite extensions of a residue field, generated by a residual point.
using PointField = ExtField<ResidueField>;

/// Monic irreducible factor with multiplicity.
template <class F>
struct FactorEntry {
  Poly<F> factor;
  int multiplicity;
};

namespace ff {

namespace detail {

template <class F>
Poly<F> pth_root_poly(const F& f, const Poly<F>& a) {
  const std::size_t p = f.characteristic();
  Poly<F> r;
  for (std::size_t i = 0; i < a.size(); i += p) r.push_back(f.pth_root(a[i]));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (i % p != 0 && !f.is_zero(a[i]))
      throw std::logic_error("pth_root_poly: not a p-th power");
  poly::trim(f, r);
  return r;
}

/// Lexicographic order on (degree, coefficients from the top) so output
/// lists are deterministic.
template <class F>
bool factor_less(const Poly<F>& a, const Poly<F>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;)
    if (!(a[i] == b[i])) return a[i] < b[i];
  return false;
}

}  // namespace detail

/// Squarefree decomposition of a monic polynomial: pairwise coprime
/// squarefree factors with multiplicities, product reproduces the input.
template <class F>
std::vector<FactorEntry<F>> squarefree_decomposition(const F& f, Poly<F> a) {
  std::vector<FactorEntry<F>> out;
  if (a.size() <= 1) return out;
  a = poly::monic(f, a);
  Poly<F> c = poly::gcd(f, a, poly::derivative(f, a));
  Poly<F> w = *poly::exact_div(f, a, c);
  int i = 1;
  while (w.size() > 1) {
    Poly<F> y = poly::gcd(f, w, c);
    Poly<F> z = *poly::exact_div(f, w, y);
    if (z.size() > 1) out.push_back({z, i});
    ++i;
    w = y;
    c = *poly::exact_div(f, c, y);
  }
  if (c.size() > 1) {
    const int p = static_cast<int>(f.characteristic());
    for (auto& e : squarefree_decomposition(f, detail::pth_root_poly(f, c)))
      out.push_back({e.factor, e.multiplicity * p});
  }
  return out;
}

/// Product of the distinct monic irreducible factors.
template <class F>
Poly<F> squarefree_part(const F& f, const Poly<F>& a) {
  Poly<F> r{f.one()};
  for (auto& e : squarefree_decomposition(f, a)) r = poly::mul(f, r, e.factor);
  return r;
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// (product of all irreducible factors of degree d, d).
template <class F>
std::vector<std::pair<Poly<F>, std::size_t>> distinct_degree(const F& f,
                                                             Poly<F> a) {
  std::vector<std::pair<Poly<F>, std::size_t>> out;
  const Poly<F> xx = poly::x(f);
  Poly<F> h = poly::rem(f, xx, a);
  for (std::size_t d = 1; 2 * d <= static_cast<std::size_t>(poly::deg<F>(a));
       ++d) {
    h = poly::powmod(f, h, f.size(), a);
    Poly<F> g = poly::gcd(f, a, poly::sub(f, h, xx));
    if (g.size() > 1) {
      out.push_back({g, d});
      a = *poly::exact_div(f, a, g);
      h = poly::rem(f, h, a);
    }
  }
  if (a.size() > 1) out.push_back({a, static_cast<std::size_t>(a.size() - 1)});
  return out;
}

/// Splits a monic squarefree product of irreducibles all of degree d.
template <class F, class Rng>
void equal_degree(const F& f, const Poly<F>& a, std::size_t d, Rng& rng,
                  std::vector<Poly<F>>& out) {
  const std::size_t n = static_cast<std::size_t>(poly::deg<F>(a));
  if (n == d) {
    out.push_back(a);
    return;
  }
  const bool even = f.characteristic() == 2;
  Integer qd = 1;
  for (std::size_t i = 0; i < d; ++i) qd *= f.size();
  Integer half = (qd - 1) / 2;
  const unsigned long trace_terms = f.absolute_degree() * d;
  while (true) {
    Poly<F> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back(f.random(rng));
    poly::trim(f, r);
    if (r.size() <= 1) continue;
    Poly<F> b;
    if (even) {
      Poly<F> t = r;
      b = r;
      for (unsigned long i = 1; i < trace_terms; ++i) {
        t = poly::mulmod(f, t, t, a);
        b = poly::add(f, b, t);
      }
    } else {
      b = poly::sub(f, poly::powmod(f, r, half, a), Poly<F>{f.one()});
    }
    Poly<F> g = poly::gcd(f, a, b);
    if (g.size() > 1 && g.size() < a.size()) {
      equal_degree(f, g, d, rng, out);
      equal_degree(f, *poly::exact_div(f, a, g), d, rng, out);
      return;
    }
  }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficients). The leading coefficient is dropped.
template <class F>
std::vector<FactorEntry<F>> factor(const F& f, const Poly<F>& a) {
  std::vector<FactorEntry<F>> out;
  if (a.size() <= 1) return out;
  std::mt19937_64 rng(0x5eed5eedULL);
  for (auto& sq : squarefree_decomposition(f, a)) {
    for (auto& [part, d] : distinct_degree(f, sq.factor)) {
      std::vector<Poly<F>> pieces;
      equal_degree(f, part, d, rng, pieces);
      for (auto& pc : pieces) out.push_back({pc, sq.multiplicity});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (detail::factor_less<F>(x.factor, y.factor)) return true;
    if (detail::factor_less<F>(y.factor, x.factor)) return false;
    return x.multiplicity < y.multiplicity;
  });
  return out;
}

template <class F>
bool is_irreducible(const F& f, const Poly<F>& a) {
  if (a.size() < 2) return false;
  auto fs = factor(f, a);
  return fs.size() == 1 && fs[0].multiplicity == 1;
}

/// Roots in the field with multiplicities, sorted.
template <class F>
std::vector<std::pair<typename F::Elem, int>> roots(const F& f,
                                                    const Poly<F>& a) {
  std::vector<std::pair<typename F::Elem, int>> out;
  for (auto& e : factor(f, a))
    if (e.factor.size() == 2) out.push_back({f.neg(e.factor[0]), e.multiplicity});
  return out;
}

/// Multiplicity of `z` as a root of `a` (a nonzero).
template <class F>
int root_multiplicity(const F& f, Poly<F> a, const typename F::Elem& z) {
  int m = 0;
  const Poly<F> lin{f.neg(z), f.one()};
  while (!a.empty()) {
    auto [q, r] = poly::divmod(f, a, lin);
    if (!r.empty()) break;
    a = std::move(q);
    ++m;
  }
  return m;
}

}  // namespace ff
}  // namespace arbor
