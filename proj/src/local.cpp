#include "arbor/local.hpp"

#include <algorithm>

#include "arbor/error.hpp"

namespace arbor {

namespace {

long vp_capped(const Integer& a, const Integer& p, long cap) {
  if (sgn(a) == 0) return cap;
  Integer t = a;
  long v = 0;
  while (v < cap && mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

// Reduces the t-degree of c (length 2f-1 or less) modulo monic g, mod M.
void reduce_by(std::vector<Integer>& c, const ZPoly& g, const Integer& M) {
  const std::size_t f = g.size() - 1;
  for (std::size_t d = c.size(); d-- > f;) {
    if (sgn(c[d]) == 0) continue;
    mpz_mod(c[d].get_mpz_t(), c[d].get_mpz_t(), M.get_mpz_t());
    if (sgn(c[d]) == 0) continue;
    for (std::size_t i = 0; i < f; ++i)
      mpz_submul(c[d - f + i].get_mpz_t(), c[d].get_mpz_t(), g[i].get_mpz_t());
    c[d] = 0;
  }
  c.resize(f);
  for (auto& x : c) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t());
}

}  // namespace

// ---------------------------------------------------------------------------
// PrimeSpec

const ZPoly& PrimeSpec::lifted_factor(const NumberField& K, long B) const {
  std::lock_guard<std::mutex> lock(cache->mu);
  auto it = cache->lifts.find(B);
  if (it != cache->lifts.end()) return *it->second;
  PrimeField fp(p);
  Poly<PrimeField> mp = reduce_mod_p(fp, K.min_poly());
  Poly<PrimeField> h0 = *poly::exact_div(fp, mp, factor);
  auto [G, H] = hensel_lift(K.min_poly(), factor, h0, fp, static_cast<unsigned>(B));
  G.resize(factor.size());  // keep the monic top coefficient explicit
  G.back() = 1;
  auto [pos, _] = cache->lifts.emplace(B, std::make_unique<ZPoly>(std::move(G)));
  return *pos->second;
}

std::string PrimeSpec::label() const {
  return "p=" + std::to_string(p) + ",g=" + to_string(PrimeField(p), factor, 't');
}

std::vector<PrimeSpec> primes_above(const NumberField& K, std::uint64_t p) {
  if (p < 2) throw PreconditionError("primes_above: p must be prime");
  if (!is_probable_prime(Integer(static_cast<unsigned long>(p))))
    throw PreconditionError("primes_above: " + std::to_string(p) + " is not prime");
  if (mpz_divisible_ui_p(K.poly_discriminant().get_mpz_t(), p))
    throw PreconditionError("ramified-or-nonmonogenic base prime: manual analysis required");
  PrimeField fp(p);
  std::vector<PrimeSpec> out;
  for (auto& e : ff::factor(fp, reduce_mod_p(fp, K.min_poly()))) {
    PrimeSpec P{p, e.factor, e.factor.size() - 1, ResidueField(fp, e.factor), out.size()};
    out.push_back(std::move(P));
  }
  return out;
}

// ---------------------------------------------------------------------------
// LocalRing

LocalRing::LocalRing(const NumberField& K, const PrimeSpec& P, long precision)
    : K_(&K),
      P_(P),
      B_(precision),
      p_(P.p_integer()),
      pB_(ipow(p_, precision)),
      f_(P.residue_degree),
      k_(1),
      point_(P.field, Poly<ResidueField>{P.field.zero(), P.field.one()}) {
  if (precision < 1) throw std::invalid_argument("LocalRing: precision < 1");
  g_ = P.lifted_factor(K, precision);
  // θ ↦ t: powers of t reduced mod g_B.
  Elem cur(f_);
  cur[0] = 1;
  for (std::size_t i = 0; i < K.degree(); ++i) {
    theta_powers_.push_back(cur);
    std::vector<Integer> next(f_ + 1);
    for (std::size_t j = 0; j < f_; ++j) next[j + 1] = cur[j];
    reduce_by(next, g_, pB_);
    cur = std::move(next);
  }
}

LocalRing LocalRing::extend(const Poly<ResidueField>& h) const {
  if (k_ != 1) throw std::logic_error("LocalRing::extend: already a tower");
  if (h.size() < 2) throw std::invalid_argument("LocalRing::extend: degree < 1");
  LocalRing r = *this;
  r.k_ = h.size() - 1;
  r.point_ = PointField(point_.base(), h);
  r.H_.clear();
  for (const auto& c : h) {
    Elem e(f_);
    for (std::size_t i = 0; i < f_; ++i) e[i] = Integer(static_cast<unsigned long>(c[i]));
    r.H_.push_back(e);
  }
  return r;
}

LocalRing::Elem LocalRing::from_integer(const Integer& v) const {
  Elem e(dim());
  mpz_mod(e[0].get_mpz_t(), v.get_mpz_t(), pB_.get_mpz_t());
  return e;
}

LocalRing::Elem LocalRing::add(const Elem& a, const Elem& b) const {
  Elem c(dim());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = a[i] + b[i];
    if (c[i] >= pB_) c[i] -= pB_;
  }
  return c;
}

LocalRing::Elem LocalRing::sub(const Elem& a, const Elem& b) const {
  Elem c(dim());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = a[i] - b[i];
    if (sgn(c[i]) < 0) c[i] += pB_;
  }
  return c;
}

LocalRing::Elem LocalRing::neg(const Elem& a) const {
  Elem c(dim());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (sgn(a[i]) != 0) c[i] = pB_ - a[i];
  return c;
}

LocalRing::Elem LocalRing::scale(const Elem& a, const Integer& s) const {
  Elem c(dim());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = a[i] * s;
    mpz_mod(c[i].get_mpz_t(), c[i].get_mpz_t(), pB_.get_mpz_t());
  }
  return c;
}

bool LocalRing::is_zero(const Elem& a) const {
  for (const auto& c : a)
    if (sgn(c) != 0) return false;
  return true;
}

void LocalRing::reduce_coeffs(Elem& a) const {
  for (auto& c : a) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), pB_.get_mpz_t());
}

// Product of the base-level blocks a[off_a .. off_a+f) and b[off_b .. off_b+f).
LocalRing::Elem LocalRing::base_mul(const Elem& a, const Elem& b, std::size_t off_a,
                                    std::size_t off_b) const {
  std::vector<Integer> c(2 * f_ - 1);
  bool any = false;
  for (std::size_t i = 0; i < f_; ++i) {
    if (sgn(a[off_a + i]) == 0) continue;
    for (std::size_t j = 0; j < f_; ++j) {
      if (sgn(b[off_b + j]) == 0) continue;
      mpz_addmul(c[i + j].get_mpz_t(), a[off_a + i].get_mpz_t(), b[off_b + j].get_mpz_t());
      any = true;
    }
  }
  if (!any) return Elem(f_);
  reduce_by(c, g_, pB_);
  return c;
}

LocalRing::Elem LocalRing::mul(const Elem& a, const Elem& b) const {
  if (k_ == 1) return base_mul(a, b, 0, 0);
  std::vector<Elem> c(2 * k_ - 1, Elem(f_));
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = 0; j < k_; ++j) {
      Elem t = base_mul(a, b, i * f_, j * f_);
      for (std::size_t s = 0; s < f_; ++s) c[i + j][s] += t[s];
    }
  for (std::size_t d = 2 * k_ - 1; d-- > k_;) {
    Elem top = c[d];
    for (auto& x : top) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pB_.get_mpz_t());
    bool zero = std::all_of(top.begin(), top.end(), [](const Integer& x) { return sgn(x) == 0; });
    if (zero) continue;
    for (std::size_t i = 0; i < k_; ++i) {
      Elem t = base_mul(top, H_[i], 0, 0);
      for (std::size_t s = 0; s < f_; ++s) c[d - k_ + i][s] -= t[s];
    }
  }
  Elem out(dim());
  for (std::size_t j = 0; j < k_; ++j)
    for (std::size_t s = 0; s < f_; ++s) out[j * f_ + s] = c[j][s];
  reduce_coeffs(out);
  return out;
}

LocalRing::Elem LocalRing::pow(const Elem& a, unsigned long e) const {
  Elem r = one(), b = a;
  while (e) {
    if (e & 1UL) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

LocalRing::Elem LocalRing::inv(const Elem& a) const {
  const PointField& F = point_;
  auto z = residue(a);
  if (F.is_zero(z)) throw PreconditionError("local inverse of a non-unit");
  Elem x = lift(F.inv(z));
  const Elem two = from_int(2);
  for (long prec = 1; prec < B_; prec *= 2) x = mul(x, sub(two, mul(a, x)));
  return x;
}

long LocalRing::valuation(const Elem& a) const {
  long v = B_;
  for (const auto& c : a) v = std::min(v, vp_capped(c, p_, v));
  return v;
}

LocalRing::Elem LocalRing::div_p_power(const Elem& a, long k) const {
  if (k == 0) return a;
  const Integer pk = ipow(p_, k);
  Elem c(dim());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!mpz_divisible_p(a[i].get_mpz_t(), pk.get_mpz_t()))
      throw std::logic_error("div_p_power: not divisible");
    mpz_divexact(c[i].get_mpz_t(), a[i].get_mpz_t(), pk.get_mpz_t());
  }
  return c;
}

LocalRing::Elem LocalRing::embed_numerator(const std::vector<Integer>& num, long extra) const {
  if (extra == 0) {
    Elem e(f_);
    for (std::size_t i = 0; i < num.size(); ++i)
      if (sgn(num[i]) != 0)
        for (std::size_t j = 0; j < f_; ++j)
          mpz_addmul(e[j].get_mpz_t(), num[i].get_mpz_t(), theta_powers_[i][j].get_mpz_t());
    for (auto& x : e) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pB_.get_mpz_t());
    return e;
  }
  const long B = B_ + extra;
  const Integer M = ipow(p_, B);
  const ZPoly& g = P_.lifted_factor(*K_, B);
  std::vector<Integer> c(num.begin(), num.end());
  if (c.size() < f_) c.resize(f_);
  reduce_by(c, g, M);
  return c;
}

LocalRing::Elem LocalRing::embed(const NFElem& a) const {
  Elem out(dim());
  if (a.is_zero()) return out;
  Integer u = a.den;
  const long k = static_cast<long>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), p_.get_mpz_t()));
  Elem e = embed_numerator(a.num, k);
  if (k > 0) {
    const Integer pk = ipow(p_, k);
    for (auto& x : e) {
      if (!mpz_divisible_p(x.get_mpz_t(), pk.get_mpz_t()))
        throw PreconditionError("element is not integral at " + P_.label());
      mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), pk.get_mpz_t());
      mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pB_.get_mpz_t());
    }
  }
  if (u != 1) {
    Integer ui;
    mpz_invert(ui.get_mpz_t(), u.get_mpz_t(), pB_.get_mpz_t());
    for (auto& x : e) {
      x *= ui;
      mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pB_.get_mpz_t());
    }
  }
  for (std::size_t i = 0; i < f_; ++i) out[i] = e[i];
  return out;
}

LocalRing::Elem LocalRing::generator() const {
  Elem e(dim());
  if (k_ == 1) throw std::logic_error("LocalRing::generator: not a tower");
  e[f_] = 1;
  return e;
}

PointField::Elem LocalRing::residue(const Elem& a) const {
  const ResidueField& R = point_.base();
  const PrimeField& fp = R.base();
  PointField::Elem z(k_, R.zero());
  for (std::size_t j = 0; j < k_; ++j) {
    Poly<PrimeField> c;
    for (std::size_t i = 0; i < f_; ++i) c.push_back(fp.from_integer(a[j * f_ + i]));
    z[j] = R.from_poly(c);
  }
  return z;
}

LocalRing::Elem LocalRing::lift(const PointField::Elem& z) const {
  Elem e(dim());
  for (std::size_t j = 0; j < k_; ++j)
    for (std::size_t i = 0; i < f_; ++i)
      e[j * f_ + i] = Integer(static_cast<unsigned long>(z[j][i]));
  return e;
}

std::string LocalRing::to_string(const Elem& a) const {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += a[i].get_str();
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// Valuations and reduction

ExtRational valuation(const NumberField& K, const PrimeSpec& P, const NFElem& a) {
  if (a.is_zero()) return ExtRational::infinity();
  const Integer p = P.p_integer();
  Integer u = a.den;
  const long k = static_cast<long>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t()));
  // Cheap exit: some coordinate of the numerator is prime to p and the
  // numerator is a unit mod P.
  if (P.residue_degree == K.degree()) {
    // The only prime above p: v_P equals the min coordinate valuation.
    long v = kMaxPrecision;
    for (const auto& c : a.num) v = std::min(v, vp_capped(c, p, v));
    return ExtRational(Rational(v - k));
  }
  for (long B = kInitialPrecision; B <= kMaxPrecision; B *= 2) {
    LocalRing W(K, P, B);
    NFElem numer{a.num, 1};
    long v = W.valuation(W.embed(numer));
    if (v < B) return ExtRational(Rational(v - k));
  }
  throw PrecisionExceeded("valuation: precision cap " + std::to_string(kMaxPrecision) +
                              " reached at " + P.label(),
                          kMaxPrecision - k);
}

ResidueField::Elem reduce(const NumberField& K, const PrimeSpec& P, const NFElem& a) {
  const ResidueField& R = P.field;
  const PrimeField& fp = R.base();
  if (a.is_zero()) return R.zero();
  const Integer p = P.p_integer();
  if (!mpz_divisible_p(a.den.get_mpz_t(), p.get_mpz_t())) {
    Poly<PrimeField> c = reduce_mod_p(fp, a.num);
    auto z = R.from_poly(poly::rem(fp, c, P.factor));
    return R.mul(z, R.embed(fp.inv(fp.from_integer(a.den))));
  }
  LocalRing W(K, P, 1);
  return W.residue(W.embed(a))[0];  // embed throws when a is not integral
}

ResidualPoint reduce_point(const NumberField& K, const PrimeSpec& P, const NFElem& x,
                           const NFElem& y) {
  if (x.is_zero() && y.is_zero()) throw PreconditionError("reduce_point: (0:0)");
  if (y.is_zero()) return ResidualPoint{true, P.field.zero()};
  if (x.is_zero()) return ResidualPoint{false, P.field.zero()};
  ExtRational vx = valuation(K, P, x), vy = valuation(K, P, y);
  const Rational m = std::min(vx.value(), vy.value());
  const Integer p = P.p_integer();
  Rational s = 1;
  if (m > 0) s = Rational(1, ipow(p, m.get_num().get_si()));
  if (m < 0) s = Rational(ipow(p, -m.get_num().get_si()));
  auto xr = reduce(K, P, K.scale(x, s));
  auto yr = reduce(K, P, K.scale(y, s));
  const ResidueField& R = P.field;
  if (R.is_zero(yr)) return ResidualPoint{true, R.zero()};
  return ResidualPoint{false, R.mul(xr, R.inv(yr))};
}

std::vector<Form<ResidueField>> reduce_forms(const NumberField& K, const PrimeSpec& P,
                                             const std::vector<const KForm*>& forms,
                                             long* min_val) {
  ExtRational mv = ExtRational::infinity();
  for (auto* F : forms)
    for (const auto& c : F->coeffs) mv = std::min(mv, valuation(K, P, c));
  if (mv.is_infinite()) throw PreconditionError("reduce_forms: all forms vanish");
  const long m = mv.value().get_num().get_si();
  if (min_val) *min_val = m;
  const Integer p = P.p_integer();
  Rational s = 1;
  if (m > 0) s = Rational(1, ipow(p, m));
  if (m < 0) s = Rational(ipow(p, -m));
  std::vector<Form<ResidueField>> out;
  for (auto* F : forms) {
    Poly<ResidueField> c;
    for (const auto& a : F->coeffs) c.push_back(reduce(K, P, K.scale(a, s)));
    poly::trim(P.field, c);
    out.push_back(Form<ResidueField>{std::move(c), F->degree});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text

namespace {

std::string poly_text(const std::vector<std::string>& coeff, char var) {
  std::string s;
  for (std::size_t i = coeff.size(); i-- > 0;) {
    const std::string& c = coeff[i];
    if (c == "0") continue;
    if (!s.empty()) s += "+";
    if (i == 0) {
      s += c;
      continue;
    }
    if (c != "1") s += c;
    s += var;
    if (i > 1) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

}  // namespace

std::string to_string(const PrimeField& F, const Poly<PrimeField>& a, char var) {
  std::vector<std::string> c;
  for (auto x : a) c.push_back(F.to_string(x));
  return poly_text(c, var);
}

std::string to_string(const ResidueField& F, const ResidueField::Elem& a) {
  if (F.degree() == 1) return F.base().to_string(a[0]);
  std::string s = to_string(F.base(), F.to_poly(a), 't');
  bool compound = s.find('+') != std::string::npos;
  return compound ? "(" + s + ")" : s;
}

std::string to_string(const ResidueField& F, const Poly<ResidueField>& a, char var) {
  std::vector<std::string> c;
  for (const auto& x : a) c.push_back(to_string(F, x));
  return poly_text(c, var);
}

std::string to_string(const ResidueField& F, const ResidualPoint& z) {
  return z.infinite ? "inf" : to_string(F, z.value);
}

}  // namespace arbor
