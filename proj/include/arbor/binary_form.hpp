#pragma once

// Binary forms F(X, Y) = sum a_i X^i Y^{n-i} stored as the affine polynomial
// f(x) = F(x, 1) together with the formal degree n >= deg f. The root
// (1:0) = ∞ has multiplicity n - deg f.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "arbor/finite_field.hpp"
#include "arbor/number_field.hpp"
#include "arbor/poly.hpp"

namespace arbor {

template <class R>
struct Form {
  Poly<R> coeffs;
  std::size_t degree = 0;

  long affine_degree() const { return static_cast<long>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  /// Multiplicity of ∞ as a root (meaningless for the zero form).
  std::size_t infinity_multiplicity() const {
    return degree - static_cast<std::size_t>(affine_degree());
  }
  /// Coefficient of X^i Y^{n-i}.
  template <class RR>
  typename R::Elem coeff(const RR& r, std::size_t i) const {
    return i < coeffs.size() ? coeffs[i] : r.zero();
  }
};

using KForm = Form<NumberField>;

namespace form {

template <class R>
Form<R> make(const R& r, Poly<R> f, std::size_t n) {
  poly::trim(r, f);
  if (deg<R>(f) > static_cast<long>(n))
    throw std::invalid_argument("form: affine degree exceeds formal degree");
  return Form<R>{std::move(f), n};
}

template <class R>
long deg(const Poly<R>& f) {
  return poly::deg<R>(f);
}

template <class R>
Form<R> mul(const R& r, const Form<R>& a, const Form<R>& b) {
  return Form<R>{poly::mul(r, a.coeffs, b.coeffs), a.degree + b.degree};
}

template <class R>
Form<R> scale(const R& r, const Form<R>& a, const typename R::Elem& s) {
  return Form<R>{poly::scale(r, a.coeffs, s), a.degree};
}

template <class R>
bool equal(const R& r, const Form<R>& a, const Form<R>& b) {
  return a.degree == b.degree && poly::equal(r, a.coeffs, b.coeffs);
}

/// Y^k as a form.
template <class R>
Form<R> y_power(const R& r, std::size_t k) {
  return Form<R>{Poly<R>{r.one()}, k};
}

/// Resultant in the Sylvester convention on descending coefficient rows;
/// Res(X, Y) = 1.
template <class R>
typename R::Elem resultant(const R& r, Form<R> F, Form<R> G) {
  if (F.is_zero() || G.is_zero()) return r.zero();
  typename R::Elem acc = r.one();
  // Peel roots at ∞: Res_{n,k}(Y F', G) = (-1)^k b_k Res_{n-1,k}(F', G).
  while (true) {
    const std::size_t n = F.degree, k = G.degree;
    const bool f_inf = static_cast<long>(n) > F.affine_degree();
    const bool g_inf = static_cast<long>(k) > G.affine_degree();
    if (f_inf && g_inf) return r.zero();
    if (f_inf) {
      auto bk = G.coeff(r, k);
      acc = r.mul(acc, (k % 2) ? r.neg(bk) : bk);
      F.degree -= 1;
      continue;
    }
    if (g_inf) {
      // Res(F, Y G') = (-1)^{n} ... computed via Res(F,G) = (-1)^{nk} Res(G,F).
      auto an = F.coeff(r, n);
      // Res_{k,n}(Y G', F) = (-1)^n a_n Res_{k-1,n}(G', F); swap signs cancel
      // to (-1)^{nk} (-1)^n (-1)^{n(k-1)} = 1.
      acc = r.mul(acc, an);
      G.degree -= 1;
      continue;
    }
    break;
  }
  if (F.degree == 0) {
    typename R::Elem pw = r.one();
    for (std::size_t i = 0; i < G.degree; ++i) pw = r.mul(pw, F.coeffs[0]);
    return r.mul(acc, pw);
  }
  if (G.degree == 0) {
    typename R::Elem pw = r.one();
    for (std::size_t i = 0; i < F.degree; ++i) pw = r.mul(pw, G.coeffs[0]);
    return r.mul(acc, pw);
  }
  return r.mul(acc, poly::resultant(r, F.coeffs, G.coeffs));
}

/// Discriminant of a form of degree n >= 2; zero iff a projective root is
/// repeated.
template <class R>
typename R::Elem discriminant(const R& r, const Form<R>& F) {
  if (F.degree < 2) throw std::invalid_argument("discriminant: degree < 2");
  if (F.is_zero()) return r.zero();
  const std::size_t inf = F.infinity_multiplicity();
  if (inf >= 2) return r.zero();
  const Poly<R>& f = F.coeffs;
  const long m = F.affine_degree();
  typename R::Elem d;
  if (m == 0) {
    d = r.one();
  } else if (m == 1) {
    d = r.one();
  } else {
    d = poly::resultant(r, f, poly::derivative(r, f));
    d = r.mul(d, r.inv(f.back()));
    if ((m * (m - 1) / 2) % 2 == 1) d = r.neg(d);
  }
  if (inf == 1) d = r.mul(d, r.mul(f.back(), f.back()));
  return d;
}

/// F(A, B) for forms A, B of a common degree e: a form of degree n e.
template <class R>
Form<R> pullback(const R& r, const Form<R>& F, const Form<R>& A, const Form<R>& B) {
  if (A.degree != B.degree) throw std::invalid_argument("pullback: degree mismatch");
  const std::size_t n = F.degree;
  std::vector<Poly<R>> apow{Poly<R>{r.one()}}, bpow{Poly<R>{r.one()}};
  for (std::size_t i = 1; i <= n; ++i) {
    apow.push_back(poly::mul(r, apow.back(), A.coeffs));
    bpow.push_back(poly::mul(r, bpow.back(), B.coeffs));
  }
  Poly<R> acc;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    if (r.is_zero(F.coeffs[i])) continue;
    acc = poly::add(r, acc, poly::scale(r, poly::mul(r, apow[i], bpow[n - i]), F.coeffs[i]));
  }
  return Form<R>{std::move(acc), n * A.degree};
}

/// Value F(x, y) at a point.
template <class R>
typename R::Elem eval(const R& r, const Form<R>& F, const typename R::Elem& x,
                      const typename R::Elem& y) {
  typename R::Elem acc = r.zero();
  typename R::Elem ypow = r.one();
  // Horner in x with Y weights: sum a_i x^i y^{n-i}.
  std::vector<typename R::Elem> yp(F.degree + 1);
  for (std::size_t i = 0; i <= F.degree; ++i) {
    yp[i] = ypow;
    ypow = r.mul(ypow, y);
  }
  typename R::Elem xpow = r.one();
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    if (!r.is_zero(F.coeffs[i]))
      acc = r.add(acc, r.mul(F.coeffs[i], r.mul(xpow, yp[F.degree - i])));
    xpow = r.mul(xpow, x);
  }
  return acc;
}

/// Partial derivatives as forms of degree n - 1.
template <class R>
Form<R> d_dx(const R& r, const Form<R>& F) {
  return Form<R>{poly::derivative(r, F.coeffs), F.degree - 1};
}

template <class R>
Form<R> d_dy(const R& r, const Form<R>& F) {
  Poly<R> c(F.coeffs.size(), r.zero());
  for (std::size_t i = 0; i < F.coeffs.size(); ++i)
    c[i] = r.mul(r.from_int(static_cast<long>(F.degree - i)), F.coeffs[i]);
  poly::trim(r, c);
  return Form<R>{std::move(c), F.degree - 1};
}

/// Jacobian A_X B_Y - A_Y B_X of a map pair of degree d: degree 2d - 2.
template <class R>
Form<R> jacobian(const R& r, const Form<R>& A, const Form<R>& B) {
  Form<R> t1 = mul(r, d_dx(r, A), d_dy(r, B));
  Form<R> t2 = mul(r, d_dy(r, A), d_dx(r, B));
  return Form<R>{poly::sub(r, t1.coeffs, t2.coeffs), t1.degree};
}

/// Squarefree part of the affine polynomial over a field: char 0 uses
/// f / gcd(f, f'), finite fields split off p-th powers.
template <class R>
Poly<R> squarefree_affine(const R& r, const Poly<R>& f) {
  if (f.size() <= 1) return poly::monic(r, f);
  if constexpr (requires { r.characteristic(); }) {
    return ff::squarefree_part(r, f);
  } else {
    Poly<R> g = poly::gcd(r, f, poly::derivative(r, f));
    return poly::monic(r, *poly::exact_div(r, f, g));
  }
}

/// Squarefree part of a nonzero form (monic affine part, ∞ at most once).
template <class R>
Form<R> squarefree_part(const R& r, const Form<R>& F) {
  if (F.is_zero()) throw std::invalid_argument("squarefree_part of zero form");
  Poly<R> s = squarefree_affine(r, F.coeffs);
  const std::size_t inf = F.infinity_multiplicity() > 0 ? 1 : 0;
  return Form<R>{s, static_cast<std::size_t>(deg<R>(s)) + inf};
}

}  // namespace form

/// Integrally normalizes a family of forms over K jointly: clears all
/// coordinate denominators, then divides by the integer content, so the joint
/// content is 1 and every coordinate is integral.
void normalize_integral(const NumberField& K, std::vector<KForm*> forms);

/// Normalized copy of a single form.
KForm normalized(const NumberField& K, KForm F);

}  // namespace arbor
