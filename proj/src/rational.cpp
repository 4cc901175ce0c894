#include "arbor/rational.hpp"

#include <cctype>

#include "arbor/error.hpp"

namespace arbor {

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!valid_integer_text(num))
    throw ParseError("malformed rational literal '" + std::string(text) + "'");
  Rational q;
  if (slash == std::string_view::npos) {
    q = Rational(parse_integer(num));
  } else {
    std::string_view den = text.substr(slash + 1);
    if (!valid_integer_text(den) || den[0] == '-' || den[0] == '+')
      throw ParseError("malformed rational literal '" + std::string(text) + "'");
    Integer d = parse_integer(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    q = Rational(parse_integer(num), d);
    q.canonicalize();
  }
  return q;
}

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str(10);
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

long vp(const Integer& n, const Integer& p) {
  Integer m = abs(n);
  long v = 0;
  while (m != 0 && mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

long vp(const Rational& q, const Integer& p) {
  return vp(q.get_num(), p) - vp(q.get_den(), p);
}

std::string to_string(const ExtRational& v) {
  return v.is_infinite() ? std::string("inf") : to_string(v.value());
}

std::ostream& operator<<(std::ostream& os, const ExtRational& v) {
  return os << to_string(v);
}

Integer ipow(const Integer& p, long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

}  // namespace arbor
