#include "arbor/binary_form.hpp"

namespace arbor {

void normalize_integral(const NumberField& K, std::vector<KForm*> forms) {
  Integer den = 1;
  for (auto* F : forms)
    for (const auto& c : F->coeffs)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.den.get_mpz_t());
  Integer content = 0;
  for (auto* F : forms)
    for (const auto& c : F->coeffs)
      for (const auto& x : c.num) {
        Integer scaled = x * (den / c.den);
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), scaled.get_mpz_t());
      }
  if (content == 0) return;
  const Rational s(den, content);
  for (auto* F : forms)
    for (auto& c : F->coeffs) c = K.scale(c, s);
}

KForm normalized(const NumberField& K, KForm F) {
  normalize_integral(K, {&F});
  return F;
}

}  // namespace arbor
