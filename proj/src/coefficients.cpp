#include "gaussmom/coefficients.hpp"

#include <stdexcept>

namespace gaussmom {

BigInt factorial(unsigned n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt hermite_coeff(unsigned ell, int k) {
  if (k < 0 || 2 * static_cast<unsigned>(k) > ell) return 0;
  const auto kk = static_cast<unsigned>(k);
  BigInt denominator = factorial(kk) * factorial(ell - 2 * kk);
  denominator <<= kk;
  return factorial(ell) / denominator;
}

BigInt glue_coeff(unsigned ell1, unsigned ell2, int k) {
  if (k < 0) return 0;
  const auto kk = static_cast<unsigned>(k);
  if (kk > ell1 || kk > ell2) return 0;
  return binomial(ell1, kk) * binomial(ell2, kk) * factorial(kk);
}

BigInt multinomial(unsigned n, std::span<const unsigned> parts) {
  unsigned sum = 0;
  BigInt denominator = 1;
  for (unsigned p : parts) {
    sum += p;
    denominator *= factorial(p);
  }
  if (sum != n) throw std::invalid_argument("multinomial: parts do not sum to n");
  return factorial(n) / denominator;
}

BigInt falling_factorial(unsigned m, unsigned ell) {
  if (ell > m) return 0;
  BigInt out = 1;
  for (unsigned t = 0; t < ell; ++t) out *= m - t;
  return out;
}

BigInt evaluate(const CoeffKey& key) {
  const auto& a = key.arguments;
  auto need = [&](std::size_t count) {
    if (a.size() != count) throw std::invalid_argument("coefficient key has the wrong number of arguments");
  };
  switch (key.family) {
    case CoeffFamily::Hermite:
      need(2);
      return hermite_coeff(a[0], static_cast<int>(a[1]));
    case CoeffFamily::Glue:
      need(3);
      return glue_coeff(a[0], a[1], static_cast<int>(a[2]));
    case CoeffFamily::Multinomial:
      if (a.empty()) throw std::invalid_argument("multinomial key needs n");
      return multinomial(a[0], std::span<const unsigned>(a).subspan(1));
    case CoeffFamily::FallingFactorial:
      need(2);
      return falling_factorial(a[0], a[1]);
  }
  throw std::invalid_argument("unknown coefficient family");
}

}  // namespace gaussmom
