#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <type_traits>

namespace gaussmom {

/// Arbitrary-precision integer used for every combinatorial coefficient.
using BigInt = mpz_class;

/// Exact rational; always kept in canonical (reduced, positive denominator) form.
using Rational = mpq_class;

/// Parses "p", "p/q" or a decimal literal such as "-0.25" into a canonical rational.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

template <class Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

/// Converts an exact value into the working scalar of a computation.
template <class Scalar>
Scalar scalar_from(const Rational& value) {
  if constexpr (is_exact_v<Scalar>) {
    return value;
  } else {
    return value.get_d();
  }
}

template <class Scalar>
Scalar scalar_from(const BigInt& value) {
  if constexpr (is_exact_v<Scalar>) {
    return Rational(value);
  } else {
    return value.get_d();
  }
}

template <class Scalar>
Scalar ipow(const Scalar& base, unsigned exponent) {
  Scalar result = Scalar(1);
  Scalar factor = base;
  while (exponent != 0) {
    if ((exponent & 1U) != 0) result *= factor;
    exponent >>= 1U;
    if (exponent != 0) factor *= factor;
  }
  return result;
}

}  // namespace gaussmom
