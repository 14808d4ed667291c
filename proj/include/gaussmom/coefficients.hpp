#pragma once

#include <span>
#include <vector>

#include "gaussmom/numeric.hpp"

namespace gaussmom {

BigInt factorial(unsigned n);

/// C(n, k); zero when k > n.
BigInt binomial(unsigned n, unsigned k);

/// Bessel number ℓ!/(2^k k! (ℓ-2k)!): the number of ways to split ℓ items
/// into k unordered pairs and ℓ-2k singletons. Zero for k < 0 or 2k > ℓ.
BigInt hermite_coeff(unsigned ell, int k);

/// C(ℓ₁,k)·C(ℓ₂,k)·k!, the number of ways to glue k items of one set to k
/// items of another. Zero outside 0 <= k <= min(ℓ₁, ℓ₂).
BigInt glue_coeff(unsigned ell1, unsigned ell2, int k);

/// n! / ∏ parts!. Throws std::invalid_argument unless the parts sum to n.
BigInt multinomial(unsigned n, std::span<const unsigned> parts);

/// m·(m-1)···(m-ℓ+1); one for ℓ = 0 and zero for ℓ > m.
BigInt falling_factorial(unsigned m, unsigned ell);

enum class CoeffFamily { Hermite, Glue, Multinomial, FallingFactorial };

/// Names one coefficient by family and argument list:
/// Hermite (ℓ, k), Glue (ℓ₁, ℓ₂, k), Multinomial (n, parts...), FallingFactorial (m, ℓ).
struct CoeffKey {
  CoeffFamily family;
  std::vector<unsigned> arguments;
};

/// Throws std::invalid_argument on a wrong argument count.
BigInt evaluate(const CoeffKey& key);

}  // namespace gaussmom
