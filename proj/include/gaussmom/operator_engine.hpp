#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gaussmom/gaussian_spec.hpp"
#include "gaussmom/polynomial.hpp"

namespace gaussmom {

// Gaussian expectations as averaged-shift operators,
//   E[g(X)] = (∏ T_ii)(∏_{i<j} T_ij) g(μ),
//   T_ii = Σ_m σᵢ^{2m}/(2^m m!) ∂ᵢ^{2m},   T_ij = Σ_m C_ij^m/m! ∂ᵢ^m ∂ⱼ^m.
// On polynomials both series stop once the derivative order exceeds the degree.

struct OperatorSpec {
  enum class Kind { Diagonal, Cross };

  Kind kind;
  std::size_t i;
  std::size_t j;  // equals i for Diagonal
  Rational value;  // σᵢ² or C_ij

  static OperatorSpec diagonal(std::size_t i, Rational variance) {
    return {Kind::Diagonal, i, i, std::move(variance)};
  }
  /// Throws std::invalid_argument when i == j.
  static OperatorSpec cross(std::size_t i, std::size_t j, Rational covariance);
};

Polynomial apply_diagonal(const Polynomial& p, std::size_t i, const Rational& variance);
/// Throws std::invalid_argument when i == j.
Polynomial apply_cross(const Polynomial& p, std::size_t i, std::size_t j, const Rational& covariance);
Polynomial apply(const Polynomial& p, const OperatorSpec& op);
/// Applies `ops` left to right.
Polynomial apply_all(Polynomial p, std::span<const OperatorSpec> ops);

/// Diagonals by ascending i, then crosses by ascending (i, j).
std::vector<OperatorSpec> canonical_operator_order(const ExactGaussianSpec& spec);

Rational operator_expectation(const Polynomial& g, const ExactGaussianSpec& spec);
/// Runs exactly on the binary values of `spec` and rounds once at the end.
double operator_expectation(const Polynomial& g, const GaussianSpec& spec);

}  // namespace gaussmom
