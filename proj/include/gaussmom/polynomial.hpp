#pragma once

#include <cstddef>
#include <map>
#include <span>

#include "json.hpp"

#include "gaussmom/gaussian_spec.hpp"
#include "gaussmom/multi_index.hpp"
#include "gaussmom/numeric.hpp"
#include "gaussmom/symbolic.hpp"

namespace gaussmom {

/// Sparse multivariate polynomial with exact rational coefficients.
/// Zero coefficients are never stored.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Rational>;

  explicit Polynomial(std::size_t dimension) : dimension_(dimension) {}

  static Polynomial constant(std::size_t dimension, const Rational& value);
  static Polynomial monomial(MultiIndex exponent, const Rational& coeff = 1);
  /// xᵢ, zero-based.
  static Polynomial variable(std::size_t dimension, std::size_t component);

  std::size_t dimension() const noexcept { return dimension_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Rational coefficient(const MultiIndex& exponent) const;

  /// Adds coeff·x^exponent, merging with an existing monomial.
  void add_term(const MultiIndex& exponent, const Rational& coeff);

  /// Total degree; zero for the zero polynomial.
  unsigned degree() const;
  unsigned degree_in(std::size_t component) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scale);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void check_dimension(const MultiIndex& exponent) const;

  std::size_t dimension_;
  Terms terms_;
};

/// ∂^a p.
Polynomial partial_derivative(const Polynomial& p, const MultiIndex& orders);
/// ∂ᵢ^order p, zero-based component.
Polynomial partial_derivative(const Polynomial& p, std::size_t component, unsigned order = 1);

/// Throws std::invalid_argument on a dimension mismatch.
double evaluate(const Polynomial& p, std::span<const double> x);
Rational evaluate_exact(const Polynomial& p, std::span<const Rational> x);

/// p · x^n.
Polynomial multiply_by_monomial(const Polynomial& p, const MultiIndex& n);

/// E[p(X)], monomial by monomial through the closed-form product moments.
template <class Scalar>
Scalar gaussian_expectation(const Polynomial& p, const BasicGaussianSpec<Scalar>& spec);

/// Σ_terms prefactor(t) · E[∂^{t.deriv} g(X)].
template <class Scalar>
Scalar expansion_value(const Expansion& expansion, const Polynomial& g,
                       const BasicGaussianSpec<Scalar>& spec);

/// {"n_dim": N, "monomials": [{"exp": [...], "coeff": "p/q"}, ...]}
nlohmann::ordered_json to_json(const Polynomial& p);
/// Throws std::invalid_argument.
Polynomial polynomial_from_json(const nlohmann::json& document);

}  // namespace gaussmom
