#include "gaussmom/operator_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "gaussmom/coefficients.hpp"

namespace gaussmom {

OperatorSpec OperatorSpec::cross(std::size_t i, std::size_t j, Rational covariance) {
  if (i == j) throw std::invalid_argument("cross operator needs i != j");
  return {Kind::Cross, i, j, std::move(covariance)};
}

Polynomial apply_diagonal(const Polynomial& p, std::size_t i, const Rational& variance) {
  if (i >= p.dimension()) throw std::invalid_argument("diagonal operator index out of range");
  Polynomial out = p;
  if (variance == 0) return out;
  const unsigned degree = p.degree_in(i);
  Rational weight = 1;
  for (unsigned m = 1; 2 * m <= degree; ++m) {
    // σ^{2m} / (2^m m!)
    weight *= variance;
    weight /= Rational(2 * m);
    out += partial_derivative(p, i, 2 * m) * weight;
  }
  return out;
}

Polynomial apply_cross(const Polynomial& p, std::size_t i, std::size_t j, const Rational& covariance) {
  if (i == j) throw std::invalid_argument("cross operator needs i != j");
  if (i >= p.dimension() || j >= p.dimension()) throw std::invalid_argument("cross operator index out of range");
  Polynomial out = p;
  if (covariance == 0) return out;
  const unsigned degree = std::min(p.degree_in(i), p.degree_in(j));
  Rational weight = 1;
  for (unsigned m = 1; m <= degree; ++m) {
    // C^m / m!
    weight *= covariance;
    weight /= Rational(m);
    MultiIndex orders(p.dimension());
    orders[i] = m;
    orders[j] = m;
    out += partial_derivative(p, orders) * weight;
  }
  return out;
}

Polynomial apply(const Polynomial& p, const OperatorSpec& op) {
  if (op.kind == OperatorSpec::Kind::Diagonal) return apply_diagonal(p, op.i, op.value);
  return apply_cross(p, op.i, op.j, op.value);
}

Polynomial apply_all(Polynomial p, std::span<const OperatorSpec> ops) {
  for (const auto& op : ops) p = apply(p, op);
  return p;
}

std::vector<OperatorSpec> canonical_operator_order(const ExactGaussianSpec& spec) {
  const std::size_t n = spec.dimension();
  std::vector<OperatorSpec> ops;
  for (std::size_t i = 0; i < n; ++i) ops.push_back(OperatorSpec::diagonal(i, spec.variance(i)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) ops.push_back(OperatorSpec::cross(i, j, spec.cov(i, j)));
  }
  return ops;
}

Rational operator_expectation(const Polynomial& g, const ExactGaussianSpec& spec) {
  if (g.dimension() != spec.dimension()) throw std::invalid_argument("polynomial and spec dimensions differ");
  const auto ops = canonical_operator_order(spec);
  const Polynomial shifted = apply_all(g, ops);
  return evaluate_exact(shifted, spec.mean_vector());
}

double operator_expectation(const Polynomial& g, const GaussianSpec& spec) {
  return operator_expectation(g, to_exact(spec)).get_d();
}

}  // namespace gaussmom
