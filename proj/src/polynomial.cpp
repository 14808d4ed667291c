#include "gaussmom/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "gaussmom/coefficients.hpp"
#include "gaussmom/stein_expansion.hpp"

namespace gaussmom {

Polynomial Polynomial::constant(std::size_t dimension, const Rational& value) {
  Polynomial p(dimension);
  p.add_term(MultiIndex(dimension), value);
  return p;
}

Polynomial Polynomial::monomial(MultiIndex exponent, const Rational& coeff) {
  Polynomial p(exponent.size());
  p.add_term(exponent, coeff);
  return p;
}

Polynomial Polynomial::variable(std::size_t dimension, std::size_t component) {
  return monomial(MultiIndex::unit(dimension, component));
}

void Polynomial::check_dimension(const MultiIndex& exponent) const {
  if (exponent.size() != dimension_) throw std::invalid_argument("polynomial exponent has the wrong dimension");
}

Rational Polynomial::coefficient(const MultiIndex& exponent) const {
  const auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const MultiIndex& exponent, const Rational& coeff) {
  check_dimension(exponent);
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.total());
  return d;
}

unsigned Polynomial::degree_in(std::size_t component) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[component]);
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.dimension_ != dimension_) throw std::invalid_argument("polynomial dimension mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.dimension_ != dimension_) throw std::invalid_argument("polynomial dimension mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scale;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dimension_ != b.dimension_) throw std::invalid_argument("polynomial dimension mismatch");
  Polynomial out(a.dimension_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  }
  return out;
}

Polynomial partial_derivative(const Polynomial& p, const MultiIndex& orders) {
  if (orders.size() != p.dimension()) throw std::invalid_argument("derivative orders have the wrong dimension");
  Polynomial out(p.dimension());
  for (const auto& [e, c] : p.terms()) {
    if (!orders.fits_within(e)) continue;
    Rational coeff = c;
    for (std::size_t i = 0; i < e.size(); ++i) coeff *= Rational(falling_factorial(e[i], orders[i]));
    out.add_term(e - orders, coeff);
  }
  return out;
}

Polynomial partial_derivative(const Polynomial& p, std::size_t component, unsigned order) {
  MultiIndex orders(p.dimension());
  orders[component] = order;
  return partial_derivative(p, orders);
}

double evaluate(const Polynomial& p, std::span<const double> x) {
  if (x.size() != p.dimension()) throw std::invalid_argument("evaluation point has the wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double term = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i) term *= ipow(x[i], e[i]);
    sum += term;
  }
  return sum;
}

Rational evaluate_exact(const Polynomial& p, std::span<const Rational> x) {
  if (x.size() != p.dimension()) throw std::invalid_argument("evaluation point has the wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : p.terms()) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) term *= ipow(x[i], e[i]);
    }
    sum += term;
  }
  return sum;
}

Polynomial multiply_by_monomial(const Polynomial& p, const MultiIndex& n) {
  if (n.size() != p.dimension()) throw std::invalid_argument("monomial has the wrong dimension");
  Polynomial out(p.dimension());
  for (const auto& [e, c] : p.terms()) out.add_term(e + n, c);
  return out;
}

template <class Scalar>
Scalar gaussian_expectation(const Polynomial& p, const BasicGaussianSpec<Scalar>& spec) {
  if (spec.dimension() != p.dimension()) throw std::invalid_argument("polynomial and spec dimensions differ");
  Scalar sum = Scalar(0);
  for (const auto& [e, c] : p.terms()) {
    Scalar moment = Scalar(0);
    const Expansion closed_form = song_lee_moment(e);
    for (const auto& t : closed_form.terms()) moment += evaluate_term_prefactor(t, spec);
    sum += scalar_from<Scalar>(c) * moment;
  }
  return sum;
}

template <class Scalar>
Scalar expansion_value(const Expansion& expansion, const Polynomial& g, const BasicGaussianSpec<Scalar>& spec) {
  if (expansion.dimension() != g.dimension() || spec.dimension() != g.dimension()) {
    throw std::invalid_argument("expansion, polynomial and spec dimensions differ");
  }
  Scalar sum = Scalar(0);
  std::map<MultiIndex, Scalar> derivative_means;
  for (const auto& t : expansion.terms()) {
    auto it = derivative_means.find(t.deriv);
    if (it == derivative_means.end()) {
      it = derivative_means.emplace(t.deriv, gaussian_expectation(partial_derivative(g, t.deriv), spec)).first;
    }
    if (it->second == 0) continue;
    sum += evaluate_term_prefactor(t, spec) * it->second;
  }
  return sum;
}

template double gaussian_expectation(const Polynomial&, const GaussianSpec&);
template Rational gaussian_expectation(const Polynomial&, const ExactGaussianSpec&);
template double expansion_value(const Expansion&, const Polynomial&, const GaussianSpec&);
template Rational expansion_value(const Expansion&, const Polynomial&, const ExactGaussianSpec&);

nlohmann::ordered_json to_json(const Polynomial& p) {
  nlohmann::ordered_json out;
  out["n_dim"] = p.dimension();
  out["monomials"] = nlohmann::ordered_json::array();
  for (const auto& [e, c] : p.terms()) {
    nlohmann::ordered_json m;
    m["exp"] = e.entries();
    m["coeff"] = to_string(c);
    out["monomials"].push_back(std::move(m));
  }
  return out;
}

Polynomial polynomial_from_json(const nlohmann::json& document) {
  if (!document.is_object() || !document.contains("n_dim") || !document["n_dim"].is_number_unsigned() ||
      !document.contains("monomials") || !document["monomials"].is_array()) {
    throw std::invalid_argument("polynomial JSON needs \"n_dim\" and \"monomials\"");
  }
  const auto n = document["n_dim"].get<std::size_t>();
  if (n == 0) throw std::invalid_argument("polynomial JSON: n_dim must be positive");
  Polynomial p(n);
  for (const auto& m : document["monomials"]) {
    if (!m.is_object() || !m.contains("exp") || !m["exp"].is_array() || m["exp"].size() != n ||
        !m.contains("coeff")) {
      throw std::invalid_argument("polynomial monomials need \"exp\" (n_dim entries) and \"coeff\"");
    }
    std::vector<unsigned> e;
    for (const auto& v : m["exp"]) {
      if (!v.is_number_unsigned()) throw std::invalid_argument("polynomial exponents must be nonnegative integers");
      e.push_back(v.get<unsigned>());
    }
    const auto& c = m["coeff"];
    Rational coeff;
    if (c.is_string()) {
      coeff = parse_rational(c.get<std::string>());
    } else if (c.is_number_integer()) {
      coeff = Rational(BigInt(c.dump()));
    } else if (c.is_number_float()) {
      coeff = Rational(c.get<double>());
    } else {
      throw std::invalid_argument("polynomial coefficient must be a rational string or number");
    }
    p.add_term(MultiIndex(std::move(e)), coeff);
  }
  return p;
}

}  // namespace gaussmom
