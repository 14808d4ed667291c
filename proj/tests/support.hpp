#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gaussmom/gaussian_spec.hpp"
#include "gaussmom/multi_index.hpp"
#include "gaussmom/numeric.hpp"
#include "gaussmom/polynomial.hpp"

namespace gaussmom::testing {

// Hand-rolled generators for property tests. Every generator draws from the
// caller's engine only, so a fixed seed fixes the whole case sequence.
using Rng = std::mt19937_64;

inline Rational small_rational(Rng& rng, int lo, int hi, int max_den = 3) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline MultiIndex random_multi_index(Rng& rng, std::size_t dim, unsigned max_total) {
  MultiIndex n(dim);
  std::uniform_int_distribution<unsigned> total(0, max_total);
  std::uniform_int_distribution<std::size_t> slot(0, dim - 1);
  for (unsigned t = total(rng); t > 0; --t) ++n[slot(rng)];
  return n;
}

inline Polynomial random_polynomial(Rng& rng, std::size_t dim, unsigned max_degree, unsigned max_terms = 4) {
  Polynomial p(dim);
  std::uniform_int_distribution<unsigned> count(1, max_terms);
  for (unsigned t = count(rng); t > 0; --t) {
    p.add_term(random_multi_index(rng, dim, max_degree), small_rational(rng, -5, 5));
  }
  if (p.is_zero()) p = Polynomial::constant(dim, 1);
  return p;
}

/// C = A·Aᵀ + D: PSD by construction, singular when D = 0 and A is rank deficient.
inline ExactGaussianSpec random_exact_spec(Rng& rng, std::size_t dim, bool zero_mean = false) {
  std::vector<Rational> a(dim * dim);
  for (auto& x : a) x = small_rational(rng, -3, 3);
  std::vector<Rational> c(dim * dim);
  std::bernoulli_distribution add_diagonal(0.7);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < dim; ++k) s += a[i * dim + k] * a[j * dim + k];
      c[i * dim + j] = s;
    }
  }
  if (add_diagonal(rng)) {
    for (std::size_t i = 0; i < dim; ++i) c[i * dim + i] += small_rational(rng, 0, 2, 2);
  }
  std::vector<Rational> mu(dim);
  if (!zero_mean) {
    for (auto& m : mu) m = small_rational(rng, -4, 4, 4);
  }
  return ExactGaussianSpec(std::move(mu), std::move(c));
}

inline ExactGaussianSpec exact_spec(std::vector<Rational> mu, std::vector<Rational> cov) {
  return ExactGaussianSpec(std::move(mu), std::move(cov));
}

inline std::string source_path(const std::string& relative) {
  return std::string(GAUSSMOM_TEST_DIR) + "/" + relative;
}

inline nlohmann::json load_json(const std::string& relative) {
  std::ifstream in(source_path(relative));
  return nlohmann::json::parse(in);
}

inline std::string read_text(const std::string& relative) {
  std::ifstream in(source_path(relative));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Polynomial poly(std::size_t dim, std::initializer_list<std::pair<MultiIndex, Rational>> terms) {
  Polynomial p(dim);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

}  // namespace gaussmom::testing
