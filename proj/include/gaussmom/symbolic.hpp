#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "gaussmom/gaussian_spec.hpp"
#include "gaussmom/multi_index.hpp"
#include "gaussmom/numeric.hpp"

namespace gaussmom {

/// Position of the unordered pair {i, j}, i < j, in the row-major upper
/// triangle of an N x N matrix.
std::size_t pair_slot(std::size_t i, std::size_t j, std::size_t dimension);
std::size_t pair_count(std::size_t dimension);

/// One addend  coeff · ∏μᵢ^rᵢ · ∏(σᵢ²)^vᵢ · ∏_{i<j} C_ij^e_ij · E[∂^a g].
struct SymbolicTerm {
  BigInt coeff;
  MultiIndex mu_pow;
  MultiIndex var_pow;
  /// Exponents of C_ij for i < j, row-major upper triangle (see pair_slot).
  MultiIndex cov_pow;
  MultiIndex deriv;

  /// coeff 1, every exponent and derivative order zero.
  static SymbolicTerm unit(std::size_t dimension);

  std::size_t dimension() const noexcept { return mu_pow.size(); }
  unsigned cov(std::size_t i, std::size_t j) const;
  unsigned& cov(std::size_t i, std::size_t j);

  using Signature = std::tuple<MultiIndex, MultiIndex, MultiIndex, MultiIndex>;
  /// (deriv, mu_pow, var_pow, cov_pow); lexicographic comparison of this
  /// tuple is the canonical term order.
  Signature signature() const { return {deriv, mu_pow, var_pow, cov_pow}; }

  friend bool operator==(const SymbolicTerm&, const SymbolicTerm&) = default;
};

/// Canonical sum of symbolic terms: unique signatures, nonzero coefficients,
/// sorted by signature. Only `canonicalize` and `ExpansionBuilder` create them.
class Expansion {
 public:
  explicit Expansion(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<SymbolicTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Terms satisfying `keep`; stays canonical.
  Expansion filtered(const std::function<bool(const SymbolicTerm&)>& keep) const;

  friend bool operator==(const Expansion&, const Expansion&) = default;

 private:
  friend class ExpansionBuilder;
  std::size_t dimension_;
  std::vector<SymbolicTerm> terms_;
};

/// Accumulates raw terms keyed by signature.
class ExpansionBuilder {
 public:
  explicit ExpansionBuilder(std::size_t dimension) : dimension_(dimension) {}

  /// Throws std::invalid_argument on a dimension mismatch.
  void add(const SymbolicTerm& term);
  Expansion finish() const;

 private:
  std::size_t dimension_;
  std::map<SymbolicTerm::Signature, BigInt> merged_;
};

/// Merges like terms, drops zeros, sorts. Throws std::invalid_argument when a
/// term's dimension differs from `dimension`.
Expansion canonicalize(const std::vector<SymbolicTerm>& raw, std::size_t dimension);
Expansion canonicalize(const Expansion& expansion);

enum class RenderFormat { json, text };

/// Text: one term per line, e.g. "2*s2^1*C12^2*E[d1 d2^2 g]"; "0" when empty.
/// JSON: the Expansion schema, pretty-printed with two-space indentation.
std::string render(const Expansion& expansion, RenderFormat format);

nlohmann::ordered_json to_json(const Expansion& expansion);
/// Inverse of to_json; the result is canonicalized. Throws std::invalid_argument.
Expansion expansion_from_json(const nlohmann::json& document);

/// coeff · ∏μᵢ^rᵢ · ∏σᵢ^{2vᵢ} · ∏C_ij^e_ij, without the E[∂^a g] factor.
template <class Scalar>
Scalar evaluate_term_prefactor(const SymbolicTerm& term, const BasicGaussianSpec<Scalar>& spec);

}  // namespace gaussmom
