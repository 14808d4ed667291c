#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gaussmom/multi_index.hpp"
#include "gaussmom/symbolic.hpp"

namespace gaussmom {

/// Dense N x N matrix of nonnegative integers (ℓ_ij or k_ij).
class IndexMatrix {
 public:
  explicit IndexMatrix(std::size_t dimension = 0)
      : dimension_(dimension), entries_(dimension * dimension, 0) {}

  std::size_t dimension() const noexcept { return dimension_; }
  unsigned operator()(std::size_t i, std::size_t j) const { return entries_[i * dimension_ + j]; }
  unsigned& operator()(std::size_t i, std::size_t j) { return entries_[i * dimension_ + j]; }

  friend bool operator==(const IndexMatrix&, const IndexMatrix&) = default;

 private:
  std::size_t dimension_;
  std::vector<unsigned> entries_;
};

/// One summand selector of the expansion: rᵢ + Σ_j ℓ_ij = nᵢ row by row,
/// plus the pairing counts K (k_ii <= ⌊ℓ_ii/2⌋, k_ij = k_ji <= min(ℓ_ij, ℓ_ji)).
struct PartitionAssignment {
  MultiIndex r;
  IndexMatrix L;
  IndexMatrix K;
};

inline constexpr std::uint64_t kDefaultTermCap = 10'000'000;

class TermCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExpandOptions {
  /// Upper bound on the number of raw (unmerged) terms generated.
  std::uint64_t term_cap = kDefaultTermCap;
  /// Skip assignments with r ≠ 0 while generating. Same result as dropping
  /// every term with a μ factor afterwards.
  bool zero_mean = false;
  /// Only generate terms with |a| <= this bound. Assignments whose smallest
  /// reachable |a| already exceeds it are pruned row by row.
  std::optional<unsigned> max_derivative_order;
};

/// Calls `visit(r, L)` for every (r, L) with rᵢ + Σ_j ℓ_ij = nᵢ, exactly once
/// each. Row i's composition (rᵢ, ℓ_i1, ..., ℓ_iN) runs over colexicographic
/// order; rows are nested with row 1 outermost.
void for_each_partition(const MultiIndex& n,
                        const std::function<void(const MultiIndex& r, const IndexMatrix& L)>& visit);

std::vector<std::pair<MultiIndex, IndexMatrix>> enumerate_partitions(const MultiIndex& n);

/// aᵢ = (ℓ_ii - 2k_ii) + Σ_{j≠i} (ℓ_ji - k_ij). Throws std::invalid_argument
/// if K exceeds its bounds for L.
MultiIndex derivative_orders(const IndexMatrix& L, const IndexMatrix& K);

/// Σ over (r, L) of ∏(⌊ℓ_ii/2⌋+1)·∏_{i<j}(min(ℓ_ij, ℓ_ji)+1), computed from
/// the partition stream without building terms.
std::uint64_t raw_term_count(const MultiIndex& n);

/// Streams every raw term of E[g(X)·∏Xᵢ^nᵢ]'s expansion before merging.
/// The term reference is only valid during the callback.
/// Throws TermCapExceeded once more than `options.term_cap` terms are produced.
void for_each_raw_term(const MultiIndex& n, const ExpandOptions& options,
                       const std::function<void(const PartitionAssignment&, const SymbolicTerm&)>& visit);

/// Full canonical expansion of E[g(X)·∏Xᵢ^nᵢ] in terms of E[∂^a g(X)].
Expansion stein_expand(const MultiIndex& n, const ExpandOptions& options = {});

/// stein_expand with every μ-bearing term removed.
Expansion stein_expand_zero_mean(const MultiIndex& n, const ExpandOptions& options = {});

/// Expansion for uncorrelated components (C_ij = 0, i ≠ j).
Expansion uncorrelated_expand(const MultiIndex& n);

/// μ_m E[g] + σ_m² E[∂_m g] + Σ_{j≠m} C_mj E[∂_j g]; `component` is zero-based.
Expansion stein_lemma_terms(std::size_t component, std::size_t dimension);

/// Zero-mean E[X₁···X_N]: one unit term ∏C_ij per perfect matching of
/// {1..N}; empty for odd N.
Expansion isserlis_expansion(std::size_t dimension);

/// E[∏Xᵢ^nᵢ] summed over symmetric m with nonnegative rᵢ = nᵢ - Σ_j(1+δ_ij)m_ij.
Expansion song_lee_moment(const MultiIndex& n);

/// Terms with a = 0, i.e. the part that survives g ≡ 1.
Expansion derivative_free_part(const Expansion& expansion);

}  // namespace gaussmom
