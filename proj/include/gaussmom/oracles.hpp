#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gaussmom/gaussian_spec.hpp"
#include "gaussmom/multi_index.hpp"
#include "gaussmom/polynomial.hpp"

namespace gaussmom {

/// E[p(X)] by repeated first-order Stein reduction
///   E[x_m q] = μ_m E[q] + Σ_j C_mj E[∂_j q],
/// always peeling the lowest-index variable that is present.
template <class Scalar>
Scalar stein_reduce(const Polynomial& p, const BasicGaussianSpec<Scalar>& spec);

/// Calls `visit` once per perfect matching of positions {0..count-1}, pairs
/// given as (smaller, larger) with the smallest unmatched position first.
/// Visits nothing for odd `count`.
void for_each_pairing(std::size_t count,
                      const std::function<void(std::span<const std::pair<std::size_t, std::size_t>>)>& visit);

/// Zero-mean moment E[X_{l₁}···X_{l_k}] as a sum over pairings of the label
/// positions (labels zero-based, repeats allowed). Throws std::invalid_argument
/// on nonzero mean.
template <class Scalar>
Scalar pairing_moment(std::span<const std::size_t> labels, const BasicGaussianSpec<Scalar>& spec);

/// Same, with labels taken from the exponent vector (component i repeated nᵢ times).
template <class Scalar>
Scalar pairing_moment(const MultiIndex& n, const BasicGaussianSpec<Scalar>& spec);

/// Linear extension of pairing_moment to polynomials.
template <class Scalar>
Scalar pairing_expectation(const Polynomial& p, const BasicGaussianSpec<Scalar>& spec);

class NotPositiveSemidefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lower-triangular L with L·Lᵀ = C, row-major N x N. Pivots within 1e-12 of
/// zero are treated as zero (semi-definite C); below that throws
/// NotPositiveSemidefinite.
std::vector<double> cholesky(const GaussianSpec& spec);

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'2024'9a55'1a45ULL;

struct McOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
};

struct McReport {
  double estimate;
  double std_error;
  std::uint64_t samples;
  std::uint64_t seed;
};

/// Monte Carlo estimate of E[g(X)·∏Xᵢ^nᵢ] with X = μ + L·Z.
///
/// Sample s uses the Philox blocks with counter (s_lo, s_hi, b, 0) for
/// b = 0..⌈N/2⌉-1 and key = seed; each block gives two normals through the
/// inverse CDF. Partial sums are formed over fixed 4096-sample blocks and
/// merged in block order, so the report is bit-identical for any worker count.
/// Throws std::invalid_argument for samples < 2 and NotPositiveSemidefinite.
McReport mc_estimate(const Polynomial& g, const MultiIndex& n, const GaussianSpec& spec,
                     const McOptions& options = {});

}  // namespace gaussmom
