#include "gaussmom/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <thread>

#include "gaussmom/random.hpp"

namespace gaussmom {
namespace {

template <class Scalar>
class SteinReducer {
 public:
  explicit SteinReducer(const BasicGaussianSpec<Scalar>& spec) : spec_(spec) {}

  // E[x^e] via E[x_m q] = μ_m E[q] + Σ_j C_mj E[∂_j q], q = x^{e - e_m}.
  Scalar monomial_moment(const MultiIndex& e) {
    if (e.is_zero()) return Scalar(1);
    if (auto it = memo_.find(e); it != memo_.end()) return it->second;
    const std::size_t n = e.size();
    std::size_t m = 0;
    while (e[m] == 0) ++m;
    MultiIndex q = e;
    --q[m];
    Scalar value = Scalar(0);
    if (spec_.mean(m) != 0) value += spec_.mean(m) * monomial_moment(q);
    for (std::size_t j = 0; j < n; ++j) {
      if (q[j] == 0 || spec_.cov(m, j) == 0) continue;
      MultiIndex dq = q;
      --dq[j];
      value += spec_.cov(m, j) * Scalar(q[j]) * monomial_moment(dq);
    }
    memo_.emplace(e, value);
    return value;
  }

 private:
  const BasicGaussianSpec<Scalar>& spec_;
  std::map<MultiIndex, Scalar> memo_;
};

void check_dimension(const Polynomial& p, std::size_t dimension) {
  if (p.dimension() != dimension) throw std::invalid_argument("polynomial and spec dimensions differ");
}

}  // namespace

template <class Scalar>
Scalar stein_reduce(const Polynomial& p, const BasicGaussianSpec<Scalar>& spec) {
  check_dimension(p, spec.dimension());
  SteinReducer<Scalar> reducer(spec);
  Scalar sum = Scalar(0);
  for (const auto& [e, c] : p.terms()) sum += scalar_from<Scalar>(c) * reducer.monomial_moment(e);
  return sum;
}

void for_each_pairing(std::size_t count,
                      const std::function<void(std::span<const std::pair<std::size_t, std::size_t>>)>& visit) {
  if (count % 2 != 0) return;
  std::vector<bool> used(count, false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(count / 2);
  auto recurse = [&](auto& self) -> void {
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end()) {
      visit(pairs);
      return;
    }
    const auto i = static_cast<std::size_t>(first - used.begin());
    used[i] = true;
    for (std::size_t j = i + 1; j < count; ++j) {
      if (used[j]) continue;
      used[j] = true;
      pairs.emplace_back(i, j);
      self(self);
      pairs.pop_back();
      used[j] = false;
    }
    used[i] = false;
  };
  recurse(recurse);
}

template <class Scalar>
Scalar pairing_moment(std::span<const std::size_t> labels, const BasicGaussianSpec<Scalar>& spec) {
  if (!spec.has_zero_mean()) throw std::invalid_argument("pairing_moment requires a zero-mean spec");
  for (std::size_t label : labels) {
    if (label >= spec.dimension()) throw std::invalid_argument("pairing_moment: label out of range");
  }
  Scalar sum = Scalar(0);
  for_each_pairing(labels.size(), [&](std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    Scalar product = Scalar(1);
    for (const auto& [a, b] : pairs) product *= spec.cov(labels[a], labels[b]);
    sum += product;
  });
  return sum;
}

template <class Scalar>
Scalar pairing_moment(const MultiIndex& n, const BasicGaussianSpec<Scalar>& spec) {
  if (n.size() != spec.dimension()) throw std::invalid_argument("multi-index and spec dimensions differ");
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < n.size(); ++i) labels.insert(labels.end(), n[i], i);
  return pairing_moment<Scalar>(std::span<const std::size_t>(labels), spec);
}

template <class Scalar>
Scalar pairing_expectation(const Polynomial& p, const BasicGaussianSpec<Scalar>& spec) {
  check_dimension(p, spec.dimension());
  Scalar sum = Scalar(0);
  for (const auto& [e, c] : p.terms()) sum += scalar_from<Scalar>(c) * pairing_moment(e, spec);
  return sum;
}

template double stein_reduce(const Polynomial&, const GaussianSpec&);
template Rational stein_reduce(const Polynomial&, const ExactGaussianSpec&);
template double pairing_moment(std::span<const std::size_t>, const GaussianSpec&);
template Rational pairing_moment(std::span<const std::size_t>, const ExactGaussianSpec&);
template double pairing_moment(const MultiIndex&, const GaussianSpec&);
template Rational pairing_moment(const MultiIndex&, const ExactGaussianSpec&);
template double pairing_expectation(const Polynomial&, const GaussianSpec&);
template Rational pairing_expectation(const Polynomial&, const ExactGaussianSpec&);

std::vector<double> cholesky(const GaussianSpec& spec) {
  constexpr double kPivotTolerance = 1e-12;
  const std::size_t n = spec.dimension();
  std::vector<double> L(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = spec.cov(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= L[j * n + k] * L[j * n + k];
    if (pivot < -kPivotTolerance) {
      throw NotPositiveSemidefinite("covariance is not positive semi-definite (pivot " + std::to_string(pivot) +
                                    " at component " + std::to_string(j + 1) + ")");
    }
    if (pivot <= kPivotTolerance) continue;  // zero column
    const double d = std::sqrt(pivot);
    L[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spec.cov(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      L[i * n + j] = s / d;
    }
  }
  return L;
}

namespace {

constexpr std::uint64_t kBlockSize = 4096;

struct BlockStats {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

void merge_into(BlockStats& acc, const BlockStats& b) {
  if (b.count == 0.0) return;
  if (acc.count == 0.0) {
    acc = b;
    return;
  }
  const double total = acc.count + b.count;
  const double delta = b.mean - acc.mean;
  acc.mean += delta * (b.count / total);
  acc.m2 += b.m2 + delta * delta * (acc.count * b.count / total);
  acc.count = total;
}

struct Integrand {
  std::vector<std::pair<std::vector<unsigned>, double>> monomials;

  double operator()(const std::vector<double>& x) const {
    double sum = 0.0;
    for (const auto& [e, c] : monomials) {
      double term = c;
      for (std::size_t i = 0; i < e.size(); ++i) term *= ipow(x[i], e[i]);
      sum += term;
    }
    return sum;
  }
};

}  // namespace

McReport mc_estimate(const Polynomial& g, const MultiIndex& n, const GaussianSpec& spec, const McOptions& options) {
  const std::size_t dim = spec.dimension();
  if (g.dimension() != dim || n.size() != dim) throw std::invalid_argument("polynomial, n and spec dimensions differ");
  if (options.samples < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");
  const std::vector<double> L = cholesky(spec);

  Integrand integrand;
  const Polynomial product = multiply_by_monomial(g, n);
  for (const auto& [e, c] : product.terms()) integrand.monomials.emplace_back(e.entries(), c.get_d());

  const auto key = Philox4x32::key_from_seed(options.seed);
  const std::uint64_t block_count = (options.samples + kBlockSize - 1) / kBlockSize;
  std::vector<BlockStats> blocks(block_count);

  auto run_blocks = [&](std::uint64_t first, std::uint64_t stride) {
    std::vector<double> z(dim + 1);
    std::vector<double> x(dim);
    for (std::uint64_t b = first; b < block_count; b += stride) {
      BlockStats stats;
      const std::uint64_t begin = b * kBlockSize;
      const std::uint64_t end = std::min(options.samples, begin + kBlockSize);
      for (std::uint64_t s = begin; s < end; ++s) {
        for (std::size_t pair = 0; 2 * pair < dim; ++pair) {
          const auto out = Philox4x32::block(
              {static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32), static_cast<std::uint32_t>(pair), 0U},
              key);
          const std::uint64_t w0 = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
          const std::uint64_t w1 = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
          z[2 * pair] = inverse_normal_cdf(uniform_open01(w0));
          z[2 * pair + 1] = inverse_normal_cdf(uniform_open01(w1));
        }
        for (std::size_t i = 0; i < dim; ++i) {
          double xi = spec.mean(i);
          for (std::size_t k = 0; k <= i; ++k) xi += L[i * dim + k] * z[k];
          x[i] = xi;
        }
        const double value = integrand(x);
        stats.count += 1.0;
        const double delta = value - stats.mean;
        stats.mean += delta / stats.count;
        stats.m2 += delta * (value - stats.mean);
      }
      blocks[b] = stats;
    }
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(block_count)));
  if (workers == 1) {
    run_blocks(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_blocks, w, workers);
  }

  BlockStats total;
  for (const auto& b : blocks) merge_into(total, b);
  const double samples = static_cast<double>(options.samples);
  const double variance = total.m2 / (samples - 1.0);
  return McReport{total.mean, std::sqrt(variance / samples), options.samples, options.seed};
}

}  // namespace gaussmom
