#include "gaussmom/stein_expansion.hpp"

#include <algorithm>
#include <string>

#include "gaussmom/coefficients.hpp"

namespace gaussmom {
namespace {

using Composition = std::vector<unsigned>;

// Compositions of `total` into `parts` nonnegative parts, colexicographic
// order (the last part varies slowest).
std::vector<Composition> colex_compositions(unsigned total, std::size_t parts) {
  std::vector<Composition> out;
  Composition current(parts, 0);
  auto fill = [&](auto& self, std::size_t position, unsigned remaining) -> void {
    if (position == 0) {
      current[0] = remaining;
      out.push_back(current);
      return;
    }
    for (unsigned v = 0; v <= remaining; ++v) {
      current[position] = v;
      self(self, position - 1, remaining - v);
    }
    current[position] = 0;
  };
  fill(fill, parts - 1, total);
  return out;
}

// Row-by-row walk over (r, L). `keep_row(i, r, L)` runs after row i is set
// and may prune the subtree.
template <class KeepRow, class Visit>
void walk_partitions(const MultiIndex& n, KeepRow&& keep_row, Visit&& visit) {
  const std::size_t dim = n.size();
  std::vector<std::vector<Composition>> rows;
  rows.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) rows.push_back(colex_compositions(n[i], dim + 1));

  MultiIndex r(dim);
  IndexMatrix L(dim);
  auto recurse = [&](auto& self, std::size_t i) -> void {
    if (i == dim) {
      visit(r, L);
      return;
    }
    for (const auto& c : rows[i]) {
      r[i] = c[0];
      for (std::size_t j = 0; j < dim; ++j) L(i, j) = c[j + 1];
      if (!keep_row(i, r, L)) continue;
      self(self, i + 1);
    }
  };
  recurse(recurse, 0);
}

unsigned abs_diff(unsigned a, unsigned b) { return a > b ? a - b : b - a; }

// Smallest |a| any K can reach once rows 0..i of L are fixed.
unsigned derivative_lower_bound(const MultiIndex& n, const IndexMatrix& L, std::size_t filled_row) {
  const std::size_t dim = n.size();
  unsigned bound = 0;
  for (std::size_t p = 0; p <= filled_row; ++p) {
    bound += L(p, p) % 2;
    for (std::size_t q = p + 1; q < dim; ++q) {
      if (q <= filled_row) {
        bound += abs_diff(L(p, q), L(q, p));
      } else if (L(p, q) > n[q]) {
        bound += L(p, q) - n[q];
      }
    }
  }
  return bound;
}

struct KSlot {
  std::size_t i;
  std::size_t j;
  unsigned max_k;
};

}  // namespace

void for_each_partition(const MultiIndex& n,
                        const std::function<void(const MultiIndex& r, const IndexMatrix& L)>& visit) {
  walk_partitions(
      n, [](std::size_t, const MultiIndex&, const IndexMatrix&) { return true; },
      [&](const MultiIndex& r, const IndexMatrix& L) { visit(r, L); });
}

std::vector<std::pair<MultiIndex, IndexMatrix>> enumerate_partitions(const MultiIndex& n) {
  std::vector<std::pair<MultiIndex, IndexMatrix>> out;
  for_each_partition(n, [&](const MultiIndex& r, const IndexMatrix& L) { out.emplace_back(r, L); });
  return out;
}

MultiIndex derivative_orders(const IndexMatrix& L, const IndexMatrix& K) {
  const std::size_t dim = L.dimension();
  if (K.dimension() != dim) throw std::invalid_argument("derivative_orders: L and K dimensions differ");
  MultiIndex a(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (2 * K(i, i) > L(i, i)) throw std::invalid_argument("derivative_orders: k_ii exceeds l_ii/2");
    unsigned ai = L(i, i) - 2 * K(i, i);
    for (std::size_t j = 0; j < dim; ++j) {
      if (j == i) continue;
      if (K(i, j) != K(j, i)) throw std::invalid_argument("derivative_orders: K must be symmetric");
      if (K(i, j) > std::min(L(i, j), L(j, i))) {
        throw std::invalid_argument("derivative_orders: k_ij exceeds min(l_ij, l_ji)");
      }
      ai += L(j, i) - K(i, j);
    }
    a[i] = ai;
  }
  return a;
}

std::uint64_t raw_term_count(const MultiIndex& n) {
  std::uint64_t count = 0;
  for_each_partition(n, [&](const MultiIndex&, const IndexMatrix& L) {
    std::uint64_t product = 1;
    const std::size_t dim = L.dimension();
    for (std::size_t i = 0; i < dim; ++i) {
      product *= L(i, i) / 2 + 1;
      for (std::size_t j = i + 1; j < dim; ++j) product *= std::min(L(i, j), L(j, i)) + 1;
    }
    count += product;
  });
  return count;
}

void for_each_raw_term(const MultiIndex& n, const ExpandOptions& options,
                       const std::function<void(const PartitionAssignment&, const SymbolicTerm&)>& visit) {
  const std::size_t dim = n.size();
  if (dim == 0) throw std::invalid_argument("stein expansion needs at least one component");

  const bool pruning = options.zero_mean || options.max_derivative_order.has_value();
  if (!pruning) {
    // Every (r, L) contributes at least one term.
    BigInt assignments = 1;
    for (std::size_t i = 0; i < dim; ++i) assignments *= binomial(n[i] + static_cast<unsigned>(dim), dim);
    if (assignments > BigInt(std::to_string(options.term_cap))) {
      throw TermCapExceeded("expansion of n = (" + n.to_string() + ") has at least " + assignments.get_str() +
                            " raw terms, above the cap of " + std::to_string(options.term_cap));
    }
  }

  std::uint64_t produced = 0;
  PartitionAssignment assignment{MultiIndex(dim), IndexMatrix(dim), IndexMatrix(dim)};
  SymbolicTerm term = SymbolicTerm::unit(dim);

  auto keep_row = [&](std::size_t i, const MultiIndex& r, const IndexMatrix& L) {
    if (options.zero_mean && r[i] != 0) return false;
    if (options.max_derivative_order && derivative_lower_bound(n, L, i) > *options.max_derivative_order) {
      return false;
    }
    return true;
  };

  auto on_partition = [&](const MultiIndex& r, const IndexMatrix& L) {
    assignment.r = r;
    assignment.L = L;
    assignment.K = IndexMatrix(dim);

    BigInt base = 1;
    std::vector<unsigned> parts(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) {
      parts[0] = r[i];
      for (std::size_t j = 0; j < dim; ++j) parts[j + 1] = L(i, j);
      base *= multinomial(n[i], parts);
    }

    std::vector<KSlot> slots;
    std::vector<std::vector<BigInt>> weights;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        KSlot s{i, j, j == i ? L(i, i) / 2 : std::min(L(i, j), L(j, i))};
        std::vector<BigInt> w;
        for (unsigned k = 0; k <= s.max_k; ++k) {
          w.push_back(j == i ? hermite_coeff(L(i, i), static_cast<int>(k))
                             : glue_coeff(L(i, j), L(j, i), static_cast<int>(k)));
        }
        slots.push_back(s);
        weights.push_back(std::move(w));
      }
    }

    std::vector<unsigned> k(slots.size(), 0);
    while (true) {
      for (std::size_t s = 0; s < slots.size(); ++s) {
        assignment.K(slots[s].i, slots[s].j) = k[s];
        assignment.K(slots[s].j, slots[s].i) = k[s];
      }
      MultiIndex a = derivative_orders(L, assignment.K);
      if (!options.max_derivative_order || a.total() <= *options.max_derivative_order) {
        if (++produced > options.term_cap) {
          throw TermCapExceeded("expansion of n = (" + n.to_string() + ") exceeds the cap of " +
                                std::to_string(options.term_cap) + " raw terms");
        }
        term.coeff = base;
        for (std::size_t s = 0; s < slots.size(); ++s) {
          const auto [i, j, max_k] = slots[s];
          term.coeff *= weights[s][k[s]];
          if (i == j) {
            term.var_pow[i] = L(i, i) - k[s];
          } else {
            term.cov(i, j) = L(i, j) + L(j, i) - k[s];
          }
        }
        term.mu_pow = r;
        term.deriv = std::move(a);
        visit(assignment, term);
      }
      // Odometer, last slot fastest.
      std::size_t s = slots.size();
      while (s > 0) {
        --s;
        if (k[s] < slots[s].max_k) {
          ++k[s];
          break;
        }
        k[s] = 0;
        if (s == 0) return;
      }
      if (slots.empty()) return;
    }
  };

  walk_partitions(n, keep_row, on_partition);
}

Expansion stein_expand(const MultiIndex& n, const ExpandOptions& options) {
  ExpansionBuilder builder(n.size());
  for_each_raw_term(n, options, [&](const PartitionAssignment&, const SymbolicTerm& t) { builder.add(t); });
  return builder.finish();
}

Expansion stein_expand_zero_mean(const MultiIndex& n, const ExpandOptions& options) {
  return stein_expand(n, options).filtered([](const SymbolicTerm& t) { return t.mu_pow.is_zero(); });
}

Expansion uncorrelated_expand(const MultiIndex& n) {
  const std::size_t dim = n.size();
  if (dim == 0) throw std::invalid_argument("uncorrelated expansion needs at least one component");
  ExpansionBuilder builder(dim);
  SymbolicTerm term = SymbolicTerm::unit(dim);
  auto recurse = [&](auto& self, std::size_t i, const BigInt& coeff) -> void {
    if (i == dim) {
      term.coeff = coeff;
      builder.add(term);
      return;
    }
    for (unsigned ell = 0; ell <= n[i]; ++ell) {
      for (unsigned k = 0; 2 * k <= ell; ++k) {
        term.mu_pow[i] = n[i] - ell;
        term.var_pow[i] = ell - k;
        term.deriv[i] = ell - 2 * k;
        self(self, i + 1, coeff * binomial(n[i], ell) * hermite_coeff(ell, static_cast<int>(k)));
      }
    }
  };
  recurse(recurse, 0, BigInt(1));
  return builder.finish();
}

Expansion stein_lemma_terms(std::size_t component, std::size_t dimension) {
  if (component >= dimension) throw std::invalid_argument("stein_lemma_terms: component out of range");
  ExpansionBuilder builder(dimension);
  SymbolicTerm mean_term = SymbolicTerm::unit(dimension);
  mean_term.mu_pow[component] = 1;
  builder.add(mean_term);
  for (std::size_t j = 0; j < dimension; ++j) {
    SymbolicTerm t = SymbolicTerm::unit(dimension);
    if (j == component) {
      t.var_pow[j] = 1;
    } else {
      t.cov(std::min(j, component), std::max(j, component)) = 1;
    }
    t.deriv[j] = 1;
    builder.add(t);
  }
  return builder.finish();
}

Expansion isserlis_expansion(std::size_t dimension) {
  if (dimension == 0) throw std::invalid_argument("isserlis_expansion needs N >= 1");
  ExpansionBuilder builder(dimension);
  if (dimension % 2 != 0) return builder.finish();
  std::vector<bool> used(dimension, false);
  SymbolicTerm term = SymbolicTerm::unit(dimension);
  auto recurse = [&](auto& self) -> void {
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end()) {
      builder.add(term);
      return;
    }
    const auto i = static_cast<std::size_t>(first - used.begin());
    used[i] = true;
    for (std::size_t j = i + 1; j < dimension; ++j) {
      if (used[j]) continue;
      used[j] = true;
      term.cov(i, j) = 1;
      self(self);
      term.cov(i, j) = 0;
      used[j] = false;
    }
    used[i] = false;
  };
  recurse(recurse);
  return builder.finish();
}

Expansion song_lee_moment(const MultiIndex& n) {
  const std::size_t dim = n.size();
  if (dim == 0) throw std::invalid_argument("song_lee_moment needs at least one component");
  BigInt numerator = 1;
  for (unsigned ni : n) numerator *= factorial(ni);

  ExpansionBuilder builder(dim);
  SymbolicTerm term = SymbolicTerm::unit(dim);
  MultiIndex remaining = n;
  // Upper-triangle slots (i, j), j >= i, row-major.
  auto recurse = [&](auto& self, std::size_t i, std::size_t j, const BigInt& denominator) -> void {
    if (j == dim) {
      ++i;
      j = i;
    }
    if (i == dim) {
      BigInt d = denominator;
      for (std::size_t c = 0; c < dim; ++c) d *= factorial(remaining[c]);
      term.coeff = numerator / d;
      term.mu_pow = remaining;
      builder.add(term);
      return;
    }
    if (i == j) {
      const unsigned budget = remaining[i];
      for (unsigned m = 0; 2 * m <= budget; ++m) {
        remaining[i] = budget - 2 * m;
        term.var_pow[i] = m;
        BigInt d = denominator * factorial(m);
        d <<= m;
        self(self, i, j + 1, d);
      }
      remaining[i] = budget;
      term.var_pow[i] = 0;
    } else {
      const unsigned bi = remaining[i];
      const unsigned bj = remaining[j];
      for (unsigned m = 0; m <= std::min(bi, bj); ++m) {
        remaining[i] = bi - m;
        remaining[j] = bj - m;
        term.cov(i, j) = m;
        self(self, i, j + 1, denominator * factorial(m));
      }
      remaining[i] = bi;
      remaining[j] = bj;
      term.cov(i, j) = 0;
    }
  };
  recurse(recurse, 0, 0, BigInt(1));
  return builder.finish();
}

Expansion derivative_free_part(const Expansion& expansion) {
  return expansion.filtered([](const SymbolicTerm& t) { return t.deriv.is_zero(); });
}

}  // namespace gaussmom
