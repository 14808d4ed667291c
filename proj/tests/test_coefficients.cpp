#include <functional>
#include <vector>

#include "doctest.h"

#include "gaussmom/coefficients.hpp"

using namespace gaussmom;

TEST_CASE("hermite coefficient values") {
  CHECK(hermite_coeff(0, 0) == 1);
  CHECK(hermite_coeff(4, 2) == 3);
  CHECK(hermite_coeff(2, 3) == 0);
  CHECK(hermite_coeff(5, 2) == 15);
  CHECK(hermite_coeff(3, -1) == 0);
  // 40!/(2^20 20!) = 39!!, beyond 64 bits
  CHECK(hermite_coeff(40, 20) == BigInt("319830986772877770815625"));
}

TEST_CASE("glue coefficient values") {
  CHECK(glue_coeff(1, 1, 1) == 1);
  CHECK(glue_coeff(2, 2, 1) == 4);
  CHECK(glue_coeff(3, 2, 2) == 6);
  CHECK(glue_coeff(3, 2, 3) == 0);
  CHECK(glue_coeff(3, 2, -1) == 0);
  for (unsigned a = 0; a <= 8; ++a) {
    for (unsigned b = 0; b <= 8; ++b) {
      for (int k = -1; k <= 9; ++k) CHECK(glue_coeff(a, b, k) == glue_coeff(b, a, k));
    }
  }
}

TEST_CASE("multinomial values and errors") {
  const std::vector<unsigned> one{3};
  const std::vector<unsigned> three{1, 2, 1};
  const std::vector<unsigned> unit{0, 1, 0};
  CHECK(multinomial(3, one) == 1);
  CHECK(multinomial(4, three) == 12);
  CHECK(multinomial(1, unit) == 1);
  const std::vector<unsigned> bad{1, 1};
  CHECK_THROWS_AS(multinomial(3, bad), std::invalid_argument);
}

TEST_CASE("falling factorial values") {
  CHECK(falling_factorial(5, 0) == 1);
  CHECK(falling_factorial(5, 2) == 20);
  CHECK(falling_factorial(3, 4) == 0);
  CHECK(falling_factorial(0, 0) == 1);
  CHECK(falling_factorial(6, 6) == factorial(6));
}

TEST_CASE("coefficient keys dispatch and check arity") {
  CHECK(evaluate({CoeffFamily::Hermite, {5, 2}}) == 15);
  CHECK(evaluate({CoeffFamily::Glue, {3, 2, 2}}) == 6);
  CHECK(evaluate({CoeffFamily::Multinomial, {4, 1, 2, 1}}) == 12);
  CHECK(evaluate({CoeffFamily::FallingFactorial, {5, 2}}) == 20);
  CHECK_THROWS_AS(evaluate({CoeffFamily::Hermite, {5}}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate({CoeffFamily::Glue, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate({CoeffFamily::FallingFactorial, {1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("hermite recurrence") {
  for (unsigned l = 0; l <= 20; ++l) {
    for (int k = 0; 2 * k <= static_cast<int>(l) + 1; ++k) {
      const BigInt rhs = hermite_coeff(l, k) + BigInt(static_cast<long>(l) - 2 * k + 2) * hermite_coeff(l, k - 1);
      CHECK(hermite_coeff(l + 1, k) == rhs);
    }
  }
}

TEST_CASE("glue recurrence") {
  for (unsigned a = 0; a <= 15; ++a) {
    for (unsigned b = 0; b <= 15; ++b) {
      for (int k = 0; k <= static_cast<int>(std::min(a + 1, b)); ++k) {
        const BigInt rhs = glue_coeff(a, b, k) + BigInt(static_cast<long>(b) - k + 1) * glue_coeff(a, b, k - 1);
        CHECK(glue_coeff(a + 1, b, k) == rhs);
      }
    }
  }
}

TEST_CASE("falling factorial product expands in glue coefficients") {
  for (unsigned m = 0; m <= 12; ++m) {
    for (unsigned a = 0; a <= 6; ++a) {
      for (unsigned b = 0; b <= 6; ++b) {
        BigInt sum = 0;
        for (unsigned k = 0; k <= std::min(a, b); ++k) {
          sum += glue_coeff(a, b, static_cast<int>(k)) * falling_factorial(m, a + b - k);
        }
        CHECK(falling_factorial(m, a) * falling_factorial(m, b) == sum);
      }
    }
  }
}

TEST_CASE("hermite coefficients are the magnitudes of He_l coefficients") {
  // He_{l+1} = x He_l - l He_{l-1}, coefficients indexed by power of x
  std::vector<std::vector<BigInt>> he{{1}, {0, 1}};
  for (unsigned l = 1; l < 12; ++l) {
    std::vector<BigInt> next(l + 2, 0);
    for (unsigned p = 0; p <= l; ++p) next[p + 1] += he[l][p];
    for (unsigned p = 0; p + 1 <= l; ++p) next[p] -= BigInt(l) * he[l - 1][p];
    he.push_back(next);
  }
  for (unsigned l = 0; l <= 12; ++l) {
    for (int k = 0; 2 * k <= static_cast<int>(l); ++k) {
      const BigInt expected = (k % 2 == 0 ? 1 : -1) * hermite_coeff(l, k);
      CHECK(he[l][l - 2 * k] == expected);
    }
  }
}

namespace {

void for_each_composition(unsigned total, std::size_t parts, std::vector<unsigned>& current,
                          const std::function<void(const std::vector<unsigned>&)>& visit) {
  if (current.size() + 1 == parts) {
    current.push_back(total);
    visit(current);
    current.pop_back();
    return;
  }
  for (unsigned first = 0; first <= total; ++first) {
    current.push_back(first);
    for_each_composition(total - first, parts, current, visit);
    current.pop_back();
  }
}

}  // namespace

TEST_CASE("multinomial addition over one extra unit") {
  std::size_t checked = 0;
  for (unsigned n = 0; n <= 8; ++n) {
    for (std::size_t dim = 1; dim <= 4; ++dim) {
      std::vector<unsigned> scratch;
      for_each_composition(n + 1, dim + 1, scratch, [&](const std::vector<unsigned>& parts) {
        BigInt sum = 0;
        for (std::size_t m = 0; m < parts.size(); ++m) {
          if (parts[m] == 0) continue;
          std::vector<unsigned> lowered = parts;
          --lowered[m];
          sum += multinomial(n, lowered);
        }
        CHECK(multinomial(n + 1, parts) == sum);
        ++checked;
      });
    }
  }
  CHECK(checked > 0);
}
