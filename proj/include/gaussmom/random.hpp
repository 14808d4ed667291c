#pragma once

#include <array>
#include <cstdint>

namespace gaussmom {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: every output block is a pure function of (counter, key).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;

  static Key key_from_seed(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }
};

/// Maps 64 random bits to the open interval (0, 1) using the top 52 bits; never returns 0 or 1.
double uniform_open01(std::uint64_t bits) noexcept;

/// Standard normal quantile (Wichura, AS 241, PPND16); p in (0, 1).
double inverse_normal_cdf(double p);

}  // namespace gaussmom
