#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace gaussmom {

/// Ordered sequence of nonnegative integers: exponent vectors, derivative
/// orders and similar per-component counts.
///
/// The built-in comparison is lexicographic (a total order used for map keys
/// and canonical term ordering). The componentwise partial order is
/// `fits_within`.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dimension) : entries_(dimension, 0) {}
  MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
  explicit MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {}

  static MultiIndex unit(std::size_t dimension, std::size_t component);

  /// Parses the comma-separated form "1,2,0". Throws std::invalid_argument.
  static MultiIndex parse(std::string_view text);

  std::size_t size() const noexcept { return entries_.size(); }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  unsigned& operator[](std::size_t i) { return entries_[i]; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }
  const std::vector<unsigned>& entries() const noexcept { return entries_; }

  /// |n|, the sum of the entries.
  unsigned total() const noexcept;
  bool is_zero() const noexcept;

  /// Componentwise `*this <= bound`.
  bool fits_within(const MultiIndex& bound) const;

  MultiIndex& operator+=(const MultiIndex& other);
  friend MultiIndex operator+(MultiIndex lhs, const MultiIndex& rhs) { return lhs += rhs; }

  /// Componentwise difference; requires `rhs.fits_within(*this)`.
  friend MultiIndex operator-(const MultiIndex& lhs, const MultiIndex& rhs);

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<unsigned> entries_;
};

/// Every multi-index of the given dimension with total degree <= max_total,
/// in lexicographic order.
std::vector<MultiIndex> all_multi_indices(std::size_t dimension, unsigned max_total);

}  // namespace gaussmom
