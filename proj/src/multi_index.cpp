#include "gaussmom/multi_index.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace gaussmom {

MultiIndex MultiIndex::unit(std::size_t dimension, std::size_t component) {
  MultiIndex e(dimension);
  e.entries_.at(component) = 1;
  return e;
}

MultiIndex MultiIndex::parse(std::string_view text) {
  std::vector<unsigned> entries;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view field =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw std::invalid_argument("multi-index must be comma-separated nonnegative integers, got '" +
                                  std::string(text) + "'");
    }
    entries.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return MultiIndex(std::move(entries));
}

unsigned MultiIndex::total() const noexcept {
  unsigned sum = 0;
  for (unsigned e : entries_) sum += e;
  return sum;
}

bool MultiIndex::is_zero() const noexcept {
  for (unsigned e : entries_) {
    if (e != 0) return false;
  }
  return true;
}

bool MultiIndex::fits_within(const MultiIndex& bound) const {
  if (bound.size() != size()) throw std::invalid_argument("multi-index dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) {
    if (entries_[i] > bound.entries_[i]) return false;
  }
  return true;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& other) {
  if (other.size() != size()) throw std::invalid_argument("multi-index dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

MultiIndex operator-(const MultiIndex& lhs, const MultiIndex& rhs) {
  if (!rhs.fits_within(lhs)) throw std::invalid_argument("multi-index difference would be negative");
  MultiIndex out = lhs;
  for (std::size_t i = 0; i < out.size(); ++i) out.entries_[i] -= rhs.entries_[i];
  return out;
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i != 0) out += ',';
    out += std::to_string(entries_[i]);
  }
  return out;
}

namespace {

void fill(std::size_t position, unsigned remaining, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (position == current.size()) {
    out.push_back(current);
    return;
  }
  for (unsigned v = 0; v <= remaining; ++v) {
    current[position] = v;
    fill(position + 1, remaining - v, current, out);
  }
  current[position] = 0;
}

}  // namespace

std::vector<MultiIndex> all_multi_indices(std::size_t dimension, unsigned max_total) {
  std::vector<MultiIndex> out;
  MultiIndex current(dimension);
  fill(0, max_total, current, out);
  return out;
}

}  // namespace gaussmom
