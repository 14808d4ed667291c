#include "gaussmom/numeric.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gaussmom {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) return false;
  }
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

// [-+]digits[.digits][(e|E)[-+]digits]
Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) bad(text);
    exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = s.substr(0, dot);
    const std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      bad(text);
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) bad(text);
    digits = std::string(s);
  }
  if (digits.empty()) digits = "0";
  Rational value(BigInt(digits, 10));
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent < 0) {
    value /= Rational(scale);
  } else {
    value *= Rational(scale);
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    const std::string_view den = text.substr(slash + 1);
    std::string_view digits = num;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (!all_digits(digits) || !all_digits(den)) bad(text);
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    const BigInt denominator(std::string(den), 10);
    if (denominator == 0) bad(text);
    Rational value(BigInt(std::string(num), 10), denominator);
    value.canonicalize();
    return value;
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& value) { return value.get_str(10); }

std::string to_string(const BigInt& value) { return value.get_str(10); }

}  // namespace gaussmom
