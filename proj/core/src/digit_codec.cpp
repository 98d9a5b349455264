// SPDX-License-Identifier: Apache-2.0

#include "baire/digit_codec.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <string_view>

#include "baire/error.hpp"

namespace baire {
namespace {

// Decimal fraction 0.d1 d2 d3 ... held as one decimal digit per element.
using DecimalFraction = std::vector<std::uint8_t>;

enum class HalfComparison { kBelow, kTie, kAbove };

HalfComparison compare_to_half(const DecimalFraction& rest) {
  if (rest.empty() || rest.front() < 5) {
    return HalfComparison::kBelow;
  }
  if (rest.front() > 5) {
    return HalfComparison::kAbove;
  }
  const bool tail_nonzero =
      std::any_of(rest.begin() + 1, rest.end(), [](std::uint8_t d) { return d != 0; });
  return tail_nonzero ? HalfComparison::kAbove : HalfComparison::kTie;
}

void trim_trailing_zeros(DecimalFraction& frac) {
  while (!frac.empty() && frac.back() == 0) {
    frac.pop_back();
  }
}

// Integer part given as decimal digits (most significant first) to base m.
std::vector<Digit> integer_to_base(std::string_view decimal, std::uint32_t base) {
  std::vector<std::uint64_t> work;
  work.reserve(decimal.size());
  for (char c : decimal) {
    work.push_back(static_cast<std::uint64_t>(c - '0'));
  }
  std::vector<Digit> reversed;
  auto is_zero = [&] {
    return std::all_of(work.begin(), work.end(), [](std::uint64_t d) { return d == 0; });
  };
  while (!is_zero()) {
    std::uint64_t remainder = 0;
    for (auto& d : work) {
      const std::uint64_t cur = remainder * 10 + d;
      d = cur / base;
      remainder = cur % base;
    }
    reversed.push_back(static_cast<Digit>(remainder));
  }
  if (reversed.empty()) {
    return {0};
  }
  return {reversed.rbegin(), reversed.rend()};
}

// Emits the next base-m digit of the fraction and leaves the remainder in place.
Digit next_fraction_digit(DecimalFraction& frac, std::uint32_t base) {
  std::uint64_t carry = 0;
  for (auto it = frac.rbegin(); it != frac.rend(); ++it) {
    const std::uint64_t t = static_cast<std::uint64_t>(*it) * base + carry;
    *it = static_cast<std::uint8_t>(t % 10);
    carry = t / 10;
  }
  trim_trailing_zeros(frac);
  return static_cast<Digit>(carry);
}

void round_up(DigitString& out, std::uint32_t base) {
  for (auto it = out.frac_digits.rbegin(); it != out.frac_digits.rend(); ++it) {
    if (++*it < base) {
      return;
    }
    *it = 0;
  }
  auto& int_digits = out.level0.int_digits;
  for (auto it = int_digits.rbegin(); it != int_digits.rend(); ++it) {
    if (++*it < base) {
      return;
    }
    *it = 0;
  }
  int_digits.insert(int_digits.begin(), 1);
}

bool all_zero(const DigitString& d) {
  auto zero = [](Digit x) { return x == 0; };
  return std::all_of(d.level0.int_digits.begin(), d.level0.int_digits.end(), zero) &&
         std::all_of(d.frac_digits.begin(), d.frac_digits.end(), zero);
}

void check_same_encoding(const BaireParams& a, const BaireParams& b) {
  if (!(a == b)) {
    throw IncompatibleEncodingError("digit strings were encoded with different parameters");
  }
}

std::string join_digits(const std::vector<Digit>& digits, std::uint32_t base) {
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (base > 10 && i > 0) {
      out += '/';
    }
    out += std::to_string(digits[i]);
  }
  return out;
}

}  // namespace

std::string to_string(Rounding rounding) {
  return rounding == Rounding::kTruncate ? "truncate" : "round-half-even";
}

Rounding parse_rounding(const std::string& text) {
  if (text == "truncate") {
    return Rounding::kTruncate;
  }
  if (text == "round-half-even") {
    return Rounding::kRoundHalfEven;
  }
  throw ValidationError("unknown rounding policy '" + text +
                        "' (expected truncate or round-half-even)");
}

void BaireParams::validate() const {
  if (base < 2 || base > kMaxBase) {
    throw ValidationError("base must be in [2, " + std::to_string(kMaxBase) + "], got " +
                          std::to_string(base));
  }
  if (precision < 1 || precision > kMaxPrecision) {
    throw ValidationError("precision must be in [1, " + std::to_string(kMaxPrecision) +
                          "], got " + std::to_string(precision));
  }
}

std::strong_ordering operator<=>(const Level0Key& a, const Level0Key& b) {
  if (a.sign != b.sign) {
    return a.sign <=> b.sign;
  }
  auto magnitude = [](const Level0Key& x, const Level0Key& y) {
    if (x.int_digits.size() != y.int_digits.size()) {
      return x.int_digits.size() <=> y.int_digits.size();
    }
    return std::lexicographical_compare_three_way(x.int_digits.begin(), x.int_digits.end(),
                                                  y.int_digits.begin(), y.int_digits.end());
  };
  return a.sign > 0 ? magnitude(a, b) : magnitude(b, a);
}

std::string to_string(const Level0Key& key, std::uint32_t base) {
  return (key.sign < 0 ? "-" : "+") + join_digits(key.int_digits, base);
}

std::string to_string(const DigitString& digits) {
  return to_string(digits.level0, digits.params.base) + "." +
         join_digits(digits.frac_digits, digits.params.base);
}

std::string format_decimal(double value) {
  std::array<char, 512> buf{};
  const auto result =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
  return {buf.data(), result.ptr};
}

DigitString encode(double value, const BaireParams& params) {
  params.validate();
  if (!std::isfinite(value)) {
    throw EncodingError("cannot encode non-finite value " + std::to_string(value));
  }
  const std::string rendering = format_decimal(std::fabs(value));
  const auto dot = rendering.find('.');
  const std::string_view int_part = std::string_view(rendering).substr(0, dot);
  const std::string_view frac_part = dot == std::string::npos
                                         ? std::string_view{}
                                         : std::string_view(rendering).substr(dot + 1);

  DigitString out;
  out.params = params;
  out.level0.sign = value < 0 ? -1 : 1;
  out.frac_digits.reserve(params.precision);

  DecimalFraction rest;
  if (params.base == 10) {
    out.level0.int_digits.clear();
    for (char c : int_part) {
      out.level0.int_digits.push_back(static_cast<Digit>(c - '0'));
    }
    for (std::size_t k = 0; k < params.precision; ++k) {
      out.frac_digits.push_back(k < frac_part.size() ? static_cast<Digit>(frac_part[k] - '0') : 0);
    }
    for (std::size_t k = params.precision; k < frac_part.size(); ++k) {
      rest.push_back(static_cast<std::uint8_t>(frac_part[k] - '0'));
    }
  } else {
    out.level0.int_digits = integer_to_base(int_part, params.base);
    for (char c : frac_part) {
      rest.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    trim_trailing_zeros(rest);
    for (std::size_t k = 0; k < params.precision; ++k) {
      out.frac_digits.push_back(rest.empty() ? 0 : next_fraction_digit(rest, params.base));
    }
  }

  if (params.rounding == Rounding::kRoundHalfEven) {
    const auto cmp = compare_to_half(rest);
    const bool last_odd = (out.frac_digits.back() % 2) == 1;
    if (cmp == HalfComparison::kAbove || (cmp == HalfComparison::kTie && last_odd)) {
      round_up(out, params.base);
    }
  }

  if (all_zero(out)) {
    out.level0.sign = 1;
  }
  return out;
}

double decode(const DigitString& digits) {
  const auto& p = digits.params;
  long double int_value = 0;
  for (Digit d : digits.level0.int_digits) {
    int_value = int_value * p.base + d;
  }
  long double frac_value = 0;
  for (auto it = digits.frac_digits.rbegin(); it != digits.frac_digits.rend(); ++it) {
    frac_value = (frac_value + *it) / p.base;
  }

  double lower = 0;
  if (p.base == 10) {
    // Parse the decimal rendering so the nearest double is chosen exactly.
    std::string text;
    for (Digit d : digits.level0.int_digits) {
      text += static_cast<char>('0' + d);
    }
    text += '.';
    for (Digit d : digits.frac_digits) {
      text += static_cast<char>('0' + d);
    }
    std::from_chars(text.data(), text.data() + text.size(), lower);
  } else {
    lower = static_cast<double>(int_value + frac_value);
  }
  const double half_cell =
      0.5 * static_cast<double>(std::pow(static_cast<long double>(p.base),
                                         -static_cast<long double>(p.precision)));
  const double sign = digits.level0.sign < 0 ? -1.0 : 1.0;
  for (double candidate : {lower, lower + half_cell}) {
    const double signed_candidate = sign * candidate;
    if (encode(signed_candidate, p) == digits) {
      return signed_candidate;
    }
  }
  return sign * lower;
}

std::optional<std::size_t> common_prefix_length(const DigitString& x, const DigitString& y) {
  check_same_encoding(x.params, y.params);
  if (!(x.level0 == y.level0)) {
    return std::nullopt;
  }
  std::size_t k = 0;
  while (k < x.frac_digits.size() && x.frac_digits[k] == y.frac_digits[k]) {
    ++k;
  }
  return k;
}

double base_power(std::uint32_t base, std::size_t k) {
  std::uint64_t power = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (power > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::pow(static_cast<double>(base), -static_cast<double>(k));
    }
    power *= base;
  }
  return 1.0 / static_cast<double>(power);
}

double baire_distance(const DigitString& x, const DigitString& y, const BaireParams& params) {
  check_same_encoding(x.params, params);
  check_same_encoding(y.params, params);
  const auto shared = common_prefix_length(x, y);
  if (!shared || *shared == 0) {
    return 1.0;
  }
  return base_power(params.base, *shared);
}

}  // namespace baire
