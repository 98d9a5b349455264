// SPDX-License-Identifier: Apache-2.0
//
// Positional digit encoding of scalars and the longest-common-prefix (Baire)
// distance between encodings.
//
// A value is read through its shortest round-trip decimal rendering (the way
// it would be printed in a catalog), split into sign, integer digits and a
// fixed number of fractional digits in base m. Two encodings are compared
// digit by digit from the most significant fractional place; the distance is
// m^-k for a shared prefix of k fractional digits and 1 when nothing beyond
// the integer part is shared.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace baire {

using Digit = std::uint32_t;

enum class Rounding : std::uint8_t {
  kTruncate,
  kRoundHalfEven,
};

std::string to_string(Rounding rounding);
/// Accepts "truncate" and "round-half-even".
Rounding parse_rounding(const std::string& text);

struct BaireParams {
  static constexpr std::uint32_t kMaxBase = 65536;
  static constexpr std::uint32_t kMaxPrecision = 64;

  std::uint32_t base = 10;
  std::uint32_t precision = 6;
  Rounding rounding = Rounding::kTruncate;

  /// Throws ValidationError when base or precision is out of range.
  void validate() const;

  friend bool operator==(const BaireParams&, const BaireParams&) = default;
};

/// Sign and integer digits of an encoded value: the level-0 prefix.
struct Level0Key {
  int sign = 1;
  std::vector<Digit> int_digits{0};

  /// Numeric order of the integer parts.
  friend std::strong_ordering operator<=>(const Level0Key& a, const Level0Key& b);
  friend bool operator==(const Level0Key&, const Level0Key&) = default;
};

/// Renders "+0", "-12"; digits above 9 are separated by '/'.
std::string to_string(const Level0Key& key, std::uint32_t base);

struct DigitString {
  BaireParams params;
  Level0Key level0;
  std::vector<Digit> frac_digits;  // exactly params.precision digits

  int sign() const { return level0.sign; }
  const std::vector<Digit>& int_digits() const { return level0.int_digits; }

  friend bool operator==(const DigitString&, const DigitString&) = default;
};

std::string to_string(const DigitString& digits);

/// Encodes |value| with its sign. Zero-valued encodings always carry sign +1.
/// Throws EncodingError for NaN or infinity.
DigitString encode(double value, const BaireParams& params);

/// A scalar inside the digit cell of `digits`; encode(decode(d), d.params) == d.
double decode(const DigitString& digits);

/// Length of the shared fractional prefix, or nullopt when the sign or the
/// integer digits differ. Coincidences after the first mismatch are ignored.
/// Throws IncompatibleEncodingError if the two were encoded differently.
std::optional<std::size_t> common_prefix_length(const DigitString& x, const DigitString& y);

/// 1 when no fractional digit is shared, m^-k for a shared prefix of length
/// k. Identical strings give m^-precision.
double baire_distance(const DigitString& x, const DigitString& y, const BaireParams& params);

/// m^-k, computed identically everywhere distances are compared.
double base_power(std::uint32_t base, std::size_t k);

/// Shortest decimal rendering of `value` in fixed (non-exponent) notation.
std::string format_decimal(double value);

}  // namespace baire
